"""Formula and statement syntax trees."""

from __future__ import annotations

from dataclasses import dataclass


class Node:
    pass


# terms


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Num(Node):
    value: int


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Mul(Node):
    coef: int
    term: Node


# formulas


@dataclass(frozen=True)
class Cmp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: tuple[Node, ...]


@dataclass(frozen=True)
class Not(Node):
    body: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str  # "&", "|", "=>", "<=>"
    left: Node
    right: Node


@dataclass(frozen=True)
class Quant(Node):
    kind: str  # "E" or "A"
    vars: tuple[str, ...]
    body: Node


# statements


@dataclass(frozen=True)
class Def:
    name: str
    formula: Node
    line: int = 0


@dataclass(frozen=True)
class Eval:
    name: str
    formula: Node
    line: int = 0


@dataclass(frozen=True)
class Reg:
    name: str
    arity: int
    pattern: str
    line: int = 0


@dataclass(frozen=True)
class Combine:
    name: str
    predicates: tuple[str, ...]
    line: int = 0


Statement = Def | Eval | Reg | Combine


def term_vars(t: Node) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Num):
        return set()
    if isinstance(t, (Add, Sub)):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Mul):
        return term_vars(t.term)
    raise TypeError(f"not a term: {t!r}")


def has_sub(t: Node) -> bool:
    if isinstance(t, Sub):
        return True
    if isinstance(t, Add):
        return has_sub(t.left) or has_sub(t.right)
    if isinstance(t, Mul):
        return has_sub(t.term)
    return False


def free_vars(f: Node) -> set[str]:
    if isinstance(f, Cmp):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Call):
        out: set[str] = set()
        for a in f.args:
            out |= term_vars(a)
        return out
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BinOp):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Quant):
        return free_vars(f.body) - set(f.vars)
    raise TypeError(f"not a formula: {f!r}")


def calls(f: Node) -> set[str]:
    if isinstance(f, Call):
        return {f.name}
    if isinstance(f, Not):
        return calls(f.body)
    if isinstance(f, BinOp):
        return calls(f.left) | calls(f.right)
    if isinstance(f, Quant):
        return calls(f.body)
    return set()


_FLIP = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}


def negate(f: Node) -> Node:
    """Push one negation inward where that keeps the meaning."""
    if isinstance(f, Not):
        return f.body
    if isinstance(f, BinOp):
        if f.op == "&":
            return BinOp("|", negate(f.left), negate(f.right))
        if f.op == "|":
            return BinOp("&", negate(f.left), negate(f.right))
        if f.op == "=>":
            return BinOp("&", f.left, negate(f.right))
    if isinstance(f, Quant):
        return Quant("A" if f.kind == "E" else "E", f.vars, negate(f.body))
    if isinstance(f, Cmp) and not (has_sub(f.left) or has_sub(f.right)):
        # natural subtraction makes an atom partial, so only flip total ones
        return Cmp(_FLIP[f.op], f.left, f.right)
    return Not(f)


def conjuncts(f: Node) -> list[Node]:
    if isinstance(f, BinOp) and f.op == "&":
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]
