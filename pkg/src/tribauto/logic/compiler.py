"""Compile first-order formulas over Tribonacci-represented naturals into
automata.

A compiled formula is a :class:`Rel`: an automaton together with the
variable carried by each track, tracks sorted by variable name. Intermediate
automata are only meaningful on valid representations; invalid words are
cut away when a variable is quantified and when a result is finalized.

Subtraction is natural subtraction: ``a - b`` is defined only when
``a >= b``, and an atom containing an undefined difference is false.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .. import arith
from .. import automata as am
from . import ast

log = logging.getLogger(__name__)


class CompileError(Exception):
    pass


@dataclass(frozen=True)
class Rel:
    vars: tuple[str, ...]
    aut: am.Automaton

    def __post_init__(self):
        if len(self.vars) != self.aut.arity:
            raise CompileError(f"{len(self.vars)} variables for an automaton of arity {self.aut.arity}")

    def accepts(self, **values: int) -> bool:
        return self.aut.accepts(am.encode([values[v] for v in self.vars]))

    @property
    def nstates(self) -> int:
        return self.aut.nstates


def bind(aut: am.Automaton, names: Iterable[str]) -> Rel:
    """Attach variable names to the tracks of ``aut`` (positionally)."""
    names = list(names)
    if len(names) != aut.arity:
        raise CompileError(f"automaton of arity {aut.arity} applied to {len(names)} arguments")
    vs = tuple(sorted(set(names)))
    a = am.gather(aut, [vs.index(n) for n in names], len(vs))
    if len(vs) < len(names):
        a = am.minimize(a)
    return Rel(vs, a)


def join(r: Rel, s: Rel, op: str = "and") -> Rel:
    vs = tuple(sorted(set(r.vars) | set(s.vars)))
    a = am.product_tracks(r.aut, [vs.index(v) for v in r.vars],
                          s.aut, [vs.index(v) for v in s.vars], len(vs), op)
    return Rel(vs, am.minimize(a))


def complement(r: Rel) -> Rel:
    return Rel(r.vars, am.complement(r.aut))


def restrict_valid(r: Rel, names: Iterable[str] | None = None) -> Rel:
    names = r.vars if names is None else [n for n in names if n in r.vars]
    for n in names:
        r = join(r, Rel((n,), arith.valid_automaton()))
    return r


def exists(r: Rel, names: Iterable[str], cap: int = am.DEFAULT_STATE_CAP) -> Rel:
    names = [n for n in names if n in r.vars]
    if not names:
        return r
    r = restrict_valid(r, names)
    a = am.project(r.aut, [r.vars.index(n) for n in names], cap=cap)
    return Rel(tuple(v for v in r.vars if v not in names), a)


def _cmp_automaton(op: str) -> tuple[am.Automaton, bool]:
    """Automaton for a comparison and whether its operands are swapped."""
    return {
        "<": (arith.lt_automaton(), False),
        ">": (arith.lt_automaton(), True),
        "<=": (arith.le_automaton(), False),
        ">=": (arith.le_automaton(), True),
        "=": (arith.eq_automaton(), False),
        "!=": (am.complement(arith.eq_automaton()), False),
    }[op]


_BINOPS = {"|": "or", "=>": "imp", "<=>": "iff", "&": "and"}


class Compiler:
    def __init__(self, lookup: Callable[[str], am.Automaton] | Mapping[str, am.Automaton],
                 cap: int = am.DEFAULT_STATE_CAP):
        if isinstance(lookup, Mapping):
            table = lookup

            def lookup(name: str) -> am.Automaton:
                try:
                    return table[name]
                except KeyError:
                    raise CompileError(f"unknown automaton ${name}") from None

        self.lookup = lookup
        self.cap = cap
        self._fresh = 0

    def fresh(self) -> str:
        self._fresh += 1
        return f"#{self._fresh}"

    # ---- public entry points

    def compile(self, f: ast.Node) -> Rel:
        """Automaton over the free variables of ``f`` (valid tracks only)."""
        r = restrict_valid(self._compile(f))
        return Rel(r.vars, am.minimize(r.aut))

    def evaluate(self, f: ast.Node) -> tuple[bool, dict[str, int] | None]:
        """Truth value of a closed formula, and for a false top-level
        universal the least counterexample (shortest representation)."""
        free = ast.free_vars(f)
        if free:
            raise CompileError(f"eval needs a closed formula; free variables: {', '.join(sorted(free))}")
        if isinstance(f, ast.Quant) and f.kind == "A":
            bad = restrict_valid(self._exists_pieces(ast.negate(f.body), ()))
            word = am.find_witness(bad.aut)
            if word is None:
                return True, None
            values = dict(zip(bad.vars, am.decode(word, bad.aut.arity)))
            return False, {v: values.get(v, 0) for v in f.vars}
        r = self._compile(f)
        return bool(r.aut.accepting[r.aut.initial]), None

    # ---- recursion

    def _compile(self, f: ast.Node) -> Rel:
        if isinstance(f, (ast.Cmp, ast.Call)) or (isinstance(f, ast.BinOp) and f.op == "&"):
            return self._exists_pieces(f, ())
        if isinstance(f, ast.Not):
            return complement(self._compile(f.body))
        if isinstance(f, ast.BinOp):
            return join(self._compile(f.left), self._compile(f.right), _BINOPS[f.op])
        if isinstance(f, ast.Quant):
            if f.kind == "E":
                return self._exists_pieces(f.body, f.vars)
            return complement(self._exists_pieces(ast.negate(f.body), f.vars))
        raise CompileError(f"cannot compile {f!r}")

    def _exists_pieces(self, body: ast.Node, names: Iterable[str]) -> Rel:
        pieces: list[Rel] = []
        bound: set[str] = set(names)
        for c in ast.conjuncts(body):
            if isinstance(c, ast.Cmp):
                self._atom(c, pieces, bound)
            elif isinstance(c, ast.Call):
                self._call(c, pieces, bound)
            else:
                pieces.append(self._compile(c))
        return self._conjoin(pieces, bound)

    def _conjoin(self, pieces: list[Rel], bound: set[str]) -> Rel:
        pieces = list(pieces)
        if not pieces:
            return Rel((), am.universal(0))

        def settle():
            # quantify variables confined to a single piece
            for i, p in enumerate(pieces):
                mine = [v for v in p.vars if v in bound
                        and not any(v in q.vars for j, q in enumerate(pieces) if j != i)]
                if mine:
                    pieces[i] = exists(p, mine, self.cap)

        settle()
        while len(pieces) > 1:
            best = None
            for i in range(len(pieces)):
                for j in range(i + 1, len(pieces)):
                    a, b = pieces[i], pieces[j]
                    shared = bool(set(a.vars) & set(b.vars))
                    cost = (not shared, len(set(a.vars) | set(b.vars)), a.nstates * b.nstates)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
            _, i, j = best
            merged = join(pieces[i], pieces[j])
            pieces = [p for k, p in enumerate(pieces) if k not in (i, j)] + [merged]
            settle()
        return pieces[0]

    def _call(self, c: ast.Call, pieces: list[Rel], bound: set[str]) -> None:
        aut = self.lookup(c.name)
        if aut.is_dfao:
            raise CompileError(f"${c.name} is a DFAO and cannot be used as a predicate")
        if aut.arity != len(c.args):
            raise CompileError(f"${c.name} has arity {aut.arity} but is called with {len(c.args)} arguments")
        names = [self._term(a, pieces, bound) for a in c.args]
        pieces.append(bind(aut, names))

    def _atom(self, c: ast.Cmp, pieces: list[Rel], bound: set[str]) -> None:
        left, right = c.left, c.right
        if c.op == "=":
            if isinstance(left, ast.Var) and isinstance(right, ast.Var):
                pieces.append(bind(arith.eq_automaton(), [left.name, right.name]))
                return
            if isinstance(right, ast.Var):
                left, right = right, left
            a = self._term(left, pieces, bound)
            self._term(right, pieces, bound, target=a)
            return
        aut, swap = _cmp_automaton(c.op)
        a = self._term(left, pieces, bound)
        b = self._term(right, pieces, bound)
        pieces.append(bind(aut, [b, a] if swap else [a, b]))

    def _term(self, t: ast.Node, pieces: list[Rel], bound: set[str], target: str | None = None) -> str:
        """Variable holding the value of ``t``, adding defining pieces."""
        if isinstance(t, ast.Var):
            if target is not None and target != t.name:
                pieces.append(bind(arith.eq_automaton(), [target, t.name]))
                return target
            return t.name
        if target is None:
            target = self.fresh()
            bound.add(target)
        if isinstance(t, ast.Num):
            pieces.append(bind(arith.const_automaton(t.value), [target]))
        elif isinstance(t, ast.Add):
            a = self._term(t.left, pieces, bound)
            b = self._term(t.right, pieces, bound)
            pieces.append(bind(arith.add_automaton(), [a, b, target]))
        elif isinstance(t, ast.Sub):
            a = self._term(t.left, pieces, bound)
            b = self._term(t.right, pieces, bound)
            pieces.append(bind(arith.add_automaton(), [b, target, a]))
        elif isinstance(t, ast.Mul):
            if t.coef == 0:
                pieces.append(bind(arith.const_automaton(0), [target]))
            elif t.coef == 1:
                self._term(t.term, pieces, bound, target=target)
            else:
                x = self._term(t.term, pieces, bound)
                prev = x
                for i in range(2, t.coef + 1):
                    if i == t.coef:
                        nxt = target
                    else:
                        nxt = self.fresh()
                        bound.add(nxt)
                    pieces.append(bind(arith.add_automaton(), [prev, x, nxt]))
                    prev = nxt
        else:
            raise CompileError(f"not a term: {t!r}")
        return target


def combine(predicates: list[am.Automaton]) -> am.Automaton:
    """DFAO whose output is the 1-based index of the first accepting
    predicate, or 0 when none accepts."""
    if not predicates:
        raise CompileError("combine needs at least one predicate")
    if any(p.arity != 1 or p.is_dfao for p in predicates):
        raise CompileError("combine takes 1-track acceptors")
    first = predicates[0]
    out = am.Automaton(1, first.delta, first.accepting, first.accepting.astype(int), first.initial)
    for k, p in enumerate(predicates[1:], start=2):
        nb = p.nstates
        codes, delta = am._explore(out.initial * nb + p.initial,
                                   lambda f: out.delta[f // nb] * nb + p.delta[f % nb])
        prev = out.outputs[codes // nb]
        outputs = prev.copy()
        outputs[(prev == 0) & p.accepting[codes % nb]] = k
        out = am.Automaton(1, delta, outputs != 0, outputs)
    return am.minimize(out)
