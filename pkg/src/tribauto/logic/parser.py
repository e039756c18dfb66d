"""Parser for Walnut-style scripts.

A script is a sequence of statements, each terminated by ``:`` (or ``;``)
outside quotes::

    def NAME "?msd_trib FORMULA":
    eval NAME "?msd_trib FORMULA":
    reg NAME {0,1} {0,1} "REGEX":
    combine NAME pred1 pred2 ...:

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import ast

NUMERATION = "msd_trib"


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, column {col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str
    text: str
    pos: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<call>\$[A-Za-z_][A-Za-z0-9_]*)
  | (?P<ident>[a-z_][A-Za-z0-9_]*)
  | (?P<quant>[EA])
  | (?P<op><=>|=>|<=|>=|!=|=|<|>|~|&|\||\(|\)|,|\+|-|\*)
""", re.VERBOSE)


def tokenize(text: str, base: int = 0) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise _Located(f"unexpected character {text[pos]!r}", base + pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), base + pos))
        pos = m.end()
    out.append(Token("eof", "", base + len(text)))
    return out


class _Located(Exception):
    def __init__(self, message: str, pos: int):
        super().__init__(message)
        self.message = message
        self.pos = pos


_CMP = {"=", "!=", "<", "<=", ">", ">="}


class _FormulaParser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.tok
        if t.text != text:
            raise _Located(f"expected {text!r}, found {t.text or 'end of formula'!r}", t.pos)
        return self.take()

    def parse(self) -> ast.Node:
        f = self.formula()
        if self.tok.kind != "eof":
            raise _Located(f"unexpected {self.tok.text!r}", self.tok.pos)
        return f

    # => and <=> bind loosest and associate to the right
    def formula(self) -> ast.Node:
        left = self.disj()
        if self.tok.text in ("=>", "<=>"):
            op = self.take().text
            return ast.BinOp(op, left, self.formula())
        return left

    def disj(self) -> ast.Node:
        left = self.conj()
        while self.tok.text == "|":
            self.take()
            left = ast.BinOp("|", left, self.conj())
        return left

    def conj(self) -> ast.Node:
        left = self.unary()
        while self.tok.text == "&":
            self.take()
            left = ast.BinOp("&", left, self.unary())
        return left

    def unary(self) -> ast.Node:
        t = self.tok
        if t.text == "~":
            self.take()
            return ast.Not(self.unary())
        if t.kind == "quant":
            self.take()
            names = [self.ident()]
            while self.tok.text == ",":
                self.take()
                names.append(self.ident())
            # the quantifier scope runs to the end of the enclosing group
            return ast.Quant(t.text, tuple(names), self.formula())
        if t.text == "(":
            start = self.i
            try:
                self.take()
                f = self.formula()
                self.expect(")")
                return f
            except _Located as group_err:
                # not a formula group; retry as an atom with a bracketed term
                self.i = start
                try:
                    return self.atom()
                except _Located as atom_err:
                    raise max(group_err, atom_err, key=lambda e: e.pos) from None
        if t.kind == "call":
            return self.call()
        return self.atom()

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident":
            raise _Located(f"expected a variable name, found {t.text or 'end of formula'!r}", t.pos)
        return self.take().text

    def call(self) -> ast.Node:
        name = self.take().text[1:]
        self.expect("(")
        args = [self.term()]
        while self.tok.text == ",":
            self.take()
            args.append(self.term())
        self.expect(")")
        return ast.Call(name, tuple(args))

    def atom(self) -> ast.Node:
        left = self.term()
        t = self.tok
        if t.text not in _CMP:
            raise _Located(f"expected a comparison, found {t.text or 'end of formula'!r}", t.pos)
        self.take()
        return ast.Cmp(t.text, left, self.term())

    def term(self) -> ast.Node:
        left = self.product()
        while self.tok.text in ("+", "-"):
            op = self.take().text
            right = self.product()
            left = ast.Add(left, right) if op == "+" else ast.Sub(left, right)
        return left

    def product(self) -> ast.Node:
        t = self.tok
        if t.text == "(":
            self.take()
            inner = self.term()
            self.expect(")")
            return inner
        if t.kind == "num":
            self.take()
            if self.tok.text == "*":
                self.take()
                return ast.Mul(int(t.text), self.product())
            return ast.Num(int(t.text))
        if t.kind == "ident":
            self.take()
            if self.tok.text == "*" and self.toks[self.i + 1].kind == "num":
                self.take()
                return ast.Mul(int(self.take().text), ast.Var(t.text))
            return ast.Var(t.text)
        raise _Located(f"expected a term, found {t.text or 'end of formula'!r}", t.pos)


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def parse_formula(source: str, base: int = 0, full_text: str | None = None) -> ast.Node:
    """Parse a quoted formula body (``?msd_trib`` prefix required)."""
    full_text = source if full_text is None else full_text
    try:
        m = re.match(r"\s*\?(\w+)", source)
        if not m:
            raise _Located("formula must start with a numeration tag such as ?msd_trib", base)
        if m.group(1) != NUMERATION:
            raise _Located(f"unsupported numeration system ?{m.group(1)}", base + m.start(1))
        return _FormulaParser(tokenize(source[m.end():], base + m.end())).parse()
    except _Located as e:
        raise ParseError(e.message, *_line_col(full_text, e.pos)) from None


def split_statements(text: str) -> list[tuple[str, int]]:
    """Split a script into statement texts with their start offsets."""
    out = []
    buf_start = None
    i = 0
    in_quote = False
    while i < len(text):
        c = text[i]
        if in_quote:
            if c == '"':
                in_quote = False
        elif c == "#":
            j = text.find("\n", i)
            i = len(text) if j < 0 else j
            continue
        elif c == '"':
            in_quote = True
        elif c in ":;":
            if buf_start is not None:
                out.append((text[buf_start:i], buf_start))
            buf_start = None
            i += 1
            continue
        if buf_start is None and not c.isspace():
            buf_start = i
        i += 1
    if in_quote:
        raise ParseError("unterminated string", *_line_col(text, len(text)))
    if buf_start is not None:
        raise ParseError("statement not terminated by ':'", *_line_col(text, buf_start))
    return out


_STMT_RE = re.compile(r"(\w+)\s+([A-Za-z_][A-Za-z0-9_]*)\s*(.*)\Z", re.DOTALL)
_QUOTED_RE = re.compile(r'"([^"]*)"\s*\Z', re.DOTALL)


def parse_statement(stmt: str, offset: int, text: str) -> ast.Statement:
    line, col = _line_col(text, offset)
    m = _STMT_RE.match(stmt)
    if not m:
        raise ParseError("malformed statement", line, col)
    kind, name, rest = m.groups()
    rest_off = offset + m.start(3)
    if kind in ("def", "eval"):
        q = _QUOTED_RE.match(rest)
        if not q:
            raise ParseError(f"{kind} expects a quoted formula", *_line_col(text, rest_off))
        f = parse_formula(q.group(1), rest_off + 1, text)
        return (ast.Def if kind == "def" else ast.Eval)(name, f, line)
    if kind == "reg":
        q = re.match(r'((?:\{[^}]*\}\s*)+)"([^"]*)"\s*\Z', rest, re.DOTALL)
        if not q:
            raise ParseError("reg expects alphabets followed by a quoted pattern", *_line_col(text, rest_off))
        alphabets = re.findall(r"\{([^}]*)\}", q.group(1))
        for a in alphabets:
            if sorted(x.strip() for x in a.split(",")) != ["0", "1"]:
                raise ParseError(f"only the alphabet {{0,1}} is supported, got {{{a}}}", line, col)
        return ast.Reg(name, len(alphabets), q.group(2), line)
    if kind == "combine":
        preds = tuple(rest.split())
        if not preds:
            raise ParseError("combine needs at least one predicate", line, col)
        return ast.Combine(name, preds, line)
    raise ParseError(f"unknown statement kind {kind!r}", line, col)


def parse(text: str) -> list[ast.Statement]:
    return [parse_statement(s, off, text) for s, off in split_statements(text)]
