"""Regular expressions over tuple symbols, e.g. ``([0,0]|[0,1][1,1]*[1,0])*``.

Supported: symbols ``[b1,...,bk]`` (a bare digit when k = 1), juxtaposition,
``|``, postfix ``*``, ``+``, ``?`` and parentheses. Compilation goes through
a Thompson NFA.
"""

from __future__ import annotations

import re

from .. import automata as am
from .parser import ParseError

_TOK = re.compile(r"\s*(?:(\[[^\]]*\])|([01])|([|*+?()]))")


class _Thompson:
    def __init__(self):
        self.eps: list[list[int]] = []
        self.edges: list[list[tuple[int, int]]] = []

    def new(self) -> int:
        self.eps.append([])
        self.edges.append([])
        return len(self.eps) - 1


def _tokens(pattern: str, arity: int) -> list[tuple[str, int]]:
    out = []
    pos = 0
    pattern = pattern.rstrip()
    while pos < len(pattern):
        m = _TOK.match(pattern, pos)
        if not m:
            raise ParseError(f"bad regex character at offset {pos}: {pattern[pos:pos + 10]!r}")
        sym, bit, op = m.groups()
        if sym is not None:
            bits = [b.strip() for b in sym[1:-1].split(",")]
            if len(bits) != arity or any(b not in ("0", "1") for b in bits):
                raise ParseError(f"symbol {sym} does not fit {arity} binary tracks")
            out.append(("sym", am.pack([int(b) for b in bits])))
        elif bit is not None:
            if arity != 1:
                raise ParseError(f"bare digit {bit} in a {arity}-track pattern")
            out.append(("sym", int(bit)))
        else:
            out.append((op, 0))
        pos = m.end()
    return out


def _build(tokens: list[tuple[str, int]], g: _Thompson) -> tuple[int, int]:
    i = 0

    def alt() -> tuple[int, int]:
        nonlocal i
        frags = [cat()]
        while i < len(tokens) and tokens[i][0] == "|":
            i += 1
            frags.append(cat())
        if len(frags) == 1:
            return frags[0]
        s, e = g.new(), g.new()
        for fs, fe in frags:
            g.eps[s].append(fs)
            g.eps[fe].append(e)
        return s, e

    def cat() -> tuple[int, int]:
        s = e = g.new()
        while i < len(tokens) and tokens[i][0] not in ("|", ")"):
            fs, fe = rep()
            g.eps[e].append(fs)
            e = fe
        return s, e

    def rep() -> tuple[int, int]:
        nonlocal i
        s, e = atom()
        while i < len(tokens) and tokens[i][0] in ("*", "+", "?"):
            op = tokens[i][0]
            i += 1
            ns, ne = g.new(), g.new()
            g.eps[ns].append(s)
            g.eps[e].append(ne)
            if op in ("*", "?"):
                g.eps[ns].append(ne)
            if op in ("*", "+"):
                g.eps[e].append(s)
            s, e = ns, ne
        return s, e

    def atom() -> tuple[int, int]:
        nonlocal i
        if i >= len(tokens):
            raise ParseError("regex ends unexpectedly")
        kind, val = tokens[i]
        i += 1
        if kind == "sym":
            s, e = g.new(), g.new()
            g.edges[s].append((val, e))
            return s, e
        if kind == "(":
            frag = alt()
            if i >= len(tokens) or tokens[i][0] != ")":
                raise ParseError("unbalanced parenthesis in regex")
            i += 1
            return frag
        raise ParseError(f"unexpected {kind!r} in regex")

    frag = alt()
    if i != len(tokens):
        raise ParseError(f"unexpected {tokens[i][0]!r} in regex")
    return frag


def regex_nfa(pattern: str, arity: int) -> am.Nfa:
    g = _Thompson()
    start, accept = _build(_tokens(pattern, arity), g)
    n = len(g.eps)
    closure = []
    for q in range(n):
        seen = {q}
        stack = [q]
        while stack:
            p = stack.pop()
            for r in g.eps[p]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        closure.append(sum(1 << r for r in seen))
    nsym = 1 << arity
    succ = []
    for q in range(n):
        row = [0] * nsym
        for p in am._bits(closure[q]):
            for s, t in g.edges[p]:
                row[s] |= closure[t]
        succ.append(row)
    acc = sum(1 << q for q in range(n) if closure[q] >> accept & 1)
    return am.Nfa(arity, succ, closure[start], acc)


def compile_regex(pattern: str, arity: int) -> am.Automaton:
    """Determinize, close under leading zero padding and minimize."""
    return am.minimize(am.determinize(regex_nfa(pattern, arity), pad=True))
