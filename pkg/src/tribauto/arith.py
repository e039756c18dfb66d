"""Built-in automata: equality, order, addition, constants, validity and
the trailing-ones DFAO.

The adder tracks, for the prefix read so far, the coefficients of the
difference ``u + v - w`` in terms of the next three Tribonacci weights and
accepts when the difference is zero. Coefficient vectors that can no
longer return to zero are collapsed into a sink.
"""

from __future__ import annotations

import functools
import logging
import os
from pathlib import Path

import numpy as np

from . import automata as am
from . import numeration

log = logging.getLogger(__name__)

ADDER_VERSION = "add-v1"
_LIVENESS_HORIZON = 64


@functools.lru_cache(maxsize=None)
def valid_automaton() -> am.Automaton:
    # state = number of trailing 1s; state 3 is the sink
    table = [[0, 1], [0, 2], [0, 3], [3, 3]]
    return am.from_table(1, table, [True, True, True, False])


@functools.lru_cache(maxsize=None)
def eq_automaton() -> am.Automaton:
    return am.from_table(2, [[0, 1, 1, 0], [1, 1, 1, 1]], [True, False])


@functools.lru_cache(maxsize=None)
def lt_automaton() -> am.Automaton:
    # 0: equal so far, 1: first track already smaller, 2: first track larger
    table = [[0, 1, 2, 0], [1, 1, 1, 1], [2, 2, 2, 2]]
    return am.from_table(2, table, [False, True, False])


@functools.lru_cache(maxsize=None)
def le_automaton() -> am.Automaton:
    return am.minimize(am.product(lt_automaton(), eq_automaton(), "or"))


@functools.lru_cache(maxsize=None)
def const_automaton(n: int) -> am.Automaton:
    if n < 0:
        raise ValueError(f"constants must be natural numbers, got {n}")
    w = numeration.to_rep(n)
    m = len(w)
    dead = m + 1
    table = []
    for i in range(m + 1):
        row = [dead, dead]
        if i == 0:
            row[0] = 0
        if i < m:
            row[int(w[i])] = i + 1
        table.append(row)
    table.append([dead, dead])
    acc = [i == m for i in range(m + 2)]
    return am.minimize(am.from_table(1, table, acc))


@functools.lru_cache(maxsize=None)
def tr_dfao() -> am.Automaton:
    """DFAO whose output on (N)_T is the number of trailing 1s.

    A fourth 1 cannot occur in a representation; the counter wraps there."""
    table = [[0, 1], [0, 2], [0, 0]]
    return am.minimize(am.from_table(1, table, [False, True, True], outputs=[0, 1, 2]))


def _max_word(length: int) -> int:
    # largest value of an arbitrary (not necessarily canonical) binary word
    return sum(numeration.weights(length))


def _may_vanish(c: tuple[int, int, int]) -> bool:
    """Necessary condition for a coefficient vector to reach difference 0."""
    c2, c1, c0 = c
    T = numeration.tribonacci
    for ell in range(_LIVENESS_HORIZON):
        g = c2 * T(ell + 4) + c1 * T(ell + 3) + c0 * T(ell + 2)
        m = _max_word(ell)
        if -2 * m <= g <= m:
            return True
    return False


def build_adder() -> am.Automaton:
    """Construct the 3-track adder (x, y, z) with x + y = z."""
    sink = "sink"
    start = (0, 0, 0)
    index = {start: 0}
    states: list = [start]
    rows = []
    i = 0
    while i < len(states):
        c = states[i]
        row = []
        for s in range(8):
            if c == sink:
                nc = sink
            else:
                d = ((s >> 2) & 1) + ((s >> 1) & 1) - (s & 1)
                nc = (c[0] + c[1], c[0] + c[2], c[0] + d)
                if not _may_vanish(nc):
                    nc = sink
            if nc not in index:
                index[nc] = len(states)
                states.append(nc)
            row.append(index[nc])
        rows.append(row)
        i += 1
    acc = [c != sink and 4 * c[0] + 2 * c[1] + c[2] == 0 for c in states]
    return am.minimize(am.Automaton(3, np.array(rows), np.array(acc)))


def cache_dir() -> Path:
    base = os.environ.get("TRIBAUTO_CACHE")
    if base:
        return Path(base)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "tribauto"


@functools.lru_cache(maxsize=None)
def add_automaton() -> am.Automaton:
    path = cache_dir() / f"{ADDER_VERSION}.txt"
    if path.exists():
        try:
            return am.load(path)
        except (am.AutomatonError, ValueError):
            log.warning("ignoring unreadable adder cache %s", path)
    a = build_adder()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        am.save(a, path, header=[
            f"version {ADDER_VERSION}",
            "tracks x y z with x + y = z",
            "method: coefficient-vector construction over the difference x + y - z",
            "checked exhaustively for x, y <= 20000 by the test suite",
        ])
    except OSError:
        log.warning("could not write adder cache %s", path)
    return a


def builtin(name: str) -> am.Automaton | None:
    """Named builtins available to the CLI exporter."""
    return {
        "valid": valid_automaton,
        "eq": eq_automaton,
        "lt": lt_automaton,
        "le": le_automaton,
        "add": add_automaton,
        "TR": tr_dfao,
    }.get(name, lambda: None)()
