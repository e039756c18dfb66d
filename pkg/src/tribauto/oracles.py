"""Brute-force ground truth for the sequences studied here.

TR is generated from its definition (trailing 1s of the greedy
representation); X and Y come from the greedy exclusion procedure; the
remaining sequences are counted off TR.
"""

from __future__ import annotations

import bisect
import threading

import numpy as np

from . import numeration

SEQUENCE_NAMES = ("TR", "X", "Y", "D", "E", "F", "a", "b", "c", "beta", "gamma")


def tr(n: int) -> int:
    """Number of trailing 1s in the representation of ``n``."""
    w = numeration.to_rep(n)
    return len(w) - len(w.rstrip("1"))


def tr_array(limit: int) -> np.ndarray:
    """TR[0..limit-1] by a vectorized greedy decomposition."""
    rem = np.arange(limit, dtype=np.int64)
    trailing = np.zeros(limit, dtype=np.int64)
    top = 2
    while numeration.tribonacci(top + 1) <= max(limit - 1, 0):
        top += 1
    for j in range(top, 1, -1):
        t = numeration.tribonacci(j)
        d = rem >= t
        rem -= d * t
        trailing = np.where(d, trailing + 1, 0)
    return trailing


def greedy_xy(limit: int) -> tuple[list[int], list[int]]:
    """X(0..limit), Y(0..limit) by the least-pair exclusion rule."""
    X, Y = [0, 1], [0, 2]
    if limit < 1:
        return X[:limit + 1], Y[:limit + 1]
    size = 8 * limit + 64
    used = bytearray(size)           # values X(k), Y(k) for 1 <= k < n
    forbidden = bytearray(2 * size)  # values Y(k) - X(k), Y(k) + X(k)
    used[1] = used[2] = 1
    forbidden[1] = forbidden[3] = 1
    x_ptr = 1
    mex = 2  # least positive value not yet forbidden as a difference
    for n in range(2, limit + 1):
        while used[x_ptr]:
            x_ptr += 1
        x = x_ptr
        while forbidden[mex]:
            mex += 1
        window = 3 * n + 8
        y = x + mex  # every smaller difference is already excluded
        while y < window and (used[y] or forbidden[y - x]):
            y += 1
        if y >= window:
            raise AssertionError(f"no admissible Y({n}) below the scan window {window}")
        X.append(x)
        Y.append(y)
        used[x] = used[y] = 1
        forbidden[y - x] = 1
        forbidden[y + x] = 1
    return X, Y


class Oracle:
    """Memoizing evaluator; tables grow by doubling under a lock."""

    def __init__(self):
        self._lock = threading.Lock()
        self._tr = np.zeros(0, dtype=np.int64)
        self._x: list[int] = []
        self._y: list[int] = []
        self._occ: dict[int, np.ndarray] = {}

    # TR and prefix statistics

    def tr_prefix(self, n: int) -> np.ndarray:
        if n > self._tr.size:
            with self._lock:
                if n > self._tr.size:
                    self._tr = tr_array(max(n, 2 * self._tr.size, 1024))
                    self._occ = {}
        return self._tr[:n]

    def tr(self, n: int) -> int:
        return int(self.tr_prefix(n + 1)[n])

    def prefix_counts(self, n: int) -> tuple[int, int, int]:
        """Numbers of 0s, 1s and 2s in TR[0..n-1]."""
        p = self.tr_prefix(n)
        c = np.bincount(p, minlength=3)
        return int(c[0]), int(c[1]), int(c[2])

    def counts_array(self, symbol: int, limit: int) -> np.ndarray:
        """Occurrences of ``symbol`` in TR[0..n-1] for n = 0..limit-1."""
        p = self.tr_prefix(max(limit - 1, 0))
        return np.concatenate([[0], np.cumsum(p == symbol)])[:limit]

    def occurrences(self, symbol: int, count: int) -> np.ndarray:
        """Values a(0..count-1) style: 0, then 1 + positions of ``symbol``."""
        need = 8 * count + 16
        while True:
            pos = self._occ.get(symbol)
            if pos is not None and pos.size >= count:
                return pos[:count]
            p = self.tr_prefix(need)
            pos = np.concatenate([[0], np.flatnonzero(p == symbol) + 1])
            if pos.size >= count:
                self._occ[symbol] = pos
                return pos[:count]
            need *= 2

    def occurrence(self, symbol: int, n: int) -> int:
        """One more than the position of the n-th occurrence; 0 for n = 0."""
        if symbol not in (0, 1, 2):
            raise ValueError(f"TR has no symbol {symbol}")
        return int(self.occurrences(symbol, n + 1)[n])

    # X and Y

    def xy(self, limit: int) -> tuple[list[int], list[int]]:
        if limit >= len(self._x):
            with self._lock:
                if limit >= len(self._x):
                    size = max(limit, 2 * len(self._x), 64)
                    self._x, self._y = greedy_xy(size)
        return self._x[:limit + 1], self._y[:limit + 1]

    def X(self, n: int) -> int:
        return self.xy(n)[0][n]

    def Y(self, n: int) -> int:
        return self.xy(n)[1][n]

    def _member(self, which: int, n: int) -> int:
        # both sequences are strictly increasing with X(k) >= k
        values = self.xy(n + 1)[which]
        i = bisect.bisect_left(values, n)
        return int(i < len(values) and values[i] == n)

    def beta(self, n: int) -> int:
        """1 iff n = X(i) for some i >= 0."""
        return self._member(0, n)

    def gamma(self, n: int) -> int:
        """1 iff n = Y(i) for some i >= 0."""
        return self._member(1, n)

    # bulk access

    def sequence(self, name: str, limit: int) -> np.ndarray:
        """Values for n = 0..limit-1."""
        if name == "TR":
            return self.tr_prefix(limit).copy()
        if name in ("X", "Y"):
            X, Y = self.xy(max(limit - 1, 1))
            return np.array((X if name == "X" else Y)[:limit], dtype=np.int64)
        if name in ("D", "E", "F"):
            return self.counts_array("DEF".index(name), limit)
        if name in ("a", "b", "c"):
            return self.occurrences("abc".index(name), limit).copy()
        if name in ("beta", "gamma"):
            X, Y = self.xy(max(limit, 1))
            out = np.zeros(limit, dtype=np.int64)
            vals = np.array(X if name == "beta" else Y, dtype=np.int64)
            out[vals[vals < limit]] = 1
            return out
        raise KeyError(f"unknown sequence {name!r}; choose from {', '.join(SEQUENCE_NAMES)}")


_default = Oracle()


def default_oracle() -> Oracle:
    return _default


def xy(limit: int) -> tuple[list[int], list[int]]:
    return _default.xy(limit)


def prefix_counts(n: int) -> tuple[int, int, int]:
    return _default.prefix_counts(n)


def occurrence(symbol: int, n: int) -> int:
    return _default.occurrence(symbol, n)


def beta(n: int) -> int:
    return _default.beta(n)


def gamma(n: int) -> int:
    return _default.gamma(n)
