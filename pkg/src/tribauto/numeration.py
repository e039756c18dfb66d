"""Tribonacci numbers and msd-first Tribonacci digit words.

Digit words are plain ``str`` objects over ``'0'``/``'1'``, most significant
digit first. The least significant digit has weight ``T_2 = 1``.
"""

from __future__ import annotations

import threading

_table = [0, 1, 1]
_lock = threading.Lock()


def tribonacci(i: int) -> int:
    """Return T_i with T_0 = 0, T_1 = T_2 = 1."""
    if i < 0:
        raise ValueError(f"index must be non-negative, got {i}")
    if i >= len(_table):
        with _lock:
            while len(_table) <= i:
                _table.append(_table[-1] + _table[-2] + _table[-3])
    return _table[i]


def weights(length: int) -> list[int]:
    """Digit weights for a word of the given length, msd first."""
    tribonacci(length + 2)
    return _table[length + 1:1:-1]


def to_rep(n: int) -> str:
    """Canonical (greedy) representation of ``n``; the empty word for 0."""
    if n < 0:
        raise ValueError(f"negative integers have no representation: {n}")
    if n == 0:
        return ""
    i = 2
    while tribonacci(i + 1) <= n:
        i += 1
    digits = []
    for j in range(i, 1, -1):
        t = _table[j]
        if t <= n:
            digits.append("1")
            n -= t
        else:
            digits.append("0")
    return "".join(digits)


def from_rep(w: str) -> int:
    """Value of an arbitrary (possibly padded or non-canonical) digit word."""
    total = 0
    for d, t in zip(w, weights(len(w))):
        if d == "1":
            total += t
        elif d != "0":
            raise ValueError(f"not a binary digit: {d!r}")
    return total


def is_canonical(w: str) -> bool:
    if w == "":
        return True
    return w[0] == "1" and "111" not in w and set(w) <= {"0", "1"}


def is_valid(w: str) -> bool:
    """True for canonical words with any number of leading zeros."""
    return "111" not in w and set(w) <= {"0", "1"}


def pad(w: str, length: int) -> str:
    if len(w) > length:
        raise ValueError(f"word {w!r} longer than {length}")
    return "0" * (length - len(w)) + w


def rep_length(n: int) -> int:
    return len(to_rep(n))


def max_value(length: int) -> int:
    """Largest value of a valid word with ``length`` digits."""
    return tribonacci(length + 2) - 1


def digit_matrix(values, length: int | None = None):
    """Canonical digits of many values at once, padded to a common length.

    Returns a ``(len(values), length)`` uint8 numpy array, msd first."""
    import numpy as np

    rem = np.asarray(values, dtype=np.int64).copy()
    if rem.size and rem.min() < 0:
        raise ValueError("negative integers have no representation")
    top = int(rem.max()) if rem.size else 0
    need = 0
    while max_value(need) < top:
        need += 1
    if length is None:
        length = need
    elif length < need:
        raise ValueError(f"length {length} too short for value {top}")
    out = np.zeros((rem.size, length), dtype=np.uint8)
    for j in range(length):
        t = tribonacci(length + 1 - j)
        d = rem >= t
        out[:, j] = d
        rem -= d * t
    return out
