"""Guess a synchronized automaton for a sequence from finitely many terms.

Pair words ``w x z`` are read msd first with the index on track 0 and the
value on track 1. Two words are ``depth``-equivalent when no extension of
length at most ``depth`` separates them with respect to membership in the
graph language of the sequence. A breadth-first search keeps one
representative per class; the representatives become states.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import automata as am
from . import numeration
from .logic import Compiler, bind, parse_formula

log = logging.getLogger(__name__)

VARIANTS = ("Lprime", "L")


class GuessError(Exception):
    pass


class DepthInsufficient(GuessError):
    pass


@dataclass(frozen=True)
class GuessParams:
    depth: int = 6
    max_length: int = 22
    sample_bound: int = 1_000_000
    variant: str = "Lprime"

    def check(self) -> None:
        if self.depth < 1:
            raise GuessError("depth must be at least 1")
        if self.max_length < self.depth:
            raise GuessError("max_length must be at least depth")
        if self.variant not in VARIANTS:
            raise GuessError(f"variant must be one of {VARIANTS}")
        if numeration.max_value(self.max_length) >= self.sample_bound:
            raise GuessError(
                f"index words of length {self.max_length} reach {numeration.max_value(self.max_length)},"
                f" beyond the sample bound {self.sample_bound}")

    @classmethod
    def fitting(cls, sample_bound: int, **kw) -> "GuessParams":
        """Longest word length whose index values stay below the bound."""
        length = 0
        while numeration.max_value(length + 1) < sample_bound:
            length += 1
        return cls(max_length=length, sample_bound=sample_bound, **kw)


def _word_stats(length: int):
    """Values, leading-1 runs and validity of every binary word of a length."""
    words = np.arange(1 << length, dtype=np.int64)
    w = numeration.weights(length)
    val = np.zeros_like(words)
    lead = np.zeros_like(words)
    run = np.zeros_like(words)
    ok = np.ones(words.size, dtype=bool)
    still_leading = np.ones(words.size, dtype=bool)
    for j in range(length):
        bit = (words >> (length - 1 - j)) & 1
        val += bit * w[j]
        run = np.where(bit == 1, run + 1, 0)
        ok &= run < 3
        still_leading &= bit == 1
        lead += still_leading
    return val, lead, ok


class _Extensions:
    """All extension pairs of length j, flattened, for j = 0..depth."""

    def __init__(self, depth: int, variant: str):
        self.levels = []
        for j in range(depth + 1):
            val, lead, ok = _word_stats(j)
            hi = np.repeat(np.arange(1 << j), 1 << j)
            lo = np.tile(np.arange(1 << j), 1 << j)
            keep = np.ones(hi.size, dtype=bool)
            if variant == "Lprime":
                # extensions with an internal 111 never produce members
                keep = ok[hi] & ok[lo]
            hi, lo = hi[keep], lo[keep]
            self.levels.append((j, val[hi], val[lo], lead[hi], lead[lo]))


class Guesser:
    def __init__(self, values: np.ndarray | Sequence[int], params: GuessParams):
        params.check()
        self.params = params
        self.values = np.asarray(values, dtype=np.int64)
        if self.values.size < params.sample_bound:
            raise GuessError(f"need {params.sample_bound} sequence terms, got {self.values.size}")
        self.ext = _Extensions(params.depth, params.variant)

    def member(self, word: Sequence[int]) -> bool:
        n_digits, z_digits = am.track_words(word, 2)
        n, z = numeration.from_rep(n_digits), numeration.from_rep(z_digits)
        if self.params.variant == "Lprime" and ("111" in n_digits or "111" in z_digits):
            return False
        if n >= self.params.sample_bound:
            raise GuessError(f"index {n} beyond the sample bound {self.params.sample_bound}")
        return bool(self.values[n] == z)

    def signature(self, word: Sequence[int]) -> bytes:
        if len(word) + self.params.depth > self.params.max_length:
            raise DepthInsufficient(
                f"representative of length {len(word)} cannot be extended by {self.params.depth}"
                f" within max_length {self.params.max_length}; raise the sample bound")
        n_digits, z_digits = am.track_words(word, 2)
        lprime = self.params.variant == "Lprime"
        if lprime and ("111" in n_digits or "111" in z_digits):
            return b"dead"
        tn = len(n_digits) - len(n_digits.rstrip("1"))
        tz = len(z_digits) - len(z_digits.rstrip("1"))
        parts = []
        for j, vn, vz, ln, lz in self.ext.levels:
            base_n = numeration.from_rep(n_digits + "0" * j)
            base_z = numeration.from_rep(z_digits + "0" * j)
            idx = base_n + vn
            hit = self.values[idx] == base_z + vz
            if lprime:
                hit &= (tn + ln < 3) & (tz + lz < 3)
            parts.append(hit)
        return np.packbits(np.concatenate(parts)).tobytes()

    def run(self) -> tuple[am.Automaton, dict]:
        """Breadth-first guess; returns the minimized automaton and stats."""
        reps: list[tuple[int, ...]] = [()]
        classes = {self.signature(()): 0}
        rows: list[list[int]] = []
        head = 0
        while head < len(reps):
            r = reps[head]
            row = []
            for a in range(4):
                w = r + (a,)
                sig = self.signature(w)
                q = classes.get(sig)
                if q is None:
                    q = len(reps)
                    classes[sig] = q
                    reps.append(w)
                row.append(q)
            rows.append(row)
            head += 1
        acc = [self.member(r) for r in reps]
        raw = am.Automaton(2, np.array(rows), np.array(acc))
        aut = am.minimize(raw)
        stats = {"depth": self.params.depth, "classes": len(reps), "states": aut.nstates,
                 "longest_representative": max(len(r) for r in reps)}
        return aut, stats


def guess(values, params: GuessParams) -> am.Automaton:
    return Guesser(values, params).run()[0]


@dataclass
class GuessReport:
    name: str
    params: dict
    per_depth: list[dict] = field(default_factory=list)
    stabilized_at: int | None = None
    states: int | None = None
    states_without_sink: int | None = None

    def to_jsonl(self) -> str:
        return json.dumps(asdict(self), sort_keys=True) + "\n"


def sink_states(a: am.Automaton) -> int:
    return sum(1 for q in range(a.nstates) if not a.accepting[q] and (a.delta[q] == q).all())


def stabilized(values, params: GuessParams, depths: Sequence[int],
               name: str = "") -> tuple[am.Automaton | None, GuessReport]:
    """First guess that agrees with the guess at the next depth."""
    report = GuessReport(name, asdict(params))
    prev = None
    prev_depth = None
    for d in depths:
        p = GuessParams(d, params.max_length, params.sample_bound, params.variant)
        aut, stats = Guesser(values, p).run()
        report.per_depth.append(stats)
        log.info("guess %s depth %d: %d classes, %d states", name, d, stats["classes"], stats["states"])
        if prev is not None and prev_depth == d - 1 and am.equivalent(prev, aut):
            report.stabilized_at = prev_depth
            report.states = prev.nstates
            report.states_without_sink = prev.nstates - sink_states(prev)
            return prev, report
        prev, prev_depth = aut, d
    return None, report


@dataclass
class Validation:
    bound: int
    ok: bool
    first_disagreement: dict | None = None
    functional: bool | None = None
    total: bool | None = None

    def describe(self) -> str:
        if self.ok:
            return f"agrees with the sequence for all n < {self.bound}"
        return f"disagreement: {self.first_disagreement}"


def validate(candidate: am.Automaton, values, bound: int) -> Validation:
    """Check that ``candidate`` accepts exactly the pairs (n, values[n]).

    Membership of (n, values[n]) and rejection of (n, values[n] +- 1, +- 2)
    are checked for every n < bound; that each n has exactly one partner is
    decided for all n by compiling functionality and totality formulas."""
    if candidate.arity != 2 or candidate.is_dfao:
        raise GuessError("candidate must be a 2-track acceptor")
    values = np.asarray(values[:bound], dtype=np.int64)
    n = np.arange(bound, dtype=np.int64)
    top = int(values.max()) + 2 if bound else 2
    length = 0
    while numeration.max_value(length) < max(top, bound):
        length += 1
    nd = numeration.digit_matrix(n, length).astype(np.int64)
    for delta in (0, -2, -1, 1, 2):
        z = values + delta
        ok_idx = z >= 0
        zd = numeration.digit_matrix(np.where(ok_idx, z, 0), length).astype(np.int64)
        final = am.run_many(candidate, 2 * nd + zd)
        got = candidate.accepting[final] & ok_idx
        want = (delta == 0)
        bad = np.flatnonzero(got != want if delta == 0 else got)
        if bad.size:
            i = int(bad[0])
            return Validation(bound, False, {"n": i, "z": int(z[i]), "accepted": bool(got[i]),
                                             "expected": bool(want)})
    comp = Compiler({"cand": candidate})
    functional, _ = comp.evaluate(parse_formula("?msd_trib An,z,w ($cand(n,z) & $cand(n,w)) => z=w"))
    total, _ = comp.evaluate(parse_formula("?msd_trib An Ez $cand(n,z)"))
    ok = functional and total
    first = None
    if not ok:
        first = {"functional": functional, "total": total}
    return Validation(bound, ok, first, functional, total)


def identity_values(limit: int) -> np.ndarray:
    return np.arange(limit, dtype=np.int64)


def restrict_graph(aut: am.Automaton) -> am.Automaton:
    """Restrict both tracks to valid representations."""
    from .logic.compiler import restrict_valid

    rel = restrict_valid(bind(aut, ["n", "z"]))
    return am.minimize(rel.aut)

