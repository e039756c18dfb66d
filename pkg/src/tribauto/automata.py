"""Deterministic automata over k-track binary alphabets.

A symbol of a k-track word is a k-tuple of bits packed into an integer in
``[0, 2**k)``; track 0 is the most significant bit. Words are read most
significant digit first, and tuples of integers are encoded by padding the
shorter representations with leading zeros.

Every :class:`Automaton` is total. Operations return automata whose states
are all reachable; :func:`minimize` additionally numbers states canonically
(breadth-first from the initial state, successors in symbol order), so two
minimized automata accept the same language iff their tables are equal.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import numeration

DEFAULT_STATE_CAP = 1_000_000


class AutomatonError(Exception):
    pass


class ArityMismatch(AutomatonError):
    pass


class DeterminizationCapExceeded(AutomatonError):
    pass


@dataclass(frozen=True, eq=False)
class Automaton:
    arity: int
    delta: np.ndarray
    accepting: np.ndarray
    outputs: np.ndarray | None = None
    initial: int = 0

    def __post_init__(self):
        delta = np.ascontiguousarray(self.delta, dtype=np.int64)
        acc = np.ascontiguousarray(self.accepting, dtype=bool)
        if delta.ndim != 2 or delta.shape[1] != 1 << self.arity:
            raise AutomatonError(f"transition table shape {delta.shape} does not fit arity {self.arity}")
        if acc.shape != (delta.shape[0],):
            raise AutomatonError("accepting vector does not match state count")
        if delta.size and (delta.min() < 0 or delta.max() >= delta.shape[0]):
            raise AutomatonError("transition target out of range")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "accepting", acc)
        if self.outputs is not None:
            out = np.ascontiguousarray(self.outputs, dtype=np.int64)
            if out.shape != acc.shape:
                raise AutomatonError("outputs vector does not match state count")
            object.__setattr__(self, "outputs", out)
        delta.flags.writeable = False
        acc.flags.writeable = False

    @property
    def nstates(self) -> int:
        return self.delta.shape[0]

    @property
    def nsymbols(self) -> int:
        return 1 << self.arity

    @property
    def is_dfao(self) -> bool:
        return self.outputs is not None

    def run(self, word: Iterable[int]) -> int:
        q = self.initial
        for s in word:
            if not 0 <= s < self.nsymbols:
                raise AutomatonError(f"symbol {s} outside alphabet of arity {self.arity}")
            q = int(self.delta[q, s])
        return q

    def accepts(self, word: Iterable[int]) -> bool:
        return bool(self.accepting[self.run(word)])

    def output(self, word: Iterable[int]) -> int:
        if self.outputs is None:
            raise AutomatonError("automaton has no outputs")
        return int(self.outputs[self.run(word)])

    def accepts_values(self, *values: int) -> bool:
        return self.accepts(encode(values))

    def output_value(self, n: int) -> int:
        return self.output(encode([n]))

    def __repr__(self) -> str:
        kind = "DFAO" if self.is_dfao else "DFA"
        return f"<{kind} arity={self.arity} states={self.nstates}>"


@dataclass(frozen=True, eq=False)
class Nfa:
    """Epsilon-free NFA; state sets are Python int bitmasks."""

    arity: int
    succ: list[list[int]]
    initial: int
    accepting: int

    @property
    def nstates(self) -> int:
        return len(self.succ)

    @property
    def nsymbols(self) -> int:
        return 1 << self.arity

    def step(self, states: int, symbol: int) -> int:
        out = 0
        for q in _bits(states):
            out |= self.succ[q][symbol]
        return out

    def accepts(self, word: Iterable[int]) -> bool:
        states = self.initial
        for s in word:
            states = self.step(states, s)
        return bool(states & self.accepting)


# --------------------------------------------------------------------------
# symbols and words


def pack(bits: Sequence[int]) -> int:
    s = 0
    for b in bits:
        s = (s << 1) | (1 if b else 0)
    return s


def unpack(symbol: int, arity: int) -> tuple[int, ...]:
    return tuple((symbol >> (arity - 1 - t)) & 1 for t in range(arity))


def encode_words(words: Sequence[str], length: int | None = None) -> list[int]:
    """Zip digit words (padded to a common length) into a tuple word."""
    if length is None:
        length = max((len(w) for w in words), default=0)
    padded = [numeration.pad(w, length) for w in words]
    if not padded:
        return [0] * length
    return [pack([int(w[i]) for w in padded]) for i in range(length)]


def encode(values: Sequence[int], length: int | None = None) -> list[int]:
    """Tuple word for a tuple of naturals (canonical reps, common padding)."""
    return encode_words([numeration.to_rep(v) for v in values], length)


def track_words(word: Sequence[int], arity: int) -> list[str]:
    return ["".join(str((s >> (arity - 1 - t)) & 1) for s in word) for t in range(arity)]


def decode(word: Sequence[int], arity: int) -> tuple[int, ...]:
    return tuple(numeration.from_rep(w) for w in track_words(word, arity))


def symbol_label(symbol: int, arity: int) -> str:
    bits = unpack(symbol, arity)
    if arity == 1:
        return str(bits[0])
    return "[" + ",".join(map(str, bits)) + "]"


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# --------------------------------------------------------------------------
# construction helpers


def from_table(arity: int, table, accepting, outputs=None, initial: int = 0) -> Automaton:
    return Automaton(arity, np.asarray(table, dtype=np.int64).reshape(-1, 1 << arity),
                     np.asarray(accepting, dtype=bool),
                     None if outputs is None else np.asarray(outputs, dtype=np.int64), initial)


def universal(arity: int) -> Automaton:
    return Automaton(arity, np.zeros((1, 1 << arity), dtype=np.int64), np.array([True]))


def empty(arity: int) -> Automaton:
    return Automaton(arity, np.zeros((1, 1 << arity), dtype=np.int64), np.array([False]))


def symbol_map(src_tracks: Sequence[int], dst_arity: int) -> np.ndarray:
    """For each symbol over ``dst_arity`` tracks, the symbol read by an
    automaton whose track ``i`` is destination track ``src_tracks[i]``."""
    syms = np.arange(1 << dst_arity, dtype=np.int64)
    out = np.zeros_like(syms)
    for t in src_tracks:
        out = (out << 1) | ((syms >> (dst_arity - 1 - t)) & 1)
    return out


def gather(a: Automaton, src_tracks: Sequence[int], dst_arity: int) -> Automaton:
    """Re-express ``a`` over ``dst_arity`` tracks; track i of ``a`` reads
    destination track ``src_tracks[i]``. Repeated destination tracks force
    equal bits, unused destination tracks are ignored."""
    if len(src_tracks) != a.arity:
        raise ArityMismatch(f"expected {a.arity} track indices, got {len(src_tracks)}")
    smap = symbol_map(src_tracks, dst_arity)
    return Automaton(dst_arity, a.delta[:, smap], a.accepting, a.outputs, a.initial)


def permute(a: Automaton, order: Sequence[int]) -> Automaton:
    """Automaton whose track ``j`` is track ``order[j]`` of ``a``."""
    inv = [0] * a.arity
    for j, t in enumerate(order):
        inv[t] = j
    return minimize(gather(a, inv, a.arity))


# --------------------------------------------------------------------------
# exploration


def _explore(start: int, step: Callable[[np.ndarray], np.ndarray]):
    """Breadth-first exploration over integer-coded states.

    Returns the codes in BFS order (successors in symbol order) and the
    transition table in the new numbering."""
    known = np.array([start], dtype=np.int64)
    known_ids = np.array([0], dtype=np.int64)
    order = [known.copy()]
    rows = []
    frontier = known.copy()
    total = 1
    while frontier.size:
        nxt = step(frontier)
        rows.append(nxt)
        flat = nxt.ravel()
        uniq, first = np.unique(flat, return_index=True)
        pos = np.searchsorted(known, uniq)
        pos_c = np.minimum(pos, known.size - 1)
        fresh = known[pos_c] != uniq
        newc = uniq[fresh][np.argsort(first[fresh], kind="stable")]
        ids = np.arange(total, total + newc.size, dtype=np.int64)
        total += newc.size
        if newc.size:
            known = np.concatenate([known, newc])
            known_ids = np.concatenate([known_ids, ids])
            srt = np.argsort(known, kind="stable")
            known, known_ids = known[srt], known_ids[srt]
            order.append(newc)
        frontier = newc
    codes = np.concatenate(order)
    delta = np.concatenate(rows, axis=0) if rows else np.zeros((1, 0), dtype=np.int64)
    delta = known_ids[np.searchsorted(known, delta)]
    return codes, delta


def reachable(a: Automaton) -> Automaton:
    """Renumber reachable states breadth-first from the initial state."""
    codes, delta = _explore(a.initial, lambda f: a.delta[f])
    out = None if a.outputs is None else a.outputs[codes]
    return Automaton(a.arity, delta, a.accepting[codes], out, 0)


_OPS: dict[str, Callable[[np.ndarray, np.ndarray], np.ndarray]] = {
    "and": np.logical_and,
    "or": np.logical_or,
    "imp": lambda x, y: np.logical_or(~x, y),
    "iff": lambda x, y: x == y,
    "xor": lambda x, y: x != y,
    "diff": lambda x, y: np.logical_and(x, ~y),
}


def _product_mapped(a: Automaton, amap: np.ndarray, b: Automaton, bmap: np.ndarray,
                    arity: int, op: str) -> Automaton:
    ta = a.delta[:, amap]
    tb = b.delta[:, bmap]
    nb = b.nstates
    codes, delta = _explore(a.initial * nb + b.initial,
                            lambda f: ta[f // nb] * nb + tb[f % nb])
    acc = _OPS[op](a.accepting[codes // nb], b.accepting[codes % nb])
    return Automaton(arity, delta, acc)


def product(a: Automaton, b: Automaton, op: str = "and") -> Automaton:
    """Synchronous product; ``op`` is one of and/or/imp/iff/xor/diff."""
    if a.arity != b.arity:
        raise ArityMismatch(f"arity {a.arity} vs {b.arity}")
    if op not in _OPS:
        raise AutomatonError(f"unknown boolean connective {op!r}")
    ident = np.arange(a.nsymbols, dtype=np.int64)
    return _product_mapped(a, ident, b, ident, a.arity, op)


def product_tracks(a: Automaton, a_tracks: Sequence[int], b: Automaton, b_tracks: Sequence[int],
                   arity: int, op: str = "and") -> Automaton:
    """Product after cylindrifying both operands to ``arity`` tracks."""
    return _product_mapped(a, symbol_map(a_tracks, arity), b, symbol_map(b_tracks, arity), arity, op)


def complement(a: Automaton) -> Automaton:
    return Automaton(a.arity, a.delta, ~a.accepting, None, a.initial)


# --------------------------------------------------------------------------
# minimization


def _row_classes(sig: np.ndarray) -> tuple[np.ndarray, int]:
    sig = np.ascontiguousarray(sig)
    view = sig.view(np.dtype((np.void, sig.dtype.itemsize * sig.shape[1]))).ravel()
    _, inv = np.unique(view, return_inverse=True)
    inv = inv.ravel()
    return inv, int(inv.max()) + 1 if inv.size else 0


def minimize(a: Automaton) -> Automaton:
    """Moore partition refinement followed by canonical renumbering."""
    a = reachable(a)
    key = a.outputs if a.outputs is not None else a.accepting.astype(np.int64)
    _, cls = np.unique(key, return_inverse=True)
    cls = cls.ravel().astype(np.int64)
    count = int(cls.max()) + 1
    while True:
        sig = np.concatenate([cls[:, None], cls[a.delta]], axis=1)
        new, new_count = _row_classes(sig)
        cls = new.astype(np.int64)
        if new_count == count:
            break
        count = new_count
    reps = np.zeros(count, dtype=np.int64)
    reps[cls[::-1]] = np.arange(a.nstates - 1, -1, -1)
    delta = cls[a.delta[reps]]
    out = None if a.outputs is None else a.outputs[reps]
    q = Automaton(a.arity, delta, a.accepting[reps], out, int(cls[a.initial]))
    return reachable(q)


def equivalent(a: Automaton, b: Automaton) -> bool:
    """Language (or output-function) equality."""
    if a.arity != b.arity:
        raise ArityMismatch(f"arity {a.arity} vs {b.arity}")
    if a.is_dfao != b.is_dfao:
        return False
    ma, mb = minimize(a), minimize(b)
    if ma.nstates != mb.nstates:
        return False
    if not np.array_equal(ma.delta, mb.delta):
        return False
    if a.is_dfao:
        return bool(np.array_equal(ma.outputs, mb.outputs))
    return bool(np.array_equal(ma.accepting, mb.accepting))


# --------------------------------------------------------------------------
# nondeterminism


def to_nfa(a: Automaton) -> Nfa:
    one = [1 << i for i in range(a.nstates)]
    succ = [[one[t] for t in row] for row in a.delta.tolist()]
    acc = sum(one[q] for q in np.flatnonzero(a.accepting).tolist())
    return Nfa(a.arity, succ, 1 << a.initial, acc)


def erase(a: Automaton, tracks: Iterable[int]) -> Nfa:
    """Delete tracks; the result reads the remaining tracks in order."""
    tracks = sorted(set(tracks))
    if any(not 0 <= t < a.arity for t in tracks):
        raise AutomatonError(f"track out of range for arity {a.arity}: {tracks}")
    keep = [t for t in range(a.arity) if t not in tracks]
    k2, m = len(keep), len(tracks)
    expand = np.zeros((1 << k2, 1 << m), dtype=np.int64)
    for s in range(1 << k2):
        for e in range(1 << m):
            full = 0
            for i, t in enumerate(keep):
                full |= ((s >> (k2 - 1 - i)) & 1) << (a.arity - 1 - t)
            for i, t in enumerate(tracks):
                full |= ((e >> (m - 1 - i)) & 1) << (a.arity - 1 - t)
            expand[s, e] = full
    targets = a.delta[:, expand].tolist()
    one = [1 << i for i in range(a.nstates)]
    succ = []
    for row in targets:
        srow = []
        for group in row:
            mask = 0
            for t in group:
                mask |= one[t]
            srow.append(mask)
        succ.append(srow)
    acc = sum(one[q] for q in np.flatnonzero(a.accepting).tolist())
    return Nfa(k2, succ, 1 << a.initial, acc)


def zero_closure(nfa: Nfa, states: int) -> int:
    """States reachable from ``states`` by reading all-zero symbols."""
    seen = states
    frontier = states
    while frontier:
        nxt = nfa.step(frontier, 0) & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def determinize(nfa: Nfa, cap: int = DEFAULT_STATE_CAP, pad: bool = False) -> Automaton:
    """Subset construction. With ``pad`` the result accepts ``0^j w`` iff
    some ``0^m w'`` with ``w'`` the zero-stripped core of ``w`` is accepted
    by the NFA, i.e. the language is closed under leading zero padding."""
    nsym = nfa.nsymbols
    succ = nfa.succ
    index: dict[int, int] = {}
    subsets: list[int] = []
    rows: list[list[int]] = []
    acc: list[bool] = []

    def intern(m: int) -> int:
        i = index.get(m)
        if i is None:
            i = len(subsets)
            if i >= cap:
                raise DeterminizationCapExceeded(f"subset construction exceeded {cap} states")
            index[m] = i
            subsets.append(m)
        return i

    def step_row(m: int) -> list[int]:
        row = [0] * nsym
        for q in _bits(m):
            row = list(map(operator.or_, row, succ[q]))
        return row

    if pad:
        start = zero_closure(nfa, nfa.initial)
        # state 0 is the pad-absorbing start; subsets are numbered from 1
        subsets.append(-1)
        first = step_row(start)
        rows.append([0] + [intern(m) for m in first[1:]])
        acc.append(bool(start & nfa.accepting))
        done = 1
    else:
        intern(nfa.initial)
        done = 0
    while done < len(subsets):
        m = subsets[done]
        rows.append([intern(x) for x in step_row(m)])
        acc.append(bool(m & nfa.accepting))
        done += 1
    return Automaton(nfa.arity, np.array(rows, dtype=np.int64).reshape(-1, nsym), np.array(acc))


def pad_normalize(a: Automaton) -> Automaton:
    """Close the language under adding and removing leading zero symbols."""
    return minimize(determinize(to_nfa(a), pad=True))


def project(a: Automaton, tracks: int | Iterable[int], cap: int = DEFAULT_STATE_CAP) -> Automaton:
    """Existentially quantify the given tracks (erase, determinize with
    padding normalization, minimize)."""
    if isinstance(tracks, int):
        tracks = [tracks]
    return minimize(determinize(erase(a, tracks), cap=cap, pad=True))


# --------------------------------------------------------------------------
# queries


def is_empty(a: Automaton) -> bool:
    r = reachable(a)
    return not bool(r.accepting.any())


def is_universal(a: Automaton) -> bool:
    r = reachable(a)
    return bool(r.accepting.all())


def find_witness(a: Automaton) -> list[int] | None:
    """Shortest accepted word, lexicographically least among the shortest."""
    if a.accepting[a.initial]:
        return []
    parent = {a.initial: None}
    frontier = [a.initial]
    while frontier:
        nxt = []
        for q in frontier:
            for s, t in enumerate(a.delta[q].tolist()):
                if t in parent:
                    continue
                parent[t] = (q, s)
                if a.accepting[t]:
                    word = []
                    cur = t
                    while parent[cur] is not None:
                        cur, sym = parent[cur]
                        word.append(sym)
                    return word[::-1]
                nxt.append(t)
        frontier = nxt
    return None


def run_many(a: Automaton, symbols: np.ndarray) -> np.ndarray:
    """Final states for a batch of equal-length words (rows of ``symbols``)."""
    symbols = np.asarray(symbols, dtype=np.int64)
    q = np.full(symbols.shape[0], a.initial, dtype=np.int64)
    for j in range(symbols.shape[1]):
        q = a.delta[q, symbols[:, j]]
    return q


# --------------------------------------------------------------------------
# text format


def dumps(a: Automaton, header: Sequence[str] = ()) -> str:
    a = reachable(a)
    head = f"msd_trib {a.arity} {a.nstates}" + (" dfao" if a.is_dfao else "")
    lines = [head] + [f"# {h}" for h in header]
    for q in range(a.nstates):
        if a.is_dfao:
            lines.append(f"{q} {int(a.outputs[q])}")
        else:
            lines.append(f"{q} {int(a.accepting[q])}")
    for q, row in enumerate(a.delta.tolist()):
        for s, t in enumerate(row):
            lines.append(f"{q} {s} {t}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Automaton:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise AutomatonError("empty automaton file")
    head = lines[0].split()
    if len(head) < 3 or head[0] != "msd_trib":
        raise AutomatonError(f"bad header line: {lines[0]!r}")
    arity, n = int(head[1]), int(head[2])
    dfao = len(head) > 3 and head[3] == "dfao"
    if len(lines) != 1 + n + n * (1 << arity):
        raise AutomatonError(f"expected {n} states and {n * (1 << arity)} transitions")
    values = np.zeros(n, dtype=np.int64)
    for ln in lines[1:1 + n]:
        q, v = map(int, ln.split())
        values[q] = v
    delta = np.full((n, 1 << arity), -1, dtype=np.int64)
    for ln in lines[1 + n:]:
        q, s, t = map(int, ln.split())
        delta[q, s] = t
    if (delta < 0).any():
        raise AutomatonError("transition table is not total")
    if dfao:
        return Automaton(arity, delta, values != 0, values)
    return Automaton(arity, delta, values != 0)


def save(a: Automaton, path, header: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(a, header))


def load(path) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def to_dot(a: Automaton, name: str = "A", hide_sink: bool = True) -> str:
    """Graphviz rendering; DFAO states are labelled ``q/output``."""
    a = reachable(a)
    sinks = set()
    if hide_sink and not a.is_dfao:
        for q in range(a.nstates):
            if not a.accepting[q] and (a.delta[q] == q).all():
                sinks.add(q)
    out = [f'digraph "{name}" {{', "  rankdir=LR;", '  __start [shape=point, label=""];',
           f"  __start -> {a.initial};"]
    for q in range(a.nstates):
        if q in sinks:
            continue
        if a.is_dfao:
            out.append(f'  {q} [shape=circle, label="{q}/{int(a.outputs[q])}"];')
        else:
            shape = "doublecircle" if a.accepting[q] else "circle"
            out.append(f'  {q} [shape={shape}, label="{q}"];')
    for q, row in enumerate(a.delta.tolist()):
        if q in sinks:
            continue
        edges: dict[int, list[str]] = {}
        for s, t in enumerate(row):
            if t in sinks:
                continue
            edges.setdefault(t, []).append(symbol_label(s, a.arity))
        for t, labels in edges.items():
            out.append(f'  {q} -> {t} [label="{", ".join(labels)}"];')
    out.append("}")
    return "\n".join(out) + "\n"


__all__ = [
    "Automaton", "Nfa", "AutomatonError", "ArityMismatch", "DeterminizationCapExceeded",
    "pack", "unpack", "encode", "encode_words", "decode", "track_words", "symbol_label",
    "from_table", "universal", "empty", "gather", "permute", "symbol_map", "reachable",
    "product", "product_tracks", "complement", "minimize", "equivalent", "to_nfa", "erase",
    "determinize", "pad_normalize", "project", "is_empty", "is_universal", "find_witness",
    "run_many", "dumps", "loads", "save", "load", "to_dot",
]
