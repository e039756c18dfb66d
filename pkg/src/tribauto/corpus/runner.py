"""Replay the bundled scripts and compare outcomes with their expectations."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .. import automata as am
from .. import guesser, numeration, oracles
from ..logic.compiler import CompileError
from ..logic.parser import ParseError
from ..logic.session import Session, StatementResult

log = logging.getLogger(__name__)

# sequence name in the oracle -> automaton name used by the scripts
GUESSED = {"X": "xaut", "Y": "yaut"}


class CorpusError(Exception):
    pass


@dataclass(frozen=True)
class CorpusCase:
    name: str
    script: str
    expect: dict[str, str]
    consumes: tuple[str, ...] = ()
    after: tuple[str, ...] = ()
    witness: dict[str, dict[str, int]] = field(default_factory=dict)
    dfao: dict[str, str] = field(default_factory=dict)

    def text(self) -> str:
        return script_text(self.script)


def script_text(filename: str) -> str:
    return resources.files(__package__).joinpath("scripts", filename).read_text(encoding="utf-8")


def load_manifest() -> list[CorpusCase]:
    raw = json.loads(resources.files(__package__).joinpath("manifest.json").read_text(encoding="utf-8"))
    cases = []
    for c in raw["cases"]:
        cases.append(CorpusCase(c["name"], c["script"], dict(c["expect"]),
                                tuple(c.get("consumes", ())), tuple(c.get("after", ())),
                                dict(c.get("witness", {})), dict(c.get("dfao", {}))))
    names = [c.name for c in cases]
    for c in cases:
        for dep in c.after:
            if dep not in names or names.index(dep) > names.index(c.name):
                raise CorpusError(f"case {c.name} must come after {dep}")
    return cases


def case(name: str) -> CorpusCase:
    for c in load_manifest():
        if c.name == name:
            return c
    raise KeyError(f"no corpus case {name!r}")


@dataclass
class ItemCheck:
    """One expectation: a statement outcome, a witness or a DFAO check."""

    case: str
    item: str
    expected: str
    actual: str
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        text = f"{mark}  {self.case:<10} {self.item:<18} expected {self.expected:<8} got {self.actual}"
        return text + (f"  [{self.detail}]" if self.detail else "")

    def to_dict(self) -> dict:
        return {"case": self.case, "item": self.item, "expected": self.expected,
                "actual": self.actual, "detail": self.detail, "passed": self.passed}


@dataclass
class ScriptReport:
    case: str
    results: list[StatementResult] = field(default_factory=list)
    checks: list[ItemCheck] = field(default_factory=list)
    error: str | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def first_failure(self) -> ItemCheck | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_dict(self) -> dict:
        return {"case": self.case, "passed": self.passed, "error": self.error,
                "seconds": round(self.seconds, 3),
                "statements": [r.to_dict() for r in self.results],
                "checks": [c.to_dict() for c in self.checks]}


def _dfao_values(aut: am.Automaton, limit: int) -> np.ndarray:
    length = 1
    while numeration.max_value(length) < limit:
        length += 1
    digits = numeration.digit_matrix(np.arange(limit + 1), length).astype(np.int64)
    return aut.outputs[am.run_many(aut, digits)]


def check_dfao(aut: am.Automaton, sequence: str, limit: int) -> str:
    """Empty string if ``aut`` outputs the oracle sequence for n <= limit,
    else a description of the first mismatch."""
    want = oracles.default_oracle().sequence(sequence, limit + 1)
    got = _dfao_values(aut, limit)
    bad = np.flatnonzero(got != want)
    if bad.size:
        n = int(bad[0])
        return f"n={n}: output {int(got[n])}, oracle {int(want[n])}"
    return ""


def run_case(c: CorpusCase, session: Session, dfao_bound: int = 100_000) -> ScriptReport:
    """Run one case inside ``session`` (which keeps its definitions)."""
    rep = ScriptReport(c.name)
    t0 = time.perf_counter()
    try:
        rep.results = session.run(c.text())
    except (ParseError, CompileError, am.AutomatonError) as e:
        rep.error = f"{type(e).__name__}: {e}"
        rep.seconds = time.perf_counter() - t0
        return rep
    seen = {r.name: r for r in rep.results}
    for item, want in c.expect.items():
        r = seen.get(item)
        rep.checks.append(ItemCheck(c.name, item, want, r.outcome if r else "missing",
                                    _witness_text(r.witness) if r and r.witness else ""))
    for item, want in c.witness.items():
        r = seen.get(item)
        got = r.witness if r else None
        rep.checks.append(ItemCheck(c.name, f"{item}.witness", _witness_text(want),
                                    _witness_text(got) if got else "none"))
    for name, seq in c.dfao.items():
        problem = check_dfao(session.lookup(name), seq, dfao_bound)
        rep.checks.append(ItemCheck(c.name, f"{name}~{seq}", "match", "mismatch" if problem else "match",
                                    problem or f"n <= {dfao_bound}"))
    rep.seconds = time.perf_counter() - t0
    return rep


def _witness_text(w: dict[str, int] | None) -> str:
    if not w:
        return ""
    return ",".join(f"{k}={v}" for k, v in w.items())


def ensure_guessed(session: Session, params: guesser.GuessParams | None = None,
                   max_i: int = 12, bound: int = 100_000) -> list[guesser.GuessReport]:
    """Make xaut and yaut available, guessing and validating them if absent."""
    params = params or guesser.GuessParams()
    reports = []
    for seq, name in GUESSED.items():
        try:
            session.lookup(name)
            continue
        except CompileError:
            pass
        values = oracles.default_oracle().sequence(seq, params.sample_bound)
        aut, report = guesser.stabilized(values, params, range(1, max_i + 1), seq)
        if aut is None:
            raise CorpusError(f"guess for {seq} did not stabilize for depth <= {max_i}")
        check = guesser.validate(aut, values, bound)
        if not check.ok:
            raise CorpusError(f"guessed {name} fails validation: {check.describe()}")
        session.define(name, aut)
        reports.append(report)
    return reports


@dataclass
class Summary:
    reports: list[ScriptReport]
    skipped: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.skipped and all(r.passed for r in self.reports)

    def first_failure(self) -> str | None:
        for r in self.reports:
            if r.error:
                return f"{r.case}: {r.error}"
            f = r.first_failure()
            if f:
                return f.line()
        return None

    def text(self) -> str:
        lines = []
        for r in self.reports:
            if r.error:
                lines.append(f"FAIL  {r.case:<10} error: {r.error}")
            lines.extend(c.line() for c in r.checks)
        lines.extend(f"SKIP  {name}" for name in self.skipped)
        n_ok = sum(c.passed for r in self.reports for c in r.checks)
        n_all = sum(len(r.checks) for r in self.reports)
        lines.append(f"{n_ok}/{n_all} checks passed; verification {'PASSED' if self.passed else 'FAILED'}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"passed": self.passed, "skipped": self.skipped,
                "cases": [r.to_dict() for r in self.reports]}

    def write(self, directory: Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "verification.txt").write_text(self.text(), encoding="utf-8")
        (directory / "verification.json").write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def full_verification(session: Session, keep_going: bool = False,
                      dfao_bound: int = 100_000, export_dir: Path | None = None) -> Summary:
    """Run every case in manifest order; stop at the first failing case
    unless ``keep_going``. DFAOs named by the cases are exported as text
    and DOT files when ``export_dir`` is given."""
    cases = load_manifest()
    summary = Summary([])
    for i, c in enumerate(cases):
        rep = run_case(c, session, dfao_bound)
        summary.reports.append(rep)
        log.info("case %s: %s (%.2fs)", c.name, "pass" if rep.passed else "FAIL", rep.seconds)
        if export_dir is not None and rep.error is None:
            for name in c.dfao:
                export(session.lookup(name), name, export_dir)
        if not rep.passed and not keep_going:
            summary.skipped = [d.name for d in cases[i + 1:]]
            break
    return summary


def export(aut: am.Automaton, name: str, directory: Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    text = directory / f"{name}.txt"
    dot = directory / f"{name}.dot"
    am.save(aut, text)
    dot.write_text(am.to_dot(aut, name), encoding="utf-8")
    return [text, dot]
