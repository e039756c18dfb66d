"""Statement interpreter: a mutable environment of named automata."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from .. import arith
from .. import automata as am
from . import ast
from .compiler import CompileError, Compiler, combine
from .parser import parse
from .regex import compile_regex

log = logging.getLogger(__name__)


@dataclass
class StatementResult:
    kind: str
    name: str
    line: int
    value: bool | None = None
    states: int | None = None
    witness: dict[str, int] | None = None
    seconds: float = 0.0

    @property
    def outcome(self) -> str:
        if self.kind == "eval":
            return "TRUE" if self.value else "FALSE"
        return "defined"

    def describe(self) -> str:
        if self.kind == "eval":
            text = f"{self.name}: {self.outcome}"
            if self.witness:
                text += " (counterexample " + ", ".join(f"{k}={v}" for k, v in self.witness.items()) + ")"
            return text
        return f"{self.name}: {self.kind} ({self.states} states)"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.name,
            "line": self.line,
            "outcome": self.outcome,
            "states": self.states,
            "witness": self.witness,
            "seconds": round(self.seconds, 3),
        }


@dataclass
class Session:
    """Named automata plus an optional on-disk library (``NAME.txt``).

    Names resolve to session definitions first, then library files, then
    the arithmetic builtins."""

    autlib: Path | None = None
    env: dict[str, am.Automaton] = field(default_factory=dict)
    cap: int = am.DEFAULT_STATE_CAP
    save_results: bool = False

    def lookup(self, name: str) -> am.Automaton:
        if name in self.env:
            return self.env[name]
        if self.autlib is not None:
            path = Path(self.autlib) / f"{name}.txt"
            if path.exists():
                self.env[name] = am.load(path)
                return self.env[name]
        aut = arith.builtin(name)
        if aut is not None:
            return aut
        raise CompileError(f"unknown automaton ${name}")

    def define(self, name: str, aut: am.Automaton) -> None:
        self.env[name] = aut
        if self.save_results and self.autlib is not None:
            Path(self.autlib).mkdir(parents=True, exist_ok=True)
            am.save(aut, Path(self.autlib) / f"{name}.txt")

    def compiler(self) -> Compiler:
        return Compiler(self.lookup, self.cap)

    def check_references(self, statements: list[ast.Statement]) -> None:
        """Resolve every ``$name`` before anything is compiled."""
        defined: set[str] = set()
        for st in statements:
            refs: set[str] = set()
            if isinstance(st, (ast.Def, ast.Eval)):
                refs = ast.calls(st.formula)
            elif isinstance(st, ast.Combine):
                refs = set(st.predicates)
            for r in sorted(refs - defined):
                self.lookup(r)
            if not isinstance(st, ast.Eval):
                defined.add(st.name)

    def execute(self, st: ast.Statement) -> StatementResult:
        t0 = time.perf_counter()
        if isinstance(st, ast.Def):
            rel = self.compiler().compile(st.formula)
            self.define(st.name, rel.aut)
            res = StatementResult("def", st.name, st.line, states=rel.nstates)
        elif isinstance(st, ast.Eval):
            value, witness = self.compiler().evaluate(st.formula)
            res = StatementResult("eval", st.name, st.line, value=value, witness=witness)
        elif isinstance(st, ast.Reg):
            aut = compile_regex(st.pattern, st.arity)
            self.define(st.name, aut)
            res = StatementResult("reg", st.name, st.line, states=aut.nstates)
        elif isinstance(st, ast.Combine):
            aut = combine([self.lookup(p) for p in st.predicates])
            self.define(st.name, aut)
            res = StatementResult("combine", st.name, st.line, states=aut.nstates)
        else:
            raise TypeError(f"unknown statement {st!r}")
        res.seconds = time.perf_counter() - t0
        log.info("%s (%.2fs)", res.describe(), res.seconds)
        return res

    def run(self, text: str) -> list[StatementResult]:
        statements = parse(text)
        self.check_references(statements)
        return [self.execute(st) for st in statements]

    def run_file(self, path) -> list[StatementResult]:
        return self.run(Path(path).read_text(encoding="utf-8"))
