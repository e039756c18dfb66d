import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from tribauto import corpus, guesser, oracles  # noqa: E402
from tribauto.logic import ast  # noqa: E402
from tribauto.logic.parser import parse  # noqa: E402
from tribauto.logic.session import Session  # noqa: E402

SAMPLE = 1_000_000


@pytest.fixture(scope="session")
def oracle():
    return oracles.default_oracle()


@pytest.fixture(scope="session")
def X(oracle):
    return oracle.sequence("X", SAMPLE)


@pytest.fixture(scope="session")
def Y(oracle):
    return oracle.sequence("Y", SAMPLE)


@pytest.fixture(scope="session")
def guessed(X, Y):
    """Stabilized L' guesses with their reports, keyed by sequence name."""
    out = {}
    for name, values in (("X", X), ("Y", Y)):
        aut, report = guesser.stabilized(values, guesser.GuessParams(), range(1, 13), name)
        out[name] = (aut, report)
    return out


@pytest.fixture(scope="session")
def base_env(guessed):
    return {"xaut": guessed["X"][0], "yaut": guessed["Y"][0]}


@pytest.fixture(scope="session")
def corpus_run(base_env):
    """A session after the whole corpus, plus its summary."""
    session = Session(env=dict(base_env))
    summary = corpus.full_verification(session, keep_going=True)
    return session, summary


@pytest.fixture(scope="session")
def corpus_defs():
    defs, regs = {}, {}
    for c in corpus.load_manifest():
        for st in parse(c.text()):
            if isinstance(st, ast.Def):
                defs[st.name] = (sorted(ast.free_vars(st.formula)), st.formula)
            elif isinstance(st, ast.Reg):
                regs[st.name] = st
    return defs, regs


@pytest.fixture
def fresh_session(base_env):
    return Session(env=dict(base_env))


def grid_axes(k: int, bound: int):
    return [np.arange(bound + 1).reshape([-1 if i == j else 1 for i in range(k)]) for j in range(k)]


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
