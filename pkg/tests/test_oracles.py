import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tribauto import arith
from tribauto import automata as am
from tribauto import numeration as nm
from tribauto import oracles

TABLE2_X = [0, 1, 3, 4, 6, 7, 9, 10, 12, 14, 15, 17, 18, 20, 21, 23]
TABLE2_Y = [0, 2, 5, 8, 11, 13, 16, 19, 22, 25, 28, 31, 33, 36, 39, 42]
N = 10_000


def literal_greedy(limit):
    """Pair search written straight from the definition, with plain sets."""
    X, Y = [0, 1], [0, 2]
    for n in range(2, limit + 1):
        used = set(X[1:]) | set(Y[1:])
        diffs = {y - x for x, y in zip(X[1:], Y[1:])}
        sums = {y + x for x, y in zip(X[1:], Y[1:])}
        x = 1
        while x in used:
            x += 1
        y = x + 1
        while y in used or (y - x) in diffs or (y - x) in sums:
            y += 1
        X.append(x)
        Y.append(y)
    return X, Y


@pytest.fixture(scope="module")
def seqs(oracle):
    return {k: oracle.sequence(k, N + 2) for k in ("X", "Y", "D", "a", "b", "c")}


def test_table_values():
    X, Y = oracles.xy(15)
    assert X == TABLE2_X and Y == TABLE2_Y


def test_examples():
    assert oracles.default_oracle().X(3) == 4 and oracles.default_oracle().Y(3) == 8
    X, Y = oracles.xy(20)
    assert (X[20], Y[20]) == (30, 56)


def test_matches_literal_definition():
    assert oracles.greedy_xy(600) == literal_greedy(600)


def test_tr_examples():
    assert "".join(str(oracles.tr(n)) for n in range(7)) == "0102010"
    assert oracles.tr(3) == 2
    assert oracles.tr(12) == 1  # 12 = 1101


def test_tr_array_agrees_with_definition():
    arr = oracles.tr_array(3000)
    assert [oracles.tr(n) for n in range(3000)] == arr.tolist()


def test_tr_agrees_with_dfao_below_one_million(oracle):
    n = np.arange(1_000_000)
    digits = nm.digit_matrix(n).astype(np.int64)
    tr = arith.tr_dfao()
    out = tr.outputs[am.run_many(tr, digits)]
    assert (out == oracle.sequence("TR", 1_000_000)).all()


def test_prefix_counts():
    assert oracles.prefix_counts(0) == (0, 0, 0)
    assert oracles.prefix_counts(7) == (4, 2, 1)
    assert sum(oracles.prefix_counts(100)) == 100


def test_occurrence_examples():
    assert [oracles.occurrence(s, 1) for s in (0, 1, 2)] == [1, 2, 4]
    assert oracles.occurrence(0, 2) == 3
    assert oracles.occurrence(1, 0) == 0
    with pytest.raises(ValueError):
        oracles.occurrence(3, 1)


def test_characteristic_examples():
    assert oracles.beta(4) == 1 and oracles.gamma(4) == 0
    assert oracles.beta(0) == 1 and oracles.gamma(0) == 1


def test_complementarity(oracle):
    beta, gamma = oracle.sequence("beta", N + 1), oracle.sequence("gamma", N + 1)
    assert (beta[1:] + gamma[1:] == 1).all()


def test_sum_difference_complementarity(oracle):
    X, Y = oracle.xy(N)
    X, Y = np.array(X[1:]), np.array(Y[1:])
    diffs, sums = Y - X, Y + X
    seen = np.zeros(sums.max() + 1, dtype=np.int64)
    np.add.at(seen, diffs, 1)
    np.add.at(seen, sums, 1)
    # later diffs and sums all exceed N, so values 1..N are settled
    assert diffs[-1] > N and sums[-1] > N
    assert (seen[1:N + 1] == 1).all()


def test_identities(seqs):
    n = np.arange(1, N + 1)
    X, Y, a, b, c = (seqs[k][1:N + 1] for k in ("X", "Y", "a", "b", "c"))
    assert (Y == a + n).all()
    # D_{n-1} counts zeros in TR[0..n-2], i.e. D sequence at index n-1
    assert (X == seqs["D"][:N] + n).all()
    assert (X == b - a).all()
    assert (Y == c - b).all()


def test_sequence_names(oracle):
    for name in oracles.SEQUENCE_NAMES:
        assert len(oracle.sequence(name, 50)) == 50
    with pytest.raises(KeyError):
        oracle.sequence("Z", 5)


@given(st.integers(0, 5000))
def test_prefix_counts_partition(n):
    d, e, f = oracles.prefix_counts(n)
    assert d + e + f == n
    assert d >= e >= f


@given(st.integers(1, 3000))
def test_strictly_increasing_and_bounded(n):
    X, Y = oracles.xy(n)
    assert X[n - 1] < X[n] and Y[n - 1] < Y[n]
    assert X[n] < Y[n] < 3 * n + 8
