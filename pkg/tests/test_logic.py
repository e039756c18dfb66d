import itertools
import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tribauto import arith, corpus
from tribauto import automata as am
from tribauto import numeration as nm
from tribauto.logic import (CompileError, ParseError, Session, ast, combine, compile_formula,
                            compile_regex, eval_closed, parse, parse_formula)


# ---- parsing

def test_parse_good_definition():
    good = [s for s in parse(corpus.case("induction").text()) if isinstance(s, ast.Def)][0]
    assert good.name == "good"
    assert ast.free_vars(good.formula) == {"n", "x", "y"}
    assert ast.calls(good.formula) == {"xaut", "yaut"}


def test_parse_statement_kinds():
    (ev,) = parse('eval t "?msd_trib 0=0";')
    assert isinstance(ev, ast.Eval) and not ast.free_vars(ev.formula)
    (reg,) = parse('reg shift {0,1} {0,1} "([0,0]|[0,1][1,1]*[1,0])*":')
    assert isinstance(reg, ast.Reg) and reg.arity == 2
    (comb,) = parse("combine T a b c:")
    assert isinstance(comb, ast.Combine) and comb.predicates == ("a", "b", "c")


def test_parse_comments_and_lines():
    sts = parse('# heading\n\neval a "?msd_trib 0=0";\n# note\neval b "?msd_trib 1=1";\n')
    assert [s.line for s in sts] == [3, 5]


def test_precedence():
    f = parse_formula("?msd_trib x=0 | y=0 & z=0 => x=y")
    assert isinstance(f, ast.BinOp) and f.op == "=>"
    assert f.left.op == "|" and f.left.right.op == "&"


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as e:
        parse('eval ok "?msd_trib 0=0";\ndef f "?msd_trib x=";')
    assert (e.value.line, e.value.col) == (2, 20)
    assert "line 2, column 20" in str(e.value)


@pytest.mark.parametrize("text", [
    "foo bar;",
    'eval t "?msd_trib (x=0";',
    'eval t "?msd_trib x==0";',
    'def "?msd_trib x=0";',
    'eval t "x=0";',
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


# ---- compilation

def test_compile_eq():
    r = compile_formula("?msd_trib x=y", {})
    assert r.vars == ("x", "y")
    assert am.equivalent(r.aut, am.minimize(am.product(arith.eq_automaton(),
                                                       am.product_tracks(arith.valid_automaton(), [0],
                                                                         arith.valid_automaton(), [1], 2))))


def test_compile_with_guessed_automaton(base_env):
    r = compile_formula("?msd_trib Ez $xaut(n,z) & x>=z", base_env)
    assert r.vars == ("n", "x")
    assert r.accepts(n=2, x=4) and r.accepts(n=2, x=3) and not r.accepts(n=2, x=2)


def test_compile_errors():
    with pytest.raises(CompileError):
        compile_formula("?msd_trib $nosuch(x)", {})
    with pytest.raises(CompileError):
        compile_formula("?msd_trib $add(x,y)", {"add": arith.add_automaton()})
    with pytest.raises(CompileError):
        eval_closed("?msd_trib x=0", {})


def test_eval_examples():
    assert eval_closed("?msd_trib An n=n", {}) == (True, None)
    assert eval_closed("?msd_trib Ex x+x=8", {}) == (True, None)
    assert eval_closed("?msd_trib Ex x+x=7", {})[0] is False
    assert eval_closed("?msd_trib Ex,y x+y=3 & x=y", {})[0] is False


def test_failed_universal_gives_least_witness():
    value, witness = eval_closed("?msd_trib An n<20", {})
    assert value is False and witness == {"n": 20}
    value, witness = eval_closed("?msd_trib An,m (n<3 & m<n) => m=0", {})
    assert value is False and witness == {"n": 2, "m": 1}


def test_subtraction_is_natural():
    r = compile_formula("?msd_trib x-y=z", {})
    assert r.accepts(x=7, y=3, z=4)
    assert not r.accepts(x=3, y=7, z=0)
    assert eval_closed("?msd_trib Ax,y (x-y=0) => x=y", {})[0]
    assert eval_closed("?msd_trib Ax,y (Ez x-y=z) <=> y<=x", {})[0]


def test_multiplication_by_constant():
    r = compile_formula("?msd_trib y=3*x+1", {})
    assert r.accepts(x=5, y=16) and not r.accepts(x=5, y=15)


# quantifier-free formulas checked against Python arithmetic on a grid

ATOMS = [
    ("x<y", lambda x, y, z: x < y),
    ("x+y=z", lambda x, y, z: x + y == z),
    ("z=2*x", lambda x, y, z: z == 2 * x),
    ("y=x+1", lambda x, y, z: y == x + 1),
    ("x-y=z", lambda x, y, z: x >= y and x - y == z),
    ("z>=5", lambda x, y, z: z >= 5),
    ("x!=z", lambda x, y, z: x != z),
]


@st.composite
def formulas(draw, depth=2):
    if depth == 0 or draw(st.booleans()):
        return draw(st.sampled_from(ATOMS))
    op = draw(st.sampled_from(["&", "|", "=>", "<=>", "~"]))
    a = draw(formulas(depth=depth - 1))
    if op == "~":
        return f"~({a[0]})", lambda *v, f=a[1]: not f(*v)
    b = draw(formulas(depth=depth - 1))
    fn = {"&": lambda p, q: p and q, "|": lambda p, q: p or q,
          "=>": lambda p, q: (not p) or q, "<=>": lambda p, q: p == q}[op]
    return f"({a[0]}) {op} ({b[0]})", lambda *v, f=a[1], g=b[1]: fn(f(*v), g(*v))


@settings(max_examples=40, deadline=None)
@given(formulas())
def test_quantifier_free_semantics(f):
    text, fn = f
    r = compile_formula("?msd_trib " + text, {})
    B = 12
    for vals in itertools.product(range(B), repeat=3):
        env = dict(zip("xyz", vals))
        want = fn(*vals)
        got = r.aut.accepts(am.encode([env[v] for v in r.vars])) if r.vars else bool(r.aut.accepting[r.aut.initial])
        assert got == want, (text, env)


@settings(max_examples=25, deadline=None)
@given(formulas(), st.sampled_from(["x", "y", "z"]))
def test_quantifier_duality(f, v):
    text = f[0]
    e = compile_formula(f"?msd_trib E{v} {text}", {})
    a = compile_formula(f"?msd_trib ~A{v} ~({text})", {})
    assert e.vars == a.vars and am.equivalent(e.aut, a.aut)


# ---- regular expressions

def test_regex_zero_pairs():
    a = compile_regex("[0,0]*", 2)
    assert a.accepts([0, 0, 0]) and a.accepts([])
    assert not a.accepts([0, 1])


def test_regex_single_symbol_with_padding():
    a = compile_regex("[1,1]", 2)
    assert a.accepts([3])
    assert a.accepts([0, 3])  # leading zero padding is always allowed
    assert not a.accepts([3, 3]) and not a.accepts([])


def test_regex_errors():
    for bad in ["[0,2]", "(0", "0)", "[0,0", "*"]:
        with pytest.raises(ParseError):
            compile_regex(bad, 2 if "," in bad else 1)


def test_shift_pattern_gives_triba(fresh_session, oracle):
    fresh_session.run(corpus.case("thm8").text())
    triba = fresh_session.lookup("triba")
    a = oracle.sequence("a", 60)
    got = {(n, s) for n in range(60) for s in range(200) if triba.accepts(am.encode([n, s]))}
    assert got == {(n, int(v)) for n, v in enumerate(a)}
    assert a[1] == 1


def _nonempty(s):
    # starring a body that matches "" makes the backtracking reference blow up
    return re.fullmatch(s, "") is None


REGEX_PIECES = st.recursive(
    st.sampled_from(["0", "1"]),
    lambda inner: st.one_of(
        st.tuples(inner, inner).map(lambda t: t[0] + t[1]),
        st.tuples(inner, inner).map(lambda t: f"({t[0]}|{t[1]})"),
        inner.filter(_nonempty).map(lambda s: f"({s})*"),
        inner.filter(_nonempty).map(lambda s: f"({s})?"),
        inner.filter(_nonempty).map(lambda s: f"({s})+"),
    ),
    max_leaves=6,
)


@settings(max_examples=60, deadline=None)
@given(REGEX_PIECES)
def test_regex_matches_python_re(pattern):
    a = compile_regex(pattern, 1)
    rx = re.compile(pattern)
    # words are numbers: leading zeros may be added or dropped
    stripped = {"".join(w).lstrip("0") for L in range(8) for w in itertools.product("01", repeat=L)}
    want = {t: any(rx.fullmatch("0" * j + t) for j in range(8)) for t in stripped}
    for L in range(8):
        for w in itertools.product((0, 1), repeat=L):
            t = "".join(map(str, w)).lstrip("0")
            assert a.accepts(w) == want[t], (pattern, w)


# ---- combine

def test_combine_first_match_wins():
    five = arith.const_automaton(5)
    small = compile_formula("?msd_trib x<7", {}).aut
    d = combine([five, small])
    out = [d.output(am.encode([n])) for n in range(10)]
    assert out == [2, 2, 2, 2, 2, 1, 2, 0, 0, 0]


def test_combine_empty_language_gives_zero_dfao():
    d = combine([am.empty(1)])
    assert d.is_dfao and d.nstates == 1
    assert all(d.output(am.encode([n])) == 0 for n in range(50))


def test_combine_rejects_bad_input():
    with pytest.raises(CompileError):
        combine([])
    with pytest.raises(CompileError):
        combine([arith.eq_automaton()])


# ---- sessions

def test_session_defines_and_reuses():
    s = Session()
    results = s.run('def two "?msd_trib x=2": eval e "?msd_trib Ex $two(x)":')
    assert [r.outcome for r in results] == ["defined", "TRUE"]
    assert s.lookup("two").accepts(am.encode([2]))


def test_session_checks_references_before_running():
    s = Session()
    with pytest.raises(CompileError):
        s.run('def a "?msd_trib x=1": eval e "?msd_trib Ex $missing(x)":')
    assert "a" not in s.env


def test_session_autlib(tmp_path):
    s = Session(autlib=tmp_path, save_results=True)
    s.run('def three "?msd_trib x=3":')
    assert (tmp_path / "three.txt").exists()
    t = Session(autlib=tmp_path)
    assert t.run('eval e "?msd_trib $three(3)":')[0].value is True


def test_session_builtins():
    assert Session().run('eval e "?msd_trib Ax,y,z $add(x,y,z) <=> x+y=z":')[0].value


def test_digit_words_of_compiled_constant():
    r = compile_formula("?msd_trib x=43", {})
    assert r.aut.accepts(am.encode_words([nm.to_rep(43)]))
    assert np.count_nonzero([r.accepts(x=n) for n in range(100)]) == 1
