import json
import subprocess
import sys

import pytest

from tribauto import automata as am
from tribauto import corpus
from tribauto.cli import main


@pytest.fixture
def autlib(tmp_path, base_env):
    lib = tmp_path / "lib"
    lib.mkdir()
    for name, aut in base_env.items():
        am.save(aut, lib / f"{name}.txt")
    return lib


def test_seq_table(capsys):
    assert main(["seq", "X", "Y", "TR", "--range", "0..15"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n\tX\tY\tTR"
    assert lines[6] == "5\t7\t13\t1"
    assert lines[-1] == "15\t23\t42\t0"
    assert "".join(l.split("\t")[3] for l in lines[1:8]) == "0102010"


def test_seq_default_columns(tmp_path):
    out = tmp_path / "seq.tsv"
    fig = tmp_path / "seq.png"
    assert main(["seq", "--range", "1..40", "--out", str(out), "--figure", str(fig)]) == 0
    rows = [l.split("\t") for l in out.read_text().splitlines()]
    assert rows[0] == ["n", "X", "Y", "TR", "D", "E", "F", "a", "b", "c", "beta", "gamma"]
    assert len(rows) == 41 and all(len(r) == 12 for r in rows)
    assert all(int(r[10]) + int(r[11]) == 1 for r in rows[1:])
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_seq_bad_input(capsys):
    assert main(["seq", "Q"]) == 2
    with pytest.raises(SystemExit):
        main(["seq", "--range", "5..2"])


def test_run_script(tmp_path, autlib, capsys):
    out = tmp_path / "res.json"
    script = corpus.runner.script_text("rust.txt")
    path = tmp_path / "rust.txt"
    path.write_text(script)
    assert main(["run", str(path), "--autlib", str(autlib), "--json", str(out)]) == 0
    text = capsys.readouterr().out
    assert "testrust1: FALSE (counterexample n=20)" in text
    assert "testrust3: TRUE" in text
    data = json.loads(out.read_text())
    assert [d["name"] for d in data] == ["rust", "testrust1", "testrust2", "testrust3"]


def test_run_save(tmp_path, autlib):
    path = tmp_path / "s.txt"
    path.write_text('def seven "?msd_trib x=7":\n')
    assert main(["run", str(path), "--autlib", str(autlib), "--save"]) == 0
    assert am.load(autlib / "seven.txt").accepts(am.encode([7]))


def test_run_exit_codes(tmp_path, capsys):
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing\n")
    assert main(["run", str(empty)]) == 0
    bad = tmp_path / "bad.txt"
    bad.write_text('eval e "?msd_trib x=":')
    assert main(["run", str(bad)]) == 2
    unknown = tmp_path / "unknown.txt"
    unknown.write_text('eval e "?msd_trib Ex $nosuch(x)":')
    assert main(["run", str(unknown)]) == 2
    assert main(["run", str(tmp_path / "missing.txt")]) == 2
    assert "error" in capsys.readouterr().err


def test_guess(tmp_path, capsys):
    report = tmp_path / "g.jsonl"
    fig = tmp_path / "g.png"
    assert main(["guess", "X", "--autlib", str(tmp_path), "--report", str(report),
                 "--figure", str(fig)]) == 0
    out = capsys.readouterr().out
    assert "X: 27 states (28 with the dead state), stabilized at depth 3" in out
    saved = (tmp_path / "xaut.txt").read_text()
    assert saved.splitlines()[1].startswith("# guessed X")
    assert am.load(tmp_path / "xaut.txt").accepts(am.encode([5, 7]))
    assert json.loads(report.read_text())["states_without_sink"] == 27
    assert fig.exists()


def test_guess_other_sequence(tmp_path, capsys):
    assert main(["guess", "a", "--autlib", str(tmp_path)]) == 0
    assert (tmp_path / "aaut.txt").exists()
    assert "agrees with the sequence" in capsys.readouterr().out


def test_guess_depth_error(capsys):
    assert main(["guess", "X", "--sample-bound", "100"]) == 1
    assert "raise the sample bound" in capsys.readouterr().err


def test_export(tmp_path, autlib, capsys):
    assert main(["export", "xaut", "--autlib", str(autlib)]) == 0
    assert am.equivalent(am.loads(capsys.readouterr().out), am.load(autlib / "xaut.txt"))
    out = tmp_path / "beta.dot"
    assert main(["export", "BETA", "--format", "dot", "--out", str(out), "--autlib", str(autlib)]) == 0
    dot = out.read_text()
    assert dot.startswith("digraph") and "/1" in dot
    assert main(["export", "nosuch"]) == 2


def test_verify(tmp_path, capsys):
    rep = tmp_path / "report"
    lib = tmp_path / "lib"
    assert main(["verify", "--autlib", str(lib), "--report", str(rep)]) == 0
    out = capsys.readouterr().out
    assert out.rstrip().endswith("verification PASSED")
    assert "guessed X: 27 states" in out and "guessed Y: 30 states" in out
    for f in ("verification.txt", "verification.json", "verification.png", "guess.jsonl",
              "guess_X.png", "guess_Y.png", "BETA.txt", "BETA.dot", "GAMMA.txt", "GAMMA.dot"):
        assert (rep / f).exists(), f
    assert (lib / "xaut.txt").exists() and (lib / "yaut.txt").exists()


def test_verify_with_corrupted_xaut(tmp_path, base_env, capsys):
    from test_corpus import corrupt_xaut

    lib = tmp_path / "lib"
    lib.mkdir()
    am.save(corrupt_xaut(base_env["xaut"]), lib / "xaut.txt")
    am.save(base_env["yaut"], lib / "yaut.txt")
    assert main(["verify", "--autlib", str(lib)]) == 1
    captured = capsys.readouterr()
    assert "FAIL  induction  check1" in captured.out
    assert "first failure" in captured.err


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "tribauto.cli", "seq", "TR", "--range", "0..6"],
                       capture_output=True, text=True, check=True)
    assert r.stdout.splitlines()[1:] == [f"{n}\t{t}" for n, t in enumerate([0, 1, 0, 2, 0, 1, 0])]
