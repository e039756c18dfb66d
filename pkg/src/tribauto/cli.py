"""Command-line interface.

Subcommands::

    tribauto run SCRIPT          replay a script, one line per statement
    tribauto guess NAME          guess a synchronized automaton from the oracle
    tribauto seq [NAMES]         TSV dump of the oracle sequences
    tribauto export NAME         automaton as text or DOT
    tribauto verify              guess (or load) xaut/yaut and replay the corpus

Exit status: 0 on success, 1 when a result disagrees with its expectation
or a computation fails, 2 on usage, parse or name-resolution errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import automata as am
from . import corpus, guesser, oracles
from .logic import ast
from .logic.compiler import CompileError
from .logic.parser import ParseError, parse
from .logic.session import Session

log = logging.getLogger("tribauto")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

GUESSABLE = ("X", "Y", "a", "b", "c", "D", "E", "F")
SEQ_COLUMNS = ("X", "Y", "TR", "D", "E", "F", "a", "b", "c", "beta", "gamma")


class UsageError(Exception):
    pass


def automaton_name(sequence: str) -> str:
    return corpus.GUESSED.get(sequence, f"{sequence}aut")


def _session(args) -> Session:
    autlib = Path(args.autlib) if args.autlib else None
    return Session(autlib=autlib, save_results=bool(autlib and getattr(args, "save", False)))


def _params(args) -> guesser.GuessParams:
    kw = {"variant": args.variant, "sample_bound": args.sample_bound}
    if args.max_length is None:
        return guesser.GuessParams.fitting(**kw)
    return guesser.GuessParams(max_length=args.max_length, **kw)


def _range(text: str) -> tuple[int, int]:
    try:
        lo, _, hi = text.partition("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 0..15, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or negative range {text!r}")
    return lo, hi


# ---- run

def cmd_run(args) -> int:
    text = Path(args.script).read_text(encoding="utf-8")
    session = _session(args)
    statements = parse(text)
    session.check_references(statements)
    code = EXIT_OK
    results = []
    for st in statements:
        try:
            res = session.execute(st)
        except (CompileError, am.AutomatonError) as e:
            print(f"{st.name}: error: {e}", file=sys.stderr)
            code = EXIT_MISMATCH
            break
        results.append(res)
        print(res.describe())
    if args.json:
        Path(args.json).write_text(json.dumps([r.to_dict() for r in results], indent=2) + "\n",
                                   encoding="utf-8")
    return code


# ---- guess

def guess_sequence(name: str, params: guesser.GuessParams, max_i: int, bound: int):
    values = oracles.default_oracle().sequence(name, params.sample_bound)
    aut, report = guesser.stabilized(values, params, range(1, max_i + 1), name)
    check = guesser.validate(aut, values, bound) if aut is not None else None
    return aut, report, check


def cmd_guess(args) -> int:
    params = _params(args)
    params.check()
    aut, report, check = guess_sequence(args.name, params, args.max_i, args.bound)
    if args.report:
        with open(args.report, "a", encoding="utf-8") as fh:
            fh.write(report.to_jsonl())
    if args.figure:
        from . import plotting

        plotting.guess_figure(report.per_depth, args.figure, f"guess {args.name} ({params.variant})")
    if aut is None:
        print(f"{args.name}: no stabilization for depth <= {args.max_i}", file=sys.stderr)
        return EXIT_MISMATCH
    target = automaton_name(args.name)
    print(f"{args.name}: {report.states_without_sink} states"
          f" ({report.states} with the dead state), stabilized at depth {report.stabilized_at}")
    print(f"{args.name}: {check.describe()}")
    if args.autlib:
        path = Path(args.autlib) / f"{target}.txt"
        path.parent.mkdir(parents=True, exist_ok=True)
        am.save(aut, path, [f"guessed {args.name}: variant {params.variant}, depth {report.stabilized_at},"
                            f" max length {params.max_length}, sample bound {params.sample_bound}"])
        print(f"saved {path}")
    return EXIT_OK if check.ok else EXIT_MISMATCH


# ---- seq

def sequence_table(names, lo: int, hi: int) -> dict[str, np.ndarray]:
    o = oracles.default_oracle()
    return {name: o.sequence(name, hi + 1)[lo:] for name in names}


def cmd_seq(args) -> int:
    names = args.names or list(SEQ_COLUMNS)
    for n in names:
        if n not in SEQ_COLUMNS:
            raise UsageError(f"unknown sequence {n!r}; choose from {', '.join(SEQ_COLUMNS)}")
    lo, hi = args.range
    cols = sequence_table(names, lo, hi)
    index = np.arange(lo, hi + 1)
    lines = ["\t".join(["n", *names])]
    for i, n in enumerate(index):
        lines.append("\t".join([str(n), *(str(int(cols[c][i])) for c in names)]))
    out = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(out)
    if args.figure:
        from . import plotting

        plotting.sequences_figure(index, cols, args.figure)
    return EXIT_OK


# ---- export

def _defining_case(name: str) -> int | None:
    for i, c in enumerate(corpus.load_manifest()):
        for st in parse(c.text()):
            if not isinstance(st, ast.Eval) and st.name == name:
                return i
    return None


def resolve(name: str, session: Session, args) -> am.Automaton:
    """Look ``name`` up, building corpus definitions on demand."""
    try:
        return session.lookup(name)
    except CompileError:
        pass
    if name in ("xaut", "yaut"):
        corpus.ensure_guessed(session, _params(args), args.max_i, args.bound)
        return session.lookup(name)
    upto = _defining_case(name)
    if upto is None:
        raise UsageError(f"unknown automaton {name!r}")
    corpus.ensure_guessed(session, _params(args), args.max_i, args.bound)
    for c in corpus.load_manifest()[:upto + 1]:
        session.run(c.text())
    return session.lookup(name)


def cmd_export(args) -> int:
    session = _session(args)
    aut = resolve(args.name, session, args)
    text = am.to_dot(aut, args.name) if args.format == "dot" else am.dumps(aut)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---- verify

def cmd_verify(args) -> int:
    session = _session(args)
    session.save_results = False
    params = _params(args)
    params.check()
    reports = corpus.ensure_guessed(session, params, args.max_i, args.bound)
    for r in reports:
        print(f"guessed {r.name}: {r.states_without_sink} states ({r.states} with the dead state),"
              f" stabilized at depth {r.stabilized_at}")
    if session.autlib is not None:
        session.autlib.mkdir(parents=True, exist_ok=True)
        for name in corpus.GUESSED.values():
            path = session.autlib / f"{name}.txt"
            if not path.exists():
                am.save(session.lookup(name), path)
    report_dir = Path(args.report) if args.report else None
    summary = corpus.full_verification(session, keep_going=args.keep_going, dfao_bound=args.bound,
                                       export_dir=report_dir)
    sys.stdout.write(summary.text())
    if report_dir is not None:
        summary.write(report_dir)
        if reports:
            with open(report_dir / "guess.jsonl", "w", encoding="utf-8") as fh:
                fh.writelines(r.to_jsonl() for r in reports)
        from . import plotting

        plotting.verification_figure(summary.to_dict(), report_dir / "verification.png")
        for r in reports:
            plotting.guess_figure(r.per_depth, report_dir / f"guess_{r.name}.png", f"guess {r.name}")
    if not summary.passed:
        print(f"first failure: {summary.first_failure()}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


# ---- parser

def _guess_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=guesser.VARIANTS, default="Lprime",
                   help="graph language: Lprime drops words with 111 in a track (default)")
    p.add_argument("--max-i", type=int, default=12, help="largest extension depth tried (default 12)")
    p.add_argument("--bound", type=int, default=100_000,
                   help="validate against the oracle for n below this (default 100000)")
    p.add_argument("--sample-bound", type=int, default=1_000_000,
                   help="oracle terms available to the guesser (default 1000000)")
    p.add_argument("--max-length", type=int, default=None,
                   help="longest word examined; default: the longest fitting the sample bound")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tribauto", description=__doc__.split("\n")[0])
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="replay a script")
    p.add_argument("script")
    p.add_argument("--autlib", help="automaton library directory (NAME.txt files)")
    p.add_argument("--save", action="store_true", help="write defined automata into --autlib")
    p.add_argument("--json", help="also write per-statement results as JSON")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("guess", help="guess a synchronized automaton")
    p.add_argument("name", choices=GUESSABLE)
    p.add_argument("--autlib", help="save the automaton here as xaut.txt / yaut.txt / NAMEaut.txt")
    p.add_argument("--report", help="append a JSON-lines guess report to this file")
    p.add_argument("--figure", help="write a PNG of class counts per depth")
    _guess_options(p)
    p.set_defaults(func=cmd_guess)

    p = sub.add_parser("seq", help="TSV dump of oracle sequences")
    p.add_argument("names", nargs="*", help=f"columns (default: {' '.join(SEQ_COLUMNS)})")
    p.add_argument("--range", type=_range, default=(0, 30), help="inclusive index range, e.g. 0..15")
    p.add_argument("--out", help="write the TSV here instead of stdout")
    p.add_argument("--figure", help="write a PNG plot of the columns")
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("export", help="print or save an automaton")
    p.add_argument("name")
    p.add_argument("--format", choices=("text", "dot"), default="text")
    p.add_argument("--out")
    p.add_argument("--autlib")
    _guess_options(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("verify", help="reproduce every corpus result")
    p.add_argument("--autlib", help="load xaut/yaut from here; guessed ones are saved here")
    p.add_argument("--report", help="directory for text/JSON reports, DFAO exports and figures")
    p.add_argument("--keep-going", action="store_true", help="run every case even after a failure")
    _guess_options(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CompileError as e:
        # unresolved names are reported before anything runs
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (guesser.GuessError, corpus.CorpusError, am.AutomatonError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
