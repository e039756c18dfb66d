"""Walnut-style predicate language: parsing, compilation, evaluation."""

from .ast import Call, Cmp, Combine, Def, Eval, Quant, Reg
from .compiler import CompileError, Compiler, Rel, bind, combine, join
from .parser import ParseError, parse, parse_formula
from .regex import compile_regex
from .session import Session, StatementResult


def compile_formula(source: str, env) -> Rel:
    """Compile ``"?msd_trib ..."`` text against a mapping or lookup."""
    return Compiler(env).compile(parse_formula(source))


def eval_closed(source: str, env) -> tuple[bool, dict[str, int] | None]:
    return Compiler(env).evaluate(parse_formula(source))


__all__ = [
    "Call", "Cmp", "Combine", "Def", "Eval", "Quant", "Reg", "CompileError", "Compiler", "Rel",
    "bind", "combine", "join", "ParseError", "parse", "parse_formula", "compile_regex", "Session",
    "StatementResult", "compile_formula", "eval_closed",
]
