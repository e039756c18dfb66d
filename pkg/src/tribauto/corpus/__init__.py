"""Bundled scripts for the X/Y sequences with their expected outcomes."""

from .runner import (
    GUESSED,
    CorpusCase,
    CorpusError,
    ItemCheck,
    ScriptReport,
    Summary,
    case,
    check_dfao,
    ensure_guessed,
    export,
    full_verification,
    load_manifest,
    run_case,
    script_text,
)

__all__ = [
    "GUESSED", "CorpusCase", "CorpusError", "ItemCheck", "ScriptReport", "Summary", "case",
    "check_dfao", "ensure_guessed", "export", "full_verification", "load_manifest", "run_case",
    "script_text",
]
