"""Colored Petri net engine for layered human-agent interaction models.

The heavy lifting happens in the compiled extension; documents, traces, and
reports cross the boundary as the same JSON text the command line tool uses.
"""

from ._core import (
    EngineError,
    ParseError,
    canonicalize,
    digest,
    explore,
    run,
    scenario,
    validate,
)

__all__ = [
    "EngineError",
    "ParseError",
    "canonicalize",
    "digest",
    "explore",
    "run",
    "scenario",
    "validate",
]
