"""NCQ rewriting over lightweight ontologies, with property-graph evaluation."""

from ._core import (
    BudgetExceeded,
    Error,
    FragmentViolation,
    GraphError,
    ParseError,
    UnsupportedPath,
    certain_answers,
    chase,
    emit_cypher,
    evaluate,
    normalize,
    rewrite,
    run_cli,
)

__all__ = [
    "BudgetExceeded",
    "Error",
    "FragmentViolation",
    "GraphError",
    "ParseError",
    "UnsupportedPath",
    "certain_answers",
    "chase",
    "emit_cypher",
    "evaluate",
    "normalize",
    "rewrite",
    "run_cli",
]
