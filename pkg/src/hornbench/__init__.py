"""Toolchain for curating, running, and scoring constrained Horn clause
benchmark competitions: SMT-LIB frontend, fragment normalizer, track
classifier, inventory with checksum dedup, rating-based selection, a
resource-limited solver harness, and a scoreboard."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    Atom,
    Benchmark,
    Clause,
    PredicateDecl,
    QUERY_FALSE,
    count_nonlinear_clauses,
    predicate_arity_map,
)
from .parser import ParseResult, parse_file, parse_script  # noqa: F401
from .printer import canonical_str, print_canonical  # noqa: F401
