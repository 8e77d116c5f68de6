"""Covering properties of ray spaces of regular trees, with brute-force cross-checks."""

from .covering import PropertyReport, report
from .derivatives import Operator, derive, rank
from .errors import EndscopeError, IllegalNodeError, ParseError, PreconditionError
from .presentation import TreePresentation, UNode, parse_tree, prune

__version__ = "0.1.0"

__all__ = [
    "EndscopeError",
    "IllegalNodeError",
    "Operator",
    "ParseError",
    "PreconditionError",
    "PropertyReport",
    "TreePresentation",
    "UNode",
    "derive",
    "parse_tree",
    "prune",
    "rank",
    "report",
]
