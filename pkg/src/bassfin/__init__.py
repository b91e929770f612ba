"""Exact computations for finiteness properties of Abelian groups."""

from .arith import INFINITY
from .arring import RingElement, basis_idempotent
from .dsl import parse_group_expr, serialize
from .report import Truth, Verdict, check_implications
from .verdict import evaluate

__all__ = [
    "INFINITY",
    "RingElement",
    "basis_idempotent",
    "parse_group_expr",
    "serialize",
    "Truth",
    "Verdict",
    "check_implications",
    "evaluate",
]
__version__ = "0.1.0"
