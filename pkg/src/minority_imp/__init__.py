"""Polynomial-time IMP_d for Boolean combinatorial ideals closed under minority.

Pipeline: constraints -> GF(2) system in RREF -> structured lex basis G1 ->
d-truncated reduced grlex basis G2 -> division of the query by G2.
"""

from .errors import ImpError
from .gf2 import Instance, Relation, XorConstraint, parse_instance
from .grlexconv import TruncatedBasis, convert
from .imp import ImpVerdict, decide, truncated_basis
from .lexgb import BooleanTerm, build_g1
from .polycore import GRLEX, LEX, Monomial, Polynomial, parse_polynomial

__all__ = [
    "ImpError",
    "Instance",
    "Relation",
    "XorConstraint",
    "parse_instance",
    "TruncatedBasis",
    "convert",
    "ImpVerdict",
    "decide",
    "truncated_basis",
    "BooleanTerm",
    "build_g1",
    "GRLEX",
    "LEX",
    "Monomial",
    "Polynomial",
    "parse_polynomial",
]

__version__ = "0.1.0"
