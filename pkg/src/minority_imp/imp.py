"""Degree-bounded ideal membership for minority-closed Boolean instances."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DegreeTooHigh
from .gf2 import Infeasible, Instance, assemble, rref
from .grlexconv import TruncatedBasis, convert
from .lexgb import build_g1
from .polycore import GRLEX, Polynomial, divide, sort_key

__all__ = ["ImpVerdict", "truncated_basis", "decide", "decide_with_basis"]


@dataclass(frozen=True)
class ImpVerdict:
    member: bool
    remainder: Polynomial
    basis_size: int
    infeasible_instance: bool


@lru_cache(maxsize=64)
def truncated_basis(instance: Instance, d: int) -> TruncatedBasis:
    """The d-truncated reduced grlex basis of the instance's combinatorial ideal.

    Cached per ``(instance, d)``; unsatisfiable instances give the unit basis.
    """
    R = rref(assemble(instance))
    if isinstance(R, Infeasible):
        return TruncatedBasis.unit(d)
    return convert(build_g1(R), d)


def decide_with_basis(basis: TruncatedBasis, f: Polynomial) -> ImpVerdict:
    if f.degree > basis.d:
        raise DegreeTooHigh(f"query has degree {f.degree} > {basis.d}")
    if basis.is_unit():
        return ImpVerdict(True, Polynomial(), 1, True)
    G = sorted(basis.elements, key=lambda g: sort_key(g.leading_monomial(GRLEX), GRLEX))
    _, r = divide(f, G, GRLEX)
    return ImpVerdict(not r, r, len(G), False)


def decide(instance: Instance, f: Polynomial, d: int) -> ImpVerdict:
    """Whether ``f`` (of degree <= d) vanishes on every solution of ``instance``."""
    if f.degree > d:
        raise DegreeTooHigh(f"query has degree {f.degree} > {d}")
    return decide_with_basis(truncated_basis(instance, d), f)
