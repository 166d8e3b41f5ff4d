"""The reduced lex Groebner basis of a feasible XOR system, kept in XOR form.

For a pivot row ``x_p xor f_p = 0`` the basis element is ``x_p - M(f_p)`` where
``M(f)`` is the multilinear polynomial taking the same 0/1 values as the affine
Boolean function ``f``.  ``M(f)`` has ``2^|supp f| - 1`` terms, so the basis is
stored as XOR data and only expanded on request.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .errors import ExpansionTooLarge, InfeasibleSystem
from .gf2 import Infeasible, RrefSystem, bits_of
from .polycore import Monomial, Polynomial

__all__ = [
    "BooleanTerm",
    "StructuredBasisG1",
    "BooleanCombo",
    "build_g1",
    "expand_M",
    "g1_polynomials",
    "reduce_monomial",
    "EXPANSION_CAP",
]

EXPANSION_CAP = 20


@dataclass(frozen=True)
class BooleanTerm:
    """The affine Boolean function ``(xor of x_j for j in vars) xor parity``."""

    vars: frozenset = frozenset()
    parity: int = 0

    def __post_init__(self):
        object.__setattr__(self, "vars", frozenset(self.vars))
        if self.parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")

    @classmethod
    def var(cls, i: int) -> BooleanTerm:
        return cls(frozenset((i,)), 0)

    def __xor__(self, other: BooleanTerm) -> BooleanTerm:
        return BooleanTerm(self.vars ^ other.vars, self.parity ^ other.parity)

    def complement(self) -> BooleanTerm:
        return BooleanTerm(self.vars, self.parity ^ 1)

    @property
    def is_constant(self) -> bool:
        return not self.vars

    def value(self, point) -> int:
        """Boolean value at ``point`` (``point[i - 1]`` is x_i)."""
        v = self.parity
        for j in self.vars:
            v ^= point[j - 1]
        return v

    def sort_key(self):
        return (len(self.vars), sorted(self.vars), self.parity)

    def __str__(self) -> str:
        parts = [f"x{j}" for j in sorted(self.vars)]
        if self.parity or not parts:
            parts.append(str(self.parity))
        return "(" + " ^ ".join(parts) + ")"


ZERO_TERM = BooleanTerm(frozenset(), 0)
ONE_TERM = BooleanTerm(frozenset(), 1)


@dataclass(frozen=True)
class StructuredBasisG1:
    """Lex basis as XOR data: ``pivot_rows[p]`` is ``f_p``; free variables carry x^2 - x."""

    n: int
    pivot_rows: Mapping[int, BooleanTerm]
    free_vars: tuple[int, ...]

    def f(self, i: int) -> BooleanTerm:
        """The Boolean function that x_i reduces to modulo G1."""
        t = self.pivot_rows.get(i)
        return t if t is not None else BooleanTerm.var(i)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(sorted(self.pivot_rows))

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.pivot_rows.items(), key=lambda kv: kv[0])), self.free_vars))


@dataclass
class BooleanCombo:
    """``scalar + sum(coef * term)`` with nonconstant terms only."""

    scalar: Fraction = Fraction(0)
    terms: dict = field(default_factory=dict)

    def add(self, term: BooleanTerm, coef) -> None:
        if term.is_constant:
            self.scalar += coef * term.parity
            return
        v = self.terms.get(term, 0) + coef
        if v:
            self.terms[term] = v
        else:
            self.terms.pop(term, None)

    def evaluate(self, point) -> Fraction:
        return self.scalar + sum(c * t.value(point) for t, c in self.terms.items())

    def expand(self, cap: int = EXPANSION_CAP) -> Polynomial:
        out = Polynomial.constant(self.scalar)
        for t, c in self.terms.items():
            out = out + expand_M(t, cap) * c
        return out


def build_g1(S: RrefSystem | Infeasible) -> StructuredBasisG1:
    if isinstance(S, Infeasible):
        raise InfeasibleSystem("no 0/1 solution; the reduced basis is {1}")
    rows = {}
    for i, p in enumerate(S.pivots):
        rows[p] = BooleanTerm(frozenset(S.support(i)), S.rows[i][1])
    return StructuredBasisG1(S.n, rows, tuple(S.free_vars))


def _elementary_symmetric(variables: list[int], k: int) -> Iterable[Monomial]:
    for subset in combinations(variables, k):
        yield Monomial.from_vars(subset)


def expand_M(t: BooleanTerm, cap: int = EXPANSION_CAP) -> Polynomial:
    """Multilinear polynomial agreeing with ``t`` on every 0/1 point.

    Parity 0: sum_k (-1)^(k-1) 2^(k-1) e_k.  Parity 1: 1 + sum_k (-1)^k 2^(k-1) e_k,
    with e_k the k-th elementary symmetric polynomial in ``t.vars``.
    """
    variables = sorted(t.vars)
    if len(variables) > cap:
        raise ExpansionTooLarge(
            f"expanding a {len(variables)}-variable XOR needs {2 ** len(variables) - 1} terms"
        )
    terms: dict[Monomial, Fraction] = {}
    if t.parity:
        terms[Monomial()] = Fraction(1)
    flip = -1 if t.parity else 1
    for k in range(1, len(variables) + 1):
        coef = Fraction(flip * (-1) ** (k - 1) * 2 ** (k - 1))
        for m in _elementary_symmetric(variables, k):
            terms[m] = coef
    return Polynomial(terms)


def g1_polynomials(B: StructuredBasisG1, cap: int = EXPANSION_CAP) -> list[Polynomial]:
    """Explicit basis: pivot elements by ascending index, then domain polynomials."""
    out = []
    for p in B.pivots:
        out.append(Polynomial.variable(p) - expand_M(B.pivot_rows[p], cap))
    for j in B.free_vars:
        xj = Polynomial.variable(j)
        out.append(xj * xj - xj)
    return out


def product_terms(factors: list[BooleanTerm]) -> list[tuple[int, BooleanTerm]]:
    """Signed subset-XOR terms of a product of Boolean functions.

    ``prod(factors) = 2^-(m-1) * sum(sign * term)`` over the returned pairs;
    one pair per nonempty subset of factor positions.
    """
    out = []
    m = len(factors)
    for size in range(1, m + 1):
        sign = 1 if size % 2 else -1
        for subset in combinations(factors, size):
            acc = ZERO_TERM
            for f in subset:
                acc = acc ^ f
            out.append((sign, acc))
    return out


def reduce_monomial(q: Monomial, B: StructuredBasisG1) -> BooleanCombo:
    """``q`` modulo G1 as a linear combination of Boolean terms.

    Each x_i factor (with multiplicity) is replaced by f_i and the product is
    expanded into subset XORs; constant XORs fold into the scalar.
    """
    factors = [B.f(i) for i in q.variables()]
    combo = BooleanCombo()
    if not factors:
        combo.scalar = Fraction(1)
        return combo
    scale = Fraction(1, 2 ** (len(factors) - 1))
    for sign, term in product_terms(factors):
        combo.add(term, sign * scale)
    return combo


def longest_term(q: Monomial, B: StructuredBasisG1) -> BooleanTerm:
    acc = ZERO_TERM
    for i in q.variables():
        acc = acc ^ B.f(i)
    return acc
