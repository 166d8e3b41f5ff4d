"""Conversion of the structured lex basis into the d-truncated reduced grlex basis.

Candidate monomials of degree 1..d are visited in ascending grlex order.  Each
one is reduced modulo G1 into Boolean terms (see :func:`reduce_monomial`).
All terms except the longest one are already owned by an earlier standard
monomial, so they can be rewritten over the values ``b_j|G1``.  If the longest
term is new, the candidate becomes a standard monomial and its record joins C;
otherwise the candidate equals a combination of standard monomials modulo the
ideal and ``q - sum(k_j * b_j)`` is a new basis element.

Indices into B and C are 0-based here: ``B[0]`` is the monomial 1 and ``C[0]``
owns the constant Boolean term 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterator

from .errors import InternalInvariantViolation, UnownedTerm
from .lexgb import (
    ONE_TERM,
    BooleanTerm,
    StructuredBasisG1,
    longest_term,
    reduce_monomial,
)
from .polycore import GRLEX, Monomial, Polynomial, format_coefficient, sort_key

__all__ = [
    "Branch",
    "ComboRecord",
    "ConversionState",
    "TruncatedBasis",
    "StepResult",
    "candidate_monomials",
    "init_state",
    "step",
    "rewrite_term",
    "convert",
    "run",
    "format_trace",
]


class Branch(enum.Enum):
    ADDED_TO_B = "B"
    ADDED_TO_G2 = "G2"


@dataclass(frozen=True)
class ComboRecord:
    """``b|G1 = sum(linear_part[j] * b_j|G1) + longest_coeff * longest_term``."""

    index: int
    b_monomial: Monomial
    linear_part: tuple[tuple[int, Fraction], ...]
    longest_coeff: Fraction
    longest_term: BooleanTerm


@dataclass
class ConversionState:
    d: int
    Q: list[Monomial]
    B: list[Monomial] = field(default_factory=list)
    C: list[ComboRecord] = field(default_factory=list)
    G2: list[Polynomial] = field(default_factory=list)
    LMG2: set = field(default_factory=set)
    # XOR variable set -> (owning C index, parity of that record's longest term)
    longest_index: dict = field(default_factory=dict)
    position: int = 0
    iteration: int = 0

    def pending(self) -> bool:
        return self._advance() is not None

    def _advance(self) -> Monomial | None:
        # multiples of leading monomials are deleted lazily, on inspection
        while self.position < len(self.Q):
            q = self.Q[self.position]
            if not _has_divisor_in(q, self.LMG2):
                return q
            self.position += 1
        return None


@dataclass(frozen=True)
class StepResult:
    iteration: int
    q: Monomial
    branch: Branch
    record: ComboRecord | None = None
    polynomial: Polynomial | None = None


@dataclass(frozen=True)
class TruncatedBasis:
    d: int
    elements: tuple[Polynomial, ...]
    standard_monomials: tuple[Monomial, ...]

    @classmethod
    def unit(cls, d: int) -> TruncatedBasis:
        """Basis of the whole ring, for systems without solutions."""
        return cls(d, (Polynomial.constant(1),), ())

    @property
    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial(GRLEX) for g in self.elements]

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0] == 1


def _proper_divisors(q: Monomial) -> Iterator[Monomial]:
    factors = q.variables()
    seen = set()
    for mask in range(1, (1 << len(factors)) - 1):
        m = Monomial.from_vars(f for k, f in enumerate(factors) if mask >> k & 1)
        if m not in seen:
            seen.add(m)
            yield m


def _has_divisor_in(q: Monomial, lms: set) -> bool:
    if not lms:
        return False
    if q in lms:
        return True
    return any(m in lms for m in _proper_divisors(q))


def candidate_monomials(n: int, d: int) -> list[Monomial]:
    """All monomials of degree 1..d in x_1..x_n, ascending grlex."""
    out = []
    for deg in range(1, d + 1):
        block = [Monomial.from_vars(c) for c in combinations_with_replacement(range(1, n + 1), deg)]
        block.sort(key=lambda m: sort_key(m, GRLEX))
        out.extend(block)
    return out


def init_state(B1: StructuredBasisG1, d: int) -> ConversionState:
    if d < 1:
        raise ValueError("degree bound must be at least 1")
    state = ConversionState(d=d, Q=candidate_monomials(B1.n, d))
    one = ComboRecord(0, Monomial(), (), Fraction(1), ONE_TERM)
    state.B.append(Monomial())
    state.C.append(one)
    state.longest_index[ONE_TERM.vars] = (0, ONE_TERM.parity)
    return state


def _owner(t: BooleanTerm, state: ConversionState):
    return state.longest_index.get(t.vars)


def rewrite_term(t: BooleanTerm, state: ConversionState) -> dict[int, Fraction]:
    """Express the Boolean term ``t`` as ``sum(coef * b_j|G1)``, keyed by B index.

    The constant part is the coefficient of index 0 (``b_0 = 1``).
    """
    found = _owner(t, state)
    if found is None:
        raise UnownedTerm(f"Boolean term {t} is not owned by any record")
    idx, parity = found
    rec = state.C[idx]
    # rec: b_idx = sum(a_j b_j) + a0 * t'   =>   t' = (b_idx - sum(a_j b_j)) / a0
    inv = 1 / rec.longest_coeff
    out: dict[int, Fraction] = {idx: inv}
    for j, a in rec.linear_part:
        out[j] = out.get(j, 0) - a * inv
    if parity != t.parity:
        # t = t' xor 1 = 1 - t'
        out = {j: -c for j, c in out.items()}
        out[0] = out.get(0, 0) + 1
    return {j: c for j, c in out.items() if c}


def _accumulate(acc: dict[int, Fraction], part: dict[int, Fraction], scale) -> None:
    for j, c in part.items():
        v = acc.get(j, 0) + c * scale
        if v:
            acc[j] = v
        else:
            acc.pop(j, None)


def step(state: ConversionState, B1: StructuredBasisG1) -> StepResult:
    q = state._advance()
    if q is None:
        raise IndexError("no candidate monomials left")
    state.position += 1
    state.iteration += 1

    combo = reduce_monomial(q, B1)
    longest = longest_term(q, B1)
    owned = longest.is_constant or _owner(longest, state) is not None

    acc: dict[int, Fraction] = {}
    if combo.scalar:
        acc[0] = combo.scalar
    a0 = None
    for t, c in combo.terms.items():
        if t == longest and not owned:
            a0 = c
            continue
        try:
            _accumulate(acc, rewrite_term(t, state), c)
        except UnownedTerm as exc:
            raise InternalInvariantViolation(
                f"non-longest term {t} of {q} is unowned; C is inconsistent"
            ) from exc

    if not owned:
        if not a0:
            raise InternalInvariantViolation(f"longest term of {q} cancelled out")
        idx = len(state.B)
        rec = ComboRecord(idx, q, tuple(sorted(acc.items())), a0, longest)
        state.B.append(q)
        state.C.append(rec)
        state.longest_index[longest.vars] = (idx, longest.parity)
        return StepResult(state.iteration, q, Branch.ADDED_TO_B, record=rec)

    terms = {q: Fraction(1)}
    for j, k in acc.items():
        b = state.B[j]
        terms[b] = terms.get(b, 0) - k
    g = Polynomial(terms)
    state.G2.append(g)
    state.LMG2.add(q)
    return StepResult(state.iteration, q, Branch.ADDED_TO_G2, polynomial=g)


def run(B1: StructuredBasisG1, d: int) -> tuple[ConversionState, list[StepResult]]:
    state = init_state(B1, d)
    steps = []
    while state.pending():
        steps.append(step(state, B1))
    return state, steps


def convert(B1: StructuredBasisG1, d: int) -> TruncatedBasis:
    """The d-truncated reduced grlex Groebner basis of the ideal of ``B1``."""
    state, _ = run(B1, d)
    return TruncatedBasis(d, tuple(state.G2), tuple(state.B))


def format_record(rec: ComboRecord, B: list[Monomial]) -> str:
    parts = []
    for j, a in rec.linear_part:
        parts.append((a, f"[{B[j]}]"))
    parts.append((rec.longest_coeff, str(rec.longest_term)))
    out = []
    for a, body in parts:
        mag = abs(a)
        text = body if mag == 1 else f"{format_coefficient(mag)}*{body}"
        if not out:
            out.append(("-" if a < 0 else "") + text)
        else:
            out.append(f"{'-' if a < 0 else '+'} {text}")
    return " ".join(out)


def format_trace(steps: list[StepResult], state: ConversionState) -> str:
    """One tab-separated line per iteration: number, q, branch, entry."""
    lines = []
    for s in steps:
        if s.branch is Branch.ADDED_TO_B:
            entry = format_record(s.record, state.B)
        else:
            entry = s.polynomial.to_str(GRLEX)
        lines.append(f"{s.iteration}\t{s.q}\t{s.branch.value}\t{entry}")
    return "\n".join(lines) + "\n"
