"""Sparse multivariate polynomials over the rationals.

Monomials are sorted tuples of ``(variable, exponent)`` pairs with 1-based
variable indices; variable precedence is x1 > x2 > ... > xn.  Coefficients are
:class:`fractions.Fraction`, so every reduction below is exact.

Besides the arithmetic this module carries the classical Groebner machinery
(multivariate division, S-polynomials, Buchberger, basis reduction).  The
Buchberger implementation is deliberately plain and is only meant as a
ground-truth oracle for small instances.
"""

from __future__ import annotations

import enum
import heapq
import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, ResourceLimit, ZeroDivisorInBasis, ZeroPolynomial

__all__ = [
    "Monomial",
    "Order",
    "LEX",
    "GRLEX",
    "Polynomial",
    "compare",
    "sort_key",
    "leading_term",
    "divide",
    "remainder",
    "s_polynomial",
    "buchberger",
    "satisfies_buchberger_criterion",
    "reduce_basis",
    "parse_polynomial",
    "format_coefficient",
    "MAX_TERMS",
    "MAX_BASIS",
]

MAX_TERMS = 10**6
MAX_BASIS = 10**4


class Monomial(tuple):
    """A power product stored as sorted ``(var, exp)`` pairs; ``()`` is 1."""

    __slots__ = ()

    def __new__(cls, exponents: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(exponents, Monomial):
            return exponents
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        merged: dict[int, int] = {}
        for v, e in items:
            if v < 1 or e < 0:
                raise ValueError(f"bad factor x{v}^{e}")
            if e:
                merged[v] = merged.get(v, 0) + e
        return tuple.__new__(cls, sorted(merged.items()))

    @classmethod
    def _raw(cls, pairs) -> Monomial:
        return tuple.__new__(cls, pairs)

    @classmethod
    def var(cls, i: int, e: int = 1) -> Monomial:
        return cls(((i, e),))

    @classmethod
    def from_vars(cls, indices: Iterable[int]) -> Monomial:
        """Product of the listed variables, repeats allowed."""
        return cls((i, 1) for i in indices)

    @property
    def exponents(self) -> dict[int, int]:
        return dict(self)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self)

    def variables(self) -> list[int]:
        """Factor list with repetition, e.g. x1*x3^2 -> [1, 3, 3]."""
        return [v for v, e in self for _ in range(e)]

    def __mul__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        if not other:
            return self
        if not self:
            return other
        merged = dict(self)
        for v, e in other:
            merged[v] = merged.get(v, 0) + e
        return Monomial._raw(tuple(sorted(merged.items())))

    def divides(self, other: Monomial) -> bool:
        exps = dict(other)
        return all(exps.get(v, 0) >= e for v, e in self)

    def quotient(self, divisor: Monomial) -> Monomial | None:
        """``self / divisor`` or None when the division is not exact."""
        if not divisor:
            return self
        exps = dict(self)
        for v, e in divisor:
            left = exps.get(v, 0) - e
            if left < 0:
                return None
            if left:
                exps[v] = left
            else:
                del exps[v]
        return Monomial._raw(tuple(exps.items()))

    def lcm(self, other: Monomial) -> Monomial:
        exps = dict(self)
        for v, e in other:
            if e > exps.get(v, 0):
                exps[v] = e
        return Monomial._raw(tuple(sorted(exps.items())))

    def is_coprime(self, other: Monomial) -> bool:
        vs = {v for v, _ in self}
        return not any(v in vs for v, _ in other)

    def evaluate(self, point) -> object:
        value = 1
        for v, e in self:
            value *= point[v - 1] ** e
        return value

    def __str__(self) -> str:
        if not self:
            return "1"
        return "*".join(f"x{v}" if e == 1 else f"x{v}^{e}" for v, e in self)

    def __repr__(self) -> str:
        return f"Monomial({str(self)!r})"


ONE = Monomial()


class Order(enum.Enum):
    LEX = "lex"
    GRLEX = "grlex"


LEX = Order.LEX
GRLEX = Order.GRLEX


@lru_cache(maxsize=1 << 20)
def _lex_key(m: Monomial) -> tuple:
    # The leftmost differing variable decides; a smaller index there wins.
    return tuple((-v, e) for v, e in m)


@lru_cache(maxsize=1 << 20)
def _grlex_key(m: Monomial) -> tuple:
    return (m.degree, _lex_key(m))


def _key_func(order: Order):
    return _lex_key if order is Order.LEX else _grlex_key


def sort_key(m: Monomial, order: Order) -> tuple:
    """Key such that ``sort_key(a) < sort_key(b)`` iff ``a < b`` under ``order``."""
    return _key_func(order)(m)


def compare(a: Monomial, b: Monomial, order: Order) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    ka, kb = sort_key(a, order), sort_key(b, order)
    return (ka > kb) - (ka < kb)


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


def format_coefficient(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Polynomial:
    """Immutable sparse polynomial, a map from :class:`Monomial` to a nonzero Fraction."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                m = Monomial(m)
                c = clean.get(m, 0) + _coerce(c)
                if c:
                    clean[m] = c
                else:
                    clean.pop(m, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: dict) -> Polynomial:
        # terms must already be clean: Monomial keys, nonzero Fraction values
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> Polynomial:
        c = _coerce(c)
        return cls._wrap({ONE: c} if c else {})

    @classmethod
    def variable(cls, i: int) -> Polynomial:
        return cls._wrap({Monomial.var(i): Fraction(1)})

    @classmethod
    def from_monomial(cls, m: Monomial, c=1) -> Polynomial:
        c = _coerce(c)
        return cls._wrap({Monomial(m): c} if c else {})

    @classmethod
    def parse(cls, text: str) -> Polynomial:
        return parse_polynomial(text)

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE in self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((m.degree for m in self._terms), default=-1)

    def variables(self) -> set[int]:
        return {v for m in self._terms for v, _ in m}

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(Monomial(m), Fraction(0))

    def sorted_terms(self, order: Order = GRLEX, descending: bool = True):
        key = _key_func(order)
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=descending)

    def leading_term(self, order: Order) -> tuple[Monomial, Fraction]:
        return leading_term(self, order)

    def leading_monomial(self, order: Order) -> Monomial:
        return leading_term(self, order)[0]

    def monic(self, order: Order) -> Polynomial:
        _, lc = leading_term(self, order)
        if lc == 1:
            return self
        return Polynomial._wrap({m: c / lc for m, c in self._terms.items()})

    def mul_term(self, m: Monomial, c=1) -> Polynomial:
        c = _coerce(c)
        if not c:
            return Polynomial()
        return Polynomial._wrap({k * m: v * c for k, v in self._terms.items()})

    def evaluate(self, point) -> Fraction:
        """Evaluate at ``point``; ``point[i - 1]`` is the value of x_i."""
        total = Fraction(0)
        for m, c in self._terms.items():
            total += c * m.evaluate(point)
        return total

    # arithmetic

    def _lift(self, other) -> Polynomial | None:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Rational)):
            return Polynomial.constant(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            c = _coerce(other)
            if not c:
                return Polynomial()
            return Polynomial._wrap({m: v * c for m, v in self._terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._wrap(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, Rational)):
            return NotImplemented
        return self * (1 / _coerce(other))

    def __pow__(self, k: int):
        out = Polynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def to_str(self, order: Order = GRLEX) -> str:
        if not self._terms:
            return "0"
        out = []
        for m, c in self.sorted_terms(order):
            a = abs(c)
            if not m:
                body = format_coefficient(a)
            elif a == 1:
                body = str(m)
            else:
                body = f"{format_coefficient(a)}*{m}"
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(f"{'-' if c < 0 else '+'} {body}")
        return " ".join(out)

    def __str__(self) -> str:
        return self.to_str(GRLEX)

    def __repr__(self) -> str:
        return f"Polynomial({self.to_str()!r})"


# ---------------------------------------------------------------------------
# parsing

_CHUNK = re.compile(r"([+-]?)([^+-]+)")
_INT = re.compile(r"\d+")
_RATIO = re.compile(r"(\d+)/(\d+)")
_FACTOR = re.compile(r"x(\d+)(?:\^(\d+))?")


def parse_polynomial(text: str) -> Polynomial:
    """Parse e.g. ``"x1*x5 - 1/2*x2^2 + 3"``.  Whitespace is ignored."""
    s = "".join(text.split())
    if not s:
        raise ParseError("empty polynomial")
    pos = 0
    terms: dict[Monomial, Fraction] = {}
    for match in _CHUNK.finditer(s):
        if match.start() != pos:
            break
        pos = match.end()
        sign, body = match.groups()
        if not sign and match.start() > 0:
            raise ParseError(f"missing operator before {body!r}")
        coef = Fraction(1)
        factors = body.split("*")
        head = factors[0]
        if _RATIO.fullmatch(head):
            num, den = _RATIO.fullmatch(head).groups()
            if int(den) == 0:
                raise ParseError("zero denominator")
            coef = Fraction(int(num), int(den))
            factors = factors[1:]
        elif _INT.fullmatch(head):
            coef = Fraction(int(head))
            factors = factors[1:]
        exps: list[tuple[int, int]] = []
        for fac in factors:
            fm = _FACTOR.fullmatch(fac)
            if fm is None or int(fm.group(1)) < 1:
                raise ParseError(f"bad factor {fac!r} in {text!r}")
            exps.append((int(fm.group(1)), int(fm.group(2) or 1)))
        m = Monomial(exps)
        if sign == "-":
            coef = -coef
        v = terms.get(m, 0) + coef
        if v:
            terms[m] = v
        else:
            terms.pop(m, None)
    if pos != len(s):
        raise ParseError(f"cannot parse {text!r} near position {pos}")
    return Polynomial._wrap(terms)


# ---------------------------------------------------------------------------
# Groebner machinery


def leading_term(f: Polynomial, order: Order) -> tuple[Monomial, Fraction]:
    if not f:
        raise ZeroPolynomial("leading term of the zero polynomial")
    m = max(f._terms, key=_key_func(order))
    return m, f._terms[m]


class _Desc:
    """Heap entry ordering monomials in descending order."""

    __slots__ = ("key", "mono")

    def __init__(self, key, mono):
        self.key = key
        self.mono = mono

    def __lt__(self, other):
        return self.key > other.key


def divide(
    f: Polynomial, G: Sequence[Polynomial], order: Order
) -> tuple[list[Polynomial], Polynomial]:
    """Multivariate division of ``f`` by the ordered sequence ``G``.

    At each step the leading term of the running dividend is divided by the
    first ``g`` (in listing order) whose leading term divides it; if none does
    the term moves to the remainder.  Returns ``(quotients, remainder)`` with
    ``f == sum(a * g) + remainder``.
    """
    G = list(G)
    if any(not g for g in G):
        raise ZeroDivisorInBasis("division by a basis containing 0")
    key = _key_func(order)
    leads = [leading_term(g, order) for g in G]
    tails = [[(m, c) for m, c in g._terms.items() if m != lm] for g, (lm, _) in zip(G, leads)]
    p = dict(f._terms)
    heap = [_Desc(key(m), m) for m in p]
    heapq.heapify(heap)
    rem: dict[Monomial, Fraction] = {}
    quots: list[dict[Monomial, Fraction]] = [{} for _ in G]
    while heap:
        lm = heapq.heappop(heap).mono
        c = p.pop(lm, None)
        if c is None:
            continue  # stale entry, the term was cancelled
        for i, (glm, glc) in enumerate(leads):
            t = lm.quotient(glm)
            if t is None:
                continue
            coef = c / glc
            quots[i][t] = quots[i].get(t, 0) + coef
            for m, a in tails[i]:
                mm = m * t
                old = p.get(mm)
                if old is None:
                    p[mm] = -coef * a
                    heapq.heappush(heap, _Desc(key(mm), mm))
                else:
                    v = old - coef * a
                    if v:
                        p[mm] = v
                    else:
                        del p[mm]
            break
        else:
            rem[lm] = c
    quotients = [Polynomial._wrap({m: c for m, c in q.items() if c}) for q in quots]
    return quotients, Polynomial._wrap(rem)


def remainder(f: Polynomial, G: Sequence[Polynomial], order: Order) -> Polynomial:
    return divide(f, G, order)[1]


def s_polynomial(f: Polynomial, g: Polynomial, order: Order) -> Polynomial:
    lf, cf = leading_term(f, order)
    lg, cg = leading_term(g, order)
    lcm = lf.lcm(lg)
    return f.mul_term(lcm.quotient(lf), 1 / cf) - g.mul_term(lcm.quotient(lg), 1 / cg)


def buchberger(
    F: Iterable[Polynomial],
    order: Order,
    *,
    max_terms: int = MAX_TERMS,
    max_basis: int = MAX_BASIS,
) -> list[Polynomial]:
    """Groebner basis of the ideal generated by ``F``.

    Deterministic variant: pairs are taken by the normal strategy (smallest
    lcm first, ties by index) and each S-polynomial is fully divided by the
    current basis in listing order.  Useless pairs are pruned with the
    Gebauer-Moeller criteria.  Raises :class:`ResourceLimit` past the size caps.
    """
    G = [f.monic(order) for f in F if f]
    if not G:
        raise ZeroPolynomial("buchberger needs a nonzero generator")
    if any(g.is_constant() for g in G):
        return [Polynomial.constant(1)]
    key = _key_func(order)
    lms: list[Monomial] = []
    basis: list[Polynomial] = []
    active: list[int] = []
    pairs: set[tuple[int, int]] = set()
    heap: list = []

    def update(k: int) -> None:
        nonlocal active
        lk = lms[k]
        cands = [(i, lk.lcm(lms[i])) for i in active]
        kept = []
        for pos, (i, m) in enumerate(cands):
            if lk.is_coprime(lms[i]):
                kept.append((i, m, True))
                continue
            later = (m2 for _, m2 in cands[pos + 1:])
            earlier = (m2 for _, m2, _ in kept)
            if not any(m2.divides(m) for m2 in later) and not any(m2.divides(m) for m2 in earlier):
                kept.append((i, m, False))
        for i, j in list(pairs):
            m = lms[i].lcm(lms[j])
            if lk.divides(m) and lms[i].lcm(lk) != m and lk.lcm(lms[j]) != m:
                pairs.discard((i, j))
        for i, m, coprime in kept:
            if not coprime:
                pairs.add((i, k))
                heapq.heappush(heap, (key(m), i, k))
        active = [i for i in active if not lk.divides(lms[i])] + [k]

    def add(h: Polynomial) -> None:
        basis.append(h)
        lms.append(h.leading_monomial(order))
        if len(basis) > max_basis:
            raise ResourceLimit(f"basis grew past {max_basis} elements")
        update(len(basis) - 1)

    for g in G:
        add(g)
    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pairs:
            continue
        pairs.discard((i, j))
        h = remainder(s_polynomial(basis[i], basis[j], order), [basis[a] for a in active], order)
        if not h:
            continue
        if len(h) > max_terms:
            raise ResourceLimit(f"intermediate polynomial has {len(h)} terms")
        h = h.monic(order)
        if h.is_constant():
            return [Polynomial.constant(1)]
        add(h)
    return [basis[a] for a in active]


def satisfies_buchberger_criterion(
    G: Sequence[Polynomial], order: Order, *, skip_coprime: bool = False
) -> bool:
    """True iff every S-polynomial of ``G`` reduces to 0 modulo ``G``."""
    G = list(G)
    for f, g in combinations(G, 2):
        if skip_coprime and f.leading_monomial(order).is_coprime(g.leading_monomial(order)):
            continue
        if remainder(s_polynomial(f, g, order), G, order):
            return False
    return True


def reduce_basis(G: Iterable[Polynomial], order: Order) -> list[Polynomial]:
    """The reduced Groebner basis from a Groebner basis ``G``, sorted by ascending LM."""
    key = _key_func(order)
    polys = [g.monic(order) for g in G if g]
    polys.sort(key=lambda g: key(g.leading_monomial(order)))
    minimal: list[Polynomial] = []
    for g in polys:
        lm = g.leading_monomial(order)
        if not any(h.leading_monomial(order).divides(lm) for h in minimal):
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        lm = g.leading_monomial(order)
        tail = g - Polynomial.from_monomial(lm)
        reduced.append(Polynomial.from_monomial(lm) + remainder(tail, others, order))
    return reduced
