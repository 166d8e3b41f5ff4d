"""Boolean CSP instances with minority-closed constraints, as GF(2) systems.

A minority-closed Boolean relation is exactly the solution set of an affine
system over GF(2).  This module converts relations to such systems, assembles
the global system of an instance and brings it to reduced row echelon form.

Rows are Python ints used as bitsets: bit ``i - 1`` holds the coefficient of
``x_i``.  The lex-greatest variable of a row is therefore its lowest set bit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import EmptyRelation, NotMinorityClosed, ParseError, ScopeOutOfRange

__all__ = [
    "Relation",
    "XorConstraint",
    "Instance",
    "Gf2System",
    "RrefSystem",
    "Infeasible",
    "check_minority_closed",
    "relation_to_affine",
    "assemble",
    "rref",
    "parse_instance",
    "bits_of",
    "mask_of",
]


def bits_of(mask: int) -> list[int]:
    """1-based variable indices set in ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return out


def mask_of(indices: Iterable[int]) -> int:
    """Bitset of the given 1-based indices; repeated indices cancel."""
    m = 0
    for i in indices:
        m ^= 1 << (i - 1)
    return m


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


def _tuple_mask(t: tuple[int, ...]) -> int:
    return sum(1 << j for j, b in enumerate(t) if b)


@dataclass(frozen=True)
class Relation:
    """A constraint ``R(x_scope[0], ..., x_scope[k-1])`` given by its tuple table."""

    arity: int
    tuples: frozenset
    scope: tuple[int, ...] = ()

    def __post_init__(self):
        tuples = frozenset(tuple(int(b) for b in t) for t in self.tuples)
        object.__setattr__(self, "tuples", tuples)
        object.__setattr__(self, "scope", tuple(self.scope))
        if self.arity < 1:
            raise ValueError("arity must be positive")
        for t in tuples:
            if len(t) != self.arity or any(b not in (0, 1) for b in t):
                raise ValueError(f"tuple {t} does not match arity {self.arity}")
        if self.scope:
            if len(self.scope) != self.arity:
                raise ValueError("scope length differs from arity")
            if len(set(self.scope)) != len(self.scope):
                raise ValueError("scope variables must be distinct")

    @classmethod
    def from_bitstrings(cls, strings: Iterable[str], scope: Iterable[int] = ()) -> Relation:
        strings = list(strings)
        scope = tuple(scope)
        arity = len(scope) if scope else len(strings[0])
        return cls(arity, frozenset(tuple(int(c) for c in s) for s in strings), scope)

    def contains(self, values: tuple[int, ...]) -> bool:
        return tuple(values) in self.tuples


@dataclass(frozen=True)
class XorConstraint:
    """``x_{v1} xor ... xor x_{vk} = rhs``."""

    vars: tuple[int, ...]
    rhs: int

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if self.rhs not in (0, 1):
            raise ValueError("rhs must be 0 or 1")


Constraint = Union[XorConstraint, Relation]


@dataclass(frozen=True)
class Instance:
    n: int
    constraints: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))

    @classmethod
    def from_xor_rows(cls, n: int, rows: Iterable[tuple[Iterable[int], int]]) -> Instance:
        return cls(n, tuple(XorConstraint(tuple(v), rhs) for v, rhs in rows))

    def to_text(self) -> str:
        lines = [f"vars {self.n}"]
        for c in self.constraints:
            if isinstance(c, XorConstraint):
                lines.append(" ".join(["xor", *(f"x{v}" for v in c.vars), "=", str(c.rhs)]))
            else:
                scope = " ".join(f"x{v}" for v in c.scope)
                body = " ".join("".join(map(str, t)) for t in sorted(c.tuples))
                lines.append(f"rel ({scope}) {{ {body} }}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Gf2System:
    """Rows ``(mask, const)`` meaning ``xor of x_i over mask = const``."""

    n: int
    rows: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple((int(m), int(c)) for m, c in self.rows))

    def satisfied_by(self, point: int) -> bool:
        """``point`` is an assignment bitset (bit i-1 = value of x_i)."""
        return all(_parity(m & point) == c for m, c in self.rows)


@dataclass(frozen=True)
class RrefSystem:
    """Reduced row echelon form; ``rows[i]`` has pivot ``pivots[i]``."""

    n: int
    pivots: tuple[int, ...]
    rows: tuple[tuple[int, int], ...]
    free_vars: tuple[int, ...] = field(default=())

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def as_system(self) -> Gf2System:
        return Gf2System(self.n, self.rows)

    def support(self, i: int) -> list[int]:
        """Variables of row ``i`` other than its pivot."""
        return bits_of(self.rows[i][0] & ~(1 << (self.pivots[i] - 1)))


@dataclass(frozen=True)
class Infeasible:
    """Returned by :func:`rref` when the system contains ``0 = 1``."""

    n: int


def _closed_by_triples(masks: list[int]) -> bool:
    present = set(masks)
    return all(a ^ b ^ c in present for a in masks for b in masks for c in masks)


def _span_basis(vectors: Iterable[int]) -> dict[int, int]:
    """Echelon basis keyed by lowest set bit."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            low = v & -v
            if low in basis:
                v ^= basis[low]
            else:
                basis[low] = v
                break
    return basis


def _closed_by_affine(masks: list[int]) -> bool:
    # R is closed iff R xor v0 is a linear subspace, i.e. |R| = 2^dim span
    v0 = masks[0]
    return len(set(masks)) == 1 << len(_span_basis(m ^ v0 for m in masks))


def check_minority_closed(R: Relation) -> bool:
    """Whether the coordinate-wise 3-way XOR of any tuples of ``R`` stays in ``R``."""
    if not R.tuples:
        raise EmptyRelation("relation has no tuples")
    masks = sorted(_tuple_mask(t) for t in R.tuples)
    if len(masks) <= 64:
        return _closed_by_triples(masks)
    return _closed_by_affine(masks)


def _nullspace(basis_rows: Iterable[int], k: int) -> list[int]:
    """Basis of {h : <h, v> = 0 for every row v}, over k columns."""
    pivots: dict[int, int] = {}  # pivot column -> fully reduced row
    for v in basis_rows:
        for col, row in pivots.items():
            if v >> col & 1:
                v ^= row
        if not v:
            continue
        col = (v & -v).bit_length() - 1
        for c2 in list(pivots):
            if pivots[c2] >> col & 1:
                pivots[c2] ^= v
        pivots[col] = v
    out = []
    for free in range(k):
        if free in pivots:
            continue
        h = 1 << free
        for col, row in pivots.items():
            if row >> free & 1:
                h |= 1 << col
        out.append(h)
    return out


def relation_to_affine(R: Relation) -> list[tuple[int, int]]:
    """Affine equations over scope positions whose solution set is exactly ``R``.

    Each equation is ``(mask, const)`` where bit ``j`` of ``mask`` refers to the
    j-th scope position.
    """
    if not check_minority_closed(R):
        raise NotMinorityClosed(f"relation {sorted(R.tuples)} is not minority-closed")
    masks = sorted(_tuple_mask(t) for t in R.tuples)
    v0 = masks[0]
    directions = _span_basis(m ^ v0 for m in masks).values()
    return [(h, _parity(h & v0)) for h in _nullspace(directions, R.arity)]


def assemble(instance: Instance) -> Gf2System:
    n = instance.n
    rows: list[tuple[int, int]] = []
    for c in instance.constraints:
        if isinstance(c, XorConstraint):
            for v in c.vars:
                if not 1 <= v <= n:
                    raise ScopeOutOfRange(f"x{v} outside 1..{n}")
            rows.append((mask_of(c.vars), c.rhs))
        else:
            if not c.scope:
                raise ScopeOutOfRange("relation constraint without scope")
            for v in c.scope:
                if not 1 <= v <= n:
                    raise ScopeOutOfRange(f"x{v} outside 1..{n}")
            for local, const in relation_to_affine(c):
                rows.append((mask_of(c.scope[j] for j in range(c.arity) if local >> j & 1), const))
    return Gf2System(n, tuple(rows))


def rref(S: Gf2System) -> RrefSystem | Infeasible:
    """Gauss-Jordan elimination, pivoting each row on its lex-greatest variable."""
    piv: dict[int, list[int]] = {}  # lowest-bit value -> [mask, const]
    pivmask = 0
    for mask, const in S.rows:
        common = mask & pivmask
        while common:
            low = common & -common
            pm, pc = piv[low]
            mask ^= pm
            const ^= pc
            common = mask & pivmask
        if not mask:
            if const:
                return Infeasible(S.n)
            continue
        low = mask & -mask
        for row in piv.values():
            if row[0] & low:
                row[0] ^= mask
                row[1] ^= const
        piv[low] = [mask, const]
        pivmask |= low
    order = sorted(piv)
    pivots = tuple(low.bit_length() for low in order)
    rows = tuple((piv[low][0], piv[low][1]) for low in order)
    free = tuple(i for i in range(1, S.n + 1) if not pivmask >> (i - 1) & 1)
    return RrefSystem(S.n, pivots, rows, free)


# ---------------------------------------------------------------------------
# text format

_VAR = re.compile(r"x(\d+)")
_REL = re.compile(r"rel\s*\(([^)]*)\)\s*\{([^}]*)\}")


def _parse_vars(text: str, lineno: int) -> list[int]:
    out = []
    for tok in text.split():
        m = _VAR.fullmatch(tok)
        if m is None:
            raise ParseError(f"line {lineno}: expected a variable, got {tok!r}")
        out.append(int(m.group(1)))
    return out


def parse_instance(text: str) -> Instance:
    """Parse the line-based instance format.

    ::

        vars 5
        xor x1 x3 x4 = 0
        rel (x1 x3) { 11 01 }   # comment
    """
    n = None
    constraints: list[Constraint] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head == "vars":
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"line {lineno}: expected 'vars <n>'")
            n = int(parts[1])
        elif head == "xor":
            if "=" not in line:
                raise ParseError(f"line {lineno}: xor row without '='")
            lhs, rhs = line[3:].split("=", 1)
            rhs = rhs.strip()
            if rhs not in ("0", "1"):
                raise ParseError(f"line {lineno}: right-hand side must be 0 or 1")
            constraints.append(XorConstraint(tuple(_parse_vars(lhs, lineno)), int(rhs)))
        elif head == "rel":
            m = _REL.fullmatch(line)
            if m is None:
                raise ParseError(f"line {lineno}: expected 'rel (x.. ) {{ bits .. }}'")
            scope = _parse_vars(m.group(1), lineno)
            strings = m.group(2).split()
            if not strings:
                raise EmptyRelation(f"line {lineno}: relation has no tuples")
            for s in strings:
                if len(s) != len(scope) or set(s) - {"0", "1"}:
                    raise ParseError(f"line {lineno}: bad tuple {s!r}")
            try:
                constraints.append(Relation.from_bitstrings(strings, scope))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
        else:
            raise ParseError(f"line {lineno}: unknown directive {head!r}")
    if n is None:
        raise ParseError("missing 'vars <n>' line")
    return Instance(n, tuple(constraints))
