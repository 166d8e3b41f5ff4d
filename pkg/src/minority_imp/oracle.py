"""Brute-force ground truth for small instances.

Nothing here goes through the GF(2) elimination or the conversion algorithm:
solutions are found by checking every assignment against the raw constraints,
and reference bases come from Buchberger's algorithm on the expanded G1.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import InfeasibleSystem, TooLarge
from .gf2 import Infeasible, Instance, XorConstraint, assemble, mask_of, rref
from .grlexconv import convert
from .lexgb import build_g1, g1_polynomials
from .polycore import GRLEX, Monomial, Polynomial, buchberger, reduce_basis

__all__ = [
    "SolutionSet",
    "enumerate_solutions",
    "vanishes",
    "reference_truncated_basis",
    "cross_check",
    "random_instance",
    "random_query",
    "random_member",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 24
_CHUNK = 1 << 16


@dataclass(frozen=True)
class SolutionSet:
    n: int
    points: frozenset = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(sorted(self.points))

    def __contains__(self, point) -> bool:
        return tuple(point) in self.points


def _satisfied(instance: Instance, block: np.ndarray) -> np.ndarray:
    ok = np.ones(block.shape, dtype=bool)
    for c in instance.constraints:
        if isinstance(c, XorConstraint):
            m = mask_of(c.vars)
            ok &= (np.bitwise_count(block & np.int64(m)) & 1) == c.rhs
        else:
            table = np.zeros(1 << c.arity, dtype=bool)
            for t in c.tuples:
                table[sum(b << j for j, b in enumerate(t))] = True
            local = np.zeros(block.shape, dtype=np.int64)
            for j, v in enumerate(c.scope):
                local |= ((block >> (v - 1)) & 1) << j
            ok &= table[local]
    return ok


def enumerate_solutions(instance: Instance, cap: int = ENUMERATION_CAP) -> SolutionSet:
    """Every 0/1 assignment satisfying all constraints, by exhaustive search."""
    n = instance.n
    if n > cap:
        raise TooLarge(f"{n} variables exceeds the enumeration cap of {cap}")
    points = []
    total = 1 << n
    for start in range(0, total, _CHUNK):
        block = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        for a in block[_satisfied(instance, block)].tolist():
            points.append(tuple((a >> i) & 1 for i in range(n)))
    return SolutionSet(n, frozenset(points))


def vanishes(f: Polynomial, S: SolutionSet | Iterable) -> bool:
    return all(f.evaluate(p) == 0 for p in S)


def reference_truncated_basis(instance: Instance, d: int) -> set[Polynomial]:
    """Degree <= d part of the reduced grlex basis, via Buchberger on expanded G1."""
    R = rref(assemble(instance))
    try:
        B1 = build_g1(R)
    except InfeasibleSystem:
        return {Polynomial.constant(1)}
    G = reduce_basis(buchberger(g1_polynomials(B1), GRLEX), GRLEX)
    return {g for g in G if g.degree <= d}


def cross_check(instance: Instance, d: int, seed: int | None = None) -> dict:
    """Compare the conversion output against the Buchberger reference."""
    t0 = time.perf_counter()
    R = rref(assemble(instance))
    try:
        got = set(convert(build_g1(R), d).elements)
    except InfeasibleSystem:
        got = {Polynomial.constant(1)}
    t1 = time.perf_counter()
    want = reference_truncated_basis(instance, d)
    t2 = time.perf_counter()
    return {
        "match": got == want,
        "missing": sorted(str(g) for g in want - got),
        "extra": sorted(str(g) for g in got - want),
        "seed": seed,
        "timings": {"convert_ms": 1000 * (t1 - t0), "buchberger_ms": 1000 * (t2 - t1)},
    }


def random_instance(
    rng: random.Random, n: int, r: int, max_support: int, *, max_tries: int = 1000
) -> Instance:
    """``r`` random XOR rows over ``n`` variables, each touching at most ``max_support``.

    Infeasible draws are rejected and redrawn.
    """
    for _ in range(max_tries):
        rows = []
        for _ in range(r):
            k = rng.randint(1, min(max_support, n))
            rows.append((tuple(sorted(rng.sample(range(1, n + 1), k))), rng.randint(0, 1)))
        inst = Instance.from_xor_rows(n, rows)
        feasible = enumerate_solutions(inst).points if n <= 16 else _feasible(inst)
        if feasible:
            return inst
    raise RuntimeError("could not draw a feasible instance")


def _feasible(inst: Instance) -> bool:
    # exhaustive search is too slow at this size
    return not isinstance(rref(assemble(inst)), Infeasible)


def random_query(rng: random.Random, n: int, d: int, terms: int = 4) -> Polynomial:
    """Random polynomial of degree <= d with small rational coefficients."""
    out = {}
    for _ in range(terms):
        deg = rng.randint(0, d)
        m = tuple(rng.randint(1, n) for _ in range(deg))
        out[Monomial.from_vars(m)] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    return Polynomial(out)


def _kernel(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right nullspace, by exact Gauss-Jordan elimination."""
    rows = [list(r) for r in rows]
    pivots = []
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][c]
        rows[rank] = [a * inv for a in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(c)
        rank += 1
    out = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -rows[r][free]
        out.append(v)
    return out


def random_member(
    rng: random.Random, solutions: SolutionSet, d: int, width: int = 4
) -> Polynomial:
    """A polynomial of degree <= d vanishing on ``solutions``, built without any basis.

    Multilinear monomials over a random window of at most ``width`` variables are
    evaluated at the projected solutions; a random kernel vector gives a
    vanishing combination.  Multiples of x^2 - x are mixed in when d >= 2.
    """
    n = solutions.n
    window = sorted(rng.sample(range(1, n + 1), min(width, n)))
    monos = [Monomial.from_vars(c) for k in range(d + 1) for c in combinations(window, k)]
    projected = {tuple(p[v - 1] for v in window) for p in solutions.points}
    rows = []
    for pt in projected:
        local = [0] * n
        for v, b in zip(window, pt):
            local[v - 1] = b
        rows.append([Fraction(m.evaluate(local)) for m in monos])
    out = Polynomial()
    for vec in _kernel(rows, len(monos)):
        c = rng.randint(-2, 2)
        if c:
            out = out + Polynomial(dict(zip(monos, (c * a for a in vec))))
    if d >= 2:
        for _ in range(rng.randint(0, 2)):
            i = rng.randint(1, n)
            xi = Polynomial.variable(i)
            cofactor = Monomial.from_vars(rng.randint(1, n) for _ in range(rng.randint(0, d - 2)))
            out = out + (xi * xi - xi).mul_term(cofactor, Fraction(rng.randint(-3, 3)))
    return out
