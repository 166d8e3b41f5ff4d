import itertools
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from minority_imp.errors import ParseError, ResourceLimit, ZeroDivisorInBasis, ZeroPolynomial
from minority_imp.polycore import (
    GRLEX,
    LEX,
    Monomial,
    Polynomial,
    buchberger,
    compare,
    divide,
    leading_term,
    parse_polynomial,
    reduce_basis,
    remainder,
    s_polynomial,
    satisfies_buchberger_criterion,
)

P = parse_polynomial
M = lambda s: P(s).leading_monomial(GRLEX)  # noqa: E731

orders = st.sampled_from([LEX, GRLEX])
monomials = st.dictionaries(
    st.integers(1, 4), st.integers(0, 3), max_size=4
).map(Monomial)
coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polynomials = st.dictionaries(monomials, coefficients, max_size=5).map(Polynomial)


# -- monomials and orders ----------------------------------------------------


def test_monomial_never_stores_zero_exponents():
    m = Monomial({1: 2, 3: 0, 2: 1})
    assert tuple(m) == ((1, 2), (2, 1))
    assert Monomial() == Monomial({4: 0})
    assert str(Monomial()) == "1"


def test_monomial_arithmetic():
    a, b = M("x1*x3^2"), M("x1^2*x2")
    assert a * b == M("x1^3*x2*x3^2")
    assert a.lcm(b) == M("x1^2*x2*x3^2")
    assert M("x1*x3").divides(a)
    assert not a.divides(b)
    assert a.quotient(M("x3")) == M("x1*x3")
    assert a.quotient(M("x2")) is None
    assert M("x1").is_coprime(M("x2*x3"))


@pytest.mark.parametrize(
    "a, b, order, expected",
    [
        ("x1", "x2^2", LEX, 1),
        ("x1", "x2^2", GRLEX, -1),
        ("x3*x5", "x2*x4", GRLEX, -1),
        ("x1*x2", "x1*x2", LEX, 0),
        ("1", "x5", GRLEX, -1),
    ],
)
def test_compare_examples(a, b, order, expected):
    assert compare(M(a), M(b), order) == expected


@given(monomials, monomials, monomials, orders)
def test_order_is_total_and_multiplicative(a, b, c, order):
    ab, ba = compare(a, b, order), compare(b, a, order)
    assert ab == -ba
    assert (ab == 0) == (a == b)
    if ab > 0:
        assert compare(a * c, b * c, order) > 0
    assert compare(Monomial(), a, order) <= 0


@given(monomials, monomials, monomials, orders)
def test_order_is_transitive(a, b, c, order):
    if compare(a, b, order) <= 0 and compare(b, c, order) <= 0:
        assert compare(a, c, order) <= 0


def test_table_iteration_order_is_ascending_grlex():
    row_order = ["x5^2", "x4*x5", "x4^2", "x3*x5", "x3*x4", "x3^2", "x2*x5", "x2*x4",
                 "x2*x3", "x2^2", "x1*x5", "x1*x4", "x1*x3", "x1*x2", "x1^2"]
    mons = [M(s) for s in row_order]
    for a, b in zip(mons, mons[1:]):
        assert compare(a, b, GRLEX) == -1


# -- polynomials ---------------------------------------------------------------


def test_leading_term_examples():
    f = P("x1 - x2 - x3 + 2*x2*x3")
    assert leading_term(f, LEX) == (M("x1"), 1)
    assert leading_term(f, GRLEX) == (M("x2*x3"), 2)
    assert leading_term(P("7"), LEX) == (Monomial(), 7)
    with pytest.raises(ZeroPolynomial):
        leading_term(Polynomial(), LEX)


def test_no_zero_coefficients_stored():
    f = P("x1 + x2") - P("x1")
    assert dict(f.terms) == {M("x2"): 1}
    assert not (f - f)
    assert P("x1 - x1") == 0


@given(polynomials, polynomials, polynomials)
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) - b == a
    assert a * b == b * a


@given(polynomials, st.lists(st.tuples(st.integers(0, 1), st.integers(-2, 2)), min_size=4, max_size=4))
def test_evaluate_is_a_ring_homomorphism(f, pt):
    point = [Fraction(a) + b for a, b in pt]
    g = f * f + f
    assert g.evaluate(point) == f.evaluate(point) ** 2 + f.evaluate(point)


def test_parse_and_format():
    text = "x1*x5 + x2*x4 - 1/2*x1 - 1/2*x2 - 1/2*x4 - 1/2*x5 + 1/2"
    f = P(text)
    assert f.to_str(GRLEX) == text
    assert P("  x2 ^3 *x1- 4/6 ") == P("x1*x2^3 - 2/3")
    assert P("-x1") == -P("x1")
    assert P("0") == Polynomial()
    assert str(Polynomial()) == "0"
    assert P("x1*x1") == P("x1^2")


@pytest.mark.parametrize("bad", ["", "x1 +", "x0", "y1", "x1 x2", "1/0*x1", "x1 - - x2", "2x1"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        P(bad)


@given(polynomials, orders)
def test_format_round_trips(f, order):
    assert P(f.to_str(order)) == f


# -- division --------------------------------------------------------------------


def test_division_depends_on_listing_without_a_groebner_basis():
    # f = x y^2 - y^3 with x > y, grlex
    f = P("x1*x2^2 - x2^3")
    g1, g2 = P("x1*x2 - 1"), P("x2^2 - 1")
    quots, r = divide(f, [g1, g2], GRLEX)
    assert quots == [P("x2"), P("-x2")]
    assert r == 0
    quots, r = divide(f, [g2, g1], GRLEX)
    assert quots == [P("x1 - x2"), Polynomial()]
    assert r == P("x1 - x2")


def test_division_trivial_cases():
    G = [P("x1 - 1"), P("x2^2")]
    quots, r = divide(Polynomial(), G, GRLEX)
    assert all(not q for q in quots) and not r
    assert remainder(P("x5^2"), [P("x5^2 - x5")], GRLEX) == P("x5")
    with pytest.raises(ZeroDivisorInBasis):
        divide(P("x1"), [Polynomial()], LEX)


@given(polynomials, st.lists(polynomials, min_size=1, max_size=3), orders)
@settings(suppress_health_check=[HealthCheck.too_slow])
def test_division_invariant(f, G, order):
    assume(all(G))
    quots, r = divide(f, G, order)
    assert f - sum((q * g for q, g in zip(quots, G)), Polynomial()) - r == 0
    leads = [g.leading_monomial(order) for g in G]
    assert not any(lm.divides(m) for m in r.terms for lm in leads)
    if f:
        top = f.leading_monomial(order)
        for q, g in zip(quots, G):
            if q:
                assert compare((q * g).leading_monomial(order), top, order) <= 0


# -- S-polynomials, Buchberger, reduction --------------------------------------


def test_s_polynomial_examples():
    assert s_polynomial(P("x1 - x2"), P("x3^2 - x3"), LEX) == P("-x2*x3^2 + x1*x3")
    f = P("x1 - x2 - x3 + 2*x2*x3")
    assert s_polynomial(f, f, GRLEX) == 0
    G1 = [f, P("x2^2 - x2"), P("x3^2 - x3")]
    assert remainder(s_polynomial(f, G1[1], LEX), G1, LEX) == 0
    with pytest.raises(ZeroPolynomial):
        s_polynomial(Polynomial(), f, LEX)


def test_buchberger_examples():
    G = buchberger([P("x1 - x2"), P("x2 - x3")], LEX)
    assert satisfies_buchberger_criterion(G, LEX)
    assert set(reduce_basis(G, LEX)) == {P("x1 - x3"), P("x2 - x3")}
    assert buchberger([P("1")], GRLEX) == [P("1")]
    assert buchberger([P("2*x1 - 2"), P("x1")], GRLEX) == [P("1")]


def test_buchberger_resource_cap():
    F = [P("x1^3 - x2*x3"), P("x2^2*x1 - x3^2"), P("x3^3 - x1*x2 + 1")]
    with pytest.raises(ResourceLimit):
        buchberger(F, GRLEX, max_basis=4)


def test_reduce_basis_examples():
    G = [P("x1 - x3"), P("x2 - x3"), P("x1 - x2")]
    expected = {P("x1 - x3"), P("x2 - x3")}
    for perm in itertools.permutations(G):
        assert set(reduce_basis(perm, LEX)) == expected
    assert reduce_basis([P("2*x1 - 2")], LEX) == [P("x1 - 1")]


def _small_polys(nvars):
    mon = st.dictionaries(st.integers(1, nvars), st.integers(0, 2), max_size=2).map(Monomial)
    coef = st.integers(-2, 2).map(Fraction)
    return st.dictionaries(mon, coef, min_size=1, max_size=3).map(Polynomial)


@given(st.lists(_small_polys(3), min_size=1, max_size=3), orders)
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_buchberger_agrees_with_sympy(F, order):
    sympy = pytest.importorskip("sympy")
    assume(any(F))
    xs = sympy.symbols("x1:4")
    try:
        ours = set(reduce_basis(buchberger(F, order, max_basis=60), order))
    except ResourceLimit:
        assume(False)
    exprs = [sum(c * sympy.prod(xs[v - 1] ** e for v, e in m) for m, c in f.terms.items()) for f in F if f]
    theirs = sympy.groebner(exprs, *xs, order=order.value, domain="QQ")
    ref = set()
    for p in theirs.polys:
        terms = {Monomial({i + 1: e for i, e in enumerate(exps)}): Fraction(int(c.numerator), int(c.denominator))
                 for exps, c in p.terms()}
        ref.add(Polynomial(terms))
    assert ours == ref
    for g in ours:
        assert g.leading_term(order)[1] == 1


@given(st.lists(_small_polys(3), min_size=1, max_size=3), _small_polys(3), orders, st.randoms())
@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_remainder_unique_for_any_listing_of_a_groebner_basis(F, f, order, rnd):
    assume(any(F))
    try:
        G = buchberger(F, order, max_basis=60)
    except ResourceLimit:
        assume(False)
    assert satisfies_buchberger_criterion(G, order)
    shuffled = list(G)
    rnd.shuffle(shuffled)
    assert remainder(f, G, order) == remainder(f, shuffled, order)
