"""Tests for the exact polynomial layer.

Oracles are written independently of the implementations under test:
- a naive monic Euclidean gcd over Q,
- a cofactor-expansion determinant,
- root counting on polynomials constructed from known rational roots,
- substitution commuting with elimination for multivariate resultants.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from linemoduli.ratpoly import (
    MultiPoly,
    UniPoly,
    bareiss_det,
    cauchy_bound,
    count_real_roots,
    discriminant,
    exact_div,
    isolate_real_roots,
    mgcd,
    mp_const,
    mp_to_unipoly,
    mp_var,
    mresultant,
    poly_extended_gcd,
    poly_gcd,
    refine_root,
    resultant,
    squarefree_part,
    unipoly_to_mp,
)

# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def naive_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Plain monic Euclidean algorithm over Q."""
    a, b = f, g
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def naive_det(m):
    """Cofactor expansion along the first row."""
    n = len(m)
    if n == 0:
        return mp_const(1)
    if n == 1:
        return m[0][0]
    total = MultiPoly((), {})
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        piece = m[0][j] * naive_det(minor)
        total = total + piece if j % 2 == 0 else total - piece
    return total


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------

small_rats = st.builds(
    Fraction,
    st.integers(min_value=-9, max_value=9),
    st.integers(min_value=1, max_value=5),
)

unipolys = st.builds(
    UniPoly, st.lists(small_rats, min_size=0, max_size=6)
)

nonzero_unipolys = unipolys.filter(lambda p: not p.is_zero)


@st.composite
def multipolys(draw, vars=("t1", "t2", "u1")):
    n_terms = draw(st.integers(min_value=0, max_value=5))
    terms = {}
    for _ in range(n_terms):
        e = tuple(draw(st.integers(min_value=0, max_value=3)) for _ in vars)
        terms[e] = draw(small_rats)
    return MultiPoly.make(vars, terms)


# ---------------------------------------------------------------------------
# Rational scalars
# ---------------------------------------------------------------------------


def test_fraction_is_normalized_exact():
    assert Fraction(2, 4) == Fraction(1, 2)
    assert Fraction(1, -2).denominator == 2 and Fraction(1, -2).numerator == -1
    assert Fraction(1, 3) + Fraction(1, 6) == Fraction(1, 2)
    assert Fraction(10**40, 3) * 3 == 10**40


# ---------------------------------------------------------------------------
# UniPoly arithmetic
# ---------------------------------------------------------------------------


def test_unipoly_normalization():
    assert UniPoly((0, 0)).is_zero
    assert UniPoly((1, 2, 0)).coeffs == (Fraction(1), Fraction(2))
    assert UniPoly((0, 1)).degree == 1
    assert UniPoly.zero().degree == -1


@given(unipolys, unipolys, small_rats)
def test_unipoly_ring_ops_match_evaluation(f, g, x):
    assert (f + g)(x) == f(x) + g(x)
    assert (f - g)(x) == f(x) - g(x)
    assert (f * g)(x) == f(x) * g(x)
    assert (-f)(x) == -f(x)


@given(unipolys, nonzero_unipolys)
def test_unipoly_divmod_roundtrip(f, g):
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.is_zero or r.degree < g.degree


@given(unipolys, unipolys, small_rats)
def test_unipoly_compose_matches_evaluation(f, g, x):
    assert f.compose(g)(x) == f(g(x))


def test_unipoly_derivative_and_from_roots():
    f = UniPoly.from_roots([1, 2])
    assert f == UniPoly((2, -3, 1))
    assert f.derivative() == UniPoly((-3, 2))
    assert UniPoly((1, 1, 1, 1)).derivative() == UniPoly((1, 2, 3))


# ---------------------------------------------------------------------------
# gcd against the naive oracle
# ---------------------------------------------------------------------------


@given(unipolys, unipolys)
def test_poly_gcd_matches_naive_euclid(f, g):
    assert poly_gcd(f, g) == naive_gcd(f, g)


@given(unipolys, unipolys, nonzero_unipolys)
def test_poly_gcd_catches_common_factor(f, g, h):
    d = poly_gcd(f * h, g * h)
    assert (d % h.monic()).is_zero or (f * h).is_zero or (g * h).is_zero


@given(unipolys, unipolys)
def test_extended_gcd_bezout(f, g):
    d, s, t = poly_extended_gcd(f, g)
    assert s * f + t * g == d
    assert d == poly_gcd(f, g) or (f.is_zero and g.is_zero)


def test_squarefree_part_drops_multiplicity():
    f = UniPoly.from_roots([1, 1, -2])
    assert squarefree_part(f) == UniPoly.from_roots([1, -2]).monic()
    g = UniPoly((Fraction(3),)) * UniPoly.from_roots([0, 0, 0])
    assert squarefree_part(g) == UniPoly((0, 1))


# ---------------------------------------------------------------------------
# Resultants and discriminants
# ---------------------------------------------------------------------------


def test_resultant_convention():
    a, b = Fraction(5), Fraction(-3)
    f = UniPoly((-a, 1))
    g = UniPoly((-b, 1))
    assert resultant(f, g) == a - b
    assert resultant(UniPoly((1, 0, 1)), UniPoly((-1, 0, 1))) == 4


@given(unipolys, nonzero_unipolys, nonzero_unipolys)
@settings(max_examples=50)
def test_resultant_multiplicative(f, g1, g2):
    if f.is_zero or f.degree < 1:
        return
    assert resultant(f, g1 * g2) == resultant(f, g1) * resultant(f, g2)


@given(st.lists(small_rats, min_size=1, max_size=3, unique=True), small_rats)
def test_resultant_zero_iff_shared_root(roots, extra):
    f = UniPoly.from_roots(roots)
    g = UniPoly.from_roots([extra])
    assert (resultant(f, g) == 0) == (extra in roots)


def test_golden_discriminants():
    assert discriminant(UniPoly((-1, 1, 1, 1))) == -44
    assert discriminant(UniPoly((1, 3, -4, 1))) == 49
    assert discriminant(UniPoly((Fraction(-1, 2), 0, 1))) == 2
    assert discriminant(UniPoly((2, -5, 1))) == 17
    assert discriminant(UniPoly((-2, 2, -3, 1))) == -104


# ---------------------------------------------------------------------------
# Sturm machinery against constructed roots
# ---------------------------------------------------------------------------


def test_real_root_counts_on_fixed_polys():
    assert count_real_roots(UniPoly((-1, 1, 1, 1))) == 1
    assert count_real_roots(UniPoly((1, 3, -4, 1))) == 3
    assert count_real_roots(UniPoly((Fraction(-1, 2), 0, 1))) == 2
    assert count_real_roots(UniPoly((2, -5, 1))) == 2
    assert count_real_roots(UniPoly((-2, 2, -3, 1))) == 1
    assert count_real_roots(UniPoly((1, 0, 1))) == 0


def test_interval_counts_are_open():
    f = UniPoly.from_roots([1, 3])
    assert count_real_roots(f, 1, 3) == 0
    assert count_real_roots(f, 0, 3) == 1
    assert count_real_roots(f, 0, 4) == 2
    assert count_real_roots(f, None, 2) == 1
    assert count_real_roots(f, 2, None) == 1
    assert count_real_roots(f, 3, None) == 0


@given(st.lists(small_rats, min_size=1, max_size=5, unique=True), st.booleans())
@settings(max_examples=80)
def test_count_matches_constructed_roots(roots, add_complex_pair):
    f = UniPoly.from_roots(roots)
    if add_complex_pair:
        f = f * UniPoly((1, 0, 1))
    assert count_real_roots(f) == len(roots)


@given(st.lists(small_rats, min_size=1, max_size=4, unique=True))
@settings(max_examples=60)
def test_isolation_brackets_each_constructed_root(roots):
    f = UniPoly.from_roots(roots)
    intervals = isolate_real_roots(f)
    assert len(intervals) == len(roots)
    hits = []
    for lo, hi in intervals:
        inside = [r for r in roots if (lo == hi and r == lo) or lo < r < hi]
        assert len(inside) == 1
        hits.append(inside[0])
    assert sorted(hits) == sorted(roots)
    bound = cauchy_bound(f)
    assert all(abs(r) < bound for r in roots)


def test_refine_root_converges():
    f = UniPoly((-2, 0, 1))
    (lo, hi), = [iv for iv in isolate_real_roots(f) if iv[0] >= 0]
    lo, hi = refine_root(f, lo, hi, Fraction(1, 10**9))
    assert hi - lo < Fraction(1, 10**9)
    assert lo * lo <= 2 <= hi * hi


# ---------------------------------------------------------------------------
# MultiPoly
# ---------------------------------------------------------------------------


def test_multipoly_canonicalization():
    p = MultiPoly.make(("u1", "t1"), {(0, 2): Fraction(3), (0, 0): Fraction(1)})
    assert p.vars == ("t1",)
    assert p.degree_in("t1") == 2
    assert p.degree_in("u1") == 0
    q = mp_var("X") + mp_var("t")
    assert q.vars == ("t", "X")


@given(multipolys(), multipolys(), small_rats, small_rats, small_rats)
@settings(max_examples=80)
def test_multipoly_ops_match_evaluation(p, q, a, b, c):
    env = {"t1": a, "t2": b, "u1": c}
    assert (p + q).evaluate(env) == p.evaluate(env) + q.evaluate(env)
    assert (p - q).evaluate(env) == p.evaluate(env) - q.evaluate(env)
    assert (p * q).evaluate(env) == p.evaluate(env) * q.evaluate(env)
    assert (p**2).evaluate(env) == p.evaluate(env) ** 2


@given(multipolys(), multipolys())
@settings(max_examples=60)
def test_exact_div_inverts_multiplication(p, q):
    if q.is_zero:
        return
    quotient = exact_div(p * q, q)
    assert quotient is not None and quotient == p


def test_exact_div_rejects_nondivisor():
    x, y = mp_var("t1"), mp_var("t2")
    assert exact_div(x * y + mp_const(1), x) is None
    assert exact_div(x * x - y, x + y) is None


@given(multipolys(), multipolys(), multipolys())
@settings(max_examples=30, deadline=None)
def test_mgcd_divides_common_multiple(p, q, h):
    if h.is_zero or (p * h).is_zero or (q * h).is_zero:
        return
    d = mgcd(p * h, q * h)
    h_norm = mgcd(h, h)
    assert exact_div(d, h_norm) is not None
    assert exact_div(p * h, d) is not None
    assert exact_div(q * h, d) is not None


def test_mgcd_examples():
    x, y = mp_var("t1"), mp_var("t2")
    common = x - y
    d = mgcd(common * (x + y), common * x)
    assert d == common
    assert mgcd(x + mp_const(1), y + mp_const(1)) == mp_const(1)


def test_mresultant_convention_and_elimination():
    x = mp_var("X")
    t1, t2 = mp_var("t1"), mp_var("t2")
    assert mresultant(x - t1, x - t2, "X") == t1 - t2
    f = x * x - t1
    g = x - t2
    assert mresultant(f, g, "X") == t2 * t2 - t1


@given(multipolys(("t1", "t2")), multipolys(("t1", "t2")), small_rats)
@settings(max_examples=40, deadline=None)
def test_mresultant_commutes_with_substitution(a, b, v):
    x = mp_var("X")
    f = x**2 + a * x + b
    g = x**2 + b * x + a
    r = mresultant(f, g, "X")
    subst = {"t1": v, "t2": Fraction(7, 3)}
    fu = mp_to_unipoly(f.substitute("t1", v).substitute("t2", Fraction(7, 3)), "X")
    gu = mp_to_unipoly(g.substitute("t1", v).substitute("t2", Fraction(7, 3)), "X")
    r_val = r.const_value() if r.is_constant else r.evaluate(subst)
    assert r_val == resultant(fu, gu)


@given(st.lists(st.lists(multipolys(("t1", "u1")), min_size=3, max_size=3), min_size=3, max_size=3))
@settings(max_examples=25, deadline=None)
def test_bareiss_matches_cofactor_expansion(matrix):
    assert bareiss_det(matrix) == naive_det(matrix)


def test_unipoly_conversions_roundtrip():
    f = UniPoly((1, 0, -2, 3))
    assert mp_to_unipoly(unipoly_to_mp(f, "t3"), "t3") == f
    assert mp_to_unipoly(mp_const(5), "t") == UniPoly((5,))
    with pytest.raises(ValueError):
        mp_to_unipoly(mp_var("t1") + mp_var("t2"), "t1")
