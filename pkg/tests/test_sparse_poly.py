import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import dense_polys, rationals, sp, sparse_polys
from lacunary.sparse_poly import (CapExceeded, DensePoly, ExpansionOverflow, SparsePoly, UndefinedInput,
                                  add, compose_outer, exact_divide, exponent_gcd, from_dense, mul, power,
                                  to_dense)

X = sympy.Symbol("x")


def to_sympy(p: SparsePoly):
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * X**e for e, c in p])


def from_sympy(expr) -> SparsePoly:
    poly = sympy.Poly(sympy.expand(expr), X)
    return SparsePoly((m[0], Fraction(int(c.p), int(c.q))) for m, c in poly.terms())


# --- examples ---------------------------------------------------------------

def test_add_cancels():
    assert add(sp((2, 1), (0, 1)), sp((2, -1), (1, 1))) == sp((1, 1), (0, 1))


def test_add_zero_identity():
    p = sp((5, 3), (1, -2))
    assert add(p, SparsePoly()) == p


def test_add_big_exponent_merge():
    big = 10**9
    assert add(sp((big, 1)), sp((big, 1))) == sp((big, 2))


def test_mul_examples():
    assert mul(sp((1, 1), (0, 1)), sp((1, 1), (0, -1))) == sp((2, 1), (0, -1))
    e = 10**6
    assert power(sp((e, 1), (0, 1)), 2) == sp((2 * e, 1), (e, 2), (0, 1))
    p = sp((7, Fraction(1, 3)), (2, 5))
    assert mul(p, SparsePoly.constant(1)) == p


def test_mul_overflow():
    p = SparsePoly((3**k, 1) for k in range(20))
    with pytest.raises(ExpansionOverflow):
        mul(p, p, term_cap=100)


def test_compose_examples():
    assert compose_outer(DensePoly([0, 0, 1]), sp((3, 1), (1, 1))) == sp((6, 1), (4, 2), (2, 1))
    h = sp((40, 3), (7, -1), (0, 2))
    assert compose_outer(DensePoly([0, 1]), h) == h
    u, v = 1000, 17
    assert compose_outer(DensePoly([0, 0, 1]), sp((u, 1), (v, 1))) == sp((2 * u, 1), (u + v, 2), (2 * v, 1))


def test_exponent_gcd_examples():
    assert exponent_gcd(sp((6, 1), (4, 3), (2, 1))) == 2
    assert exponent_gcd(sp((5, 1), (3, 1), (0, 1))) == 1
    assert exponent_gcd(sp((10**6, 1))) == 10**6
    with pytest.raises(UndefinedInput):
        exponent_gcd(SparsePoly())


def test_to_dense_examples():
    assert to_dense(sp((2, 1), (0, 1))).coeffs == (1, 0, 1)
    assert to_dense(SparsePoly()).is_zero()
    with pytest.raises(CapExceeded):
        to_dense(sp((10**9, 1)))


def test_zero_coefficients_dropped():
    p = SparsePoly([(3, 1), (3, -1), (1, 0), (0, 2)])
    assert p.term_count == 1 and p.terms == {0: Fraction(2)}
    with pytest.raises(UndefinedInput):
        SparsePoly().degree


def test_json_roundtrip_and_order():
    p = sp((10**30, Fraction(-3, 7)), (0, 1), (5, 2))
    obj = p.to_json()
    assert [t["exp"] for t in obj["terms"]] == [str(10**30), "5", "0"]
    assert SparsePoly.from_json(json.loads(json.dumps(obj))) == p


@pytest.mark.parametrize("bad", [
    {"terms": [{"exp": "1", "num": "1", "den": "0"}]},
    {"terms": [{"exp": "x", "num": "1"}]},
    {"terms": [{"exp": "1", "num": "1", "extra": 1}]},
    {"terms": [], "more": []},
    [],
])
def test_json_strict(bad):
    with pytest.raises(ValueError):
        SparsePoly.from_json(bad)


def test_exact_divide():
    h = sp((5, 1), (2, -3), (0, 1))
    q = sp((9, 2), (0, 1))
    assert exact_divide(mul(h, q), h) == q
    assert exact_divide(sp((4, 1), (0, 1)), sp((2, 1))) is None
    assert exact_divide(sp((4, 1), (0, 1)), sp((1, 1), (0, 1))) is None


# --- properties -------------------------------------------------------------

@given(sparse_polys(), sparse_polys(), sparse_polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p
    assert p - p == SparsePoly()


@given(sparse_polys(max_terms=4, max_exp=30), sparse_polys(max_terms=4, max_exp=30))
def test_mul_matches_sympy(p, q):
    assert mul(p, q) == from_sympy(to_sympy(p) * to_sympy(q))
    assert mul(p, q).term_count <= max(1, p.term_count * q.term_count) or mul(p, q).is_zero()


@given(dense_polys(min_degree=1, max_degree=4), sparse_polys(max_terms=3, max_exp=12, allow_zero=False), rationals)
def test_compose_evaluates(g, h, t):
    assert compose_outer(g, h).evaluate(t) == g.evaluate(h.evaluate(t))


@given(dense_polys(min_degree=1, max_degree=3), sparse_polys(max_terms=3, max_exp=6, allow_zero=False),
       sparse_polys(max_terms=3, max_exp=6, allow_zero=False))
def test_compose_associative(g, h1, h2):
    assume(not h1.is_constant())
    left = compose_outer(g, compose_outer(to_dense(h1), h2))
    right = compose_outer(to_dense(compose_outer(g, h1)), h2)
    assert left == right


@given(sparse_polys(max_terms=4, max_exp=40))
def test_dense_roundtrip(p):
    assert from_dense(to_dense(p)) == p


@given(dense_polys(max_degree=6), dense_polys(min_degree=1, max_degree=3))
def test_dense_divmod(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(sparse_polys(allow_zero=False))
def test_exponent_gcd_divides(p):
    n = exponent_gcd(p)
    assert all(e % n == 0 for e in p.exponents()) if n else p.exponents() == [0]


@given(st.integers(0, 5), sparse_polys(max_terms=3, max_exp=10))
def test_power_matches_repeated_mul(k, p):
    acc = SparsePoly.constant(1)
    for _ in range(k):
        acc = acc * p
    assert power(p, k) == acc
