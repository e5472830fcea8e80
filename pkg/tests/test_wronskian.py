import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from lacunary.sparse_poly import DensePoly, UndefinedInput
from lacunary.wronskian import (DependenceError, Place, PreconditionError, RatFunc, _ratfunc_det,
                                finite_places, local_parameter, valuation, verify_prop1, wronskian_det,
                                wronskian_order_sum, wronskian_wrt)

Y = sympy.Symbol("y")


def rf(num, den=(1,)) -> RatFunc:
    return RatFunc(DensePoly(num), DensePoly(den))


def to_sympy(f: RatFunc):
    n = sum(sympy.Rational(c.numerator, c.denominator) * Y**i for i, c in enumerate(f.num.coeffs))
    d = sum(sympy.Rational(c.numerator, c.denominator) * Y**i for i, c in enumerate(f.den.coeffs))
    return n / d


def random_ratfunc(rng: random.Random, max_deg: int = 8) -> RatFunc:
    """Products of small factors, so zeros and poles repeat and share places."""
    pool = [[-1, 1], [1, 1], [0, 1], [1, 0, 1], [-2, 1], [2, 0, 1], [1, 1, 1]]

    def product(budget: int) -> DensePoly:
        p = DensePoly([rng.choice([1, -1, 2, Fraction(1, 3), -5])])
        while rng.random() < 0.7:
            f = DensePoly(rng.choice(pool))
            if p.degree + f.degree > budget:
                break
            p = p * f
        if rng.random() < 0.3 and p.degree < budget:
            p = p + DensePoly([rng.randint(-3, 3)])
            if p.is_zero():
                p = DensePoly([1])
        return p

    return RatFunc(product(max_deg), product(max_deg))


def independent_tuple(rng: random.Random, n: int, max_deg: int = 8) -> list[RatFunc]:
    while True:
        phis = [random_ratfunc(rng, max_deg) for _ in range(n)]
        if not wronskian_det(phis).is_zero():
            return phis


# --- examples -------------------------------------------------------------

def test_valuation_examples():
    y = Place(DensePoly([0, 1]))
    assert valuation(rf([0, 0, 1]), y) == 2
    assert valuation(rf([1], [-1, 1]), Place.infinity()) == 1
    assert valuation(rf([1, 0, 1], [0, 1]), Place(DensePoly([1, 0, 1]))) == 1
    with pytest.raises(UndefinedInput):
        valuation(RatFunc(DensePoly()), y)


def test_place_checks_irreducibility():
    with pytest.raises(ValueError):
        Place(DensePoly([-1, 0, 1]))
    with pytest.raises(ValueError):
        Place(DensePoly([2, 2]))


def test_ratfunc_reduced():
    f = rf([-1, 0, 1], [2, 2])  # (y^2 - 1) / (2y + 2) = (y - 1)/2
    assert f.den.coeffs == (1,) and f.num.coeffs == (Fraction(-1, 2), Fraction(1, 2))


def test_wronskian_examples():
    assert wronskian_det([rf([1]), rf([0, 1]), rf([0, 0, 1])]) == rf([2])
    assert wronskian_det([rf([0, 1]), rf([0, 2])]).is_zero()
    assert wronskian_det([rf([1], [0, 1]), rf([0, 1])]) == rf([2], [0, 1])


def test_order_sum_examples():
    assert wronskian_order_sum([rf([1]), rf([0, 1])])[0] == -2
    assert wronskian_order_sum([rf([1]), rf([0, 1]), rf([0, 0, 1])])[0] == -6
    with pytest.raises(DependenceError):
        wronskian_order_sum([rf([0, 1]), rf([0, 2])])


def test_prop1_examples():
    rep = verify_prop1([rf([1]), rf([0, 1])], r=2)
    assert (rep.lhs, rep.rhs, rep.s_size, rep.holds) == (0, 0, 2, True)
    # y + (1 - y) = 1: places (y), (y - 1), inf; only inf contributes 0 - (-1)
    rep = verify_prop1([rf([0, 1]), rf([1, -1])], r=2)
    assert (rep.lhs, rep.rhs, rep.s_size) == (1, 1, 3)
    rep = verify_prop1([rf([3, 1], [0, 0, 1])], r=1)
    assert rep.lhs == 0 and rep.holds


def test_prop1_cubic_identity():
    # (1+y)^3 - 1 - 3y - 3y^2 = y^3, with all four functions S-units for S = {(y), (y+1), inf}
    phis = [rf([1, 3, 3, 1]), rf([-1]), rf([0, -3]), rf([0, 0, -3])]
    rep = verify_prop1(phis, r=4)
    assert rep.s_size == 3
    # at (y): v(sigma) = 3, min = 0 ; at (y+1): 0 - 0 ; at inf: -3 - (-3)
    assert rep.lhs == 3 and rep.rhs == 6 and rep.holds


def test_prop1_errors():
    with pytest.raises(DependenceError):
        verify_prop1([rf([0, 1]), rf([0, 2])])
    with pytest.raises(PreconditionError):
        verify_prop1([rf([1], [0, 1]), rf([1])], S=[Place.infinity()])


def test_prop1_explicit_larger_S():
    extra = Place(DensePoly([5, 1]))
    base = verify_prop1([rf([1]), rf([0, 1])], r=2)
    rep = verify_prop1([rf([1]), rf([0, 1])], r=2, S=[Place(DensePoly([0, 1])), Place.infinity(), extra])
    assert rep.s_size == base.s_size + 1 and rep.rhs == base.rhs + 1


# --- properties -------------------------------------------------------------

@given(st.integers(0, 2**32))
@settings(max_examples=25)
def test_valuations_sum_to_zero(seed):
    f = random_ratfunc(random.Random(seed))
    places = {p for p, _ in finite_places(f.num)} | {p for p, _ in finite_places(f.den)} | {Place.infinity()}
    assert sum(p.degree * valuation(f, p) for p in places) == 0


@given(st.integers(0, 2**32), st.integers(1, 4))
@settings(max_examples=25)
def test_order_sum_identity(seed, n):
    phis = independent_tuple(random.Random(seed), n, 4)
    assert wronskian_order_sum(phis)[0] == -2 * math.comb(n, 2)


@given(st.integers(0, 2**32), st.integers(1, 3))
@settings(max_examples=15)
def test_wronskian_against_sympy(seed, n):
    phis = [random_ratfunc(random.Random(seed + i), 3) for i in range(n)]
    exprs = [to_sympy(p) for p in phis]
    M = sympy.Matrix(n, n, lambda i, j: sympy.cancel(sympy.diff(exprs[j], Y, i)))
    assert sympy.cancel(to_sympy(wronskian_det(phis)) - M.det(method="berkowitz")) == 0


@given(st.integers(0, 2**32), st.integers(2, 3))
@settings(max_examples=15)
def test_wronskian_wrt_local_parameter(seed, n):
    # W_t = (dy/dt)^C(n,2) * W_y for any non-constant t
    rng = random.Random(seed)
    phis = independent_tuple(rng, n, 3)
    t = RatFunc(DensePoly([rng.randint(-2, 2), 1, rng.choice([0, 1])]))
    lhs = wronskian_wrt(phis, t)
    factor = RatFunc(DensePoly([1])) / t.derivative()
    rhs = wronskian_det(phis)
    for _ in range(math.comb(n, 2)):
        rhs = rhs * factor
    assert lhs == rhs


def test_ratfunc_det_matches_polynomial_trick():
    phis = [rf([1], [0, 1]), rf([0, 1]), rf([1, 0, 1], [1, 1])]
    rows = [phis]
    for _ in range(2):
        rows.append([p.derivative() for p in rows[-1]])
    assert _ratfunc_det(rows) == wronskian_det(phis)


def _linearly_dependent(phis) -> bool:
    # exact rank of numerator coefficient vectors over a common denominator
    den = DensePoly([1])
    for p in phis:
        den = den * p.den
    vecs = [(p.num * (den // p.den)).coeffs for p in phis]
    width = max(len(v) for v in vecs)
    M = sympy.Matrix([[sympy.Rational(str(c)) for c in v] + [0] * (width - len(v)) for v in vecs])
    return M.rank() < len(phis)


@given(st.integers(0, 2**32), st.integers(2, 4), st.booleans())
@settings(max_examples=30)
def test_dependence_criterion(seed, n, force_dependent):
    rng = random.Random(seed)
    phis = [random_ratfunc(rng, 3) for _ in range(n)]
    if force_dependent:
        combo = phis[0] * RatFunc(DensePoly([rng.randint(1, 3)])) - phis[1]
        if not combo.is_zero():
            phis[-1] = combo
    assert wronskian_det(phis).is_zero() == _linearly_dependent(phis)


@given(st.integers(0, 2**32), st.integers(1, 4))
@settings(max_examples=25)
def test_prop1_holds_random(seed, n):
    rng = random.Random(seed)
    phis = independent_tuple(rng, n, 5)
    rep = verify_prop1(phis, r=rng.randint(0, n))
    assert rep.holds, rep.to_json()


def test_local_parameter_at_infinity():
    assert local_parameter(Place.infinity()) == rf([1], [0, 1])
