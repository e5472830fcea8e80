import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import sp
from lacunary.config import Limits
from lacunary.decompose import (Diagnostic, canonicalize, dense_decompose_oracle, recover_outer,
                                sparse_decompose, sparse_root_candidate, trivial_decompose,
                                trivial_refinement)
from lacunary.series import CandidateBudgetError
from lacunary.sparse_poly import (CapExceeded, DensePoly, SparsePoly, UndefinedInput, compose_outer,
                                  to_dense)

def random_pair(rng: random.Random, max_exp: int = 10**4, max_terms: int = 4):
    deg_g = rng.randint(2, 6)
    g = DensePoly([rng.randint(-9, 9) for _ in range(deg_g)] + [rng.choice([1, -1, 2, Fraction(3, 2)])])
    k = rng.randint(1, max_terms)
    exps = rng.sample(range(0, max_exp + 1), k)
    if max(exps) < 2:
        exps[0] = rng.randint(2, max_exp)
    h = SparsePoly((e, rng.choice([1, -1, 2, -3, Fraction(1, 2), 5])) for e in exps)
    return g, h


def recovered(f: SparsePoly, g: DensePoly, h: SparsePoly, results) -> bool:
    """Whether ``results`` contain the canonical form of ``(g, h)``, refining trivial families."""
    gc, hc = canonicalize(g, h)
    for res in results:
        if res.inner == hc and res.outer == gc:
            return True
        if res.kind == "trivial" and hc.term_count == 1 and res.inner.degree % hc.degree == 0:
            ref = trivial_refinement(res, hc.degree)
            if ref.inner == hc and ref.outer == gc:
                return True
    return False


# --- examples -------------------------------------------------------------

def test_trivial_examples():
    res = trivial_decompose(sp((6, 1), (4, 3), (2, 1)))
    assert res.outer == DensePoly([0, 1, 3, 1]) and res.inner == sp((2, 1)) and res.kind == "trivial"
    assert trivial_decompose(sp((3, 1), (1, 1), (0, 1))) is None
    res = trivial_decompose(sp((10, 1)))
    assert res.outer == DensePoly([0, 0, 1]) and res.inner == sp((5, 1))
    with pytest.raises(CapExceeded):
        trivial_decompose(sp((2 * 10**5, 1), (2, 1)), Limits(dense_cap=1000))


def test_trivial_refinement():
    res = trivial_decompose(sp((12, 1), (0, 1)))  # (x^2 + 1, x^6)
    ref = trivial_refinement(res, 3)
    assert ref.inner == sp((3, 1)) and ref.outer == DensePoly([1, 0, 0, 0, 1])
    assert compose_outer(ref.outer, ref.inner) == sp((12, 1), (0, 1))
    with pytest.raises(ValueError):
        trivial_refinement(res, 4)


def test_root_candidate_examples():
    assert sparse_root_candidate(sp((4, 1), (3, 2), (2, 1)), 2) == sp((2, 1), (1, 1))
    assert sparse_root_candidate(sp((4, 1), (0, 1)), 2) == sp((2, 1))
    assert sparse_root_candidate(sp((20, 1)), 2) == sp((10, 1))


def test_root_candidate_budget():
    f = sp((10**6, 1), (999_999, 1), (1, 1))
    with pytest.raises(CandidateBudgetError):
        sparse_root_candidate(f, 2, budget=10)


def test_recover_outer_examples():
    assert recover_outer(sp((6, 1), (4, 2), (2, 1)), sp((3, 1), (1, 1))) == DensePoly([0, 0, 1])
    assert recover_outer(sp((4, 1), (0, 1)), sp((2, 1))) == DensePoly([1, 0, 1])
    assert recover_outer(sp((4, 1), (1, 1), (0, 1)), sp((2, 1))) is None


def test_sparse_decompose_examples():
    res = sparse_decompose(sp((4, 1), (3, 2), (2, 1)))
    assert [(r.kind, r.outer, r.inner) for r in res] == [("proper", DensePoly([0, 0, 1]), sp((2, 1), (1, 1)))]
    # a prime-degree monomial admits no decomposition with both degrees > 1
    assert sparse_decompose(sp((7, 1))) == []
    res = sparse_decompose(sp((6, 1), (5, 2), (4, 1), (0, 7)))
    assert [(r.outer, r.inner) for r in res] == [(DensePoly([7, 0, 1]), sp((3, 1), (2, 1)))]
    with pytest.raises(UndefinedInput):
        sparse_decompose(sp((0, 3)))


def test_sparse_decompose_lists_both_routes():
    res = sparse_decompose(sp((6, 1), (4, 2), (2, 1)))
    kinds = {(r.kind, r.divisor_d) for r in res}
    assert ("proper", 2) in kinds and ("trivial", 3) in kinds


def test_budget_goes_to_diagnostics():
    diags: list[Diagnostic] = []
    f = sp((1001, 1), (1000, 1), (2, 1)) ** 2
    res = sparse_decompose(f, Limits(candidate_budget=5), diags)
    assert 2 in [d.d for d in diags] and all(d.status == "budget-exceeded" for d in diags)
    assert sparse_decompose(f)[0].inner == sp((1001, 1), (1000, 1), (2, 1))
    assert all(compose_outer(r.outer, r.inner) == f for r in res)


def test_oracle_examples():
    assert [(r.outer, r.inner) for r in dense_decompose_oracle(DensePoly([0, 0, 0, 0, 1]))] == \
        [(DensePoly([0, 0, 1]), sp((2, 1)))]
    res = dense_decompose_oracle(DensePoly([0, 0, 1, 0, 2, 0, 1]))
    pairs = {(r.outer, r.inner) for r in res}
    assert (DensePoly([0, 0, 1]), sp((3, 1), (1, 1))) in pairs
    assert (DensePoly([0, 1, 2, 1]), sp((2, 1))) in pairs
    assert dense_decompose_oracle(DensePoly([1, 1, 0, 1])) == []
    with pytest.raises(CapExceeded):
        dense_decompose_oracle(to_dense(sp((100, 1))))


def test_canonicalize():
    g, h = canonicalize(DensePoly([1, 0, 1]), sp((3, 2), (0, 5)))
    assert h == sp((3, 1))
    assert compose_outer(g, h) == compose_outer(DensePoly([1, 0, 1]), sp((3, 2), (0, 5)))


# --- properties -------------------------------------------------------------

@given(st.integers(0, 2**32))
@settings(max_examples=40)
def test_round_trip_small(seed):
    g, h = random_pair(random.Random(seed), max_exp=60)
    f = compose_outer(g, h)
    results = sparse_decompose(f)
    assert recovered(f, g, h, results)
    for r in results:
        assert compose_outer(r.outer, r.inner) == f
        if r.kind == "proper":
            assert 2 <= r.outer.degree <= 2 * f.term_count * (f.term_count + 1)


@given(st.integers(0, 2**32))
@settings(max_examples=40)
def test_sparse_agrees_with_dense_oracle(seed):
    rng = random.Random(seed)
    if rng.random() < 0.5:
        g, h = random_pair(rng, max_exp=8, max_terms=3)
        f = compose_outer(g, h)
        known = True
    else:
        m = rng.randint(2, 24)
        f = SparsePoly([(m, 1)] + [(e, rng.randint(-3, 3)) for e in rng.sample(range(m), rng.randint(0, min(3, m)))])
        known = False
    oracle = dense_decompose_oracle(to_dense(f))
    if known and h.degree >= 2:
        assert oracle
    assert bool(sparse_decompose(f)) == bool(oracle)
    for r in oracle:
        assert compose_outer(r.outer, r.inner) == f
