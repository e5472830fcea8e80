from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lacunary.sparse_poly import DensePoly, SparsePoly

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def record_acceptance():
    def record(name: str, ok: bool, detail: str = "") -> None:
        ACCEPTANCE.append((name, ok, detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


rationals = st.builds(Fraction, st.integers(-40, 40), st.integers(1, 6))
nonzero_rationals = st.builds(Fraction, st.integers(1, 40) | st.integers(-40, -1), st.integers(1, 6))


@st.composite
def sparse_polys(draw, max_terms=5, max_exp=60, allow_zero=True):
    n = draw(st.integers(0 if allow_zero else 1, max_terms))
    exps = draw(st.lists(st.integers(0, max_exp), min_size=n, max_size=n, unique=True))
    coeffs = draw(st.lists(nonzero_rationals, min_size=n, max_size=n))
    return SparsePoly(zip(exps, coeffs))


@st.composite
def dense_polys(draw, min_degree=0, max_degree=5):
    deg = draw(st.integers(min_degree, max_degree))
    coeffs = draw(st.lists(rationals, min_size=deg, max_size=deg))
    return DensePoly(coeffs + [draw(nonzero_rationals)])


def sp(*pairs) -> SparsePoly:
    """SparsePoly from (exponent, coefficient) pairs."""
    return SparsePoly([(e, Fraction(c)) for e, c in pairs])
