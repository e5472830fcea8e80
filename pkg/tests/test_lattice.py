import math
import random

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from lacunary.lattice import coordinates, hnf, integer_kernel


def test_kernel_example():
    # 2 n = m1 and n = m2 over (m1, m2, n): m1 = 2u, m2 = u, n = u
    assert integer_kernel([[1, 0, -2], [0, 1, -1]], 3) == [[2, 1, 1]]


def test_empty_system_is_full_lattice():
    assert integer_kernel([], 4) == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


def test_coordinates():
    basis = [[2, 1, 1]]
    assert coordinates(basis, [10, 5, 5]) == [5]
    assert coordinates(basis, [10, 5, 4]) is None
    assert coordinates(basis, [1, 0, 0]) is None  # rational but not integral multiple


def test_hnf_canonical():
    a = hnf([[1, 1, -1], [0, 3, -2]])
    b = hnf([[1, 4, -3], [1, 1, -1]])  # same lattice, different generators
    assert a == b
    assert all(row[next(i for i, x in enumerate(row) if x)] > 0 for row in a)


def primitive(v):
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    return [int(x) // g for x in v] if g else [0] * len(v)


@given(st.integers(0, 2**32))
@settings(max_examples=60)
def test_kernel_against_sympy(seed):
    rng = random.Random(seed)
    ncols = rng.randint(1, 6)
    nrows = rng.randint(0, 4)
    rows = [[rng.randint(-4, 4) for _ in range(ncols)] for _ in range(nrows)]
    basis = integer_kernel(rows, ncols)
    M = sympy.Matrix(rows) if rows else sympy.zeros(0, ncols)
    null = M.nullspace() if rows else [sympy.eye(ncols)[:, i] for i in range(ncols)]
    assert len(basis) == len(null)
    for b in basis:
        assert all(sum(r[i] * b[i] for i in range(ncols)) == 0 for r in rows)
    # saturation: primitive integer vectors of the rational kernel have integer coordinates
    for _ in range(5):
        combo = sum((rng.randint(-3, 3) * v for v in null), sympy.zeros(ncols, 1))
        if any(combo):
            den = math.lcm(*[int(sympy.fraction(x)[1]) for x in combo])
            w = primitive([x * den for x in combo])
            assert coordinates(basis, w) is not None
    if basis:
        assert sympy.Matrix(basis).rank() == len(basis)
