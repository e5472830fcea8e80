"""Integer kernels and Hermite normal form for small integer matrices."""
from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis (as row vectors) of ``{u in Z^ncols : A u = 0}``.

    Column-style Euclidean elimination: every column operation is unimodular
    and mirrored in ``U``, so once ``A U`` is lower echelon the trailing columns
    of ``U`` span the integer kernel exactly.
    """
    M = [list(r) for r in rows]
    U = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # U[col] = column vector

    def col_sub(dst: int, src: int, q: int) -> None:
        for row in M:
            row[dst] -= q * row[src]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def col_swap(a: int, b: int) -> None:
        for row in M:
            row[a], row[b] = row[b], row[a]
        U[a], U[b] = U[b], U[a]

    col = 0
    for row in M:
        if col == ncols:
            break
        while True:
            nz = [j for j in range(col, ncols) if row[j]]
            if not nz:
                break
            j = min(nz, key=lambda k: abs(row[k]))
            if j != col:
                col_swap(col, j)
            others = [k for k in range(col + 1, ncols) if row[k]]
            if not others:
                col += 1
                break
            for k in others:
                col_sub(k, col, row[k] // row[col])
    return hnf(U[col:])


def hnf(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row Hermite normal form, dropping zero rows.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``, so the result is a canonical basis of the row lattice.
    """
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c]]
            if not nz:
                break
            i = min(nz, key=lambda k: abs(A[k][c]))
            A[r], A[i] = A[i], A[r]
            done = True
            for k in range(r + 1, len(A)):
                if A[k][c]:
                    q = A[k][c] // A[r][c]
                    A[k] = [a - q * b for a, b in zip(A[k], A[r])]
                    if A[k][c]:
                        done = False
            if done:
                break
        if r < len(A) and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
            for k in range(r):
                q = A[k][c] // A[r][c]
                if q:
                    A[k] = [a - q * b for a, b in zip(A[k], A[r])]
            r += 1
            if r == len(A):
                break
    return [row for row in A if any(row)]


def coordinates(basis_hnf: Sequence[Sequence[int]], w: Sequence[int]) -> list[int] | None:
    """Integer ``u`` with ``sum u_j * basis_j = w`` for a basis in Hermite form, or None."""
    rest = list(w)
    u = []
    for row in basis_hnf:
        c = next(k for k, a in enumerate(row) if a)
        q, r = divmod(rest[c], row[c])
        if r:
            return None
        u.append(q)
        if q:
            rest = [a - q * b for a, b in zip(rest, row)]
    return u if not any(rest) else None
