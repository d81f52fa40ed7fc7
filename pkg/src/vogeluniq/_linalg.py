"""Exact linear algebra over Fraction: reduced row echelon form and nullspaces."""

from __future__ import annotations

from fractions import Fraction


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    mat = [list(map(Fraction, row)) for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [c * inv for c in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the solution space of rows . v = 0, one vector per free column.

    The basis is in the standard rref parametrization: basis vector j has a 1
    in the j-th free column and zeros in the other free columns, so instantiating
    with parameter values assigns those values to the free coordinates directly.
    """
    if not rows:
        return [[Fraction(i == j) for i in range(ncols)] for j in range(ncols)]
    mat, pivots = rref(rows)
    free_cols = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row, pc in zip(mat, pivots):
            vec[pc] = -row[fc]
        basis.append(vec)
    return basis


def int_nullspace(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Integer-scaled nullspace basis (each rational basis vector times its lcm)."""
    basis = nullspace([[Fraction(v) for v in row] for row in rows], ncols)
    out = []
    for vec in basis:
        denom = 1
        for c in vec:
            denom = denom * c.denominator // _gcd(denom, c.denominator)
        out.append([int(c * denom) for c in vec])
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1
