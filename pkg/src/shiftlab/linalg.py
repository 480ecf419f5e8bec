"""Determinants and principal minors over exact or numeric scalars."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import scalars as sc


def det(matrix):
    """Determinant by Gaussian elimination.

    Pivots are chosen as the first entry that is exactly nonzero (exact
    data) or the largest in magnitude (numeric data).
    """
    a = [[sc.coerce(x) for x in row] for row in matrix]
    n = len(a)
    if n == 0:
        return Fraction(1)
    exact = all(sc.is_exact(x) for row in a for x in row)
    result = Fraction(1)
    for col in range(n):
        if exact:
            pivot = next((r for r in range(col, n) if sc.sign(a[r][col]) != 0), None)
        else:
            pivot = max(range(col, n), key=lambda r: abs(sc.to_mpf(a[r][col])))
            if sc.to_mpf(a[pivot][col]) == 0:
                pivot = None
        if pivot is None:
            return Fraction(0) if exact else sc.MP.mpf(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if exact and f == 0:
                continue
            for c in range(col, n):
                a[r][c] = a[r][c] - f * a[col][c]
    return result


def submatrix(matrix, rows):
    return [[matrix[i][j] for j in rows] for i in rows]


def principal_minors(matrix, size=None):
    """Yield ``(indices, minor)`` for every principal minor, smallest first."""
    n = len(matrix)
    sizes = [size] if size else range(1, n + 1)
    for k in sizes:
        for rows in combinations(range(n), k):
            yield rows, det(submatrix(matrix, rows))


def leading_minors(matrix):
    return [det(submatrix(matrix, range(k))) for k in range(1, len(matrix) + 1)]


def elementary_symmetric(matrix):
    """Coefficients ``E_k`` of the characteristic polynomial (sums of k×k principal minors)."""
    n = len(matrix)
    out = []
    for k in range(1, n + 1):
        total = Fraction(0)
        for _, m in principal_minors(matrix, k):
            total = total + m
        out.append(total)
    return out
