"""Fraction-free determinant and adjugate of integer matrices."""

from __future__ import annotations


def bareiss_det(matrix) -> int:
    """Exact determinant by Bareiss elimination; all divisions are exact."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def det_and_adjugate(matrix) -> tuple[int, list[list[int]]]:
    """Return ``(det M, adj M)`` with ``M @ adj M == det M * I``.

    Fraction-free Gauss-Jordan on ``[M | I]``: after the sweep the left
    block is ``d * I`` with ``d = +-det M`` and the right block is
    ``d * M^-1``.  Singular input yields ``det == 0`` and the adjugate from
    cofactors instead.
    """
    n = len(matrix)
    a = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    sign, prev = 1, 1
    for k in range(n):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0, _cofactor_adjugate(matrix)
        pivot = a[k][k]
        row_k = a[k]
        for i in range(n):
            if i == k:
                continue
            row_i = a[i]
            aik = row_i[k]
            for j in range(2 * n):
                if j != k:
                    row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    d = a[n - 1][n - 1]
    det = sign * d
    # right block is d * M^-1 = (d / det) * adj M, and d / det = sign
    adj = [[sign * x for x in row[n:]] for row in a]
    return det, adj


def _cofactor_adjugate(matrix) -> list[list[int]]:
    n = len(matrix)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for r, row in enumerate(map(list, matrix)) if r != i]
            adj[j][i] = (-1) ** (i + j) * bareiss_det(minor)
    return adj


def matmul(a, b):
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def matpow(matrix, e: int):
    n = len(matrix)
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    base = [list(row) for row in matrix]
    while e:
        if e & 1:
            result = matmul(result, base)
        e >>= 1
        if e:
            base = matmul(base, base)
    return result
