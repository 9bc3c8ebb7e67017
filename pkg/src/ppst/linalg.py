"""Field-generic exact linear algebra.

Routines work over any exact field whose elements support +, -, *, /,
truthiness (zero test) and equality: both fractions.Fraction and
RationalExpr qualify.  The caller supplies the field's multiplicative
identity where one must be synthesized.  Everything is small and dense;
dimensions here are at most 2n+1 for the models treated by this package.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, TypeVar

F = TypeVar("F")
Matrix = tuple[tuple[F, ...], ...]


class SingularMatrixError(Exception):
    """Raised when an exact inverse or solve does not exist."""


def _rows(mat: Sequence[Sequence[F]]) -> list[list[F]]:
    return [list(row) for row in mat]


def determinant(mat: Sequence[Sequence[F]]) -> F:
    """Exact determinant by fraction-free-enough Gaussian elimination."""
    m = _rows(mat)
    n = len(m)
    det = None
    sign = 1
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if m[r][k]), None)
        if pivot_row is None:
            zero = m[k][k] - m[k][k]
            return zero
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        pivot = m[k][k]
        det = pivot if det is None else det * pivot
        for r in range(k + 1, n):
            if m[r][k]:
                f = m[r][k] / pivot
                m[r] = [a - f * b for a, b in zip(m[r], m[k])]
    return det if sign > 0 else -det


def invert_matrix(mat: Sequence[Sequence[F]], one: F) -> Matrix:
    """Exact inverse via Gauss-Jordan; raises SingularMatrixError."""
    n = len(mat)
    zero = one - one
    m = _rows(mat)
    inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if m[r][k]), None)
        if pivot_row is None:
            raise SingularMatrixError("matrix is singular over the field")
        m[k], m[pivot_row] = m[pivot_row], m[k]
        inv[k], inv[pivot_row] = inv[pivot_row], inv[k]
        pivot = m[k][k]
        m[k] = [a / pivot for a in m[k]]
        inv[k] = [a / pivot for a in inv[k]]
        for r in range(n):
            if r != k and m[r][k]:
                f = m[r][k]
                m[r] = [a - f * b for a, b in zip(m[r], m[k])]
                inv[r] = [a - f * b for a, b in zip(inv[r], inv[k])]
    return tuple(tuple(row) for row in inv)


def solve(mat: Sequence[Sequence[F]], rhs: Sequence[F], one: F) -> tuple[F, ...]:
    """Solve mat @ x = rhs exactly (square, invertible)."""
    inv = invert_matrix(mat, one)
    out = []
    for row in inv:
        acc = row[0] * rhs[0]
        for j in range(1, len(rhs)):
            acc = acc + row[j] * rhs[j]
        out.append(acc)
    return tuple(out)


def rank(mat: Sequence[Sequence[F]]) -> int:
    m = _rows(mat)
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if m[i][c]), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pivot = m[r][c]
        m[r] = [a / pivot for a in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == nrows:
            break
    return r


def nullspace(mat: Sequence[Sequence[F]], one: F) -> list[tuple[F, ...]]:
    """Basis of the right nullspace, via reduced row echelon form."""
    zero = one - one
    m = _rows(mat)
    nrows, ncols = len(m), len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if m[i][c]), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pivot = m[r][c]
        m[r] = [a / pivot for a in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for c in free:
        v = [zero] * ncols
        v[c] = one
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][c]
        basis.append(tuple(v))
    return basis


def symmetric_signature(mat: Sequence[Sequence[Fraction]]) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of an exact symmetric matrix.

    Congruence diagonalization over Q; Sylvester's law makes the counts
    basis-independent.
    """
    m = _rows(mat)
    n = len(m)
    for k in range(n):
        if not m[k][k]:
            swap = next((j for j in range(k + 1, n) if m[j][j]), None)
            if swap is not None:
                for row in m:
                    row[k], row[swap] = row[swap], row[k]
                m[k], m[swap] = m[swap], m[k]
            else:
                other = next((j for j in range(k + 1, n) if m[k][j]), None)
                if other is None:
                    continue
                for c in range(n):
                    m[k][c] = m[k][c] + m[other][c]
                for row in m:
                    row[k] = row[k] + row[other]
        pivot = m[k][k]
        for j in range(k + 1, n):
            if m[j][k]:
                f = m[j][k] / pivot
                for c in range(n):
                    m[j][c] = m[j][c] - f * m[k][c]
                for row in m:
                    row[j] = row[j] - f * row[k]
    pos = sum(1 for k in range(n) if m[k][k] > 0)
    neg = sum(1 for k in range(n) if m[k][k] < 0)
    return pos, neg, n - pos - neg
