"""Exact linear algebra over Q and over symbolic rational functions.

Matrices are plain lists of rows.  Rational-number routines (rank, kernels,
containment) drive every pointwise verdict in the package and must be exact:
rank uses fraction-free Bareiss elimination on denominator-cleared integer
rows, kernels come from a reduced row echelon form over Fraction.  The
symbolic routines (inversion, products) run Gauss-Jordan over ScalarExpr with
exact zero tests.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Sequence

from .coeff import ScalarExpr
from .errors import PlecticError

Vector = List[Fraction]
Matrix = List[List[Fraction]]


class SingularMatrixError(PlecticError):
    """Symbolic matrix has no inverse (no nonzero pivot found)."""


class DimensionMismatchError(PlecticError):
    pass


def _as_integer_rows(rows: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        scale = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * scale) for x in row])
    return out


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q via fraction-free (Bareiss) elimination."""
    m = _as_integer_rows(rows)
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
    return r


def rref(rows: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form over Fraction; returns (rows, pivot_columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def kernel_basis(rows: Sequence[Sequence[Fraction]], ncols: int = None) -> List[Vector]:
    """Exact basis of the right null space {v : M v = 0}.

    Basis size always equals ncols - rank(M); basis vectors carry a 1 in
    their defining free coordinate.
    """
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for an empty row list")
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(i == j) for j in range(ncols)] for i in range(ncols)]
    m, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def subspace_contained(span_a: Sequence[Vector], span_b: Sequence[Vector]) -> bool:
    """True iff every vector of span_a lies in span(span_b), decided exactly."""
    dims = {len(v) for v in list(span_a) + list(span_b)}
    if len(dims) > 1:
        raise DimensionMismatchError(f"ambient dimensions differ: {sorted(dims)}")
    base = [list(v) for v in span_b]
    r_b = rank(base)
    for a in span_a:
        if rank(base + [list(a)]) != r_b:
            return False
    return True


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]):
    """Matrix product; works for Fraction or ScalarExpr entries."""
    if not a or not b:
        return []
    n, k, mcols = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(mcols):
            acc = a[i][0] * b[0][j]
            for t in range(1, k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def invert(rows: Sequence[Sequence[ScalarExpr]]) -> List[List[ScalarExpr]]:
    """Exact inverse of a square ScalarExpr matrix via Gauss-Jordan.

    Raises SingularMatrixError when elimination finds a column without a
    symbolically nonzero pivot (determinant is the zero expression).
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatchError("matrix is not square")
    if n == 0:
        return []
    variables = rows[0][0].variables
    one = ScalarExpr.one(variables)
    zero = ScalarExpr.zero(variables)
    m = [list(r) for r in rows]
    inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if not m[i][c].is_zero()), None)
        if pivot_row is None:
            raise SingularMatrixError(f"no nonzero pivot in column {c}")
        m[c], m[pivot_row] = m[pivot_row], m[c]
        inv[c], inv[pivot_row] = inv[pivot_row], inv[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        inv[c] = [x / p for x in inv[c]]
        for i in range(n):
            if i == c or m[i][c].is_zero():
                continue
            f = m[i][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
            inv[i] = [a - f * b for a, b in zip(inv[i], inv[c])]
    return inv
