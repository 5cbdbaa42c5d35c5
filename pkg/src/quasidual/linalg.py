"""Exact linear algebra on small dense matrices (lists of lists).

Determinants use fraction-free Bareiss elimination so they also work for
matrices of Poly entries, where the intermediate divisions are exact in the
polynomial ring.  Rank / echelon / nullspace work over the scalar fields.
"""

from fractions import Fraction

from .scalars import GaussianRational
from .poly import Poly

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _is_poly_matrix(mat):
    return any(isinstance(e, Poly) for row in mat for e in row)


def _poly_of(e):
    if isinstance(e, Poly):
        return e
    return Poly([e if not isinstance(e, int) else Fraction(e)])


def det(mat):
    """Exact determinant; entries may be scalars or Poly (mixed is fine)."""
    n = len(mat)
    if n == 0:
        return _ONE
    if any(len(row) != n for row in mat):
        raise ValueError("determinant of a non-square matrix")
    if _is_poly_matrix(mat):
        m = [[_poly_of(e) for e in row] for row in mat]
        div = lambda a, b: a.exact_div(b)
        zero = Poly()
    else:
        m = [list(row) for row in mat]
        div = lambda a, b: a / b
        zero = _ZERO
    sign = 1
    prev = None
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return zero
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * pivot - m[i][k] * m[k][j]
                m[i][j] = num if prev is None else div(num, prev)
            m[i][k] = zero
        prev = pivot
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


def echelon(mat):
    """Reduced row echelon form over the scalar field.

    Returns (rows, pivot_cols); rows has the same width, zero rows dropped.
    """
    if not mat:
        return [], []
    rows = [list(r) for r in mat]
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = _ONE / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank_profile(mat):
    """Column indices at which the rank of the left-to-right column span grows."""
    _, pivots = echelon(mat)
    return pivots


def nullspace(mat):
    """Basis of the right kernel over the scalar field; list of coefficient lists."""
    if not mat:
        return []
    ncols = len(mat[0])
    rows, pivots = echelon(mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [_ZERO] * ncols
        v[fc] = _ONE
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def solve(mat, rhs):
    """One exact solution of mat @ x = rhs, or None if inconsistent."""
    if not mat:
        return None if any(rhs) else []
    ncols = len(mat[0])
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    rows, pivots = echelon(aug)
    if ncols in pivots:
        return None
    x = [_ZERO] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][ncols]
    return x
