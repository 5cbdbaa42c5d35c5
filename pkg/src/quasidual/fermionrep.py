"""Fermionic realization of the trigonometric Gaudin and dynamical models.

Monomials in k*n anticommuting variables live on a k-by-n grid: variable
(a, i) occupies row a and column i, and the canonical product order runs
down column 1, then column 2, and so on.  Row units e_ab act per column,
column units e_ij act per row, and both go through one signed bit-flip
routine, so every fermionic sign has a single source of truth.

The two commuting Hamiltonian families are realized as exact matrices on
weight subspaces (monomials with prescribed row and column degrees).  The
headline identity: the Gaudin matrix with parameters (alphas, zs) equals
minus the dynamical matrix with parameters (1 - zs, alphas), entry for
entry, on every weight subspace.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .bethe import SectorShape
from .linalg import det

_HALF = Fraction(1, 2)


def _grid_pos(a, i, k):
    return (i - 1) * k + (a - 1)


@dataclass(frozen=True)
class WedgeMonomial:
    """Ordered product of grid variables, stored as a bit mask."""

    k: int
    n: int
    mask: int

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ValueError("empty grid")
        if not 0 <= self.mask < 1 << (self.k * self.n):
            raise ValueError("mask outside the grid")

    @classmethod
    def from_pairs(cls, k, n, pairs):
        mask = 0
        for a, i in pairs:
            if not (1 <= a <= k and 1 <= i <= n):
                raise ValueError("variable index out of range")
            bit = 1 << _grid_pos(a, i, k)
            if mask & bit:
                raise ValueError("repeated variable")
            mask |= bit
        return cls(k, n, mask)

    @property
    def occupied(self):
        k = self.k
        return tuple(
            (p % k + 1, p // k + 1)
            for p in range(k * self.n)
            if self.mask >> p & 1
        )

    @property
    def degree(self):
        return self.mask.bit_count()

    @property
    def row_counts(self):
        return tuple(
            sum(self.mask >> (i * self.k + a) & 1 for i in range(self.n))
            for a in range(self.k)
        )

    @property
    def column_counts(self):
        return tuple(
            sum(self.mask >> (i * self.k + a) & 1 for a in range(self.k))
            for i in range(self.n)
        )

    def _signed_flip(self, a, i, occupied):
        if not (1 <= a <= self.k and 1 <= i <= self.n):
            raise ValueError("variable index out of range")
        p = _grid_pos(a, i, self.k)
        if (self.mask >> p & 1) != occupied:
            return None
        sign = -1 if (self.mask & ((1 << p) - 1)).bit_count() & 1 else 1
        return sign, WedgeMonomial(self.k, self.n, self.mask ^ (1 << p))

    def apply_xi(self, a, i):
        """Left multiplication by the grid variable; None if the slot is full."""
        return self._signed_flip(a, i, 0)

    def apply_derivation(self, a, i):
        """Left derivation in the grid variable; None if the slot is empty."""
        return self._signed_flip(a, i, 1)

    def e_row(self, a, b, i):
        """Row unit e_ab acting in column i: multiply by (a,i) after deriving in (b,i)."""
        hit = self.apply_derivation(b, i)
        if hit is None:
            return None
        sign, mono = hit
        hit = mono.apply_xi(a, i)
        if hit is None:
            return None
        sign2, mono = hit
        return sign * sign2, mono

    def e_col(self, i, j, a):
        """Column unit e_ij acting in row a: multiply by (a,i) after deriving in (a,j)."""
        hit = self.apply_derivation(a, j)
        if hit is None:
            return None
        sign, mono = hit
        hit = mono.apply_xi(a, i)
        if hit is None:
            return None
        sign2, mono = hit
        return sign * sign2, mono


@dataclass(frozen=True)
class WeightSubspace:
    """Span of the grid monomials with fixed row degrees l and column degrees m."""

    shape: SectorShape
    basis: tuple

    @property
    def k(self):
        return len(self.shape.l)

    @property
    def n(self):
        return len(self.shape.m)

    @property
    def dim(self):
        return len(self.basis)


def build_weight_subspace(k, n, l, m, max_dim=256):
    """Enumerate the monomial basis with row margins l and column margins m.

    The basis is sorted by mask, so the order is reproducible.  Raises when
    no monomial fits the margins.
    """
    l = tuple(int(v) for v in l)
    m = tuple(int(v) for v in m)
    if k < 1 or n < 1 or len(l) != k or len(m) != n:
        raise ValueError("profile lengths do not match the grid")
    if k * n > 25:
        raise ValueError("grid too large")
    if min(l) < 0 or min(m) < 0 or max(l) > n or max(m) > k or sum(l) != sum(m):
        raise ValueError("zero weight space")
    masks = []
    columns = [list(combinations(range(k), mi)) for mi in m]
    for pick in product(*columns):
        rows = [0] * k
        mask = 0
        for i, chosen in enumerate(pick):
            for a in chosen:
                rows[a] += 1
                mask |= 1 << (i * k + a)
        if tuple(rows) == l:
            masks.append(mask)
    if not masks:
        raise ValueError("zero weight space")
    if len(masks) > max_dim:
        raise ValueError("weight subspace too large")
    masks.sort()
    return WeightSubspace(SectorShape(l, m), tuple(WedgeMonomial(k, n, v) for v in masks))


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense exact matrix in the basis of a weight subspace; rows index images."""

    entries: tuple

    @property
    def dim(self):
        return len(self.entries)

    def entry(self, r, c):
        return self.entries[r][c]

    def __neg__(self):
        return OperatorMatrix(tuple(tuple(-e for e in row) for row in self.entries))

    def compose(self, other):
        if other.dim != self.dim:
            raise ValueError("matrix sizes do not match")
        d = self.dim
        rows = []
        for r in range(d):
            row = []
            for c in range(d):
                acc = Fraction(0)
                for s in range(d):
                    acc = acc + self.entries[r][s] * other.entries[s][c]
                row.append(acc)
            rows.append(tuple(row))
        return OperatorMatrix(tuple(rows))

    def to_lists(self):
        return [list(row) for row in self.entries]


def _require_distinct(values, label):
    seen = []
    for v in values:
        if any(v == u for u in seen):
            raise ValueError(label)
        seen.append(v)


def _apply_gaudin(i, alphas, zs, mono):
    """Image of one monomial under the i-th Gaudin Hamiltonian, as a dict."""
    k = mono.k
    out = {}

    def add(target, coeff):
        out[target] = out.get(target, 0) + coeff

    bits = [[mono.mask >> _grid_pos(a, j, k) & 1 for j in range(1, mono.n + 1)]
            for a in range(1, k + 1)]
    rows = mono.row_counts
    diag = 0
    for a in range(1, k + 1):
        if bits[a - 1][i - 1]:
            diag = diag + zs[a - 1] - Fraction(rows[a - 1], 2)
    for j in range(1, mono.n + 1):
        if j == i:
            continue
        gap = alphas[i - 1] - alphas[j - 1]
        w_plus = alphas[i - 1] / gap
        w_minus = alphas[j - 1] / gap
        shared = sum(bits[a - 1][i - 1] * bits[a - 1][j - 1] for a in range(1, k + 1))
        if shared:
            diag = diag + (w_plus + w_minus) * Fraction(shared, 2)
        for a in range(1, k + 1):
            for b in range(a + 1, k + 1):
                hit = mono.e_row(b, a, j)
                if hit is not None:
                    sign, step = hit
                    hit = step.e_row(a, b, i)
                    if hit is not None:
                        sign2, target = hit
                        add(target, w_plus * (sign * sign2))
                hit = mono.e_row(a, b, j)
                if hit is not None:
                    sign, step = hit
                    hit = step.e_row(b, a, i)
                    if hit is not None:
                        sign2, target = hit
                        add(target, w_minus * (sign * sign2))
    add(mono, diag)
    return out


def _apply_dynamical(i, zs, alphas, mono):
    """Image of one monomial under the i-th dynamical Hamiltonian, as a dict."""
    k = mono.k
    out = {}

    def add(target, coeff):
        out[target] = out.get(target, 0) + coeff

    cols = mono.column_counts
    diag = -Fraction(cols[i - 1] * cols[i - 1], 2)
    for a in range(1, k + 1):
        if mono.mask >> _grid_pos(a, i, k) & 1:
            diag = diag + zs[a - 1]
    for j in range(1, mono.n + 1):
        if j == i:
            continue
        w = alphas[j - 1] / (alphas[i - 1] - alphas[j - 1])
        diag = diag - w * cols[i - 1]
        for b in range(1, k + 1):
            hit = mono.e_col(j, i, b)
            if hit is None:
                continue
            sign, step = hit
            for a in range(1, k + 1):
                hit2 = step.e_col(i, j, a)
                if hit2 is not None:
                    sign2, target = hit2
                    add(target, w * (sign * sign2))
    for j in range(1, mono.n + 1):
        for b in range(1, k + 1):
            hit = mono.e_col(j, i, b)
            if hit is None:
                continue
            sign, step = hit
            for a in range(1, b):
                hit2 = step.e_col(i, j, a)
                if hit2 is not None:
                    sign2, target = hit2
                    add(target, sign * sign2)
    add(mono, diag)
    return out


def _matrix_on(ws, action):
    index = {mono: r for r, mono in enumerate(ws.basis)}
    dim = len(ws.basis)
    rows = [[Fraction(0)] * dim for _ in range(dim)]
    for c, mono in enumerate(ws.basis):
        for target, coeff in action(mono).items():
            r = index.get(target)
            if r is None:
                raise ValueError("image leaves the weight subspace")
            rows[r][c] = coeff
    return OperatorMatrix(tuple(tuple(row) for row in rows))


def _check_parameters(i, alphas, zs, ws):
    if len(alphas) != ws.n or len(zs) != ws.k:
        raise ValueError("parameter count does not match the grid")
    if not 1 <= i <= ws.n:
        raise ValueError("hamiltonian index out of range")
    _require_distinct(alphas, "coincident parameters")
    _require_distinct(zs, "coincident parameters")


def gaudin_matrix(i, alphas, zs, ws):
    """Exact matrix of the i-th trigonometric Gaudin Hamiltonian on ws.

    alphas weight the columns (one per Hamiltonian index), zs weight the
    rows.  Images are verified to stay inside the weight subspace.
    """
    alphas = tuple(alphas)
    zs = tuple(zs)
    _check_parameters(i, alphas, zs, ws)
    return _matrix_on(ws, lambda mono: _apply_gaudin(i, alphas, zs, mono))


def dynamical_matrix(i, zs, alphas, ws):
    """Exact matrix of the i-th trigonometric dynamical Hamiltonian on ws."""
    alphas = tuple(alphas)
    zs = tuple(zs)
    _check_parameters(i, alphas, zs, ws)
    return _matrix_on(ws, lambda mono: _apply_dynamical(i, zs, alphas, mono))


def eigenvalue_parameters(zs, l):
    """Hamiltonian parameters matching the exact eigenvalues of a sector space.

    For a quasi-polynomial space with exponents zs and degree profile l the
    Gaudin family takes z_a + l_a; the dynamical family takes the reflected
    1 - z_a - l_a, so the duality identity pairs the two.
    """
    zh = tuple(z + la for z, la in zip(zs, l))
    return zh, tuple(1 - z for z in zh)


def _all_weight_subspaces(k, n):
    buckets = {}
    for mask in range(1 << (k * n)):
        mono = WedgeMonomial(k, n, mask)
        key = (mono.row_counts, mono.column_counts)
        buckets.setdefault(key, []).append(mono)
    for (l, m), monos in sorted(buckets.items()):
        yield WeightSubspace(SectorShape(l, m), tuple(monos))


def verify_hamiltonian_duality(k, n, alphas, zs, ws=None):
    """Check that every Gaudin matrix is minus the reflected dynamical matrix.

    With ws=None the check sweeps all weight subspaces of the k-by-n grid;
    otherwise it runs on the given one.  Exact equality, no tolerance.
    """
    alphas = tuple(alphas)
    zs = tuple(zs)
    if ws is not None:
        spaces = [ws]
        if ws.k != k or ws.n != n:
            raise ValueError("weight subspace does not match the grid")
    else:
        if k < 1 or n < 1 or k * n > 16:
            raise ValueError("grid too large")
        spaces = list(_all_weight_subspaces(k, n))
    reflected = tuple(1 - z for z in zs)
    for space in spaces:
        for i in range(1, n + 1):
            gm = gaudin_matrix(i, alphas, zs, space)
            dm = dynamical_matrix(i, reflected, alphas, space)
            if gm != -dm:
                return False
    return True


def spectrum_membership(matrix, value):
    """Whether value is an exact eigenvalue: det(M - value*I) == 0."""
    d = matrix.dim
    shifted = [
        [matrix.entries[r][c] - (value if r == c else 0) for c in range(d)]
        for r in range(d)
    ]
    return det(shifted) == 0
