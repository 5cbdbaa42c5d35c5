"""Weight sectors, Bethe root polynomials, and the dual eigenvalue match.

A sector is a pair of integer profiles (l, m): l lists the polynomial
degrees attached to the exponent classes of a quasi-polynomial space V,
m lists the multiplicities of its marked singular points.  The same pair,
read the other way, describes the quasi-exponential space W obtained from
V by composing the two quotient duality maps.

The exact layer computes the trigonometric Gaudin eigenvalues h_i from
residues of the Euler-form coefficients of x^k D_V, the dynamical
eigenvalues g_i from the expansion at infinity of the fundamental
difference operator of W, and checks h_i = -g_i with exact scalars.
The numeric layer cross-checks the Bethe root polynomials against the
Bethe ansatz equations (companion-matrix roots, Newton polish).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import comb

import numpy as np

from .oreops import (
    DifferentialOperator,
    fundamental_difference_operator,
    fundamental_differential_operator,
    t1_map,
    t3_map,
)
from .poly import Poly, RationalFunction
from .scalars import GaussianRational, format_scalar
from .series import rf_series_at_infinity
from .spaces import (
    QuasiExponential,
    QuasiMonomial,
    QuasiExpSpace,
    QuasiPolySpace,
    extract_poly_data,
    discrete_wronskian,
    integer_difference,
    wronskian,
)

_HALF = Fraction(1, 2)


def _prod(polys):
    return reduce(lambda a, b: a * b, polys, Poly([1]))


# ---------------------------------------------------------------------------
# Sector shapes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectorShape:
    """Degree profile l (one entry per exponent class) against multiplicity
    profile m (one entry per marked point), with the balance conditions that
    make the corresponding weight subspace nonzero.
    """

    l: tuple
    m: tuple

    def __post_init__(self):
        l = tuple(int(a) for a in self.l)
        m = tuple(int(a) for a in self.m)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "m", m)
        if not l or not m:
            raise ValueError("empty profile")
        if min(l) < 0 or min(m) < 0:
            raise ValueError("negative entry in profile")
        if sum(l) != sum(m):
            raise ValueError("sector weights do not balance")
        if max(l) > len(m) or max(m) > len(l):
            raise ValueError("empty sector")
        if min(self.lbar) < 0 or min(self.mbar) < 0:
            raise ValueError("empty sector")

    @property
    def lbar(self):
        """Bethe root counts on the polynomial side, levels 0..k-1."""
        k, m = len(self.l), self.m
        return tuple(
            sum(self.l[b] - sum(1 for x in m if x >= b + 1) for b in range(a, k))
            for a in range(k)
        )

    @property
    def mbar(self):
        """Bethe root counts on the exponential side, levels 0..n-1."""
        n, l = len(self.m), self.l
        return tuple(
            sum(self.m[j] - sum(1 for x in l if x >= j + 1) for j in range(i, n))
            for i in range(n)
        )

    @property
    def boxes(self):
        return sum(self.l)

    @staticmethod
    def from_poly_data(data):
        """Shape of a quasi-polynomial space whose data is single-row /
        single-column: each exponent class carries one generator, each
        marked point a full column of exponents."""
        ls = []
        for lam in data.lambdas:
            if lam.length != 1:
                raise ValueError("space incompatible with shape")
            ls.append(lam.first)
        ms = []
        for mu in data.mus:
            if mu.first != 1:
                raise ValueError("space incompatible with shape")
            ms.append(mu.length)
        return SectorShape(tuple(ls), tuple(ms))

    @staticmethod
    def from_difference_data(data):
        """Shape of a quasi-exponential space with single-row multiplicity
        partitions and single-column class partitions."""
        ms = []
        for mu in data.mus:
            if mu.length != 1:
                raise ValueError("space incompatible with shape")
            ms.append(mu.first)
        ls = []
        for lam in data.lambdas:
            if lam.first != 1:
                raise ValueError("space incompatible with shape")
            ls.append(lam.length)
        return SectorShape(tuple(ls), tuple(ms))


# ---------------------------------------------------------------------------
# Bethe root polynomials, polynomial side
# ---------------------------------------------------------------------------


def _poly_side_pieces(v, shape):
    """Generators of v in data order plus the level polynomials T_b."""
    data = v.data
    if data is None:
        raise ValueError("quasi-polynomial data required")
    k, n = len(shape.l), len(shape.m)
    if len(data.zs) != k or len(data.alphas) != n:
        raise ValueError("space incompatible with shape")
    for lam, l in zip(data.lambdas, shape.l):
        if lam.length != 1 or lam.first != l:
            raise ValueError("space incompatible with shape")
    for mu, m in zip(data.mus, shape.m):
        if mu.first != 1 or mu.length != m:
            raise ValueError("space incompatible with shape")
    by_exp = {}
    for g in v.generators:
        by_exp.setdefault(g.exponent, []).append(g)
    gens = []
    for z, l in zip(data.zs, shape.l):
        match = by_exp.get(z)
        if match is None or len(match) != 1 or match[0].poly.degree != l:
            raise ValueError("space incompatible with shape")
        gens.append(match[0])
    if len(v.generators) != k:
        raise ValueError("space incompatible with shape")
    ts = [
        Poly.from_roots([a for a, m in zip(data.alphas, shape.m) if m >= b + 1])
        for b in range(k)
    ]
    return gens, ts


def y_polys_from_V(v, shape):
    """Monic Bethe root polynomials y_1..y_{k-1} of a quasi-polynomial space.

    y_a is the Wronskian of the generators above level a divided by the
    level polynomials; the division must be exact with degree lbar[a].
    """
    gens, ts = _poly_side_pieces(v, shape)
    k = len(shape.l)
    out = []
    for a in range(1, k):
        wr = wronskian([gens[b] for b in range(k - 1, a - 1, -1)])
        num = wr.poly
        den = _prod(ts[a:])
        q, r = divmod(num, den)
        if not r.is_zero() or q.degree != shape.lbar[a]:
            raise ValueError("space incompatible with shape")
        out.append(q.monic())
    return tuple(out)


# ---------------------------------------------------------------------------
# Bethe root polynomials, exponential side
# ---------------------------------------------------------------------------


def _difference_side_pieces(w, shape):
    """Generators of w in data order plus level polynomials T_1..T_n.

    The class exponents of w are the negated exponents of the dual
    quasi-polynomial space, so T_i has roots zs[a] - l_a + i."""
    data = w.data
    if data is None:
        raise ValueError("quasi-exponential data required")
    k, n = len(shape.l), len(shape.m)
    if len(data.zs) != k or len(data.alphas) != n:
        raise ValueError("space incompatible with shape")
    for lam, l in zip(data.lambdas, shape.l):
        if lam.first != 1 or lam.length != l:
            raise ValueError("space incompatible with shape")
    for mu, m in zip(data.mus, shape.m):
        if mu.length != 1 or mu.first != m:
            raise ValueError("space incompatible with shape")
    by_base = {}
    for g in w.generators:
        by_base.setdefault(g.base, []).append(g)
    gens = []
    for alpha, m in zip(data.alphas, shape.m):
        match = by_base.get(alpha)
        if match is None or len(match) != 1 or match[0].poly.degree != m:
            raise ValueError("space incompatible with shape")
        gens.append(match[0])
    if len(w.generators) != n:
        raise ValueError("space incompatible with shape")
    ts = [
        Poly.from_roots(
            [z - l + (i + 1) for z, l in zip(data.zs, shape.l) if l >= i + 1]
        )
        for i in range(n)
    ]
    return gens, ts


def _difference_y_raw(gens, ts, shape):
    """Unnormalized y_0..y_n; exact divisions, degrees checked."""
    n = len(shape.m)
    ys = []
    for i in range(n):
        wr = discrete_wronskian([gens[j] for j in range(n - 1, i - 1, -1)])
        q, r = divmod(wr.poly, _prod(ts[i:]))
        if not r.is_zero() or q.degree != shape.mbar[i]:
            raise ValueError("space incompatible with shape")
        ys.append(q)
    ys.append(Poly([1]))
    return ys


def u_polys_from_W(w, shape):
    """Monic Bethe root polynomials of a quasi-exponential space.

    Returns (ys, us): ys[i] is monic y_i for i = 0..n-1 and
    us[i] = y_i(x + i/2), the symmetrized form whose roots enter the
    XXX-type Bethe ansatz equations.
    """
    gens, ts = _difference_side_pieces(w, shape)
    raw = _difference_y_raw(gens, ts, shape)
    ys = tuple(y.monic() for y in raw[: len(shape.m)])
    us = tuple(y.shift(Fraction(i, 2)) for i, y in enumerate(ys))
    return ys, us


def fertility_check(w, shape):
    """Exact two-term Wronskian identity tying y_{i-1}, y_i, y_{i+1}.

    For each inner level the swap of the two lowest remaining generators
    must reproduce the level factor exactly; returns True when every level
    passes.
    """
    gens, ts = _difference_side_pieces(w, shape)
    data = w.data
    raw = _difference_y_raw(gens, ts, shape)
    n = len(shape.m)
    for i in range(1, n):
        sub = [gens[j] for j in range(n - 1, i, -1)] + [gens[i - 1]]
        wr = discrete_wronskian(sub)
        q, r = divmod(wr.poly, _prod(ts[i:]))
        if not r.is_zero():
            raise ValueError("space incompatible with shape")
        ytil = q * data.alphas[i]
        lhs = (raw[i] * ytil.shift(1)) * (data.alphas[i - 1] / data.alphas[i]) - raw[
            i
        ].shift(1) * ytil
        ttil = Poly.from_roots(
            [z for z, l in zip(data.zs, shape.l) if l == i]
        )
        rhs = ttil * raw[i - 1] * raw[i + 1].shift(1)
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# Expansion of a difference operator at infinity
# ---------------------------------------------------------------------------


def expansion_at_infinity(op, depth=2):
    """Coefficient polynomials E_0..E_depth with
    op = sum_a x^(-a) E_a(T) + O(x^(-depth-1)).

    Requires forward shifts and coefficients bounded at infinity.
    """
    if op.direction != 1 and op.order > 0:
        raise ValueError("forward-shift operator required")
    n = op.order
    rows = []
    for j in range(n + 1):
        rf = op.coeff(n - j)
        if not rf.is_zero() and rf.degree > 0:
            raise ValueError("coefficients unbounded at infinity")
        ser = rf_series_at_infinity(rf, -depth)
        rows.append([ser.coeff(-a) for a in range(depth + 1)])
    return tuple(
        Poly([rows[n - p][a] for p in range(n + 1)]) for a in range(depth + 1)
    )


# ---------------------------------------------------------------------------
# Eigenvalues
# ---------------------------------------------------------------------------


def _gaudin_h_all(v, alphas, ms):
    """h_i for every marked point, from residues of the Euler form of
    x^k D_V at the points; a point of multiplicity zero contributes 0."""
    k = v.dim
    d = fundamental_differential_operator(v)
    xk = DifferentialOperator.from_terms({0: Poly.x(k)}, "ddx")
    eul = (xk * d).to_euler()
    b1 = eul.coeff(k - 1)
    b2 = eul.coeff(k - 2)
    f = b1 * b1 * _HALF - b2
    out = []
    for alpha, m in zip(alphas, ms):
        res = f.residue_at(alpha)
        out.append(res / alpha + Fraction(m * m, 2) - m)
    return out


def _marks_from_poly_side(v, alphas, ms):
    if alphas is None:
        data = v.data
        if data is None:
            raise ValueError("quasi-polynomial data required")
        alphas = list(data.alphas)
        ms = []
        for mu in data.mus:
            if mu.first != 1:
                raise ValueError("space incompatible with shape")
            ms.append(mu.length)
    elif ms is None:
        raise ValueError("multiplicities required alongside explicit points")
    return list(alphas), list(ms)


def gaudin_eigenvalue_h(v, i, alphas=None, ms=None):
    """Exact Gaudin-side eigenvalue at the i-th marked point (1-based).

    Marked points default to the singular data of v; pass alphas/ms
    explicitly to include extra points of multiplicity zero.
    """
    alphas, ms = _marks_from_poly_side(v, alphas, ms)
    if not 1 <= i <= len(alphas):
        raise ValueError("marked point index out of range")
    return _gaudin_h_all(v, alphas, ms)[i - 1]


def _dynamical_g_all(w, alphas, ms):
    """g_i for every base, from the expansion at infinity of the
    fundamental difference operator of w."""
    s = fundamental_difference_operator(w)
    n = len(alphas)
    if s.order != n:
        raise ValueError("space incompatible with shape")
    e0, e1, e2 = expansion_at_infinity(s, 2)
    if e0 != Poly.from_roots(alphas):
        raise ValueError("expansion at infinity violates the leading identity")
    expected = Poly([])
    for j in range(n):
        others = [alphas[i] for i in range(n) if i != j]
        expected = expected + Poly.from_roots(others) * (-(alphas[j] * ms[j]))
    if e1 != expected:
        raise ValueError("expansion at infinity violates the subleading identity")
    out = []
    for i in range(n):
        res = RationalFunction(e2, e0).residue_at(alphas[i])
        corr = 0
        for j in range(n):
            if j != i:
                corr = corr + alphas[j] * ms[i] * ms[j] / (alphas[i] - alphas[j])
        out.append(-(res / alphas[i]) + corr - Fraction(ms[i] * ms[i], 2))
    return out


def _marks_from_difference_side(w, alphas, ms):
    if alphas is None:
        data = w.data
        if data is None:
            raise ValueError("quasi-exponential data required")
        alphas = list(data.alphas)
        ms = []
        for mu in data.mus:
            if mu.length != 1:
                raise ValueError("space incompatible with shape")
            ms.append(mu.first)
    elif ms is None:
        raise ValueError("multiplicities required alongside explicit bases")
    return list(alphas), list(ms)


def dynamical_eigenvalue_g(w, i, alphas=None, ms=None):
    """Exact dynamical-side eigenvalue at the i-th base (1-based).

    Bases default to the data of w; pass alphas/ms explicitly for spaces
    extended by bare exponentials (multiplicity-zero bases).
    """
    alphas, ms = _marks_from_difference_side(w, alphas, ms)
    if not 1 <= i <= len(alphas):
        raise ValueError("base index out of range")
    return _dynamical_g_all(w, alphas, ms)[i - 1]


# ---------------------------------------------------------------------------
# Reduction and extension across zero entries of the profile
# ---------------------------------------------------------------------------


def reduce_V(v):
    """Remove the exponent classes generated by a bare power x^z.

    Each degree-0 class is divided out by the first-order Euler factor
    vanishing on it; the remaining generators keep their degrees.  The
    result carries freshly extracted data.
    """
    classes = v.classes()
    for polys in classes.values():
        if len(polys) != 1:
            raise ValueError("one generator per class required")
    zeros = [z for z, polys in classes.items() if polys[0].degree == 0]
    if not zeros:
        return v if v.data is not None else v.with_data(extract_poly_data(v))
    gens = []
    for z, polys in classes.items():
        q = polys[0]
        if q.degree == 0:
            continue
        d = q.degree
        for z0 in zeros:
            q = Poly.x(1) * q.derivative() + q * (z - z0)
            if q.degree != d:
                raise ValueError("degenerate reduction")
        gens.append(QuasiMonomial(z, q))
    if not gens:
        raise ValueError("nothing left after reduction")
    red = QuasiPolySpace(gens)
    return red.with_data(extract_poly_data(red))


def extend_V(v, extra_zs):
    """Adjoin bare power classes x^z: the inverse of reduce_V.

    Each kept generator x^w q is replaced by x^w q~ with
    x q~' + (w - z) q~ = q for every new exponent z, so the reduction of
    the result is v again and the marked points are unchanged.  The result
    has no attached data (degree-0 classes are not representable in data).
    """
    extra_zs = tuple(extra_zs)
    if not extra_zs:
        return v
    exponents = [g.exponent for g in v.generators]
    for idx, z in enumerate(extra_zs):
        for other in list(exponents) + list(extra_zs[:idx]):
            if integer_difference(z, other) is not None:
                raise ValueError("classes collide")
    gens = []
    for g in v.generators:
        q = g.poly
        for z in extra_zs:
            q = Poly([q[s] / (s + g.exponent - z) for s in range(q.degree + 1)])
        gens.append(QuasiMonomial(g.exponent, q))
    gens.extend(QuasiMonomial(z, Poly([1])) for z in extra_zs)
    return QuasiPolySpace(gens)


def _shift_inverse_poly(alpha, p, beta):
    """The unique p~ of the same degree with alpha*p~(x+1) - beta*p~(x) = p."""
    n = p.degree
    at = {}
    for s in range(n, -1, -1):
        acc = p[s]
        for j in range(s + 1, n + 1):
            acc = acc - at[j] * (comb(j, s) * alpha)
        at[s] = acc / (alpha - beta)
    out = Poly([at[s] for s in range(n + 1)])
    if out.shift(1) * alpha - out * beta != p:
        raise ValueError("inverse shift recursion failed")
    return out


def extend_W(w, new_bases):
    """Adjoin bare exponentials: the closure of w under the inverse of the
    shift factors T - beta, one per new base.

    Existing generators alpha^x p are replaced by alpha^x p~ with p~
    obtained by the inverse-shift recursion through every new base; each
    new base contributes the exponential beta^x itself.  The result has no
    attached data (zero-multiplicity bases are not representable in data).
    """
    new_bases = tuple(new_bases)
    if not new_bases:
        return w
    existing = list(w.classes())
    for idx, beta in enumerate(new_bases):
        if beta == 0:
            raise ValueError("zero base")
        if any(beta == b for b in existing) or any(
            beta == other for other in new_bases[:idx]
        ):
            raise ValueError("duplicate base")
    gens = []
    for g in w.generators:
        p = g.poly
        for beta in new_bases:
            p = _shift_inverse_poly(g.base, p, beta)
        gens.append(QuasiExponential(g.base, p))
    gens.extend(QuasiExponential(beta, Poly([1])) for beta in new_bases)
    return QuasiExpSpace(gens)


# ---------------------------------------------------------------------------
# The duality check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenvalueReport:
    """Exact eigenvalues of both sides and the per-index match h_i = -g_i."""

    h: tuple
    g: tuple
    duality_ok: tuple

    @property
    def passed(self):
        return all(self.duality_ok)

    def to_json(self):
        return {
            "h": [format_scalar(x) for x in self.h],
            "g": [format_scalar(x) for x in self.g],
            "duality_ok": [bool(b) for b in self.duality_ok],
        }


def verify_h_eq_minus_g(v, shape, extra_alphas=()):
    """Exact eigenvalue duality check between v and its composed dual.

    Zero entries of shape.l are removed from v by reduce_V before the
    duality maps; zero entries of shape.m receive the bases listed in
    extra_alphas (in order) and the dual space is extended accordingly.
    """
    k, n = len(shape.l), len(shape.m)
    if v.dim != k:
        raise ValueError("space incompatible with shape")
    if any(l == 0 for l in shape.l):
        v_red = reduce_V(v)
    else:
        v_red = v if v.data is not None else v.with_data(extract_poly_data(v))
    data = v_red.data
    if [lam.first for lam in data.lambdas] != [l for l in shape.l if l > 0]:
        raise ValueError("space incompatible with shape")
    if [mu.length for mu in data.mus] != [m for m in shape.m if m > 0] or any(
        mu.first != 1 for mu in data.mus
    ):
        raise ValueError("space incompatible with shape")
    extra_alphas = tuple(extra_alphas)
    if len(extra_alphas) != sum(1 for m in shape.m if m == 0):
        raise ValueError("wrong number of extension bases")
    it_data = iter(data.alphas)
    it_extra = iter(extra_alphas)
    marks = [next(it_data) if m > 0 else next(it_extra) for m in shape.m]
    for i in range(n):
        if marks[i] == 0:
            raise ValueError("zero base")
        for j in range(i + 1, n):
            if marks[i] == marks[j]:
                raise ValueError("duplicate base")
    hs = _gaudin_h_all(v, marks, shape.m)
    w = t1_map(t3_map(v_red))
    if extra_alphas:
        w = extend_W(w, extra_alphas)
    gs = _dynamical_g_all(w, marks, shape.m)
    ok = tuple(bool(h == -g) for h, g in zip(hs, gs))
    return EigenvalueReport(tuple(hs), tuple(gs), ok)


# ---------------------------------------------------------------------------
# Numeric Bethe equation residuals
# ---------------------------------------------------------------------------


def _to_complex(v):
    if isinstance(v, GaussianRational):
        return complex(float(v.re), float(v.im))
    return complex(float(v), 0.0)


def _numeric_roots(p):
    """Roots of an exact polynomial: companion matrix plus Newton polish."""
    deg = p.degree
    if deg <= 0:
        return []
    cs = np.array([_to_complex(p[deg - j]) for j in range(deg + 1)])
    dcs = np.polyder(cs)
    roots = np.roots(cs)
    scale = max(abs(c) for c in cs)
    out = []
    for r in roots:
        r = complex(r)
        for _ in range(16):
            fp = np.polyval(dcs, r)
            if fp == 0:
                break
            step = np.polyval(cs, r) / fp
            r -= step
            if abs(step) < 1e-15 * (1 + abs(r)):
                break
        if abs(np.polyval(cs, r)) > 1e-8 * scale * (1 + abs(r)) ** deg:
            raise ValueError("numeric root refinement failed")
        out.append(r)
    return out


def _separated(points, others, thr):
    return all(abs(p - q) > thr for p in points for q in others)


def _pairwise_distinct(points, thr):
    return all(
        abs(points[i] - points[j]) > thr
        for i in range(len(points))
        for j in range(i + 1, len(points))
    )


@dataclass(frozen=True)
class GaudinBAEReport:
    """Numeric residual of the Gaudin-side Bethe ansatz equations plus the
    gap between the master-function eigenvalue formula and the exact h."""

    max_residual: float
    eigenvalue_gap: float
    admissible: bool
    tol: float

    @property
    def passed(self):
        return (
            self.admissible
            and self.max_residual <= self.tol
            and self.eigenvalue_gap <= self.tol
        )

    def to_json(self):
        return {
            "max_residual": self.max_residual,
            "eigenvalue_gap": self.eigenvalue_gap,
            "admissible": self.admissible,
            "tol": self.tol,
            "passed": self.passed,
        }


def gaudin_bae_residual(v, shape, tol=1e-9):
    """Numeric check that the roots of the y polynomials satisfy the
    Gaudin-side Bethe ansatz equations of the sector.

    The equations are evaluated at the exponents of v itself; the
    eigenvalue gap compares the critical-point eigenvalue formula against
    the exact residue computation.
    """
    data = v.data
    ys = y_polys_from_V(v, shape)
    k, n = len(shape.l), len(shape.m)
    levels = [[]]
    for a in range(1, k):
        levels.append(_numeric_roots(ys[a - 1]))
    levels.append([])
    alphas = [_to_complex(a) for a in data.alphas]
    zs = [_to_complex(z) for z in data.zs]
    ms = shape.m
    pool = [abs(x) for lev in levels for x in lev] + [abs(a) for a in alphas]
    thr = 1e-8 * (1 + max(pool, default=0.0))
    admissible = True
    for a in range(1, k):
        lev = levels[a]
        admissible = admissible and _pairwise_distinct(lev, thr)
        admissible = admissible and _separated(lev, levels[a + 1], thr)
        admissible = admissible and _separated(lev, alphas + [0.0], thr)
    residual = 0.0
    if admissible:
        for a in range(1, k):
            for b, t in enumerate(levels[a]):
                val = 0.0
                for i in range(n):
                    if ms[i] == a:
                        val -= 1 / (t - alphas[i])
                val += (zs[a] - zs[a - 1] + 1) / t
                for bp, tp in enumerate(levels[a]):
                    if bp != b:
                        val += 2 / (t - tp)
                for tp in levels[a + 1]:
                    val -= 1 / (t - tp)
                for tp in levels[a - 1]:
                    val -= 1 / (t - tp)
                residual = max(residual, abs(val))
    else:
        residual = float("inf")
    hs = _gaudin_h_all(v, data.alphas, ms)
    gap = 0.0
    for i in range(n):
        mi = ms[i]
        val = complex(0.0)
        for t in levels[mi]:
            val += alphas[i] / (t - alphas[i])
        val += sum(zs[a] for a in range(mi))
        for j in range(n):
            if j != i:
                val += alphas[i] * min(mi, ms[j]) / (alphas[i] - alphas[j])
        val += mi / 2
        gap = max(gap, abs(val - _to_complex(hs[i])))
    return GaudinBAEReport(residual, gap, admissible, tol)


@dataclass(frozen=True)
class XXXBAEReport:
    """Numeric residual of the XXX-type Bethe ansatz equations."""

    max_residual: float
    tol: float

    @property
    def passed(self):
        return self.max_residual <= self.tol

    def to_json(self):
        return {
            "max_residual": self.max_residual,
            "tol": self.tol,
            "passed": self.passed,
        }


def xxx_bae_residual(w, shape, tol=1e-9):
    """Numeric check that the roots of the u polynomials satisfy the
    XXX-type Bethe ansatz equations of the sector.

    Raises if the root configuration is not XXX-admissible (multiple or
    colliding roots).
    """
    data = w.data
    ys, us = u_polys_from_W(w, shape)
    k, n = len(shape.l), len(shape.m)
    levels = [_numeric_roots(u) for u in us]
    levels.append([])
    alphas = [_to_complex(a) for a in data.alphas]
    zcheck = [_to_complex(z) - l / 2 + 0.5 for z, l in zip(data.zs, shape.l)]
    pool = [abs(x) for lev in levels for x in lev] + [abs(z) for z in zcheck]
    thr = 1e-8 * (1 + max(pool, default=0.0))
    for i in range(1, n):
        lev = levels[i]
        ok = _pairwise_distinct(lev, thr)
        ok = ok and _separated(lev, [x - 0.5 for x in levels[i - 1]], thr)
        ok = ok and _separated(lev, [x - 0.5 for x in levels[i + 1]], thr)
        ttil = [
            _to_complex(z) - i / 2 for z, l in zip(data.zs, shape.l) if l == i
        ]
        ok = ok and _separated(lev, ttil, thr)
        ok = ok and _separated(lev, [x - 1 for x in lev], thr)
        if not ok:
            raise ValueError("space is not XXX-admissible")
    residual = 0.0
    for i in range(1, n):
        lhs = alphas[i] / alphas[i - 1]
        for b, s in enumerate(levels[i]):
            r = complex(1.0)
            for a in range(k):
                if shape.l[a] == i:
                    zc = zcheck[a]
                    r *= (s - zc + 0.5) / (s - zc - 0.5)
            for j in (i - 1, i + 1):
                for sp in levels[j]:
                    r *= (s - sp + 0.5) / (s - sp - 0.5)
            for bp, sp in enumerate(levels[i]):
                if bp != b:
                    r *= (s - sp - 1) / (s - sp + 1)
            residual = max(residual, abs(r / lhs - 1))
    return XXXBAEReport(residual, tol)


# ---------------------------------------------------------------------------
# Ready-made sector spaces
# ---------------------------------------------------------------------------


def make_squarefree_space(alphas, z):
    """One class x^z q with q vanishing simply at each marked point."""
    q = Poly.from_roots(alphas)
    v = QuasiPolySpace([QuasiMonomial(z, q)])
    return v.with_data(extract_poly_data(v))


def make_rank2_space(alpha1, alpha2, mix, z1):
    """Two linear classes with marked points alpha1, alpha2: the unique
    rational family with one Bethe root on each side.

    mix parametrizes the rational solutions of the discriminant condition;
    the class offset w is derived from it and must come out non-integer.
    """
    if alpha1 == alpha2 or alpha1 == 0 or alpha2 == 0 or mix == 0:
        raise ValueError("degenerate parameters")
    p = alpha1 * alpha2
    s = (mix + 4 * p / mix) / 2
    w = (4 * p / mix - mix) / (2 * (alpha1 - alpha2))
    if w == 0 or w + 1 == 0:
        raise ValueError("degenerate parameters")
    c1 = (-w * (alpha1 + alpha2) + s) / (2 * (w + 1))
    if c1 == 0:
        raise ValueError("degenerate parameters")
    c2 = p / c1
    z2 = z1 + w
    if integer_difference(z1, z2) is not None:
        raise ValueError("classes collide")
    v = QuasiPolySpace(
        [QuasiMonomial(z1, Poly([c1, 1])), QuasiMonomial(z2, Poly([c2, 1]))]
    )
    return v.with_data(extract_poly_data(v))


def make_shared_root_space(gamma, delta, z1, z2):
    """Shared linear factor x - gamma across a linear and a quadratic class,
    giving one double marked point and one simple one."""
    w = z2 - z1
    if integer_difference(z1, z2) is not None:
        raise ValueError("classes collide")
    if gamma == 0 or delta == 0:
        raise ValueError("degenerate parameters")
    if w * delta == gamma * (w + 1):
        raise ValueError("marked points collide")
    v = QuasiPolySpace(
        [
            QuasiMonomial(z1, Poly([-gamma, 1])),
            QuasiMonomial(z2, Poly.from_roots([gamma, delta])),
        ]
    )
    return v.with_data(extract_poly_data(v))


def make_block_space(zs, roots):
    """Every class shares one squarefree polynomial: each of its roots is a
    marked point of full multiplicity."""
    phi = Poly.from_roots(roots)
    v = QuasiPolySpace([QuasiMonomial(z, phi) for z in zs])
    return v.with_data(extract_poly_data(v))


def _rand_frac(rng, num=6, dens=(1, 2, 3)):
    return Fraction(rng.randint(-num, num), rng.choice(dens))


def random_sector_space(rng, max_dim=3, max_boxes=4):
    """Rejection-sample a sector space with rational data.

    Draws from the ready-made families plus a free lottery over random
    monic generators; a draw is kept when data extraction succeeds and the
    resulting shape fits the size bounds.  Raises after 50 failed draws.
    """
    for _ in range(50):
        family = rng.choice(["squarefree", "rank2", "shared", "block", "free"])
        try:
            if family == "squarefree":
                count = rng.randint(1, max_boxes)
                alphas = rng.sample(range(1, 7), count)
                alphas = [Fraction(a) * rng.choice((-1, 1)) for a in alphas]
                if len({a for a in alphas}) != count:
                    continue
                v = make_squarefree_space(alphas, _rand_frac(rng, dens=(2, 3, 5)))
            elif family == "rank2":
                a1 = Fraction(rng.randint(1, 5)) * rng.choice((-1, 1))
                a2 = Fraction(rng.randint(1, 5)) * rng.choice((-1, 1))
                v = make_rank2_space(
                    a1, a2, _rand_frac(rng, dens=(1, 2, 3)), _rand_frac(rng)
                )
            elif family == "shared":
                z1 = _rand_frac(rng, dens=(2, 3, 5))
                v = make_shared_root_space(
                    Fraction(rng.randint(1, 6)) * rng.choice((-1, 1)),
                    Fraction(rng.randint(1, 6)) * rng.choice((-1, 1)),
                    z1,
                    z1 + _rand_frac(rng, dens=(2, 3, 5)),
                )
            elif family == "block":
                count = rng.randint(1, min(3, max_dim))
                zs = [_rand_frac(rng, dens=(2, 3, 5, 7)) for _ in range(count)]
                nroots = rng.randint(1, max(1, max_boxes // count))
                roots = [Fraction(a) * rng.choice((-1, 1)) for a in rng.sample(range(1, 7), nroots)]
                v = make_block_space(zs, roots)
            else:
                k = rng.randint(1, min(2, max_dim))
                gens = []
                for _ in range(k):
                    deg = rng.randint(1, 2)
                    coeffs = [_rand_frac(rng, 4, (1, 2)) for _ in range(deg)] + [1]
                    gens.append(
                        QuasiMonomial(_rand_frac(rng, dens=(2, 3, 5)), Poly(coeffs))
                    )
                v = QuasiPolySpace(gens)
                v = v.with_data(extract_poly_data(v))
            shape = SectorShape.from_poly_data(v.data)
        except (ValueError, ZeroDivisionError):
            continue
        if len(shape.l) > max_dim or len(shape.m) > max_dim:
            continue
        if shape.boxes > max_boxes:
            continue
        return v, shape
    raise ValueError("no admissible draw after 50 attempts")
