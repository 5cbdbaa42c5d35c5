"""Spaces of quasi-exponentials and quasi-polynomials.

A quasi-exponential is a^x*p(x) with a != 0; a quasi-polynomial is x^z*q(x).
The exponential/power tags a^x and x^z are purely formal: they are never
evaluated, and every question about vanishing, exponents, or Wronskians is
reduced to exact linear algebra over the coefficient field after factoring
the tags out row by row.

The module computes discrete (shift) and ordinary (derivative) Wronskians,
exponent sequences at finite points, and the data records
(alphas, mus; zs, lambdas) attached to such spaces.
"""

from dataclasses import dataclass
from fractions import Fraction

from .scalars import GaussianRational, format_scalar
from .poly import Poly, binomial_series, format_poly, linear_roots
from .linalg import det, echelon, rank_profile, solve

_ZERO = Fraction(0)
_ONE = Fraction(1)


def is_integer(v):
    if isinstance(v, int):
        return True
    if isinstance(v, Fraction):
        return v.denominator == 1
    if isinstance(v, GaussianRational):
        return not v.im and v.re.denominator == 1
    return False


def integer_difference(a, b):
    """a - b as a Python int if it is one, else None."""
    d = a - b
    if is_integer(d):
        if isinstance(d, GaussianRational):
            d = d.re
        return int(d)
    return None


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------


class Partition:
    """Weakly decreasing nonnegative integers, trailing zeros trimmed."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"not weakly decreasing: {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"negative part: {parts}")
        object.__setattr__(self, "parts", tuple(parts))

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    def part(self, i):
        """1-indexed part, zero beyond the last."""
        if i < 1:
            raise IndexError("parts are 1-indexed")
        return self.parts[i - 1] if i <= len(self.parts) else 0

    @property
    def size(self):
        return sum(self.parts)

    @property
    def first(self):
        return self.parts[0] if self.parts else 0

    @property
    def length(self):
        """Number of nonzero parts."""
        return len(self.parts)

    def conjugate(self):
        if not self.parts:
            return self
        return Partition(
            sum(1 for p in self.parts if p >= i) for i in range(1, self.parts[0] + 1)
        )

    def __bool__(self):
        return bool(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        if isinstance(other, (tuple, list)):
            return self == Partition(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return "(" + ",".join(str(p) for p in self.parts) + ")" if self.parts else "()"

    def to_exponents(self, total):
        """e_i = total + part(i) - i for i = 1..total; strictly decreasing."""
        if total < len(self.parts):
            raise ValueError("total smaller than number of parts")
        return tuple(total + self.part(i) - i for i in range(1, total + 1))

    @staticmethod
    def from_exponents(exponents, total=None):
        """Inverse of to_exponents: part_i = e_i - total + i."""
        exponents = list(exponents)
        if total is None:
            total = len(exponents)
        if len(exponents) != total:
            raise ValueError("exponent sequence has wrong length")
        return Partition(e - total + i for i, e in enumerate(exponents, start=1))


# ---------------------------------------------------------------------------
# Quasi-exponentials and quasi-monomials
# ---------------------------------------------------------------------------


class QuasiExponential:
    """The function base^x * poly(x); the zero poly encodes the zero function."""

    __slots__ = ("base", "poly")

    def __init__(self, base, poly):
        if isinstance(base, int):
            base = Fraction(base)
        if not base:
            raise ValueError("base must be nonzero")
        if not isinstance(poly, Poly):
            poly = Poly([poly if not isinstance(poly, int) else Fraction(poly)])
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "poly", poly)

    def __setattr__(self, name, value):
        raise AttributeError("QuasiExponential is immutable")

    def is_zero(self):
        return self.poly.is_zero()

    def shift(self, k=1):
        """T^k applied to the function (k may be negative)."""
        return QuasiExponential(self.base, self.base**k * self.poly.shift(k))

    def scale(self, c):
        return QuasiExponential(self.base, self.poly * c)

    def __mul__(self, other):
        if isinstance(other, QuasiExponential):
            return QuasiExponential(self.base * other.base, self.poly * other.poly)
        return NotImplemented

    def reflect(self):
        """The function f(-x), again a quasi-exponential (base inverted)."""
        return QuasiExponential(_ONE / self.base, self.poly.compose_neg())

    def __eq__(self, other):
        if isinstance(other, QuasiExponential):
            if self.poly.is_zero() and other.poly.is_zero():
                return True
            return self.base == other.base and self.poly == other.poly
        return NotImplemented

    def __hash__(self):
        return hash((self.base, self.poly))

    def __repr__(self):
        return f"({format_scalar(self.base)})^x*({format_poly(self.poly)})"


class QuasiMonomial:
    """The function x^exponent * poly(x), normalized so poly(0) != 0."""

    __slots__ = ("exponent", "poly")

    def __init__(self, exponent, poly):
        if isinstance(exponent, int):
            exponent = Fraction(exponent)
        if not isinstance(poly, Poly):
            poly = Poly([poly if not isinstance(poly, int) else Fraction(poly)])
        if poly.coeffs:
            v = poly.valuation()
            if v:
                exponent = exponent + v
                poly = poly.shift_down(v)
        object.__setattr__(self, "exponent", exponent)
        object.__setattr__(self, "poly", poly)

    def __setattr__(self, name, value):
        raise AttributeError("QuasiMonomial is immutable")

    def is_zero(self):
        return self.poly.is_zero()

    def derivative(self):
        """d/dx (x^z q) = x^(z-1) (z q + x q')."""
        z, q = self.exponent, self.poly
        return QuasiMonomial(z - 1, z * q + Poly.x() * q.derivative())

    def scale(self, c):
        return QuasiMonomial(self.exponent, self.poly * c)

    def __mul__(self, other):
        if isinstance(other, QuasiMonomial):
            return QuasiMonomial(self.exponent + other.exponent, self.poly * other.poly)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, QuasiMonomial):
            if self.poly.is_zero() and other.poly.is_zero():
                return True
            return self.exponent == other.exponent and self.poly == other.poly
        return NotImplemented

    def __hash__(self):
        return hash((self.exponent, self.poly))

    def __repr__(self):
        return f"x^({format_scalar(self.exponent)})*({format_poly(self.poly)})"


# ---------------------------------------------------------------------------
# Data records
# ---------------------------------------------------------------------------


def _check_data(alphas, mus, zs, lambdas):
    if len(alphas) != len(mus):
        raise ValueError("alphas and mus must have equal length")
    if len(zs) != len(lambdas):
        raise ValueError("zs and lambdas must have equal length")
    for a in alphas:
        if not a:
            raise ValueError("zero base in data")
    for i, a in enumerate(alphas):
        for b in alphas[i + 1:]:
            if a == b:
                raise ValueError("repeated base in data")
    for m in mus:
        if not m:
            raise ValueError("zero partition in mus")
    for l in lambdas:
        if not l:
            raise ValueError("zero partition in lambdas")
    for i, z in enumerate(zs):
        for w in zs[i + 1:]:
            if integer_difference(z, w) is not None:
                raise ValueError("z values must be distinct modulo integers")
    if sum(l.size for l in lambdas) != sum(m.size for m in mus):
        raise ValueError("box counts of lambdas and mus differ")


@dataclass(frozen=True)
class DifferenceData:
    """Data (alphas, mus; zs, lambdas) of a space of quasi-exponentials."""

    alphas: tuple
    mus: tuple
    zs: tuple
    lambdas: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "mus", tuple(Partition(m) if not isinstance(m, Partition) else m for m in self.mus))
        object.__setattr__(self, "zs", tuple(self.zs))
        object.__setattr__(self, "lambdas", tuple(Partition(l) if not isinstance(l, Partition) else l for l in self.lambdas))
        _check_data(self.alphas, self.mus, self.zs, self.lambdas)

    @property
    def dim(self):
        """dim W = sum of (mu')_1 = number of generators."""
        return sum(m.length for m in self.mus)

    @property
    def boxes(self):
        return sum(m.size for m in self.mus)


@dataclass(frozen=True)
class PolyData:
    """Data (zs, lambdas; alphas, mus) of a space of quasi-polynomials."""

    zs: tuple
    lambdas: tuple
    alphas: tuple
    mus: tuple

    def __post_init__(self):
        object.__setattr__(self, "zs", tuple(self.zs))
        object.__setattr__(self, "lambdas", tuple(Partition(l) if not isinstance(l, Partition) else l for l in self.lambdas))
        object.__setattr__(self, "alphas", tuple(self.alphas))
        object.__setattr__(self, "mus", tuple(Partition(m) if not isinstance(m, Partition) else m for m in self.mus))
        _check_data(self.alphas, self.mus, self.zs, self.lambdas)

    @property
    def dim(self):
        """dim V = sum of (lambda')_1."""
        return sum(l.length for l in self.lambdas)

    @property
    def boxes(self):
        return sum(l.size for l in self.lambdas)


# ---------------------------------------------------------------------------
# Spaces
# ---------------------------------------------------------------------------


def _coeff_rows(polys, width):
    return [[p[j] for j in range(width)] for p in polys]


def _echelon_polys(polys):
    """Reduced-echelon basis of the span, pivoted on lowest-degree coefficients."""
    width = max(p.degree for p in polys) + 1
    rows, _ = echelon(_coeff_rows(polys, width))
    return [Poly(r) for r in rows]


def _degree_profile(polys):
    """Distinct degrees of a top-echelon basis of the span, descending."""
    width = max(p.degree for p in polys) + 1
    rows, pivots = echelon([[p[width - 1 - j] for j in range(width)] for p in polys])
    if len(rows) < len(polys):
        raise ValueError("polynomials are linearly dependent")
    return [width - 1 - c for c in pivots]


def _valuation_profile(polys):
    """Distinct valuations achieved by the span, ascending."""
    width = max(p.degree for p in polys) + 1
    _, pivots = echelon(_coeff_rows(polys, width))
    return pivots


class QuasiExpSpace:
    """Span of finitely many quasi-exponentials, stored as the given basis."""

    __slots__ = ("generators", "data")

    def __init__(self, generators, data=None):
        gens = []
        for g in generators:
            if not isinstance(g, QuasiExponential):
                raise TypeError("generators must be QuasiExponential")
            if g.is_zero():
                raise ValueError("zero generator")
            gens.append(g)
        if not gens:
            raise ValueError("empty generating set")
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("QuasiExpSpace is immutable")

    @property
    def dim(self):
        return len(self.generators)

    def classes(self):
        """Ordered mapping base -> list of polynomial parts."""
        out = {}
        for g in self.generators:
            out.setdefault(g.base, []).append(g.poly)
        return out

    def canonical_classes(self):
        return {a: tuple(_echelon_polys(ps)) for a, ps in self.classes().items()}

    def with_data(self, data):
        return QuasiExpSpace(self.generators, data)

    def __eq__(self, other):
        if not isinstance(other, QuasiExpSpace):
            return NotImplemented
        a, b = self.canonical_classes(), other.canonical_classes()
        if len(a) != len(b):
            return False
        for base, polys in a.items():
            match = next((q for bb, q in b.items() if bb == base), None)
            if match != polys:
                return False
        return True

    def contains(self, f):
        """Exact membership test for a quasi-exponential."""
        if f.is_zero():
            return True
        for base, polys in self.classes().items():
            if base == f.base:
                width = max(max(p.degree for p in polys), f.poly.degree) + 1
                cols = _coeff_rows(polys, width)
                mat = [[cols[i][j] for i in range(len(polys))] for j in range(width)]
                return solve(mat, [f.poly[j] for j in range(width)]) is not None
        return False

    def wronskian(self, direction=1):
        return discrete_wronskian(self.generators, direction)

    def __repr__(self):
        return "QuasiExpSpace[" + ", ".join(repr(g) for g in self.generators) + "]"


class QuasiPolySpace:
    """Span of finitely many quasi-monomials, grouped by exponent mod 1."""

    __slots__ = ("generators", "data")

    def __init__(self, generators, data=None):
        gens = []
        for g in generators:
            if not isinstance(g, QuasiMonomial):
                raise TypeError("generators must be QuasiMonomial")
            if g.is_zero():
                raise ValueError("zero generator")
            gens.append(g)
        if not gens:
            raise ValueError("empty generating set")
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("QuasiPolySpace is immutable")

    @property
    def dim(self):
        return len(self.generators)

    def classes(self):
        """Ordered mapping class representative z* -> polys rewritten against x^z*.

        z* is the smallest exponent in its integer coset among the generators;
        every generator poly gets multiplied by the x^(z - z*) offset.
        """
        groups = []
        for g in self.generators:
            for members in groups:
                if integer_difference(g.exponent, members[0].exponent) is not None:
                    members.append(g)
                    break
            else:
                groups.append([g])
        out = {}
        for members in groups:
            rep = members[0].exponent
            for g in members[1:]:
                if integer_difference(rep, g.exponent) > 0:
                    rep = g.exponent
            polys = []
            for g in members:
                off = integer_difference(g.exponent, rep)
                polys.append(g.poly * Poly.x(off) if off else g.poly)
            out[rep] = polys
        return out

    def canonical_classes(self):
        return {z: tuple(_echelon_polys(ps)) for z, ps in self.classes().items()}

    def with_data(self, data):
        return QuasiPolySpace(self.generators, data)

    def __eq__(self, other):
        if not isinstance(other, QuasiPolySpace):
            return NotImplemented
        a, b = self.canonical_classes(), other.canonical_classes()
        if len(a) != len(b):
            return False
        for z, polys in a.items():
            match = None
            for zz, q in b.items():
                if integer_difference(z, zz) == 0:
                    match = q
                    break
            if match != polys:
                return False
        return True

    def contains(self, f):
        if f.is_zero():
            return True
        for z, polys in self.classes().items():
            off = integer_difference(f.exponent, z)
            if off is None:
                continue
            if off < 0:
                return False
            fp = f.poly * Poly.x(off) if off else f.poly
            width = max(max(p.degree for p in polys), fp.degree) + 1
            cols = _coeff_rows(polys, width)
            mat = [[cols[i][j] for i in range(len(polys))] for j in range(width)]
            return solve(mat, [fp[j] for j in range(width)]) is not None
        return False

    def wronskian(self):
        return wronskian(self.generators)

    def __repr__(self):
        return "QuasiPolySpace[" + ", ".join(repr(g) for g in self.generators) + "]"


# ---------------------------------------------------------------------------
# Wronskians
# ---------------------------------------------------------------------------


def _gens_of(obj, cls):
    if isinstance(obj, cls):
        return obj.generators
    return tuple(obj)


def discrete_wronskian(fs, direction=1):
    """det(T^(j-1) f_i) as a single quasi-exponential, computed exactly.

    direction=-1 gives the backward Wronskian built from T_- = T^(-1).
    With rows a^x p(x), the factor a^x comes out of each row and the rest
    is a polynomial determinant.
    """
    fs = _gens_of(fs, QuasiExpSpace)
    if not fs:
        raise ValueError("empty Wronskian")
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    n = len(fs)
    base = _ONE
    for f in fs:
        base = base * f.base
    mat = [
        [f.base ** (direction * j) * f.poly.shift(direction * j) for j in range(n)]
        for f in fs
    ]
    return QuasiExponential(base, det(mat))


def discrete_wronskian_left(fs):
    return discrete_wronskian(fs, direction=-1)


def wronskian(fs):
    """Ordinary Wronskian det((d/dx)^(j-1) f_i) of quasi-monomials.

    Each row x^z q(x) contributes derivative polynomials via
    q_(j+1) = (z - j) q_j + x q_j'; the result collapses to x^E p(x)
    with p(0) != 0 (E absorbs the common power of x).
    """
    fs = _gens_of(fs, QuasiPolySpace)
    if not fs:
        raise ValueError("empty Wronskian")
    n = len(fs)
    mat = []
    etotal = _ZERO
    xp = Poly.x()
    for f in fs:
        etotal = etotal + f.exponent
        row = [f.poly]
        q = f.poly
        for j in range(n - 1):
            q = (f.exponent - j) * q + xp * q.derivative()
            row.append(q)
        mat.append(row)
    d = det(mat)
    return QuasiMonomial(etotal - Fraction(n * (n - 1), 2), d)


# ---------------------------------------------------------------------------
# Exponents
# ---------------------------------------------------------------------------


def discrete_exponents(W, z, direction=1):
    """Strictly decreasing sequence of discrete exponents of W at z.

    Exponent e means some element vanishes at z, z+d, ..., z+(e-1)d and not
    at z+ed (d = direction).  Per-row rescaling by base^z is implicit: it
    preserves the span, so the rank profile of [base_i^j p_i(z + dj)] gives
    the exponents directly.
    """
    gens = _gens_of(W, QuasiExpSpace)
    n = len(gens)
    budget = n + sum(f.poly.degree for f in gens) + 2
    for attempt in range(2):
        mat = [
            [f.base ** (direction * j) * f.poly(z + direction * j) for j in range(budget)]
            for f in gens
        ]
        pivots = rank_profile(mat)
        if len(pivots) == n:
            return tuple(reversed(pivots))
        budget *= 2
    raise ValueError("generators are not independent")


def exponents_at(V, alpha):
    """Strictly decreasing sequence of exponents of V at a nonzero point alpha.

    Row i is the Taylor expansion of (1 + t/alpha)^(z_i) q_i(alpha + t),
    the generator at x = alpha + t with the constant alpha^(z_i) dropped;
    orders of vanishing achieved by the span are the rank-profile pivots.
    """
    if not alpha:
        raise ValueError("exponents are defined at nonzero points only")
    gens = _gens_of(V, QuasiPolySpace)
    n = len(gens)
    budget = n + sum(f.poly.degree for f in gens) + 2
    inv = _ONE / alpha
    for attempt in range(2):
        mat = []
        for f in gens:
            row_poly = binomial_series(f.exponent, inv, budget - 1) * f.poly.shift(alpha)
            mat.append([row_poly[j] for j in range(budget)])
        pivots = rank_profile(mat)
        if len(pivots) == n:
            return tuple(reversed(pivots))
        budget *= 2
    raise ValueError("generators are not independent")


# ---------------------------------------------------------------------------
# Data extraction
# ---------------------------------------------------------------------------


def _partition_from_degrees(degrees):
    """Partition with parts d_j - (count - j), requiring every part >= 1.

    degrees is the strictly decreasing degree profile of one class; the
    class shape demands deg_j = count + part_j - j with part_j >= 1.
    """
    count = len(degrees)
    parts = [d - count + j for j, d in enumerate(degrees, start=1)]
    if any(p < 1 for p in parts):
        raise ValueError(
            "class degrees do not fit the required shape (a degree-0 element is present)"
        )
    return Partition(parts)


def extract_difference_data(W, zs):
    """Difference data (alphas, mus; zs, lambdas) of W for the chosen zs.

    The z values must be pairwise distinct modulo integers and must be
    singular points of W carrying all boxes: sum |lambda| = sum |mu| is
    checked and violation reported as incomplete singular data.
    """
    if not isinstance(W, QuasiExpSpace):
        W = QuasiExpSpace(W)
    zs = tuple(z if not isinstance(z, int) else Fraction(z) for z in zs)
    alphas, mus = [], []
    for base, polys in W.classes().items():
        alphas.append(base)
        mus.append(_partition_from_degrees(_degree_profile(polys)))
    mtotal = W.dim
    lambdas = []
    for z in zs:
        lam = Partition.from_exponents(discrete_exponents(W, z), mtotal)
        if not lam:
            raise ValueError(f"{format_scalar(z)} is not a discrete singular point")
        lambdas.append(lam)
    if sum(l.size for l in lambdas) != sum(m.size for m in mus):
        raise ValueError("incomplete singular data: box counts do not match")
    return DifferenceData(tuple(alphas), tuple(mus), zs, tuple(lambdas))


def extract_poly_data(V):
    """Data (zs, lambdas; alphas, mus) of a space of quasi-polynomials.

    Requires the class shape (degree profile d_j = N + part_j - j with
    nonzero parts), non-degeneracy at 0 (valuations 0..N-1 within each
    class), and all singular points in the base field.
    """
    if not isinstance(V, QuasiPolySpace):
        V = QuasiPolySpace(V)
    zs, lambdas = [], []
    for z, polys in V.classes().items():
        n = len(polys)
        if _valuation_profile(polys) != list(range(n)):
            raise ValueError("space is degenerate at 0")
        lam = _partition_from_degrees(_degree_profile(polys))
        zs.append(z)
        lambdas.append(lam)
    wr = wronskian(V.generators)
    if wr.is_zero():
        raise ValueError("generators are not independent")
    p = wr.poly
    if p.degree != sum(l.size for l in lambdas):
        raise ValueError("Wronskian degree does not match the box count")
    roots, residual = linear_roots(p)
    if not residual.is_constant():
        raise ValueError("singular point outside base field")
    ltotal = V.dim
    alphas, mus = [], []
    for alpha, mult in roots:
        mu = Partition.from_exponents(exponents_at(V, alpha), ltotal)
        if mu.size != mult:
            raise ValueError("exponent profile does not match Wronskian multiplicity")
        alphas.append(alpha)
        mus.append(mu)
    return PolyData(tuple(zs), tuple(lambdas), tuple(alphas), tuple(mus))
