"""Exact univariate polynomials and rational functions.

Coefficients live in Q (fractions.Fraction) or Q(i) (GaussianRational);
the two mix freely because GaussianRational coerces Fraction and int.
Polynomials are stored lowest degree first with no trailing zeros, so
the zero polynomial has an empty coefficient tuple.
"""

from fractions import Fraction
from math import gcd as _int_gcd

from .scalars import (
    GaussianRational,
    Q,
    QI,
    _factorize,
    format_scalar,
    gaussian_integer_divisors,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _trim(coeffs):
    n = len(coeffs)
    while n > 0 and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Dense exact polynomial, coeffs[k] multiplying x^k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        object.__setattr__(self, "coeffs", _trim(list(coeffs)))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(c):
        return Poly([c])

    @staticmethod
    def x(power=1):
        return Poly([_ZERO] * power + [_ONE])

    @staticmethod
    def from_roots(roots, lead=_ONE):
        """lead * prod (x - r) over the given roots (with repetition)."""
        p = Poly([lead])
        for r in roots:
            p = p * Poly([-r, _ONE])
        return p

    # -- basic queries -------------------------------------------------

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return _ZERO

    def valuation(self):
        """Multiplicity of the root x = 0 (raises on the zero polynomial)."""
        if not self.coeffs:
            raise ValueError("zero polynomial has no valuation")
        v = 0
        while not self.coeffs[v]:
            v += 1
        return v

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, GaussianRational)):
            if not other:
                return not self.coeffs
            return len(self.coeffs) == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly([_ONE])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lb = other.lc
        if len(rem) <= db:
            return Poly(), self
        q = [_ZERO] * (len(rem) - db)
        for k in range(len(rem) - db - 1, -1, -1):
            c = rem[k + db]
            if not c:
                continue
            c = c / lb
            q[k] = c
            for j, cb in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * cb
        return Poly(q), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            if not other:
                raise ZeroDivisionError("division by zero scalar")
            inv = _ONE / other
            return Poly([c * inv for c in self.coeffs])
        return NotImplemented

    def exact_div(self, other):
        """Quotient self/other, raising if the division is not exact."""
        q, r = divmod(self, other)
        if r.coeffs:
            raise ValueError("inexact polynomial division")
        return q

    # -- evaluation and transforms --------------------------------------

    def __call__(self, x):
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, c):
        """p(x + c), exact Taylor shift."""
        if not c or not self.coeffs:
            return self
        acc = Poly()
        xc = Poly([c, _ONE])
        for coeff in reversed(self.coeffs):
            acc = acc * xc + Poly([coeff])
        return acc

    def compose_neg(self):
        """p(-x)."""
        return Poly([(-c if k & 1 else c) for k, c in enumerate(self.coeffs)])

    def scale_arg(self, a):
        """p(a*x)."""
        out = []
        pw = _ONE
        for c in self.coeffs:
            out.append(c * pw)
            pw = pw * a
        return Poly(out)

    def derivative(self):
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def monic(self):
        if not self.coeffs:
            raise ValueError("zero polynomial cannot be made monic")
        if self.lc == 1:
            return self
        return self / self.lc

    def shift_down(self, k):
        """self divided by x^k (requires valuation >= k)."""
        if k == 0:
            return self
        if any(self.coeffs[:k]):
            raise ValueError("x^k does not divide polynomial")
        return Poly(self.coeffs[k:])

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def _as_poly(v):
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction, GaussianRational)):
        return Poly([Fraction(v) if isinstance(v, int) else v])
    return NotImplemented


def format_poly(p, var="x"):
    if not p.coeffs:
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        cs = format_scalar(c)
        if k == 0:
            terms.append(cs)
            continue
        xs = var if k == 1 else f"{var}^{k}"
        if cs == "1":
            terms.append(xs)
        elif cs == "-1":
            terms.append(f"-{xs}")
        elif ("+" in cs[1:]) or ("-" in cs[1:]):
            terms.append(f"({cs})*{xs}")
        else:
            terms.append(f"{cs}*{xs}")
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def poly_gcd(a, b):
    """Monic gcd over the coefficient field; gcd(0,0) = 0."""
    while b.coeffs:
        a, b = b, a % b
    if not a.coeffs:
        return a
    return a.monic()


def poly_shift(p, c):
    return p.shift(c)


def binomial_series(z, u_coeff, order):
    """Truncated expansion of (1+u*t)^z: coefficients for t^0..t^order.

    Returned as a Poly in t (exact; trailing zeros trimmed, so integer z
    with z <= order terminates exactly).
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    coeffs = []
    c = _ONE + _ZERO * z  # one in the field of z
    up = _ONE
    for k in range(order + 1):
        coeffs.append(c * up)
        c = c * (z - k) / (k + 1)
        up = up * u_coeff
    return Poly(coeffs)


# ---------------------------------------------------------------------------
# Root finding for linear factors
# ---------------------------------------------------------------------------


def _int_divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    divs = [1]
    for p, e in _factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return divs


def _rational_root_candidates(p):
    # Clear denominators to integer coefficients, then a0/an divisor pairs.
    den_lcm = 1
    for c in p.coeffs:
        den_lcm = den_lcm * c.denominator // _int_gcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in p.coeffs]
    v = 0
    while ints[v] == 0:
        v += 1
    a0, an = ints[v], ints[-1]
    cands = set()
    for dn in _int_divisors(a0):
        for dd in _int_divisors(an):
            r = Fraction(dn, dd)
            cands.add(r)
            cands.add(-r)
    return cands


def _gaussian_root_candidates(p):
    # Clear denominators, then ratios of Gaussian-integer divisors times units.
    den_lcm = 1
    for c in p.coeffs:
        if isinstance(c, GaussianRational):
            for part in (c.re, c.im):
                den_lcm = den_lcm * part.denominator // _int_gcd(den_lcm, part.denominator)
        else:
            den_lcm = den_lcm * c.denominator // _int_gcd(den_lcm, c.denominator)
    ints = []
    for c in p.coeffs:
        c = c * den_lcm
        if not isinstance(c, GaussianRational):
            c = GaussianRational(c, 0)
        ints.append(c)
    v = 0
    while not ints[v]:
        v += 1
    a0, an = ints[v], ints[-1]
    units = (
        GaussianRational(1, 0),
        GaussianRational(-1, 0),
        GaussianRational(0, 1),
        GaussianRational(0, -1),
    )
    cands = set()
    for d0 in gaussian_integer_divisors(a0):
        for dn in gaussian_integer_divisors(an):
            base = d0 / dn
            for u in units:
                cands.add(base * u)
    return cands


def linear_roots(p, field=None):
    """All roots of p in the field, with multiplicity, plus the root-free residual.

    Returns (roots, residual) where roots is a list of (root, multiplicity)
    and prod (x-r)^mult * residual == p exactly.  field defaults to the
    field the coefficients live in (Q(i) if any coefficient is imaginary).
    """
    if not p.coeffs:
        raise ValueError("zero polynomial")
    if field is None:
        field = QI if any(isinstance(c, GaussianRational) and c.im for c in p.coeffs) else Q
    roots = []
    v = p.valuation()
    if v:
        roots.append((field.coerce(0), v))
        p = p.shift_down(v)
    while p.degree >= 1:
        if field is QI:
            cands = _gaussian_root_candidates(p)
        else:
            cands = _rational_root_candidates(p)
        hit = None
        for r in cands:
            if not p(r):
                hit = r
                break
        if hit is None:
            break
        mult = 0
        while p.degree >= 1 and not p(hit):
            p = p.exact_div(Poly([-hit, _ONE]))
            mult += 1
        roots.append((hit, mult))
    return roots, p


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class RationalFunction:
    """num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_poly(num)
        den = Poly([_ONE]) if den is None else _as_poly(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("cannot build rational function from given operands")
        if not den.coeffs:
            raise ZeroDivisionError("zero denominator")
        if num.coeffs:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lead = den.lc
            if lead != 1:
                num = num / lead
                den = den / lead
        else:
            den = Poly([_ONE])
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @staticmethod
    def const(c):
        return RationalFunction(Poly.const(c))

    def is_zero(self):
        return not self.num.coeffs

    def __bool__(self):
        return bool(self.num.coeffs)

    def is_polynomial(self):
        return self.den.degree == 0

    def as_poly(self):
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        return self.num

    def is_constant(self):
        return self.is_polynomial() and self.num.is_constant()

    def as_scalar(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num[0]

    @property
    def degree(self):
        """Degree at infinity: deg num - deg den (zero maps to None)."""
        if not self.num.coeffs:
            return None
        return self.num.degree - self.den.degree

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, int, Fraction, GaussianRational)):
            o = _as_rf(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num.coeffs:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __call__(self, x):
        d = self.den(x)
        if not d:
            raise ZeroDivisionError("pole of rational function")
        return self.num(x) / d

    def shift(self, c):
        """f(x + c)."""
        return RationalFunction(self.num.shift(c), self.den.shift(c))

    def compose_neg(self):
        """f(-x)."""
        return RationalFunction(self.num.compose_neg(), self.den.compose_neg())

    def derivative(self):
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def residue_at(self, point):
        """Residue at a (possibly multiple) pole; exact.

        Writes f = num / ((x-point)^m * d) with d(point) != 0 and returns the
        coefficient of (x-point)^(-1), computed from the Taylor expansion of
        (num/d) at the point.
        """
        num = self.num.shift(point)
        den = self.den.shift(point)
        if not num.coeffs:
            return _ZERO
        m = den.valuation()
        if m == 0:
            return _ZERO
        den = den.shift_down(m)
        # Taylor coefficients c_0..c_{m-1} of num/den at 0 by series division.
        inv0 = _ONE / den[0]
        taylor = []
        for k in range(m):
            s = num[k]
            for j in range(k):
                s = s - taylor[j] * den[k - j]
            taylor.append(s * inv0)
        return taylor[m - 1]

    def __repr__(self):
        if self.is_polynomial():
            return f"RF({format_poly(self.num)})"
        return f"RF(({format_poly(self.num)})/({format_poly(self.den)}))"

    def __str__(self):
        if self.is_polynomial():
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"


def _as_rf(v):
    if isinstance(v, RationalFunction):
        return v
    p = _as_poly(v)
    if p is NotImplemented:
        return NotImplemented
    return RationalFunction(p)
