"""Difference and differential operators with rational-function coefficients.

The two operator families share a layout: a finite list of coefficients for
descending powers of the shift T (or T^-1) resp. of d/dx or x*d/dx.
Composition follows the commutation rules T o c(x) = c(x+1) o T and
d/dx o c = c o d/dx + c', so products, conjugates and long division stay
exact over the coefficient field.

On top of the raw algebra this module builds the annihilator ("fundamental")
operators of quasi-exponential and quasi-polynomial spaces, the quotient
space construction Q / Q_-, denominator-clearing regularization, the
coefficient transpose # between x-powers and shift/Euler powers, and the
duality maps t1, t2, t3 assembled from those pieces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .linalg import det, nullspace
from .poly import Poly, RationalFunction, format_poly
from .spaces import (
    DifferenceData,
    Partition,
    PolyData,
    QuasiExponential,
    QuasiExpSpace,
    QuasiMonomial,
    QuasiPolySpace,
    _degree_profile,
    discrete_wronskian,
    extract_difference_data,
    extract_poly_data,
)

_ONE = Fraction(1)


def _rf(v):
    if isinstance(v, RationalFunction):
        return v
    return RationalFunction(v)


def _trim_terms(terms):
    return {m: c for m, c in terms.items() if not c.is_zero()}


class DifferenceOperator:
    """sum of a_i(x) * T^(d*(N-i)) with rational a_i; d = +1 or -1.

    coeffs[0] is the top coefficient; an all-shifts-forward operator has
    direction +1, an all-backward one -1.  Order-zero operators are stored
    with direction +1 so that plain multipliers compare equal regardless of
    how they were produced.
    """

    __slots__ = ("direction", "coeffs")

    def __init__(self, coeffs, direction=1):
        if direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        cs = [_rf(c) for c in coeffs]
        while cs and cs[0].is_zero():
            cs.pop(0)
        if len(cs) <= 1:
            direction = 1
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "direction", direction)

    def __setattr__(self, name, value):
        raise AttributeError("DifferenceOperator is immutable")

    @staticmethod
    def from_terms(terms):
        """Build from a {signed shift power: coefficient} mapping."""
        terms = _trim_terms({m: _rf(c) for m, c in terms.items()})
        if not terms:
            return DifferenceOperator(())
        powers = sorted(terms)
        if powers[0] < 0 < powers[-1]:
            raise ValueError("mixed shift directions")
        direction = -1 if powers[0] < 0 else 1
        top = max(abs(p) for p in powers)
        coeffs = [terms.get(direction * (top - i), RationalFunction(0))
                  for i in range(top + 1)]
        return DifferenceOperator(coeffs, direction)

    @staticmethod
    def identity():
        return DifferenceOperator((_ONE,))

    @staticmethod
    def shift(direction=1):
        """The bare operator T (direction=+1) or T^-1 (direction=-1)."""
        return DifferenceOperator((_ONE, 0), direction)

    @staticmethod
    def from_shift_poly(p, direction=1):
        """p(T) for a polynomial p with scalar coefficients."""
        n = p.degree
        if n < 0:
            return DifferenceOperator(())
        return DifferenceOperator([p[n - i] for i in range(n + 1)], direction)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[0] == RationalFunction(1)

    def is_polynomial(self):
        return all(c.is_polynomial() for c in self.coeffs)

    @property
    def shift_direction(self):
        return "forward" if self.direction == 1 else "backward"

    def terms(self):
        """Iterate (signed power, coefficient) pairs, zero coefficients skipped."""
        n = self.order
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                yield self.direction * (n - i), c

    def coeff(self, power):
        n = self.order
        if n < 0:
            return RationalFunction(0)
        i = n - self.direction * power
        if power * self.direction < 0 or not 0 <= i <= n:
            return RationalFunction(0)
        return self.coeffs[i]

    def __eq__(self, other):
        if not isinstance(other, DifferenceOperator):
            return NotImplemented
        return dict(self.terms()) == dict(other.terms())

    def __hash__(self):
        return hash(frozenset(self.terms()))

    def __add__(self, other):
        if not isinstance(other, DifferenceOperator):
            other = DifferenceOperator((_rf(other),))
        out = dict(self.terms())
        for m, c in other.terms():
            out[m] = out.get(m, RationalFunction(0)) + c
        return DifferenceOperator.from_terms(out)

    __radd__ = __add__

    def __neg__(self):
        return DifferenceOperator([-c for c in self.coeffs], self.direction)

    def __sub__(self, other):
        return self + (-other if isinstance(other, DifferenceOperator)
                       else DifferenceOperator((-_rf(other),)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, DifferenceOperator):
            other = DifferenceOperator((_rf(other),))
        out = {}
        for m1, c1 in self.terms():
            for m2, c2 in other.terms():
                m = m1 + m2
                term = c1 * c2.shift(m1)
                out[m] = out.get(m, RationalFunction(0)) + term
        return DifferenceOperator.from_terms(out)

    def __rmul__(self, other):
        # left multiplication by a plain function scales coefficients
        c = _rf(other)
        return DifferenceOperator([c * a for a in self.coeffs], self.direction)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative operator power")
        out = DifferenceOperator.identity()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def apply(self, f):
        """Apply to a quasi-exponential; returns (base, RationalFunction)."""
        base = f.base
        total = RationalFunction(0)
        for m, c in self.terms():
            total = total + c * (base ** m * f.poly.shift(m))
        return base, total

    def apply_rational(self, base, rf):
        """Apply to base^x * rf(x); returns the new rational part."""
        total = RationalFunction(0)
        for m, c in self.terms():
            total = total + c * (base ** m) * rf.shift(m)
        return total

    def annihilates(self, f):
        if isinstance(f, tuple):
            return self.apply_rational(*f).is_zero()
        return self.apply(f)[1].is_zero()

    def conjugate(self):
        """Formal conjugate: c(x)T^m  ->  c(x-m)T^(-m)."""
        return DifferenceOperator.from_terms(
            {-m: c.shift(-m) for m, c in self.terms()})

    def ddagger(self):
        """Antiautomorphism c(x)T^m -> T^m o c(-x) = c(-x-m)T^m."""
        return DifferenceOperator.from_terms(
            {m: c.compose_neg().shift(m) for m, c in self.terms()})

    def reflect_arg(self):
        """Conjugation by x -> -x: c(x)T^m  ->  c(-x)T^(-m)."""
        return DifferenceOperator.from_terms(
            {-m: c.compose_neg() for m, c in self.terms()})

    def make_monic(self):
        """Divide on the left by the top coefficient; returns (monic, lead)."""
        if self.is_zero():
            raise ValueError("zero operator has no monic form")
        lead = self.coeffs[0]
        inv = RationalFunction(1) / lead
        return DifferenceOperator([inv * c for c in self.coeffs],
                                  self.direction), lead

    def right_divide(self, other):
        """Long division self = quotient * other + remainder."""
        if not isinstance(other, DifferenceOperator) or other.is_zero():
            raise ValueError("division by zero operator")
        if other.order > 0 and not self.is_zero() and self.order > 0 \
                and other.direction != self.direction:
            raise ValueError("mixed shift directions")
        d = self.direction if self.order > 0 else other.direction
        rem = dict(self.terms())
        quo = {}

        def top(ts):
            return max((d * m for m in ts), default=-1)

        b_top = other.order
        b_lead = other.coeffs[0]
        while rem and top(rem) >= b_top:
            k = top(rem) - b_top
            q = rem[d * top(rem)] / b_lead.shift(d * k)
            quo[d * k] = quo.get(d * k, RationalFunction(0)) + q
            for m2, c2 in other.terms():
                m = d * k + m2
                rem[m] = rem.get(m, RationalFunction(0)) - q * c2.shift(d * k)
            rem = _trim_terms(rem)
        return (DifferenceOperator.from_terms(quo),
                DifferenceOperator.from_terms(rem))

    def __str__(self):
        if self.is_zero():
            return "0"
        sym = "T" if self.direction == 1 else "T-"
        bits = []
        for m, c in sorted(self.terms(), key=lambda t: -self.direction * t[0]):
            cs = str(c)
            if abs(m) == 0:
                bits.append(cs)
                continue
            power = f"{sym}^{abs(m)}" if abs(m) != 1 else sym
            bits.append(power if cs == "1" else f"({cs})*{power}")
        return " + ".join(bits)

    __repr__ = __str__


def _stirling2(n):
    """Table S(k, j) for 0 <= j <= k <= n."""
    rows = [[1]]
    for k in range(1, n + 1):
        prev = rows[-1]
        row = [0] * (k + 1)
        for j in range(1, k + 1):
            row[j] = j * prev[j] if j < len(prev) else 0
            row[j] += prev[j - 1]
        rows.append(row)
    return rows


class DifferentialOperator:
    """sum of c_i(x) * Op^(N-i) where Op is d/dx ('ddx') or x*d/dx ('euler')."""

    __slots__ = ("kind", "coeffs")

    def __init__(self, coeffs, kind="ddx"):
        if kind not in ("ddx", "euler"):
            raise ValueError("kind must be 'ddx' or 'euler'")
        cs = [_rf(c) for c in coeffs]
        while cs and cs[0].is_zero():
            cs.pop(0)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("DifferentialOperator is immutable")

    @staticmethod
    def from_terms(terms, kind):
        terms = _trim_terms({k: _rf(c) for k, c in terms.items()})
        if not terms:
            return DifferentialOperator((), kind)
        top = max(terms)
        if min(terms) < 0:
            raise ValueError("negative derivative power")
        return DifferentialOperator(
            [terms.get(top - i, RationalFunction(0)) for i in range(top + 1)],
            kind)

    @staticmethod
    def identity(kind="ddx"):
        return DifferentialOperator((_ONE,), kind)

    @staticmethod
    def ddx():
        return DifferentialOperator((_ONE, 0), "ddx")

    @staticmethod
    def euler():
        return DifferentialOperator((_ONE, 0), "euler")

    @staticmethod
    def from_euler_poly(p):
        """p(x*d/dx) for a polynomial p with scalar coefficients."""
        n = p.degree
        if n < 0:
            return DifferentialOperator((), "euler")
        return DifferentialOperator([p[n - i] for i in range(n + 1)], "euler")

    @property
    def order(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[0] == RationalFunction(1)

    def is_polynomial(self):
        return all(c.is_polynomial() for c in self.coeffs)

    def terms(self):
        n = self.order
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                yield n - i, c

    def coeff(self, power):
        n = self.order
        if not 0 <= power <= n:
            return RationalFunction(0)
        return self.coeffs[n - power]

    def to_ddx(self):
        if self.kind == "ddx":
            return self
        table = _stirling2(max(self.order, 0))
        out = {}
        for k, c in self.terms():
            if k == 0:
                out[0] = out.get(0, RationalFunction(0)) + c
                continue
            for j in range(1, k + 1):
                term = c * (table[k][j] * Poly.x(j))
                out[j] = out.get(j, RationalFunction(0)) + term
        return DifferentialOperator.from_terms(out, "ddx")

    def to_euler(self):
        if self.kind == "euler":
            return self
        out = {}
        for k, c in self.terms():
            # (d/dx)^k = x^{-k} * theta*(theta-1)*...*(theta-k+1)
            falling = Poly.from_roots(list(range(k)))
            xk = RationalFunction(1, Poly.x(k)) if k else RationalFunction(1)
            for j in range(k + 1):
                if falling[j] == 0:
                    continue
                term = c * xk * falling[j]
                out[j] = out.get(j, RationalFunction(0)) + term
        return DifferentialOperator.from_terms(out, "euler")

    def _push(self, k, c):
        """Op^k composed with multiplication by c, as {power: coeff}."""
        if self.kind == "ddx":
            out = {}
            deriv = c
            for j in range(k + 1):
                out[k - j] = math.comb(k, j) * deriv
                deriv = deriv.derivative()
            return out
        out = {0: c}
        x = Poly.x()
        for _ in range(k):
            nxt = {}
            for j, e in out.items():
                nxt[j + 1] = nxt.get(j + 1, RationalFunction(0)) + e
                nxt[j] = nxt.get(j, RationalFunction(0)) + x * e.derivative()
            out = _trim_terms(nxt)
        return out

    def __eq__(self, other):
        if not isinstance(other, DifferentialOperator):
            return NotImplemented
        if self.kind == other.kind:
            return dict(self.terms()) == dict(other.terms())
        return dict(self.to_ddx().terms()) == dict(other.to_ddx().terms())

    def __hash__(self):
        return hash(frozenset(self.to_ddx().terms()))

    def __add__(self, other):
        if not isinstance(other, DifferentialOperator):
            other = DifferentialOperator((_rf(other),), self.kind)
        if other.kind != self.kind:
            raise ValueError("mixed operator forms")
        out = dict(self.terms())
        for k, c in other.terms():
            out[k] = out.get(k, RationalFunction(0)) + c
        return DifferentialOperator.from_terms(out, self.kind)

    __radd__ = __add__

    def __neg__(self):
        return DifferentialOperator([-c for c in self.coeffs], self.kind)

    def __sub__(self, other):
        if not isinstance(other, DifferentialOperator):
            other = DifferentialOperator((_rf(other),), self.kind)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, DifferentialOperator):
            other = DifferentialOperator((_rf(other),), self.kind)
        if other.kind != self.kind:
            raise ValueError("mixed operator forms")
        out = {}
        for k1, c1 in self.terms():
            for k2, c2 in other.terms():
                for j, e in self._push(k1, c2).items():
                    k = j + k2
                    out[k] = out.get(k, RationalFunction(0)) + c1 * e
        return DifferentialOperator.from_terms(out, self.kind)

    def __rmul__(self, other):
        c = _rf(other)
        return DifferentialOperator([c * a for a in self.coeffs], self.kind)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative operator power")
        out = DifferentialOperator.identity(self.kind)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def apply(self, f):
        """Apply to a quasi-monomial; returns (exponent, RationalFunction)."""
        op = self.to_euler()
        z = f.exponent
        x = Poly.x()
        powers = [f.poly]
        for _ in range(op.order):
            q = powers[-1]
            powers.append(z * q + x * q.derivative())
        total = RationalFunction(0)
        for k, c in op.terms():
            total = total + c * powers[k]
        return z, total

    def annihilates(self, f):
        return self.apply(f)[1].is_zero()

    def conjugate(self):
        """Formal conjugate sum (-theta)^(N-i) o c_i, taken in Euler form.

        The sign lives on the Euler power, not on d/dx: this is the variant
        compatible with the coefficient transpose and with T -> T^-1 on the
        difference side.
        """
        base = self.to_euler()
        out = {}
        for k, c in base.terms():
            sign = -1 if k % 2 else 1
            for j, e in base._push(k, c).items():
                out[j] = out.get(j, RationalFunction(0)) + sign * e
        res = DifferentialOperator.from_terms(out, "euler")
        return res.to_ddx() if self.kind == "ddx" else res

    def make_monic(self):
        if self.is_zero():
            raise ValueError("zero operator has no monic form")
        lead = self.coeffs[0]
        inv = RationalFunction(1) / lead
        return DifferentialOperator([inv * c for c in self.coeffs],
                                    self.kind), lead

    def right_divide(self, other):
        """Long division self = quotient * other + remainder."""
        if not isinstance(other, DifferentialOperator) or other.is_zero():
            raise ValueError("division by zero operator")
        if other.kind != self.kind:
            raise ValueError("mixed operator forms")
        rem = self
        quo = DifferentialOperator((), self.kind)
        while not rem.is_zero() and rem.order >= other.order:
            k = rem.order - other.order
            q = DifferentialOperator.from_terms(
                {k: rem.coeffs[0] / other.coeffs[0]}, self.kind)
            quo = quo + q
            rem = rem - q * other
        return quo, rem

    def __str__(self):
        if self.is_zero():
            return "0"
        sym = "D" if self.kind == "ddx" else "theta"
        bits = []
        for k, c in sorted(self.terms(), key=lambda t: -t[0]):
            cs = str(c)
            if k == 0:
                bits.append(cs)
                continue
            power = f"{sym}^{k}" if k != 1 else sym
            bits.append(power if cs == "1" else f"({cs})*{power}")
        return " + ".join(bits)

    __repr__ = __str__


def _same_class_data(alphas1, mus1, alphas2, mus2):
    """Compare (base, partition) class lists up to reordering."""
    if len(alphas1) != len(alphas2):
        return False
    remaining = list(zip(alphas2, mus2))
    for a, m in zip(alphas1, mus1):
        for idx, (b, mm) in enumerate(remaining):
            if a == b and m == mm:
                del remaining[idx]
                break
        else:
            return False
    return True


def _same_difference_data(d1, d2):
    """Equality of difference data: point classes aligned, base classes free."""
    return (d1.zs == d2.zs and d1.lambdas == d2.lambdas
            and _same_class_data(d1.alphas, d1.mus, d2.alphas, d2.mus))


def _same_poly_data(d1, d2):
    return (d1.zs == d2.zs and d1.lambdas == d2.lambdas
            and _same_class_data(d1.alphas, d1.mus, d2.alphas, d2.mus))


@dataclass(frozen=True)
class QuotientPair:
    """Result of an exact operator division: big = quotient * divisor."""
    quotient: object
    divisor: object
    remainder: object
    recombined: object


def right_divide(big, small):
    """Divide and recombine, checking quotient*divisor + remainder = big."""
    quo, rem = big.right_divide(small)
    back = quo * small + rem
    if back != big:
        raise ValueError("operator division failed to recombine")
    return QuotientPair(quo, small, rem, back)


# ---------------------------------------------------------------------------
# fundamental operators


def _exp_generators(W):
    if isinstance(W, QuasiExpSpace):
        gens = []
        for polys_base in W.canonical_classes().items():
            base, polys = polys_base
            gens.extend(QuasiExponential(base, p) for p in polys)
        return gens
    return [f if isinstance(f, QuasiExponential) else f for f in W]


def fundamental_difference_operator(W, direction=1):
    """The monic annihilator of order dim W, via Casorati minors."""
    fs = _exp_generators(W)
    n = len(fs)
    cols = []
    for j in range(n + 1):
        col = [f.base ** (direction * j) * f.poly.shift(direction * j)
               for f in fs]
        cols.append(col)
    minors = []
    for skip in range(n + 1):
        mat = [[cols[j][i] for j in range(n + 1) if j != skip]
               for i in range(n)]
        minors.append(det(mat))
    if minors[n].is_zero():
        raise ValueError("generators are not independent")
    coeffs = [RationalFunction(1)]
    for i in range(1, n + 1):
        sign = -1 if i % 2 else 1
        coeffs.append(RationalFunction(sign * minors[n - i], minors[n]))
    op = DifferenceOperator(coeffs, direction)
    for f in fs:
        if not op.annihilates(f):
            raise ValueError("fundamental operator failed to annihilate input")
    return op


def apply_difference(S, f):
    return S.apply(f)


def formal_conjugate_difference(S):
    return S.conjugate()


def formal_conjugate_differential(D):
    return D.conjugate()


def factorize_difference(W, order=None):
    """First-order factors whose left-to-right product is the annihilator.

    `order` permutes the canonical generators before the nested-Wronskian
    ratios are formed; an ordering that makes an intermediate Wronskian
    vanish is rejected.
    """
    fs = _exp_generators(W)
    if order is not None:
        if sorted(order) != list(range(len(fs))):
            raise ValueError("order must be a permutation of the generators")
        fs = [fs[i] for i in order]
    n = len(fs)
    # tails[i] = Wr(f_n, f_{n-1}, ..., f_{i+1}) with tails[n] = 1
    tails = [None] * (n + 1)
    tails[n] = QuasiExponential(_ONE, Poly.const(1))
    for i in range(n - 1, -1, -1):
        tails[i] = discrete_wronskian(list(reversed(fs[i:])))
        if tails[i].is_zero():
            raise ValueError("ordering not generic")
    factors = []
    for i in range(n):
        # the T-ratio of g_i = Wr(f_n..f_i)/Wr(f_n..f_{i+1})
        g_base = tails[i].base / tails[i + 1].base
        num = tails[i].poly.shift(1) * tails[i + 1].poly
        den = tails[i].poly * tails[i + 1].poly.shift(1)
        ratio = g_base * RationalFunction(num, den)
        factors.append(DifferenceOperator([RationalFunction(1), -ratio]))
    return factors


def conjugate_kernel_functions(W):
    """Shifted cofactor ratios h_i, each annihilated by the conjugate.

    h_i is the once-shifted ratio of the Wronskian omitting f_i to the full
    one; returned as (base, RationalFunction) pairs since the polynomial
    part need not clear.
    """
    fs = _exp_generators(W)
    full = discrete_wronskian(fs)
    out = []
    for i in range(len(fs)):
        rest = fs[:i] + fs[i + 1:]
        sub = discrete_wronskian(rest) if rest else \
            QuasiExponential(_ONE, Poly.const(1))
        base = sub.base / full.base
        rf = RationalFunction(sub.poly.shift(1), full.poly.shift(1))
        out.append((base, base * rf))
    return out


def fundamental_differential_operator(V):
    """The monic annihilator of order dim V for a quasi-polynomial space."""
    gens = V.generators if isinstance(V, QuasiPolySpace) else list(V)
    s = len(gens)
    rows = []
    for g in gens:
        q = g.poly
        zc = g.exponent
        row = [q]
        for j in range(1, s + 1):
            prev = row[-1]
            row.append((zc - (j - 1)) * prev + Poly.x() * prev.derivative())
        rows.append(row)
    minors = []
    for skip in range(s + 1):
        mat = [[rows[i][j] for j in range(s + 1) if j != skip]
               for i in range(s)]
        minors.append(det(mat))
    if minors[s].is_zero():
        raise ValueError("generators are not independent")
    terms = {s: RationalFunction(1)}
    for i in range(1, s + 1):
        sign = -1 if i % 2 else 1
        terms[s - i] = RationalFunction(sign * minors[s - i],
                                        Poly.x(i) * minors[s])
    op = DifferentialOperator.from_terms(terms, "ddx")
    for g in gens:
        if not op.annihilates(g):
            raise ValueError("fundamental operator failed to annihilate input")
    return op


def apply_differential(D, f):
    return D.apply(f)


# ---------------------------------------------------------------------------
# hat operators, quotient construction


def _class_layout(W):
    """Per class: (base, echelon degree list descending, complement degrees)."""
    layout = []
    for base, polys in W.classes().items():
        degrees = _degree_profile(polys)
        p_top = degrees[0] + 1
        missing = sorted(set(range(p_top)) - set(degrees))
        layout.append((base, degrees, missing, p_top))
    return layout


def hat_difference_operator(data, direction=1):
    """prod (T - alpha_i)^{p_i} with p_i = mu_1 + (number of parts)."""
    roots = []
    for alpha, mu in zip(data.alphas, data.mus):
        p_i = mu.first + mu.length
        roots.extend([alpha ** direction] * p_i)
    return DifferenceOperator.from_shift_poly(Poly.from_roots(roots), direction)


def hat_differential_operator(data):
    """prod over classes of (theta - z_a - b) for b = 0..(lambda_1 + parts - 1)."""
    roots = []
    for z, lam in zip(data.zs, data.lambdas):
        l_a = lam.first + lam.length - 1
        roots.extend(z + b for b in range(l_a + 1))
    return DifferentialOperator.from_euler_poly(Poly.from_roots(roots))


def sdenom_closed_form(alphas, ps):
    """Scalar value of the Casorati determinant of the monomial hat basis."""
    total = _ONE
    for alpha, p in zip(alphas, ps):
        for s in range(1, p):
            total = total * alpha ** s * math.factorial(s)
    for i in range(len(alphas)):
        for j in range(i + 1, len(alphas)):
            total = total * (alphas[j] - alphas[i]) ** (ps[i] * ps[j])
    return total


def quotient_conjugate_space(W, direction=1):
    """The quotient conjugate space: span of shifted Wronskian ratios.

    Each class of W is completed to a full monomial ladder; the ratio of the
    Wronskian omitting one ladder monomial to the full one, shifted once,
    gives a generator.  Class bases invert and degree profiles conjugate.
    """
    fs = _exp_generators(W)
    layout = _class_layout(W)
    hs = [QuasiExponential(base, Poly.x(p)) for base, _, missing, _ in layout
          for p in missing]
    if not hs:
        raise ValueError("hat space adds no monomials")
    full = discrete_wronskian(fs + hs, direction)
    if full.is_zero() or not full.poly.is_constant():
        raise ValueError("hat space Wronskian is not constant")
    gens = []
    for a in range(len(hs)):
        rest = fs + hs[:a] + hs[a + 1:]
        sub = discrete_wronskian(rest, direction)
        if sub.is_zero():
            raise ValueError("intermediate Wronskian vanishes")
        base = sub.base / full.base
        scale = base ** direction / full.poly.lc
        gens.append(QuasiExponential(base, scale * sub.poly.shift(direction)))
    out = QuasiExpSpace(gens)
    expected = {}
    for base, degrees, _, _ in layout:
        mu = Partition.from_exponents(degrees)
        inv = _ONE / base
        expected[inv] = mu.conjugate()
    got = {b: Partition.from_exponents(_degree_profile(polys))
           for b, polys in out.classes().items()}
    if len(got) != len(expected) or any(
            got.get(b) != m for b, m in expected.items()):
        raise ValueError("quotient space has unexpected shape")
    return out


def quotient_conjugate_space_left(W):
    return quotient_conjugate_space(W, direction=-1)


def quotient_difference_operator(W, direction=1):
    """The cofactor of the annihilator inside the hat operator.

    Returns a QuotientPair: hat = quotient * fundamental exactly.
    """
    layout = _class_layout(W)
    roots = []
    for base, _, _, p_top in layout:
        roots.extend([base ** direction] * p_top)
    hat = DifferenceOperator.from_shift_poly(Poly.from_roots(roots), direction)
    s_w = fundamental_difference_operator(W, direction)
    pair = right_divide(hat, s_w)
    if not pair.remainder.is_zero():
        raise ValueError("hat operator is not divisible by the annihilator")
    return pair


# ---------------------------------------------------------------------------
# duality map t1


def t1_map(W, data=None):
    """Reflected quotient space; data maps (a, mu; z, lam) -> (a, mu'; 1-z, lam')."""
    if data is None:
        data = W.data
    if data is None:
        raise ValueError("difference data required")
    q_space = quotient_conjugate_space(W)
    gens = [g.reflect() for g in q_space.generators]
    predicted = DifferenceData(
        data.alphas,
        tuple(mu.conjugate() for mu in data.mus),
        tuple(1 - z for z in data.zs),
        tuple(lam.conjugate() for lam in data.lambdas),
    )
    out = QuasiExpSpace(gens)
    derived = extract_difference_data(out, predicted.zs)
    if not _same_difference_data(derived, predicted):
        raise ValueError("quotient data transform failed verification")
    return out.with_data(predicted)


# ---------------------------------------------------------------------------
# regularization and the coefficient transpose


def regularizer_from_bases(alphas, mus):
    """prod (x - alpha_i)^{number of parts of mu_i}."""
    roots = []
    for alpha, mu in zip(alphas, mus):
        roots.extend([alpha] * mu.length)
    return Poly.from_roots(roots)


def regularizer_from_exponents(zs, lambdas):
    """prod over classes and rows of (x - z_a - (parts + lam_b - b))."""
    roots = []
    for z, lam in zip(zs, lambdas):
        n_a = lam.length
        for b in range(1, n_a + 1):
            roots.append(z + n_a + lam.part(b) - b)
    return Poly.from_roots(roots)


def _value_at_infinity(rf):
    dn, dd = rf.num.degree, rf.den.degree
    if dn > dd:
        raise ValueError("coefficient not regular at infinity")
    if dn < dd:
        return Fraction(0)
    return rf.num.lc / rf.den.lc


def _symbol_at_infinity(op):
    """u^N + sum a_i(oo) u^(N-i) for a monic operator, as a Poly in u."""
    n = op.order
    coeffs = [Fraction(0)] * (n + 1)
    for m, c in op.terms():
        coeffs[abs(m)] = _value_at_infinity(c)
    return Poly(coeffs)


def regularize_difference(W, data=None):
    """Clear denominators of the annihilator: multiply by the predicted poly.

    Checks that every cleared coefficient is a polynomial and that the
    top-order symbol at infinity matches the base-multiplicity polynomial.
    """
    if data is None:
        data = W.data if isinstance(W, QuasiExpSpace) else None
    if isinstance(W, DifferenceOperator):
        raise ValueError("pass the space; the operator is derived from it")
    if data is None:
        raise ValueError("difference data required")
    s_w = fundamental_difference_operator(W)
    symbol = _symbol_at_infinity(s_w)
    if symbol != regularizer_from_bases(data.alphas, data.mus):
        raise ValueError("data inconsistent with space")
    shifted_zs = tuple(z - lam.length
                       for z, lam in zip(data.zs, data.lambdas))
    q = regularizer_from_exponents(shifted_zs, data.lambdas)
    out = q * s_w
    if not out.is_polynomial():
        raise ValueError("data inconsistent with space")
    return out


def regularize_differential(V, data=None):
    """Multiply the annihilator by x^L and the base poly; all entries clear."""
    if data is None:
        data = V.data if isinstance(V, QuasiPolySpace) else None
    if data is None:
        raise ValueError("quasi-polynomial data required")
    d_v = fundamental_differential_operator(V).to_euler()
    l_total = sum(lam.length for lam in data.lambdas)
    x_l = Poly.x(l_total)
    lifted = x_l * d_v
    symbol = _symbol_at_infinity(lifted)
    if symbol != regularizer_from_exponents(data.zs, data.lambdas):
        raise ValueError("data inconsistent with space")
    p = regularizer_from_bases(data.alphas, data.mus)
    out = p * lifted
    if not out.is_polynomial():
        raise ValueError("data inconsistent with space")
    return out


def bispectral_transform(op):
    """Transpose coefficients between x-powers and shift/Euler powers.

    sum b[a][i] x^a (x d/dx)^i  <->  sum b[a][i] x^i T^a; requires polynomial
    coefficients, forward shifts, Euler form.
    """
    if isinstance(op, DifferentialOperator):
        src = op.to_euler()
        table = {}
        for i, c in src.terms():
            if not c.is_polynomial():
                raise ValueError("coefficients must be polynomials")
            p = c.as_poly()
            for a in range(p.degree + 1):
                if p[a] != 0:
                    table.setdefault(a, {})[i] = p[a]
        out = {}
        for a, row in table.items():
            top = max(row)
            out[a] = Poly([row.get(e, 0) for e in range(top + 1)])
        return DifferenceOperator.from_terms(out)
    if isinstance(op, DifferenceOperator):
        if op.direction != 1 and op.order > 0:
            raise ValueError("forward shifts required")
        table = {}
        for a, c in op.terms():
            if not c.is_polynomial():
                raise ValueError("coefficients must be polynomials")
            p = c.as_poly()
            for i in range(p.degree + 1):
                if p[i] != 0:
                    table.setdefault(i, {})[a] = p[i]
        out = {}
        for i, row in table.items():
            top = max(row)
            out[i] = Poly([row.get(e, 0) for e in range(top + 1)])
        return DifferentialOperator.from_terms(out, "euler")
    raise ValueError("unsupported operand")


# ---------------------------------------------------------------------------
# kernel recovery


def _clear_denominators(coeff_terms):
    """lcm-clear a {power: rf} mapping to {power: Poly} entries."""
    from .poly import poly_gcd
    denom = Poly.const(1)
    for c in coeff_terms.values():
        g = poly_gcd(denom, c.den)
        denom = denom * c.den.exact_div(g)
    cleared = {}
    for m, c in coeff_terms.items():
        cleared[m] = c.num * denom.exact_div(c.den)
    return cleared


def kernel_quasi_exponential(S, alpha, degree_bound):
    """Polynomials p with deg <= bound and S(alpha^x p) = 0, by null space."""
    cleared = _clear_denominators(dict(S.terms()))
    cols = []
    for j in range(degree_bound + 1):
        col = Poly.const(0)
        for m, c in cleared.items():
            col = col + (alpha ** m) * (c * Poly((m, _ONE)) ** j)
        cols.append(col)
    height = max((c.degree for c in cols), default=-1) + 1
    mat = [[cols[j][i] for j in range(degree_bound + 1)]
           for i in range(height)]
    if not mat:
        mat = [[Fraction(0)] * (degree_bound + 1)]
    return [Poly(v) for v in nullspace(mat)]


def kernel_quasi_monomial(D, z, degree_bound):
    """Polynomials q with deg <= bound and D(x^z q) = 0, by null space."""
    op = D.to_euler()
    cleared = _clear_denominators(dict(op.terms()))
    cols = []
    for j in range(degree_bound + 1):
        col = Poly.const(0)
        for k, c in cleared.items():
            col = col + ((z + j) ** k) * c
        cols.append(Poly.x(j) * col if j else col)
    height = max((c.degree for c in cols), default=-1) + 1
    mat = [[cols[j][i] for j in range(degree_bound + 1)]
           for i in range(height)]
    if not mat:
        mat = [[Fraction(0)] * (degree_bound + 1)]
    return [Poly(v) for v in nullspace(mat)]


# ---------------------------------------------------------------------------
# duality maps t3 and t2

_KERNEL_SLACK = 2


def t3_map(V, data=None):
    """Quasi-polynomial space -> quasi-exponential space, via the transpose.

    The regularized annihilator's transpose is the regularized annihilator
    of the image; the image itself is recovered as its kernel with degree
    bounds read off the predicted data.
    """
    if data is None:
        data = V.data
    if data is None:
        raise ValueError("quasi-polynomial data required")
    reg = regularize_differential(V, data)
    s_bar = bispectral_transform(reg)
    new_zs = tuple(z + lam.length for z, lam in zip(data.zs, data.lambdas))
    predicted = DifferenceData(data.alphas, data.mus, new_zs, data.lambdas)
    lead = s_bar.coeffs[0]
    expected_lead = regularizer_from_exponents(data.zs, data.lambdas)
    if not lead.is_polynomial() or lead.as_poly() != expected_lead:
        raise ValueError("bispectral recovery failed")
    s_u, _ = s_bar.make_monic()
    gens = []
    for alpha, mu in zip(predicted.alphas, predicted.mus):
        n_i = mu.length
        bound = n_i + mu.first - 1 + _KERNEL_SLACK
        basis = kernel_quasi_exponential(s_u, alpha, bound)
        if len(basis) != n_i:
            raise ValueError("bispectral recovery failed")
        gens.extend(QuasiExponential(alpha, p) for p in basis)
    out = QuasiExpSpace(gens)
    derived = extract_difference_data(out, predicted.zs)
    if not _same_difference_data(derived, predicted):
        raise ValueError("bispectral recovery failed")
    return out.with_data(predicted)


def t3_inverse(W, data=None):
    """Quasi-exponential space -> quasi-polynomial space, inverse transpose."""
    if data is None:
        data = W.data
    if data is None:
        raise ValueError("difference data required")
    reg = regularize_difference(W, data)
    d_bar = bispectral_transform(reg)
    new_zs = tuple(z - lam.length for z, lam in zip(data.zs, data.lambdas))
    predicted = PolyData(new_zs, data.lambdas, data.alphas, data.mus)
    lead = d_bar.coeffs[0]
    expected_lead = regularizer_from_bases(data.alphas, data.mus)
    if not lead.is_polynomial() or lead.as_poly() != expected_lead:
        raise ValueError("bispectral recovery failed")
    d_v, _ = d_bar.make_monic()
    gens = []
    for z, lam in zip(predicted.zs, predicted.lambdas):
        n_a = lam.length
        bound = n_a + lam.first - 1 + _KERNEL_SLACK
        basis = kernel_quasi_monomial(d_v, z, bound)
        if len(basis) != n_a:
            raise ValueError("bispectral recovery failed")
        gens.extend(QuasiMonomial(z, q) for q in basis)
    out = QuasiPolySpace(gens)
    derived = extract_poly_data(out)
    if not _same_poly_data(derived, predicted):
        raise ValueError("bispectral recovery failed")
    return out.with_data(predicted)


def quotient_differential_operator(V, data=None):
    """Cofactor of x^L * annihilator inside the Euler ladder product."""
    if data is None:
        data = V.data
    if data is None:
        data = extract_poly_data(V)
    hat = hat_differential_operator(data)
    l_total = sum(lam.length for lam in data.lambdas)
    lifted = Poly.x(l_total) * fundamental_differential_operator(V).to_euler()
    pair = right_divide(hat, lifted)
    if not pair.remainder.is_zero():
        raise ValueError("data inconsistent with space")
    return pair


def t2_map(V, data=None):
    """Composition: transpose, quotient-reflect, transpose back.

    The image is annihilated by the conjugate of the quotient cofactor;
    both that and the predicted data transform are verified.
    """
    if data is None:
        data = V.data
    if data is None:
        raise ValueError("quasi-polynomial data required")
    u_space = t3_map(V, data)
    w_space = t1_map(u_space)
    out = t3_inverse(w_space)
    predicted = PolyData(
        tuple(1 - z - lam.length - lam.first
              for z, lam in zip(data.zs, data.lambdas)),
        tuple(lam.conjugate() for lam in data.lambdas),
        data.alphas,
        tuple(mu.conjugate() for mu in data.mus),
    )
    if not _same_poly_data(out.data, predicted):
        raise ValueError("data transform failed verification")
    check = quotient_differential_operator(V, data).quotient.conjugate()
    for g in out.generators:
        if not check.annihilates(g):
            raise ValueError("conjugate cofactor fails to annihilate image")
    return out
