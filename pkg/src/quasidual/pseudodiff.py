"""Pseudo-difference operators: truncated two-sided series in x and T.

An element is a finite collection of T-exponents, each carrying a Laurent
series at x = infinity; products follow T^m x^l = (x+m)^l T^m with the
binomial re-expanded at infinity.  Truncation is tracked in both directions:
per-coefficient series carry their own x-cutoff, and the operator records the
lowest reliable T-exponent (None means every absent exponent is exactly
zero).  On top of the raw algebra sit the antiautomorphism that moves
coefficients across shifts with a sign, the embedding of Euler-form
differential operators, geometric-series inversion, and the fundamental
pseudo-difference operators of spaces with data, with their inverse-pair
verification.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .oreops import (
    DifferenceOperator,
    DifferentialOperator,
    fundamental_difference_operator,
    quotient_differential_operator,
    regularize_difference,
    regularize_differential,
    regularizer_from_bases,
    regularizer_from_exponents,
    t1_map,
    t3_map,
)
from .poly import Poly, RationalFunction, poly_gcd
from .series import (
    SeriesAtInfinity,
    as_series,
    binomial_power_series,
    rf_series_at_infinity,
)

_ONE = Fraction(1)


def _coerce_series(v):
    s = as_series(v)
    if s is NotImplemented:
        raise TypeError("coefficients must be series, polynomials or scalars")
    return s


class PseudoDifferenceOperator:
    """Finitely many T-exponents, each with a series-at-infinity coefficient."""

    __slots__ = ("terms", "m_floor")

    def __init__(self, terms, m_floor=None):
        table = {}
        for m, s in terms.items():
            s = _coerce_series(s)
            if m_floor is not None and m < m_floor:
                continue
            if s.is_zero() and s.trunc is None:
                continue
            table[m] = s
        object.__setattr__(self, "terms", table)
        object.__setattr__(self, "m_floor", m_floor)

    def __setattr__(self, name, value):
        raise AttributeError("PseudoDifferenceOperator is immutable")

    @staticmethod
    def zero(m_floor=None):
        return PseudoDifferenceOperator({}, m_floor)

    @staticmethod
    def one(m_floor=None):
        return PseudoDifferenceOperator({0: SeriesAtInfinity.one()}, m_floor)

    @staticmethod
    def shift_power(m):
        return PseudoDifferenceOperator({m: SeriesAtInfinity.one()})

    @staticmethod
    def from_shift_poly(p):
        """p(T) with scalar coefficients, an exact element."""
        return PseudoDifferenceOperator(
            {m: c for m, c in enumerate(p.coeffs) if c})

    @staticmethod
    def from_x_poly(p):
        return PseudoDifferenceOperator({0: SeriesAtInfinity.from_poly(p)})

    @staticmethod
    def from_difference_operator(op, x_order=None):
        """Lift a difference operator, expanding rational coefficients."""
        table = {}
        for m, c in op.terms():
            if c.is_polynomial():
                table[m] = SeriesAtInfinity.from_poly(c.as_poly())
            else:
                if x_order is None:
                    raise ValueError(
                        "rational coefficients need an expansion order")
                table[m] = rf_series_at_infinity(c, x_order)
        return PseudoDifferenceOperator(table)

    # -- queries ----------------------------------------------------------

    @property
    def top_m(self):
        return max(self.terms) if self.terms else None

    @property
    def x_top(self):
        tops = [s.top for s in self.terms.values() if s.coeffs]
        return max(tops) if tops else None

    @property
    def x_floor(self):
        cuts = [s.trunc for s in self.terms.values() if s.trunc is not None]
        return max(cuts) if cuts else None

    def is_zero(self):
        return all(s.is_zero() for s in self.terms.values())

    def coeff(self, l, m):
        s = self.terms.get(m)
        if s is None:
            if self.m_floor is not None and m < self.m_floor:
                raise ValueError(f"T-exponent {m} below truncation")
            return Fraction(0)
        return s.coeff(l)

    def _blank(self):
        return SeriesAtInfinity.zero(self.x_floor)

    def agrees(self, other):
        """Coefficient equality on the window both operands retain."""
        if not isinstance(other, PseudoDifferenceOperator):
            other = PseudoDifferenceOperator({0: other})
        floors = [f for f in (self.m_floor, other.m_floor) if f is not None]
        lo = max(floors) if floors else None
        for m in set(self.terms) | set(other.terms):
            if lo is not None and m < lo:
                continue
            sa = self.terms.get(m, self._blank())
            sb = other.terms.get(m, other._blank())
            if not sa.agrees(sb):
                return False
        return True

    def first_difference(self, other):
        """None, or (l, m, left, right) for the highest differing coefficient."""
        floors = [f for f in (self.m_floor, other.m_floor) if f is not None]
        lo = max(floors) if floors else None
        for m in sorted(set(self.terms) | set(other.terms), reverse=True):
            if lo is not None and m < lo:
                continue
            sa = self.terms.get(m, self._blank())
            sb = other.terms.get(m, other._blank())
            cuts = [t for t in (sa.trunc, sb.trunc) if t is not None]
            tops = [s._etop() for s in (sa, sb) if s._etop() is not None]
            if not tops:
                continue
            hi = max(tops)
            if cuts:
                low = max(cuts)
            else:
                lows = [s.top - len(s.coeffs) + 1 for s in (sa, sb) if s.coeffs]
                low = min(lows)
            for e in range(hi, low - 1, -1):
                if sa.coeff(e) != sb.coeff(e):
                    return e, m, sa.coeff(e), sb.coeff(e)
        return None

    def __eq__(self, other):
        if not isinstance(other, PseudoDifferenceOperator):
            return NotImplemented
        return self.terms == other.terms and self.m_floor == other.m_floor

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.m_floor))

    # -- linear structure ---------------------------------------------------

    @staticmethod
    def _join_floor(a, b):
        floors = [f for f in (a, b) if f is not None]
        return max(floors) if floors else None

    def __add__(self, other):
        if not isinstance(other, PseudoDifferenceOperator):
            other = PseudoDifferenceOperator({0: other})
        out = dict(self.terms)
        for m, s in other.terms.items():
            out[m] = out[m] + s if m in out else s
        return PseudoDifferenceOperator(
            out, self._join_floor(self.m_floor, other.m_floor))

    __radd__ = __add__

    def __neg__(self):
        return PseudoDifferenceOperator(
            {m: -s for m, s in self.terms.items()}, self.m_floor)

    def __sub__(self, other):
        if not isinstance(other, PseudoDifferenceOperator):
            other = PseudoDifferenceOperator({0: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scaled(self, c):
        return PseudoDifferenceOperator(
            {m: s * c for m, s in self.terms.items()}, self.m_floor)

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, reverse=True):
            s = self.terms[m]
            if m == 0:
                bits.append(f"({s})")
            else:
                bits.append(f"({s})*T^{m}" if m != 1 else f"({s})*T")
        body = " + ".join(bits)
        if self.m_floor is not None:
            body += f" + O(T^{self.m_floor - 1})"
        return body

    __repr__ = __str__


def _shifted(s, m, x_order):
    """s(x+m), supplying an expansion order when the shift needs one."""
    if not m:
        return s
    if s.trunc is None and s.coeffs and s.top - len(s.coeffs) + 1 < 0:
        if x_order is None:
            raise ValueError("multiplication needs a truncation depth")
        return s.shift_arg(m, x_order)
    return s.shift_arg(m)


def _clip(s, x_min):
    """Drop retained coefficients below the frontier (marking the cut)."""
    if x_min is None or not s.coeffs:
        return s
    if s.top - len(s.coeffs) + 1 < x_min and (s.trunc is None
                                              or s.trunc < x_min):
        return s.truncate(x_min)
    return s


def _mul(a, b, m_min, x_min):
    out = {}
    for m1, s1 in a.terms.items():
        for m2, s2 in b.terms.items():
            m = m1 + m2
            if m_min is not None and m < m_min:
                continue
            prod = _clip(s1 * _shifted(s2, m1, x_min), x_min)
            out[m] = out[m] + prod if m in out else prod
    floors = [m_min] if m_min is not None else []
    if a.m_floor is not None and b.top_m is not None:
        floors.append(a.m_floor + b.top_m)
    if b.m_floor is not None and a.top_m is not None:
        floors.append(b.m_floor + a.top_m)
    floor = max(floors) if floors else None
    return PseudoDifferenceOperator(out, floor)


def psd_mul(a, b, depth=None):
    """Product in the shift algebra, truncated `depth` below the joint tops."""
    if a.is_zero() or b.is_zero():
        return PseudoDifferenceOperator.zero(
            PseudoDifferenceOperator._join_floor(a.m_floor, b.m_floor))
    m_min = x_order = None
    if depth is not None:
        if depth < 0:
            raise ValueError("depth must be nonnegative")
        m_min = a.top_m + b.top_m - depth
        xa = a.x_top if a.x_top is not None else 0
        xb = b.x_top if b.x_top is not None else 0
        x_order = xa + xb - depth
    return _mul(a, b, m_min, x_order)


def psd_invert(s, depth):
    """Two-sided inverse, reliable `depth` below its leading corner.

    The leading coefficient is the corner (x_top, top_m) entry; the input
    must actually attain the corner there.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if s.is_zero():
        raise ValueError("zero leading coefficient")
    m_top = s.top_m
    lead = s.terms.get(m_top)
    l_top = s.x_top
    if lead is None or not lead.coeffs or lead.top != l_top:
        raise ValueError("zero leading coefficient")
    c = lead.coeff(l_top)
    mono = SeriesAtInfinity.monomial(_ONE / c, -l_top)
    shifted = PseudoDifferenceOperator(
        {m - m_top: mono * cs for m, cs in s.terms.items()},
        None if s.m_floor is None else s.m_floor - m_top)
    sprime = shifted - PseudoDifferenceOperator.one()
    total = PseudoDifferenceOperator.one()
    power = PseudoDifferenceOperator.one()
    sign = 1
    while True:
        power = _mul(power, sprime, -depth, -depth)
        sign = -sign
        if power.is_zero():
            break
        total = total + (power if sign > 0 else -power)
    left = PseudoDifferenceOperator({-m_top: SeriesAtInfinity.one()})
    out = _mul(left, total, -m_top - depth, -depth)
    right = PseudoDifferenceOperator(
        {0: SeriesAtInfinity.monomial(_ONE / c, -l_top)})
    return _mul(out, right, -m_top - depth, -l_top - depth)


def psd_ddagger(s, x_order=None):
    """Antiautomorphism sum C x^l T^m -> sum C T^m (-x)^l, renormalized.

    Exact coefficients with negative exponents re-expand to infinite tails
    when the shift is nonzero; x_order bounds those when the coefficient
    itself carries no cutoff.
    """
    table = {}
    for m, ser in s.terms.items():
        order = ser.trunc if ser.trunc is not None else x_order
        acc = SeriesAtInfinity.zero(ser.trunc)
        for i, cv in enumerate(ser.coeffs):
            if not cv:
                continue
            l = ser.top - i
            sign = -1 if l % 2 else 1
            cut = None if (l >= 0 or not m) else order
            if l < 0 and m and cut is None:
                raise ValueError("re-expansion needs a truncation order")
            acc = acc + binomial_power_series(m, l, cut) * (sign * cv)
        table[m] = acc
    return PseudoDifferenceOperator(table, s.m_floor)


def tau_embed(d):
    """Euler-form differential operator -> shift algebra: theta -> -x, x -> T."""
    if not isinstance(d, DifferentialOperator):
        raise TypeError("tau embeds differential operators")
    op = d.to_euler()
    table = {}
    for i, c in op.terms():
        if not c.is_polynomial():
            raise ValueError("coefficients must be polynomials")
        p = c.as_poly()
        sign = -1 if i % 2 else 1
        for a in range(p.degree + 1):
            if p[a] == 0:
                continue
            # T^a (-x)^i = (-1)^i (x+a)^i T^a
            contrib = SeriesAtInfinity.from_poly(
                Poly([a, _ONE]) ** i) * (sign * p[a])
            table[a] = table[a] + contrib if a in table else contrib
    return PseudoDifferenceOperator(table)


def _assert_unit_shape(s):
    for m, ser in s.terms.items():
        if m > 0 and not ser.is_zero():
            raise ValueError("fundamental pseudo-difference shape violated")
        if ser.coeffs and ser.top > 0:
            raise ValueError("fundamental pseudo-difference shape violated")
    head = s.terms.get(0)
    if head is None or head.coeff(0) != 1:
        raise ValueError("fundamental pseudo-difference shape violated")
    return s


def fundamental_psd(space, depth=8):
    """The unit-normalized pseudo-difference operator attached to a space.

    Quasi-polynomial side: p(T)^-1 tau(reg annihilator) q(-x)^-1.
    Quasi-exponential side: q(x)^-1 (reg annihilator) p(T)^-1.
    Both come out as 1 + terms with nonpositive x- and T-exponents.
    """
    from .spaces import QuasiExpSpace, QuasiPolySpace

    data = space.data
    if data is None:
        raise ValueError("space data required")
    p = regularizer_from_bases(data.alphas, data.mus)

    def p_inverse(extra):
        if p.degree == 0:
            return PseudoDifferenceOperator.one()
        return psd_invert(
            PseudoDifferenceOperator.from_shift_poly(p), depth + extra)

    if isinstance(space, QuasiPolySpace):
        core = tau_embed(regularize_differential(space, data))
        q_at_neg = regularizer_from_exponents(
            data.zs, data.lambdas).compose_neg()
        q_inv = PseudoDifferenceOperator(
            {0: rf_series_at_infinity(RationalFunction(1, q_at_neg),
                                      -q_at_neg.degree - depth)})
        out = _mul(_mul(p_inverse(core.top_m or 0), core, None, None),
                   q_inv, None, None)
    elif isinstance(space, QuasiExpSpace):
        core = PseudoDifferenceOperator.from_difference_operator(
            regularize_difference(space, data))
        shifted_zs = tuple(z - lam.length
                           for z, lam in zip(data.zs, data.lambdas))
        q = regularizer_from_exponents(shifted_zs, data.lambdas)
        q_inv = PseudoDifferenceOperator(
            {0: rf_series_at_infinity(RationalFunction(1, q), -q.degree - depth)})
        out = _mul(_mul(q_inv, core, None, None),
                   p_inverse(core.top_m or 0), None, None)
    else:
        raise TypeError("space must carry quasi-exponential or "
                        "quasi-polynomial generators")
    return _assert_unit_shape(out)


def cofactor_regularizer(data):
    """prod over classes of (x - z_a - b), b running over the complement
    ladder positions; computed two ways and cross-checked."""
    roots = []
    for z, lam in zip(data.zs, data.lambdas):
        height = lam.length
        width = lam.first
        l_a = width + height - 1
        taken = {height + lam.part(b) - b for b in range(1, height + 1)}
        delta = [b for b in range(l_a + 1) if b not in taken]
        conj = lam.conjugate()
        alt = sorted(height - conj.part(b) + b - 1 for b in range(1, width + 1))
        if delta != alt:
            raise ValueError("ladder complement mismatch")
        roots.extend(z + b for b in delta)
    return Poly.from_roots(roots)


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class InversePairReport:
    passed: bool
    checks: tuple

    def failures(self):
        return [c for c in self.checks if not c.passed]


def _one_check(name, product):
    diff = product.first_difference(PseudoDifferenceOperator.one())
    if diff is None:
        return IdentityCheck(name, True)
    l, m, a, b = diff
    return IdentityCheck(
        name, False, f"first difference at x^{l} T^{m}: {a} != {b}")


def _agree_check(name, left, right):
    diff = left.first_difference(right)
    if diff is None:
        return IdentityCheck(name, True)
    l, m, a, b = diff
    return IdentityCheck(
        name, False, f"first difference at x^{l} T^{m}: {a} != {b}")


def verify_inverse_pair(v, depth=8):
    """Full inverse-pair verification for a quasi-polynomial space with data.

    Builds U and W from the duality chain, forms both fundamental
    pseudo-difference operators, and collects: both product identities, the
    directly inverted operator, the exact finite factor identity, and the
    cofactor route to the inverse with its sign relation.
    """
    data = v.data
    if data is None:
        raise ValueError("quasi-polynomial data required")
    u = t3_map(v, data)
    w = t1_map(u)
    s_v = fundamental_psd(v, depth)
    s_w = fundamental_psd(w, depth)
    checks = [
        _one_check("product VW", psd_mul(s_v, s_w, depth)),
        _one_check("product WV", psd_mul(s_w, s_v, depth)),
        _agree_check("direct inverse", psd_invert(s_v, depth), s_w),
    ]

    # exact finite identity between the annihilators on the exponential side
    s_u = fundamental_difference_operator(u)
    q_arrow = fundamental_difference_operator(t1_map(u))
    p = regularizer_from_bases(data.alphas, data.mus)
    p_conj = regularizer_from_bases(
        data.alphas, tuple(m.conjugate() for m in data.mus))
    lhs = DifferenceOperator.from_shift_poly(p_conj * p)
    rhs = q_arrow.ddagger() * s_u
    checks.append(IdentityCheck(
        "factor identity", lhs == rhs,
        "" if lhs == rhs else f"{lhs} != {rhs}"))

    # cofactor route to the inverse, plus the sign relation behind it
    qbar = cofactor_regularizer(data)
    l_tot = sum(lam.length for lam in data.lambdas)
    eta = tuple(1 - z - lam.length - lam.first
                for z, lam in zip(data.zs, data.lambdas))
    reference = regularizer_from_exponents(
        eta, tuple(lam.conjugate() for lam in data.lambdas))
    sign_ok = qbar.compose_neg() == Fraction(-1) ** l_tot * reference
    checks.append(IdentityCheck(
        "cofactor sign relation", sign_ok,
        "" if sign_ok else f"{qbar.compose_neg()} != +-{reference}"))

    den, num_embed = _cleared_cofactor_embedding(v, data)
    den_psd = PseudoDifferenceOperator.from_shift_poly(den)

    # exact finite identity: den(T) S_W_reg = +-tau(den * cofactor) p'(T)
    s_w_bar = PseudoDifferenceOperator.from_difference_operator(
        regularize_difference(w, w.data))
    lhs_fin = _mul(den_psd, s_w_bar, None, None).scaled(Fraction(-1) ** l_tot)
    rhs_fin = _mul(num_embed, PseudoDifferenceOperator.from_shift_poly(p_conj),
                   None, None)
    checks.append(IdentityCheck(
        "regularized factorization", lhs_fin == rhs_fin,
        "" if lhs_fin == rhs_fin else "finite factor identity broken"))

    # cofactor route: (qbar(-x))^-1 den(T)^-1 tau(den * cofactor) inverts S_V
    if den.degree == 0:
        tau_cof = num_embed
    else:
        den_inv = psd_invert(den_psd, depth + (num_embed.top_m or 0))
        tau_cof = _mul(den_inv, num_embed, -depth, -depth)
    r = tau_cof.x_top or 0
    qbar_neg = qbar.compose_neg()
    inv_q = PseudoDifferenceOperator(
        {0: rf_series_at_infinity(RationalFunction(1, qbar_neg), -depth - max(r, 0))})
    checks.append(_agree_check(
        "cofactor inverse", _mul(inv_q, tau_cof, -depth, -depth),
        psd_invert(s_v, depth)))

    passed = all(c.passed for c in checks)
    return InversePairReport(passed, tuple(checks))


def _cleared_cofactor_embedding(v, data):
    """Embed the quotient cofactor after clearing its coefficient denominators.

    tau needs polynomial coefficients; returns (den, tau(den * cofactor))
    with den the monic lcm of the cofactor's denominators, so that the
    embedded cofactor itself is den(T)^-1 times the returned element.
    """
    cof = quotient_differential_operator(v, data).quotient.to_euler()
    den = Poly([1])
    for _, c in cof.terms():
        g = poly_gcd(den, c.den)
        den = den * c.den.exact_div(g)
    cleared = DifferentialOperator.from_terms({0: den}, "euler") * cof
    return den, tau_embed(cleared)
