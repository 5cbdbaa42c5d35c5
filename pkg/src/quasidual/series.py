"""Laurent series at x = infinity with explicit truncation tracking.

A series holds exact coefficients for exponents top, top-1, ..., trunc and
represents a value known up to an O(x^(trunc-1)) error.  trunc=None marks an
exact, finitely supported element (a Laurent polynomial known to all orders);
arithmetic degrades exactness only when it must.  Everything is immutable.
"""

from fractions import Fraction

from .scalars import GaussianRational, format_scalar
from .poly import Poly, RationalFunction

_ZERO = Fraction(0)
_ONE = Fraction(1)

_SCALARS = (int, Fraction, GaussianRational)


class SeriesAtInfinity:
    """Exact coefficients for x^top .. x^trunc plus an O(x^(trunc-1)) tail."""

    __slots__ = ("top", "coeffs", "trunc")

    def __init__(self, top, coeffs, trunc=None):
        coeffs = list(coeffs)
        # strip leading (high-exponent) zeros
        while coeffs and not coeffs[0]:
            coeffs.pop(0)
            top -= 1
        if trunc is None:
            while coeffs and not coeffs[-1]:
                coeffs.pop()
            if not coeffs:
                top = None
        else:
            want = top - trunc + 1
            if want < 0:
                coeffs = []
            elif len(coeffs) > want:
                coeffs = coeffs[:want]
            elif len(coeffs) < want:
                coeffs = coeffs + [_ZERO] * (want - len(coeffs))
            # re-strip if padding/cutting exposed leading zeros
            while coeffs and not coeffs[0]:
                coeffs.pop(0)
                top -= 1
            if not coeffs:
                top = trunc - 1
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, name, value):
        raise AttributeError("SeriesAtInfinity is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(trunc=None):
        return SeriesAtInfinity(0, [], trunc)

    @staticmethod
    def one(trunc=None):
        return SeriesAtInfinity(0, [_ONE], trunc)

    @staticmethod
    def monomial(c, e, trunc=None):
        return SeriesAtInfinity(e, [c], trunc)

    @staticmethod
    def from_poly(p, trunc=None):
        if not p.coeffs:
            return SeriesAtInfinity.zero(trunc)
        return SeriesAtInfinity(p.degree, list(reversed(p.coeffs)), trunc)

    # -- queries ----------------------------------------------------------

    def is_exact(self):
        return self.trunc is None

    def is_zero(self):
        """True when no retained coefficient is nonzero."""
        return not self.coeffs

    def coeff(self, e):
        """Coefficient of x^e; raises if e lies below the truncation."""
        if self.trunc is not None and e < self.trunc:
            raise ValueError(f"exponent {e} below truncation {self.trunc}")
        if self.top is None or e > self.top or e <= self.top - len(self.coeffs):
            return _ZERO
        return self.coeffs[self.top - e]

    def _etop(self):
        # top exponent at which the value may be nonzero; None = -infinity
        if self.coeffs:
            return self.top
        if self.trunc is None:
            return None
        return self.trunc - 1

    def __eq__(self, other):
        if isinstance(other, SeriesAtInfinity):
            return (
                self.top == other.top
                and self.coeffs == other.coeffs
                and self.trunc == other.trunc
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.top, self.coeffs, self.trunc))

    def agrees(self, other):
        """Equality on all exponents both sides retain (exact sides retain all)."""
        if not isinstance(other, SeriesAtInfinity):
            other = as_series(other)
        cuts = [t for t in (self.trunc, other.trunc) if t is not None]
        tops = [s._etop() for s in (self, other) if s._etop() is not None]
        if not tops:
            return True
        hi = max(tops)
        if cuts:
            lo = max(cuts)
        else:
            lo = min(s.top - len(s.coeffs) + 1 for s in (self, other) if s.coeffs)
        if hi < lo:
            return True
        for e in range(hi, lo - 1, -1):
            if self.coeff(e) != other.coeff(e):
                return False
        return True

    # -- arithmetic -------------------------------------------------------

    def truncate(self, new_trunc):
        """Forget everything below exponent new_trunc."""
        if self.trunc is not None and new_trunc < self.trunc:
            raise ValueError("cannot refine a truncated series")
        top = self.top if self.coeffs else new_trunc - 1
        return SeriesAtInfinity(top, list(self.coeffs), new_trunc)

    def __add__(self, other):
        other = as_series(other)
        if other is NotImplemented:
            return NotImplemented
        if self.trunc is None and other.trunc is None:
            trunc = None
            lows = []
            for s in (self, other):
                if s.coeffs:
                    lows.append(s.top - len(s.coeffs) + 1)
            if not lows:
                return SeriesAtInfinity.zero()
            lo = min(lows)
        else:
            cuts = [t for t in (self.trunc, other.trunc) if t is not None]
            trunc = max(cuts)
            lo = trunc
        tops = [s._etop() for s in (self, other) if s._etop() is not None]
        if not tops:
            return SeriesAtInfinity.zero(trunc)
        hi = max(tops)
        if hi < lo:
            return SeriesAtInfinity.zero(trunc)
        out = [self.coeff(e) + other.coeff(e) for e in range(hi, lo - 1, -1)]
        return SeriesAtInfinity(hi, out, trunc)

    __radd__ = __add__

    def __neg__(self):
        return SeriesAtInfinity(self.top if self.coeffs else (0 if self.trunc is None else self.trunc - 1), [-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        other = as_series(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = as_series(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            if not other:
                return SeriesAtInfinity.zero()
            return SeriesAtInfinity(self._etop() if self.coeffs else (0 if self.trunc is None else self.trunc - 1), [c * other for c in self.coeffs], self.trunc)
        other = as_series(other)
        if other is NotImplemented:
            return NotImplemented
        # exact zero annihilates everything, including truncation error
        if self.trunc is None and not self.coeffs:
            return self
        if other.trunc is None and not other.coeffs:
            return other
        bounds = []
        if self.trunc is not None:
            et = other._etop()
            bounds.append(self.trunc + (et if et is not None else 0))
        if other.trunc is not None:
            et = self._etop()
            bounds.append(other.trunc + (et if et is not None else 0))
        trunc = max(bounds) if bounds else None
        if not self.coeffs or not other.coeffs:
            return SeriesAtInfinity.zero(trunc)
        hi = self.top + other.top
        lo1 = self.top - len(self.coeffs) + 1
        lo2 = other.top - len(other.coeffs) + 1
        lo = lo1 + lo2
        if trunc is not None:
            lo = max(lo, trunc)
        out = [_ZERO] * (hi - lo + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            e1 = self.top - i
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                e = e1 + (other.top - j)
                if e < lo:
                    break
                out[hi - e] = out[hi - e] + a * b
        return SeriesAtInfinity(hi, out, trunc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            inv = _ONE / other
            return self * inv
        other = as_series(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = SeriesAtInfinity.one(None)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self, order=None):
        """Multiplicative inverse as a series at infinity.

        For a truncated input the result is truncated where the input's error
        stops determining it; for an exact input an explicit `order` is
        required unless the input is a monomial.
        """
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero series")
        p = self.top
        if self.trunc is None:
            if len(self.coeffs) == 1:
                c = self.coeffs[0]
                return SeriesAtInfinity(-p, [_ONE / c], None)
            if order is None:
                raise ValueError("inverse of exact non-monomial series needs an order")
            trunc = order
        else:
            # error O(x^(trunc-1)) in self propagates as O(x^(trunc-1-2p))
            trunc = self.trunc - 2 * p
            if order is not None:
                if order < trunc:
                    raise ValueError("requested order exceeds available precision")
                trunc = order
        nterms = -p - trunc + 1
        a = [self.coeff(p - j) for j in range(nterms)]
        inv0 = _ONE / a[0]
        b = []
        for n in range(nterms):
            s = _ONE if n == 0 else _ZERO
            for j in range(1, n + 1):
                s = s - a[j] * b[n - j]
            b.append(s * inv0)
        return SeriesAtInfinity(-p, b, trunc)

    def shift_arg(self, m, order=None):
        """The series f(x+m), re-expanded at infinity.

        For exact input with negative exponents the result is an infinite
        series, so an explicit order is required in that case.
        """
        if not m:
            return self
        trunc = self.trunc
        if trunc is None:
            if self.coeffs and self.top - len(self.coeffs) + 1 < 0:
                if order is None:
                    raise ValueError("shift of exact series with poles needs an order")
                trunc = order
        elif order is not None:
            if order < trunc:
                raise ValueError("requested order exceeds available precision")
            trunc = order
        if not self.coeffs:
            return SeriesAtInfinity.zero(trunc)
        acc = {}
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            e = self.top - i
            # (x+m)^e = sum_k C(e,k) m^k x^(e-k)
            term = c
            k = 0
            while True:
                ex = e - k
                if trunc is not None and ex < trunc:
                    break
                if term:
                    acc[ex] = acc.get(ex, _ZERO) + term
                term = term * Fraction(e - k, k + 1) * m
                k += 1
                if trunc is None and k > e:
                    break
        if not acc:
            return SeriesAtInfinity.zero(trunc)
        hi = max(acc)
        lo = trunc if trunc is not None else min(acc)
        return SeriesAtInfinity(hi, [acc.get(e, _ZERO) for e in range(hi, lo - 1, -1)], trunc)

    def subs_neg(self):
        """The series f(-x)."""
        top = self.top if self.coeffs else (0 if self.trunc is None else self.trunc - 1)
        out = []
        for i, c in enumerate(self.coeffs):
            e = self.top - i
            out.append(-c if e & 1 else c)
        return SeriesAtInfinity(top, out, self.trunc)

    def __repr__(self):
        return f"Series({self})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            e = self.top - i
            cs = format_scalar(c)
            if e == 0:
                terms.append(cs)
            else:
                xs = "x" if e == 1 else f"x^{e}"
                if cs == "1":
                    terms.append(xs)
                elif cs == "-1":
                    terms.append(f"-{xs}")
                elif ("+" in cs[1:]) or ("-" in cs[1:]):
                    terms.append(f"({cs})*{xs}")
                else:
                    terms.append(f"{cs}*{xs}")
        if not terms:
            body = "0"
        else:
            body = terms[0]
            for t in terms[1:]:
                body += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        if self.trunc is None:
            return body
        return f"{body} + O(x^{self.trunc - 1})"


def as_series(v):
    if isinstance(v, SeriesAtInfinity):
        return v
    if isinstance(v, _SCALARS):
        if not v:
            return SeriesAtInfinity.zero()
        return SeriesAtInfinity(0, [v])
    if isinstance(v, Poly):
        return SeriesAtInfinity.from_poly(v)
    return NotImplemented


def rf_series_at_infinity(f, order):
    """Laurent expansion of a rational function at infinity, down to x^order.

    Exact coefficients; a polynomial input comes back exact (untruncated).
    """
    if isinstance(f, Poly):
        f = RationalFunction(f)
    if not f.num.coeffs:
        return SeriesAtInfinity.zero(order)
    if f.is_polynomial():
        return SeriesAtInfinity.from_poly(f.num)  # finitely supported: exact
    p, q = f.num.degree, f.den.degree
    top = p - q
    if top < order:
        return SeriesAtInfinity.zero(order)
    nterms = top - order + 1
    a = [f.den[q - j] for j in range(q + 1)]
    c = [f.num[p - j] if p - j >= 0 else _ZERO for j in range(nterms)]
    inv0 = _ONE / a[0]
    b = []
    for n in range(nterms):
        s = c[n]
        for j in range(1, min(n, q) + 1):
            s = s - a[j] * b[n - j]
        b.append(s * inv0)
    return SeriesAtInfinity(top, b, order)


def binomial_power_series(m, e, trunc=None):
    """(x+m)^e as a series at infinity; exact when e >= 0, else needs trunc."""
    if e >= 0:
        return SeriesAtInfinity.from_poly(Poly([m, _ONE]) ** e, trunc)
    if trunc is None:
        raise ValueError("negative power needs a truncation order")
    coeffs = []
    term = _ONE
    k = 0
    while e - k >= trunc:
        coeffs.append(term)
        term = term * Fraction(e - k, k + 1) * m
        k += 1
    return SeriesAtInfinity(e, coeffs, trunc)
