"""Exact scalar arithmetic over Q and Q(i).

Rationals are plain fractions.Fraction; Gaussian rationals are pairs of
fractions with full operator support so that polynomial and operator code
upstream never needs to know which field it is working over. A Field object
only carries the parsing/serialization/membership conventions plus the
root-candidate machinery that genuinely differs between the two fields.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


class GaussianRational:
    """a + b*i with a, b rational, canonical (always reduced) form."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- predicates -------------------------------------------------------

    def is_rational(self):
        return self.im == 0

    def is_integer(self):
        return self.im == 0 and self.re.denominator == 1

    def __bool__(self):
        return self.re != 0 or self.im != 0

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (GaussianRational(1) / self) ** (-n)
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm(self):
        """Field norm a^2 + b^2, a nonnegative rational."""
        return self.re * self.re + self.im * self.im

    # -- equality/hash (compatible with Fraction when im == 0) ------------

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


def format_scalar(v):
    """Exact string form: "3/4", "-2", "i", "1-2/3i", never floats."""
    if isinstance(v, GaussianRational):
        if v.im == 0:
            return str(v.re)
        im_abs = abs(v.im)
        im_str = "i" if im_abs == 1 else f"{im_abs}i"
        sign = "-" if v.im < 0 else "+"
        if v.re == 0:
            return im_str if v.im > 0 else "-" + im_str
        return f"{v.re}{sign}{im_str}"
    return str(Fraction(v))


def parse_scalar(s, field):
    """Inverse of format_scalar for the given field."""
    s = s.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar string")
    if "i" not in s:
        v = Fraction(s)
        return field.coerce(v)
    if field is not QI:
        raise ValueError(f"imaginary literal {s!r} outside field Q")
    # split into real and imaginary summands at the last top-level +/-
    body = s[:-1] if s.endswith("i") else None
    if body is None:
        raise ValueError(f"malformed Gaussian rational {s!r}")
    split = -1
    for idx in range(len(body) - 1, 0, -1):
        if body[idx] in "+-" and body[idx - 1] not in "+-/":
            split = idx
            break
    if split == -1:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:split], body[split:]
    if im_part in ("", "+"):
        im = Fraction(1)
    elif im_part == "-":
        im = Fraction(-1)
    else:
        im = Fraction(im_part)
    re = Fraction(re_part) if re_part not in ("", "+") else Fraction(0)
    return GaussianRational(re, im)


def _factorize(n):
    """Trial-division factorization of a positive integer, {prime: exp}."""
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _gaussian_prime_over(p):
    """A Gaussian prime dividing the rational prime p (p = 2 or p = 1 mod 4)."""
    if p == 2:
        return GaussianRational(1, 1)
    for a in range(1, isqrt(p) + 1):
        b2 = p - a * a
        b = isqrt(b2)
        if b * b == b2:
            return GaussianRational(a, b)
    raise ValueError(f"{p} is not a sum of two squares")


def gaussian_integer_divisors(g):
    """All divisors of a nonzero Gaussian integer, up to unit multiples.

    Returned as GaussianRational values with integer parts; callers wanting
    all associates multiply by the four units themselves.
    """
    if not (g.re.denominator == 1 and g.im.denominator == 1):
        raise ValueError("gaussian_integer_divisors needs a Gaussian integer")
    if not g:
        raise ValueError("zero has no divisor lattice")
    norm = int(g.norm())
    primes = []
    for p, e in _factorize(norm).items():
        if p == 2:
            primes.append((GaussianRational(1, 1), e))
        elif p % 4 == 3:
            # inert prime: contributes p^(e/2) with e always even
            primes.append((GaussianRational(p, 0), e // 2))
        else:
            pi = _gaussian_prime_over(p)
            # split prime: count how many times pi and conj(pi) divide g
            for q in (pi, pi.conjugate()):
                k, h = 0, g
                while True:
                    cand = h / q
                    if cand.re.denominator == 1 and cand.im.denominator == 1:
                        k += 1
                        h = cand
                    else:
                        break
                if k:
                    primes.append((q, k))
    divisors = [GaussianRational(1, 0)]
    for q, e in primes:
        divisors = [d * q**j for d in divisors for j in range(e + 1)]
    # dedupe up to units
    seen = set()
    out = []
    units = [GaussianRational(1), GaussianRational(-1), GaussianRational(0, 1), GaussianRational(0, -1)]
    for d in divisors:
        if any((d * u).re >= 0 and (d * u).im >= 0 and (d * u) in seen for u in units):
            continue
        canon = d
        for u in units:
            c = d * u
            if (c.re > 0 and c.im >= 0) or (c.re == 0 and c.im > 0):
                canon = c
                break
        if canon not in seen:
            seen.add(canon)
            out.append(canon)
    return out


class Field:
    """One of the two supported exact coefficient fields."""

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return f"Field({self.name})"

    def coerce(self, v):
        if self.name == "Q":
            if isinstance(v, GaussianRational):
                if v.im != 0:
                    raise ValueError(f"{v} is not rational")
                return v.re
            if isinstance(v, bool) or not isinstance(v, (int, Fraction)):
                if isinstance(v, str):
                    return parse_scalar(v, self)
                raise TypeError(f"cannot coerce {v!r} into Q")
            return Fraction(v)
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, (int, Fraction)):
            return GaussianRational(v, 0)
        if isinstance(v, str):
            return parse_scalar(v, self)
        raise TypeError(f"cannot coerce {v!r} into Q(i)")

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def contains(self, v):
        try:
            self.coerce(v)
            return True
        except (TypeError, ValueError):
            return False

    def format(self, v):
        return format_scalar(self.coerce(v))

    def parse(self, s):
        return parse_scalar(s, self)


Q = Field("Q")
QI = Field("Qi")

FIELDS = {"Q": Q, "Qi": QI}


def field_of(v):
    """Smallest supported field containing the scalar."""
    if isinstance(v, GaussianRational) and v.im != 0:
        return QI
    return Q


def as_fraction_pair(v):
    """(re, im) fractions of a scalar from either field."""
    if isinstance(v, GaussianRational):
        return v.re, v.im
    return Fraction(v), Fraction(0)
