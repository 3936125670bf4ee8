"""Exact scalars: rationals, Gaussian rationals and polynomials in lambda.

Rationals are gmpy2 ``mpq`` values.  A ``Scalar`` is a dense polynomial in the
spectral parameter lambda whose coefficients are Gaussian rationals; the real
and imaginary parts are kept as two separate coefficient tuples so that the
common purely real case costs nothing extra.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

from gmpy2 import mpq

Rational = type(mpq(0))

_ZERO = mpq(0)
_ONE = mpq(1)


def rational(value) -> Rational:
    """Coerce ints, Fractions, mpq or "num/den" strings to an mpq."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            den_i = int(den)
            if den_i == 0:
                raise ZeroDivisionError("zero denominator in %r" % value)
            return mpq(int(num), den_i)
        return mpq(int(text))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError("cannot convert %r to a rational" % (value,))


def rational_str(q: Rational) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


class GaussianRational:
    """A number re + i*im with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = rational(re)
        self.im = rational(im)

    @staticmethod
    def coerce(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, Scalar):
            if value.degree > 0:
                raise ValueError("non-constant Scalar is not a GaussianRational")
            return value.coeff(0)
        if isinstance(value, complex):
            raise TypeError("floating point complex values are not exact")
        return GaussianRational(rational(value), 0)

    def __add__(self, other):
        if isinstance(other, Scalar):
            return Scalar.coerce(self) + other
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, Scalar):
            return Scalar.coerce(self) - other
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return Scalar.coerce(self) * other
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Rational:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero")
        return GaussianRational(self.re / nrm, -self.im / nrm)

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            return Scalar.coerce(self) / other
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return other == self
        try:
            o = GaussianRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return "GaussianRational(%s, %s)" % (rational_str(self.re), rational_str(self.im))

    def __str__(self):
        if self.im == 0:
            return rational_str(self.re)
        if self.re == 0:
            return "%s*I" % rational_str(self.im)
        return "(%s + %s*I)" % (rational_str(self.re), rational_str(self.im))

    def to_json(self):
        return [rational_str(self.re), rational_str(self.im)]

    @staticmethod
    def from_json(data) -> "GaussianRational":
        return GaussianRational(rational(data[0]), rational(data[1]))


I = GaussianRational(0, 1)


def _trim(seq) -> tuple:
    k = len(seq)
    while k and seq[k - 1] == 0:
        k -= 1
    return tuple(seq[:k])


def _padd(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _psub(a: tuple, b: tuple) -> tuple:
    out = list(a) + [_ZERO] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return _trim(out)


def _pmul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    if len(a) == 1:
        c = a[0]
        return tuple(c * x for x in b)
    if len(b) == 1:
        c = b[0]
        return tuple(x * c for x in a)
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


ScalarLike = Union["Scalar", GaussianRational, int, Rational, Fraction]


class Scalar:
    """Polynomial in lambda with Gaussian-rational coefficients.

    ``re[k]`` and ``im[k]`` hold the real and imaginary parts of the
    coefficient of lambda**k.  Instances are immutable.
    """

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re: Iterable = (), im: Iterable = ()):
        self.re = _trim([rational(c) for c in re])
        self.im = _trim([rational(c) for c in im])
        self._hash = None

    @staticmethod
    def _make(re: tuple, im: tuple) -> "Scalar":
        s = Scalar.__new__(Scalar)
        s.re = re
        s.im = im
        s._hash = None
        return s

    @staticmethod
    def coerce(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, GaussianRational):
            return Scalar._make(_trim([value.re]), _trim([value.im]))
        q = rational(value)
        return Scalar._make((q,) if q else (), ())

    @staticmethod
    def from_coefficients(coeffs: Iterable) -> "Scalar":
        """Build from a list of GaussianRational-like values indexed by power."""
        gs = [GaussianRational.coerce(c) for c in coeffs]
        return Scalar._make(_trim([g.re for g in gs]), _trim([g.im for g in gs]))

    @property
    def coefficients(self) -> list:
        return [self.coeff(k) for k in range(self.degree + 1)]

    def coeff(self, k: int) -> GaussianRational:
        re = self.re[k] if k < len(self.re) else _ZERO
        im = self.im[k] if k < len(self.im) else _ZERO
        return GaussianRational(re, im)

    @property
    def degree(self) -> int:
        """Degree in lambda; -1 for the zero polynomial."""
        return max(len(self.re), len(self.im)) - 1

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def is_constant(self) -> bool:
        return self.degree <= 0

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        o = other if isinstance(other, Scalar) else Scalar.coerce(other)
        if not o.im and not self.im:
            return Scalar._make(_padd(self.re, o.re), ())
        return Scalar._make(_padd(self.re, o.re), _padd(self.im, o.im))

    __radd__ = __add__

    def __neg__(self):
        return Scalar._make(tuple(-c for c in self.re), tuple(-c for c in self.im))

    def __sub__(self, other):
        o = other if isinstance(other, Scalar) else Scalar.coerce(other)
        return Scalar._make(_psub(self.re, o.re), _psub(self.im, o.im))

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            if not other:
                return ZERO
            return Scalar._make(tuple(c * other for c in self.re), tuple(c * other for c in self.im))
        o = other if isinstance(other, Scalar) else Scalar.coerce(other)
        if not self.im and not o.im:
            return Scalar._make(_pmul(self.re, o.re), ())
        re = _psub(_pmul(self.re, o.re), _pmul(self.im, o.im))
        im = _padd(_pmul(self.re, o.im), _pmul(self.im, o.re))
        return Scalar._make(re, im)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            raise ValueError("negative powers of a Scalar are not polynomials")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other) -> tuple:
        """Polynomial long division over the Gaussian rationals."""
        o = Scalar.coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = self.coefficients
        dd = o.degree
        lead_inv = o.coeff(dd).inverse()
        if len(rem) - 1 < dd:
            return ZERO, self
        quot = [GaussianRational(0)] * (len(rem) - dd)
        ocoeffs = o.coefficients
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k] * lead_inv
            if c.is_zero():
                continue
            quot[k - dd] = c
            for i, oc in enumerate(ocoeffs):
                rem[k - dd + i] = rem[k - dd + i] - c * oc
        return Scalar.from_coefficients(quot), Scalar.from_coefficients(rem[:dd])

    def __truediv__(self, other) -> "Scalar":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact division: %s / %s" % (self, other))
        return q

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def eval_at(self, lam0) -> GaussianRational:
        """Horner evaluation at a Gaussian rational."""
        x = GaussianRational.coerce(lam0)
        if x.im == 0 and not self.im:
            acc = _ZERO
            for c in reversed(self.re):
                acc = acc * x.re + c
            return GaussianRational(acc, 0)
        acc = GaussianRational(0)
        for k in range(self.degree, -1, -1):
            acc = acc * x + self.coeff(k)
        return acc

    def d_dlambda(self) -> "Scalar":
        return Scalar._make(_trim([c * k for k, c in enumerate(self.re)][1:]),
                            _trim([c * k for k, c in enumerate(self.im)][1:]))

    def subs(self, value) -> "Scalar":
        """Substitute lambda := value, where value is another Scalar."""
        v = Scalar.coerce(value)
        acc = ZERO
        for k in range(self.degree, -1, -1):
            acc = acc * v + Scalar.coerce(self.coeff(k))
        return acc

    def shift(self, c) -> "Scalar":
        """Return s(lambda + c)."""
        return self.subs(LAMBDA + c)

    def conjugate(self) -> "Scalar":
        return Scalar._make(self.re, tuple(-c for c in self.im))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        try:
            o = Scalar.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.re, self.im))
        return self._hash

    def __repr__(self):
        return "Scalar(%s)" % self.to_text()

    def __str__(self):
        return self.to_text()

    def to_text(self, var: str = "lambda") -> str:
        """Human readable text that the operator parser reads back."""
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeff(k)
            if c.is_zero():
                continue
            mono = "" if k == 0 else (var if k == 1 else "%s^%d" % (var, k))
            if c.im == 0:
                q = c.re
                sign = "-" if q < 0 else "+"
                mag = abs(q)
                if mono and mag == 1:
                    body = mono
                elif mono:
                    body = "%s*%s" % (rational_str(mag), mono)
                else:
                    body = rational_str(mag)
            elif c.re == 0:
                q = c.im
                sign = "-" if q < 0 else "+"
                mag = abs(q)
                body = "I" if mag == 1 else "%s*I" % rational_str(mag)
                if mono:
                    body += "*" + mono
            else:
                sign = "+"
                inner = str(c)
                body = inner + ("*" + mono if mono else "")
            parts.append((sign, body))
        out = ""
        for i, (sign, body) in enumerate(parts):
            if i == 0:
                out = ("-" if sign == "-" else "") + body
            else:
                out += " %s %s" % (sign, body)
        return out

    def to_json(self) -> list:
        return [c.to_json() for c in self.coefficients]

    @staticmethod
    def from_json(data) -> "Scalar":
        return Scalar.from_coefficients(GaussianRational.from_json(c) for c in data)


ZERO = Scalar._make((), ())
ONE = Scalar._make((_ONE,), ())
LAMBDA = Scalar._make((_ZERO, _ONE), ())
IMAG = Scalar._make((), (_ONE,))


def const(value) -> Scalar:
    return Scalar.coerce(value)


def lam_plus(c) -> Scalar:
    """The Scalar lambda + c."""
    return LAMBDA + rational(c) if not isinstance(c, (Scalar, GaussianRational)) else LAMBDA + c


def add(a, b):
    return a + b


def mul(a, b):
    return a * b


def neg(a):
    return -a


def div(a, b):
    if isinstance(a, Scalar) or isinstance(b, Scalar):
        return Scalar.coerce(a) / b
    return GaussianRational.coerce(a) / b


def eval_at(s, lam0) -> GaussianRational:
    return Scalar.coerce(s).eval_at(lam0)


def d_dlambda(s) -> Scalar:
    return Scalar.coerce(s).d_dlambda()
