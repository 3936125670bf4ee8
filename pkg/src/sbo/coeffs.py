"""Coefficient families: Pochhammer symbols, terminating 2F1, Jacobi and
Gegenbauer polynomials and the Gegenbauer-type coefficients a, b, alpha,
beta, gamma that enter the operator families.

Every coefficient is an exact ``Scalar`` (polynomial in lambda).  Univariate
polynomials in an auxiliary variable (z or t) are returned as lists of
Scalars indexed by the power.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, factorial
from typing import List

from gmpy2 import mpq

from .scalars import LAMBDA, ONE, ZERO, GaussianRational, Scalar, rational

ZPoly = List[Scalar]


def _s(x) -> Scalar:
    return Scalar.coerce(x)


def _half(n) -> Scalar:
    return _s(mpq(rational(n), 2))


def pochhammer(a, l: int) -> Scalar:
    """(a)_l = a(a+1)...(a+l-1), with (a)_0 = 1."""
    if l < 0:
        raise ValueError("negative Pochhammer length")
    a = _s(a)
    out = ONE
    for k in range(l):
        out = out * (a + k)
    return out


# ---------------------------------------------------------------------------
# univariate helpers


def zpoly_trim(p: ZPoly) -> ZPoly:
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def zpoly_add(a: ZPoly, b: ZPoly) -> ZPoly:
    out = [ZERO] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = out[i] + c
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return zpoly_trim(out)


def zpoly_scale(a: ZPoly, c) -> ZPoly:
    c = _s(c)
    return zpoly_trim([x * c for x in a])


def zpoly_mul(a: ZPoly, b: ZPoly) -> ZPoly:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return zpoly_trim(out)


def zpoly_pow(a: ZPoly, k: int) -> ZPoly:
    out = [ONE]
    for _ in range(k):
        out = zpoly_mul(out, a)
    return out


def zpoly_diff(a: ZPoly) -> ZPoly:
    return zpoly_trim([a[k] * k for k in range(1, len(a))])


def zpoly_eval(a: ZPoly, z) -> Scalar:
    acc = ZERO
    z = _s(z)
    for c in reversed(a):
        acc = acc * z + c
    return acc


def zpoly_subs_lambda(a: ZPoly, value) -> ZPoly:
    return zpoly_trim([c.subs(value) for c in a])


def zpoly_equal(a: ZPoly, b: ZPoly) -> bool:
    return zpoly_trim(a) == zpoly_trim(b)


# ---------------------------------------------------------------------------
# hypergeometric, Jacobi, Gegenbauer


def f21_terminating(m: int, b, c, prefactor=ONE) -> ZPoly:
    """Coefficients in z of prefactor * 2F1(-m, b; c; z).

    The division by (c)_k is carried out exactly; if c depends on lambda a
    prefactor divisible by the relevant Pochhammer symbols must be supplied,
    otherwise an ``ArithmeticError`` is raised.  A constant c in -N_0 that
    makes a denominator vanish raises ``ZeroDivisionError``.
    """
    if m < 0:
        raise ValueError("termination needs m >= 0")
    b = _s(b)
    c = _s(c)
    pre = _s(prefactor)
    out = []
    for k in range(m + 1):
        num = pochhammer(-m, k) * pochhammer(b, k) * pre
        den = pochhammer(c, k) * factorial(k)
        if den.is_zero():
            raise ZeroDivisionError("Pochhammer denominator (c)_%d vanishes" % k)
        out.append(num / den)
    return zpoly_trim(out)


def f21_value(m: int, b, c, z) -> GaussianRational:
    """Numerical value of 2F1(-m, b; c; z) for constant parameters."""
    b = GaussianRational.coerce(b)
    c = GaussianRational.coerce(c)
    z = GaussianRational.coerce(z)
    total = GaussianRational(0)
    term = GaussianRational(1)
    for k in range(m + 1):
        total = total + term
        if k == m:
            break
        den = (c + k) * (k + 1)
        if den.is_zero():
            raise ZeroDivisionError("Pochhammer denominator vanishes at k=%d" % (k + 1))
        term = term * (GaussianRational(-m + k) * (b + k)) * z / den
    return total


def gegenbauer_C(m: int, alpha) -> ZPoly:
    """Coefficients in z of the Gegenbauer polynomial C_m^alpha(z)."""
    alpha = _s(alpha)
    out = [ZERO] * (m + 1)
    for k in range(m // 2 + 1):
        c = pochhammer(alpha, m - k) * mpq((-1) ** k * 2 ** (m - 2 * k),
                                           factorial(k) * factorial(m - 2 * k))
        out[m - 2 * k] = out[m - 2 * k] + c
    return zpoly_trim(out)


def jacobi_P(m: int, alpha, beta) -> ZPoly:
    """Coefficients in z of the Jacobi polynomial P_m^{(alpha, beta)}(z)."""
    alpha = _s(alpha)
    beta = _s(beta)
    shifted = alpha + beta + 1 + m
    half_one_minus_z = [_s(mpq(1, 2)), _s(mpq(-1, 2))]
    out: ZPoly = []
    for j in range(m + 1):
        c = (pochhammer(alpha + 1 + j, m - j) * pochhammer(-m, j) * pochhammer(shifted, j)
             * mpq(1, factorial(m) * factorial(j)))
        out = zpoly_add(out, zpoly_scale(zpoly_pow(half_one_minus_z, j), c))
    return out


# ---------------------------------------------------------------------------
# Gegenbauer coefficients a, b


def _check_range(N: int, j: int, lo: int = 0):
    if N < 0 or j < lo or j > N:
        raise IndexError("coefficient index %d out of range for N=%d" % (j, N))


@lru_cache(maxsize=None)
def a(N: int, j: int, n) -> Scalar:
    """Even Gegenbauer coefficient a_j^{(N)}(lambda), normalized by a_N^{(N)} = 1."""
    _check_range(N, j)
    n = rational(n)
    out = _s(mpq((-2) ** (N - j) * factorial(N), factorial(j) * factorial(2 * N - 2 * j)))
    for k in range(j, N):
        out = out * (2 * LAMBDA + (-4 * N + 2 * k + n + 1))
    return out


@lru_cache(maxsize=None)
def b(N: int, j: int, n) -> Scalar:
    """Odd Gegenbauer coefficient b_j^{(N)}(lambda), normalized by b_N^{(N)} = 1."""
    _check_range(N, j)
    n = rational(n)
    out = _s(mpq((-2) ** (N - j) * factorial(N), factorial(j) * factorial(2 * N - 2 * j + 1)))
    for k in range(j, N):
        out = out * (2 * LAMBDA + (-4 * N + 2 * k + n - 1))
    return out


def a_ext(N: int, j: int, n) -> Scalar:
    """a_j^{(N)} with the convention that out-of-range indices give 0."""
    if N < 0 or j < 0 or j > N:
        return ZERO
    return a(N, j, n)


def b_ext(N: int, j: int, n) -> Scalar:
    if N < 0 or j < 0 or j > N:
        return ZERO
    return b(N, j, n)


def a_closed(N: int, j: int, n) -> Scalar:
    """Pochhammer closed form of a_j^{(N)}."""
    _check_range(N, j)
    if j == N:
        return ONE
    base = LAMBDA + _half(n) - 2 * N + mpq(1, 2)
    c = mpq((-4) ** (N - j) * factorial(N), factorial(j) * factorial(2 * N - 2 * j))
    return pochhammer(base, N) / pochhammer(base, j) * c


def b_closed(N: int, j: int, n) -> Scalar:
    _check_range(N, j)
    if j == N:
        return ONE
    base = LAMBDA + _half(n) - 2 * N - mpq(1, 2)
    c = mpq((-4) ** (N - j) * factorial(N), factorial(j) * factorial(2 * N - 2 * j + 1))
    return pochhammer(base, N) / pochhammer(base, j) * c


# ---------------------------------------------------------------------------
# coefficients of the geometric formulas


@lru_cache(maxsize=None)
def alpha(N: int, i: int, n) -> Scalar:
    _check_range(N, i)
    n = rational(n)
    out = _s(mpq((-1) ** i * 2 ** N * factorial(N) * comb(N, i), factorial(2 * N)))
    for k in range(i + 1, N + 1):
        out = out * (2 * LAMBDA + (n - 2 * k))
    for k in range(1, i + 1):
        out = out * (2 * LAMBDA + (n - 2 * k - 2 * N + 1))
    return out


@lru_cache(maxsize=None)
def beta(N: int, i: int, n) -> Scalar:
    _check_range(N, i)
    n = rational(n)
    out = _s(mpq((-1) ** i * 2 ** N * factorial(N) * comb(N, i), factorial(2 * N + 1)))
    for k in range(i + 1, N + 1):
        out = out * (2 * LAMBDA + (n - 2 * k))
    for k in range(1, i + 1):
        out = out * (2 * LAMBDA + (n - 2 * k - 2 * N - 1))
    return out


def alpha_ext(N: int, i: int, n) -> Scalar:
    if N < 0 or i < 0 or i > N:
        return ZERO
    return alpha(N, i, n)


def beta_ext(N: int, i: int, n) -> Scalar:
    if N < 0 or i < 0 or i > N:
        return ZERO
    return beta(N, i, n)


@lru_cache(maxsize=None)
def gamma(N: int, i: int, p: int, n) -> Scalar:
    _check_range(N, i, lo=1)
    n = rational(n)
    c = mpq((-1) ** i * 2 ** N * factorial(N) * comb(N + 1, i), (N + 1) * factorial(2 * N + 1))
    bracket = ((LAMBDA + (p - 2 * N - 1)) * (N + 1) * (2 * LAMBDA + (n - 2 * i))
               + (LAMBDA + (n - p)) * ((2 * N + 1) * (N - i + 1)))
    out = bracket * c
    for k in range(i + 1, N + 1):
        out = out * (2 * LAMBDA + (n - 2 * k))
    for k in range(1, i):
        out = out * (2 * LAMBDA + (n - 2 * k - 2 * N - 1))
    return out


def gamma_pm(N: int, i: int, p: int, n, sign: int) -> Scalar:
    """The two summands gamma^{(N),+} (sign=+1) and gamma^{(N),-} (sign=-1)."""
    _check_range(N, i, lo=1)
    n = rational(n)
    if sign > 0:
        out = _s(mpq((-1) ** i * 2 ** N * factorial(N) * comb(N + 1, i), factorial(2 * N + 1)))
        out = out * (LAMBDA + (p - 2 * N - 1))
        ks = range(i, N + 1)
    else:
        out = _s(mpq((-1) ** i * 2 ** N * factorial(N) * comb(N, i), factorial(2 * N)))
        out = out * (LAMBDA + (n - p))
        ks = range(i + 1, N + 1)
    for k in ks:
        out = out * (2 * LAMBDA + (n - 2 * k))
    for k in range(1, i):
        out = out * (2 * LAMBDA + (n - 2 * k - 2 * N - 1))
    return out


def gamma_alt(N: int, i: int, p: int, n) -> Scalar:
    """gamma via (lambda+p-2i) beta_i - (lambda+p-2i+1) beta_{i-1}."""
    _check_range(N, i, lo=1)
    return ((LAMBDA + (p - 2 * i)) * beta(N, i, n)
            - (LAMBDA + (p - 2 * i + 1)) * beta(N, i - 1, n))


def gamma_ext(N: int, i: int, p: int, n) -> Scalar:
    if N < 1 or i < 1 or i > N:
        return ZERO
    return gamma(N, i, p, n)


# ---------------------------------------------------------------------------
# generating polynomials and derived identities


def alpha_generating(N: int, n) -> ZPoly:
    """sum_i alpha_i^{(N)} t^i through the terminating 2F1 closed form."""
    h = _half(n)
    pre = pochhammer(LAMBDA + h - N, N) * mpq(4 ** N * factorial(N), factorial(2 * N))
    return f21_terminating(N, N + mpq(1, 2) - LAMBDA - h, 1 - LAMBDA - h, prefactor=pre)


def beta_generating(N: int, n) -> ZPoly:
    h = _half(n)
    pre = pochhammer(LAMBDA + h - N, N) * mpq(4 ** N * factorial(N), factorial(2 * N + 1))
    return f21_terminating(N, N + mpq(3, 2) - LAMBDA - h, 1 - LAMBDA - h, prefactor=pre)


def alpha_from_a(N: int, i: int, n) -> Scalar:
    """sum_j (-1)^{N-j-i} C(N-j, i) a_j^{(N)}."""
    out = ZERO
    for j in range(N - i + 1):
        out = out + a(N, j, n) * ((-1) ** (N - j - i) * comb(N - j, i))
    return out


def beta_from_b(N: int, i: int, n) -> Scalar:
    out = ZERO
    for j in range(N - i + 1):
        out = out + b(N, j, n) * ((-1) ** (N - j - i) * comb(N - j, i))
    return out


def gegen_rec1_residual(N: int, j: int, n) -> Scalar:
    return (a(N, j - 1, n) * ((N - j + 1) * (2 * N - 2 * j + 1))
            + a(N, j, n) * (2 * LAMBDA + (n - 4 * N + 2 * j - 1)) * j)


def gegen_rec2_residual(N: int, j: int, n) -> Scalar:
    return (b(N, j - 1, n) * ((N - j + 1) * (2 * N - 2 * j + 3))
            + b(N, j, n) * (2 * LAMBDA + (n - 4 * N + 2 * j - 3)) * j)


def gegpoly_even_sum(N: int, n) -> ZPoly:
    """sum_j (-1)^j a_j^{(N)}(lambda) z^{2N-2j}."""
    out = [ZERO] * (2 * N + 1)
    for j in range(N + 1):
        out[2 * N - 2 * j] = a(N, j, n) * (-1) ** j
    return zpoly_trim(out)


def gegpoly_odd_sum(N: int, n) -> ZPoly:
    out = [ZERO] * (2 * N + 2)
    for j in range(N + 1):
        out[2 * N + 1 - 2 * j] = b(N, j, n) * (-1) ** j
    return zpoly_trim(out)


def gegenbauer_via_a(m: int, n) -> ZPoly:
    """C_m^{lambda+1/2}(z) rebuilt from the coefficients a or b of dimension n.

    With the substitution lambda -> -lambda - n/2 the normalized coefficients
    reproduce the Gegenbauer polynomial for every n; at n = 2 this is the
    substitution -lambda - 1.
    """
    N = m // 2
    sub = -LAMBDA - _half(n)
    shift = LAMBDA + mpq(1, 2)
    if m % 2 == 0:
        pre = pochhammer(shift, N) * mpq(1, factorial(N))
        return zpoly_scale(zpoly_subs_lambda(gegpoly_even_sum(N, n), sub), pre)
    pre = pochhammer(shift, N + 1) * mpq(2, factorial(N))
    return zpoly_scale(zpoly_subs_lambda(gegpoly_odd_sum(N, n), sub), pre)


def zpoly_compose_affine(a: ZPoly, c0, c1) -> ZPoly:
    """a(c0 + c1 t) as a polynomial in t."""
    out: ZPoly = []
    lin = [_s(c0), _s(c1)]
    for k, c in enumerate(a):
        out = zpoly_add(out, zpoly_scale(zpoly_pow(lin, k), c))
    return out


def zpoly_proportional(a: ZPoly, b: ZPoly) -> bool:
    """True if a and b are proportional over the field of rational functions in lambda."""
    a, b = zpoly_trim(a), zpoly_trim(b)
    if not a or not b:
        return not a and not b
    if len(a) != len(b):
        return False
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i] * b[j] != a[j] * b[i]:
                return False
    return True
