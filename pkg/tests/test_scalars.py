from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from sbo.scalars import I, IMAG, LAMBDA, ONE, ZERO, GaussianRational, Scalar, rational
from strategies import gaussian, scalars


def test_rational_coercion():
    assert rational("3/4") == mpq(3, 4)
    assert rational(Fraction(-1, 3)) == mpq(-1, 3)
    assert rational(5) == mpq(5)
    with pytest.raises(ZeroDivisionError):
        rational("1/0")
    with pytest.raises(TypeError):
        rational(True)


def test_gaussian_field():
    z = GaussianRational(1, 2)
    assert z * z.inverse() == GaussianRational(1)
    assert I * I == GaussianRational(-1)
    assert z.conjugate() * z == GaussianRational(z.norm())
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0).inverse()


def test_scalar_polynomial_basics():
    s = (LAMBDA + 1) * (LAMBDA - 1)
    assert s == LAMBDA ** 2 - 1
    assert s.degree == 2
    assert s.eval_at(3) == GaussianRational(8)
    assert s.d_dlambda() == LAMBDA * 2
    assert s.subs(LAMBDA + 1) == LAMBDA ** 2 + LAMBDA * 2
    assert (LAMBDA * IMAG).to_text() == "I*lambda"
    assert ZERO.to_text() == "0"


def test_divmod_exact():
    q, r = (LAMBDA ** 3 - 1).divmod(LAMBDA - 1)
    assert r.is_zero() and q == LAMBDA ** 2 + LAMBDA + 1
    q, r = (LAMBDA ** 2 + 1).divmod(LAMBDA)
    assert r == ONE


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == ZERO


@given(scalars(), scalars(), gaussian)
def test_evaluation_is_a_homomorphism(a, b, z):
    assert (a * b).eval_at(z) == a.eval_at(z) * b.eval_at(z)
    assert (a + b).eval_at(z) == a.eval_at(z) + b.eval_at(z)


@given(scalars(), scalars(max_degree=2))
def test_division_with_remainder(a, b):
    if b.is_zero():
        return
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(scalars())
def test_json_round_trip(a):
    assert Scalar.from_json(a.to_json()) == a


@given(st.integers(-5, 5), scalars())
def test_product_rule(k, a):
    b = LAMBDA + k
    assert (a * b).d_dlambda() == a.d_dlambda() * b + a
