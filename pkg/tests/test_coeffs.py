import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from sbo import coeffs as C
from sbo.scalars import LAMBDA, ONE, GaussianRational, Scalar

H = mpq(1, 2)


def test_pochhammer():
    assert C.pochhammer(LAMBDA, 0) == ONE
    assert C.pochhammer(LAMBDA, 3) == LAMBDA * (LAMBDA + 1) * (LAMBDA + 2)
    assert C.pochhammer(-3, 4) == Scalar.coerce(0)
    with pytest.raises(ValueError):
        C.pochhammer(1, -1)


def test_low_gegenbauer_and_jacobi():
    a = LAMBDA
    assert C.gegenbauer_C(1, a) == [Scalar.coerce(0), a * 2]
    assert C.gegenbauer_C(2, a) == [-a, Scalar.coerce(0), a * (a + 1) * 2]
    c3 = C.gegenbauer_C(3, a)
    assert c3[3] == a * (a + 1) * (a + 2) * mpq(4, 3) and c3[1] == -a * (a + 1) * 2
    # P_1^{(a,b)}(z) = (a+1) + (a+b+2)(z-1)/2 with b = 1/2
    p1 = C.jacobi_P(1, a, H)
    assert p1 == [(a + 1) - (a + H + 2) * H, (a + H + 2) * H]


@pytest.mark.parametrize("n", [2, 3, 5])
def test_low_order_oracles(n):
    # read off the second and third order operators
    assert C.a(1, 0, n) == -(LAMBDA * 2 + (n - 3))
    assert C.b(1, 0, n) == -(LAMBDA * 2 + (n - 5)) * mpq(1, 3)
    assert C.alpha(1, 0, n) == LAMBDA * 2 + (n - 2)
    assert C.alpha(1, 1, n) == -(LAMBDA * 2 + (n - 3))
    assert C.beta(1, 0, n) == (LAMBDA * 2 + (n - 2)) * mpq(1, 3)
    assert C.beta(1, 1, n) == -(LAMBDA * 2 + (n - 5)) * mpq(1, 3)
    for N in range(4):
        assert C.a(N, N, n) == ONE and C.b(N, N, n) == ONE


def test_ranges():
    with pytest.raises(IndexError):
        C.a(2, 3, 4)
    with pytest.raises(IndexError):
        C.gamma(2, 0, 1, 4)
    assert C.a_ext(2, 3, 4).is_zero() and C.gamma_ext(2, 0, 1, 4).is_zero()


@settings(max_examples=30)
@given(st.integers(0, 6), st.integers(0, 8), st.integers(-6, 6), st.integers(1, 7))
def test_zhu_vandermonde(m, b, c_num, c_den):
    c = mpq(c_num, c_den) + mpq(1, 11)
    lhs = C.f21_value(m, b, c, 1)
    rhs = C.pochhammer(c - b, m).eval_at(0) / C.pochhammer(c, m).eval_at(0)
    assert lhs == rhs


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("N", range(0, 7))
def test_coefficient_identities(n, N):
    for j in range(1, N + 1):
        assert C.gegen_rec1_residual(N, j, n).is_zero()
        assert C.gegen_rec2_residual(N, j, n).is_zero()
    for j in range(N + 1):
        assert C.a(N, j, n) == C.a_closed(N, j, n)
        assert C.b(N, j, n) == C.b_closed(N, j, n)
        assert C.alpha_from_a(N, j, n) == C.alpha(N, j, n)
        assert C.beta_from_b(N, j, n) == C.beta(N, j, n)
    for p in range(n + 1):
        for i in range(1, N + 1):
            assert C.gamma(N, i, p, n) == C.gamma_alt(N, i, p, n)
    assert C.zpoly_equal(C.alpha_generating(N, n), [C.alpha(N, i, n) for i in range(N + 1)])
    assert C.zpoly_equal(C.beta_generating(N, n), [C.beta(N, i, n) for i in range(N + 1)])
    for m in (2 * N, 2 * N + 1):
        assert C.zpoly_equal(C.gegenbauer_C(m, LAMBDA + H), C.gegenbauer_via_a(m, n))


def test_printed_gegenbauer_substitution_is_two_dimensional():
    # with lambda -> -lambda-1 the identity is specific to n = 2
    N = 2
    lhs = C.gegenbauer_C(2 * N, LAMBDA + H)
    for n, expected in ((2, True), (3, False)):
        rhs = C.zpoly_scale(C.zpoly_subs_lambda(C.gegpoly_even_sum(N, n), -LAMBDA - 1),
                            C.pochhammer(LAMBDA + H, N) * H)
        assert C.zpoly_equal(lhs, rhs) is expected


def test_jacobi_generating_proportionality():
    for n in (3, 4):
        for N in range(4):
            al = [C.alpha(N, i, n) for i in range(N + 1)]
            jac = C.zpoly_compose_affine(C.jacobi_P(N, -LAMBDA - mpq(n, 2), -H), 1, -2)
            assert C.zpoly_proportional(jac, al)
            assert not C.zpoly_proportional(jac, [C.beta(N, i, n) for i in range(N + 1)]) or N == 0


def test_f21_denominator_errors():
    with pytest.raises(ZeroDivisionError):
        C.f21_terminating(3, 1, -1)
    assert C.f21_value(2, 1, 3, 0) == GaussianRational(1)


@settings(max_examples=30)
@given(st.integers(0, 5), st.integers(-4, 4), st.integers(1, 6), st.integers(-5, 5), st.integers(1, 4))
def test_f21_value_matches_coefficients(m, b, c, zn, zd):
    z = mpq(zn, zd)
    coeffs = C.f21_terminating(m, b, c)
    assert C.f21_value(m, b, c, z) == C.zpoly_eval(coeffs, z).eval_at(0)
