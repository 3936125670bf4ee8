import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbo.exterior import (PolyForm, alpha_wedge, closed_spanning_set, codifferential, d, euler_insert,
                          hodge_star, interior, laplacian, monomial_basis, monomial_basis_count, partial,
                          pullback, wedge)
from sbo.scalars import ONE, Scalar
from strategies import forms


def x(m, *exps):
    return PolyForm.monomial(m, exps)


def test_d_of_monomial():
    # d(x1^2 x2) = 2 x1 x2 dx1 + x1^2 dx2
    w = d(x(2, 2, 1))
    assert w == PolyForm(2, 1, {(1,): {(1, 1): 2}, (2,): {(2, 0): 1}})


def test_codifferential_sign_convention():
    # delta = -sum i_k d_k on R^m, so delta(x1 dx1) = -1
    w = PolyForm.monomial(3, (1, 0, 0), (1,))
    assert codifferential(w) == PolyForm(3, 0, {(): {(0, 0, 0): -1}})


def test_laplacian_is_minus_sum_of_squares():
    w = PolyForm.monomial(3, (2, 0, 2), (1, 2))
    lap = laplacian(w)
    assert lap == PolyForm(3, 2, {(1, 2): {(0, 0, 2): -2, (2, 0, 0): -2}})


@settings(max_examples=40)
@given(st.integers(2, 4).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, m - 1))).flatmap(
    lambda mp: forms(mp[0], mp[1])))
def test_d_squared_and_delta_squared_vanish(w):
    m, p = w.ambient_dim, w.degree
    if p + 2 <= m:
        assert d(d(w)).is_zero()
    if p >= 2:
        assert codifferential(codifferential(w)).is_zero()
    # d delta + delta d is the Laplacian
    total = laplacian(w)
    acc = PolyForm.zero(m, p)
    if p + 1 <= m:
        acc = acc + codifferential(d(w))
    if p >= 1:
        acc = acc + d(codifferential(w))
    assert acc == total


@settings(max_examples=40)
@given(st.integers(2, 5).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, m))).flatmap(
    lambda mp: forms(mp[0], mp[1])))
def test_hodge_star_twice(w):
    m, p = w.ambient_dim, w.degree
    assert hodge_star(hodge_star(w)) == w.scale((-1) ** (p * (m - p)))


@settings(max_examples=30)
@given(forms(3, 1), forms(3, 1), forms(3, 0))
def test_wedge_graded_commutative_and_leibniz(a, b, f):
    assert wedge(a, b) == -wedge(b, a)
    # d(f a) = df ^ a + f da
    assert d(wedge(f, a)) == wedge(d(f), a) + wedge(f, d(a))


def test_pullback_drops_normal_parts():
    w = PolyForm(3, 1, {(1,): {(0, 0, 0): 1, (0, 0, 1): 5}, (3,): {(1, 0, 0): 1}})
    assert pullback(w) == PolyForm(2, 1, {(1,): {(0, 0): 1}})
    with pytest.raises(ValueError):
        pullback(PolyForm.basis(2, (1, 2)))


def test_euler_and_alpha():
    w = PolyForm.basis(3, (1, 2))
    # i_E(dx1 ^ dx2) = x1 dx2 - x2 dx1
    assert euler_insert(w) == PolyForm(3, 1, {(2,): {(1, 0, 0): 1}, (1,): {(0, 1, 0): -1}})
    f = PolyForm.monomial(2, (0, 0))
    assert alpha_wedge(f) == PolyForm(2, 1, {(1,): {(1, 0): 1}, (2,): {(0, 1): 1}})


def test_interior_and_partial():
    w = PolyForm.monomial(2, (3, 0), (1, 2))
    assert interior(1, w) == PolyForm.monomial(2, (3, 0), (2,))
    assert interior(2, w) == PolyForm.monomial(2, (3, 0), (1,)).scale(-1)
    assert partial(1, w) == PolyForm.monomial(2, (2, 0), (1, 2), 3)


def test_bases():
    assert len(monomial_basis(3, 1, 2)) == monomial_basis_count(3, 1, 2) == 30
    for w in closed_spanning_set(3, 1, 1):
        assert d(w).is_zero()


def test_json_round_trip():
    w = PolyForm(3, 1, {(2,): {(1, 0, 2): Scalar.from_coefficients([1, 2])}})
    assert PolyForm.from_json(w.to_json()) == w


def test_bad_forms_rejected():
    with pytest.raises(ValueError):
        PolyForm(2, 3)
    with pytest.raises(ValueError):
        PolyForm(2, 1, {(2, 1): {(0, 0): ONE}})
