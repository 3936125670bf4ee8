from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from displays import singular_display
from sbo import operators as O
from sbo import singular as S
from sbo.scalars import LAMBDA, Scalar
from sbo.verify import _symbol_ratio, fam


@pytest.mark.parametrize("t", [1, 2])
@pytest.mark.parametrize("k", [0, 1, 2, 3])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_low_homogeneity_displays(t, k, n):
    for p in (range(0, n) if t == 1 else range(1, n + 1)):
        shown = singular_display(t, n, p, k)
        built = S.build(t, n, p, k)
        for lam0 in (3, 7, -5):
            assert S.proportional(shown.at(lam0), built.at(lam0)) == 1
        assert S.verify_annihilated(shown).passed


@pytest.mark.parametrize("t,n,p,N", [(1, 3, 1, 3), (1, 4, 0, 4), (2, 4, 3, 3), (2, 3, 3, 2),
                                     (3, 4, 0, 3), (3, 5, 2, 1), (4, 3, 3, 4), (4, 5, 2, 1)])
def test_built_vectors_are_annihilated(t, n, p, N):
    v = S.build(t, n, p, N)
    assert not v.is_zero()
    assert S.verify_annihilated(v).passed


def test_perturbed_vector_is_not_annihilated():
    v = S.build(1, 4, 1, 3)
    t0 = v.terms[0]
    bad = replace(v, terms=(S.Term(t0.coeff + 1, t0.a, t0.b, t0.word),) + v.terms[1:])
    rep = S.verify_annihilated(bad)
    assert not rep.passed
    assert rep.to_json()["failures"]


def test_build_rejects_bad_parameters():
    with pytest.raises(ValueError):
        S.build(1, 3, 3, 1)
    with pytest.raises(ValueError):
        S.build(2, 3, 0, 1)
    with pytest.raises(ValueError):
        S.build(3, 4, 1, 2)
    with pytest.raises(ValueError):
        S.build(5, 4, 1, 2)
    with pytest.raises(ValueError):
        S.SingularVector(3, 1, 1, 2, "x", (S.Term(Scalar.coerce(1), 1, 0, ()),))


def test_fixed_parameters_of_types_three_and_four():
    assert S.build(3, 4, 0, 3).lam == Scalar.coerce(2)
    assert S.build(3, 4, 2, 1).lam == Scalar.coerce(-2)
    assert S.build(4, 4, 4, 2).lam == Scalar.coerce(1)
    assert S.build(4, 5, 3, 1).lam == Scalar.coerce(-2)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 5), st.data(), st.integers(0, 4), st.fractions(-20, 20, max_denominator=7))
def test_generic_kernel_is_spanned_by_the_family(n, data, N, lam0):
    t = data.draw(st.sampled_from([1, 2]))
    p = data.draw(st.integers(0, n - 1) if t == 1 else st.integers(1, n))
    v = S.build(t, n, p, N).at(lam0)
    if v.is_zero():
        return
    ker = S.solve_ansatz(n, p, v.q, N, lam0)
    if len(ker) == 1:
        assert S.proportional(ker[0], v) is not None
    else:
        # the kernel jumps only at finitely many special parameters
        assert len(ker) > 1


def test_kernel_dimension_at_generic_and_special_parameters():
    assert len(S.solve_ansatz(4, 0, 1, 2, 5)) == 0
    ker = S.solve_ansatz(4, 0, 1, 2, 1)
    assert len(ker) == 1
    assert S.proportional(ker[0], S.build(3, 4, 0, 2)) is not None


@pytest.mark.parametrize("t,n,p,N", [(1, 3, 1, 2), (1, 4, 2, 3), (2, 4, 2, 2), (2, 3, 1, 3),
                                     (3, 4, 0, 2), (4, 3, 3, 3)])
def test_translation_is_proportional_to_the_family(t, n, p, N):
    v = S.build(t, n, p, N)
    D = S.translate(v)
    assert D.symbol() == S.transpose_symbol(v)
    r = _symbol_ratio(D.symbol(), fam(t, n, p, N))
    assert r is not None and not r.is_zero()


@pytest.mark.parametrize("n,N", [(3, 2), (5, 3), (4, 2), (4, 3)])
@pytest.mark.parametrize("sign", [1, -1])
def test_middle_degree_projections(n, N, sign):
    v = S.build(1, n, (n - 1) // 2 if n % 2 else n // 2, N)
    w = S.middle_projections(v, sign)
    assert S.verify_annihilated(w).passed and not w.is_zero()
    if n % 2:
        u = S.middle_star(v, sign)
        assert S.verify_annihilated(u).passed and not u.is_zero()
    with pytest.raises(ValueError):
        S.middle_projections(v, 2)


@pytest.mark.parametrize("parity", ["odd", "even"])
@pytest.mark.parametrize("n,p,N", [(3, 1, 1), (4, 2, 3), (5, 0, 4)])
def test_ode_system(parity, n, p, N):
    P, Q, R = S.first_type_pqr(n, p, N, parity)
    assert all(not r for r in S.ode_residuals(n, p, N, parity, P, Q, R))
    P2 = list(P)
    P2[0] = P2[0] + 1
    assert any(S.ode_residuals(n, p, N, parity, P2, Q, R))


def test_vanishing_relations():
    res = S.vanishing_checks(4, 3)
    assert res and all(r.passed for r in res)


def test_json_and_text():
    v = S.build(1, 3, 1, 2)
    data = v.to_json()
    assert data["homogeneity"] == 2 and data["type"] == "1"
    assert "xi_n" in v.to_text()
    assert v.at(4).fixed and not v.fixed
