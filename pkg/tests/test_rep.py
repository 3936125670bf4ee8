import pytest

from sbo import operators as O
from sbo.exterior import PolyForm, monomial_basis
from sbo.rep import Generator, act_dual, all_generators, check_intertwining, commutator_on, fourier_P
from sbo.scalars import LAMBDA, Scalar
from sbo.verify import perturbed_family

E = Generator.E()
P, M, R = Generator.Eplus, Generator.Eminus, Generator.Rotation


def _forms(n=3, p=1, deg=2):
    return monomial_basis(n, p, deg)


def _bracket(g1, g2, s1=1, s2=1, n=3, p=1):
    return [commutator_on(n, LAMBDA, p, g1, g2, w, s1, s2) for w in _forms(n, p)]


def _act(g, c=1, n=3, p=1):
    return [act_dual(n, LAMBDA, p, g, w).scale(c) for w in _forms(n, p)]


def test_generator_validation():
    with pytest.raises(ValueError):
        Generator("Foo")
    with pytest.raises(ValueError):
        Generator.Rotation(2, 1)
    with pytest.raises(ValueError):
        act_dual(2, LAMBDA, 1, P(3), PolyForm.basis(2, (1,)))
    assert len(all_generators(3)) == 1 + 2 * 3 + 3


def test_brackets_with_sign_twisted_translations():
    # with E_j^- acting by -d_j the action is a homomorphism
    assert _bracket(E, P(1)) == _act(P(1))
    assert _bracket(E, M(2), 1, -1) == _act(M(2), 1)
    assert _bracket(R(1, 2), R(2, 3)) == _act(R(1, 3))
    assert _bracket(M(1), P(1), -1, 1) == _act(E, -1)
    assert _bracket(M(1), P(2), -1, 1) == _act(R(1, 2))


def test_fourier_P_on_a_square():
    # P_j(xi_j^2) = (2 lambda - 1) xi_j on scalars
    v = PolyForm.monomial(3, (0, 2, 0))
    out = fourier_P(3, LAMBDA, 0, 2, v)
    assert out == PolyForm.monomial(3, (0, 1, 0), (), LAMBDA * 2 - 1)
    with pytest.raises(ValueError):
        fourier_P(3, LAMBDA, 0, 4, v)


@pytest.mark.parametrize("t,n,p,N", [(1, 3, 1, 0), (1, 3, 1, 2), (2, 4, 2, 1), (3, 3, 0, 2), (4, 3, 3, 1)])
def test_families_intertwine(t, n, p, N):
    D = O.family(t, n, p, N)
    rep = check_intertwining(D, n, p, D.sig.tgt_deg, N, lam=O.fixed_lambda(t, n, p, N))
    assert rep.passed and rep.checked > 0


def test_wrong_parameter_breaks_intertwining():
    D = O.family(3, 3, 0, 2)
    rep = check_intertwining(D, 3, 0, 1, 2, lam=Scalar.coerce(5))
    assert not rep.passed
    assert rep.failures[0].residual_nonzero


def test_perturbed_operator_fails_with_counterexample():
    D = perturbed_family(3, 1, 2)
    rep = check_intertwining(D, 3, 1, 1, 2)
    assert not rep.passed
    data = rep.to_json()
    assert data["failures"][0]["residual_nonzero"]


def test_signature_mismatch():
    with pytest.raises(ValueError):
        check_intertwining(O.family_first(3, 1, 1), 3, 2, 2, 1)


@pytest.mark.parametrize("i,j", [(1, 2), (1, 3), (2, 3)])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_rotation_moves_translations(i, j, r):
    # [M_ij, E_r^+] = delta_jr E_i^+ - delta_ir E_j^+
    zero = [PolyForm.zero(3, 1)] * len(_forms())
    expected = _act(P(i)) if r == j else _act(P(j), -1) if r == i else zero
    assert _bracket(R(i, j), P(r)) == expected
