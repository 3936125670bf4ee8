import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbo import operators as O
from sbo.exterior import PolyForm, codifferential, d, hodge_star, monomial_basis, pullback
from sbo.operators import Atom, Signature, SignatureError, Zero, compose, plus, scale
from sbo.scalars import LAMBDA, ONE, GaussianRational, Scalar
from sbo.verify import op_equal
from strategies import forms


def test_atom_signatures():
    assert Atom("d", 3, 1).sig == Signature(3, 1, 3, 2)
    assert Atom("pullback", 4, 2).sig == Signature(4, 2, 3, 2)
    assert Atom("insert_normal", 4, 2).sig == Signature(4, 2, 3, 1)
    assert Atom("hodge_bar", 4, 1).sig == Signature(4, 1, 4, 3)
    with pytest.raises(ValueError):
        Atom("nabla", 3, 1)


def test_composition_checks_signatures():
    with pytest.raises(SignatureError):
        compose(Atom("pullback", 4, 1), Atom("pullback", 5, 1))
    with pytest.raises(SignatureError):
        plus(Atom("d", 3, 1), Atom("delta", 3, 1))


def test_smart_constructors():
    iota = Atom("pullback", 4, 1)
    i_n = Atom("interior_n", 4, 2)
    assert compose(iota.__class__("pullback", 4, 1), Atom("id", 4, 1)) == iota
    assert compose(Atom("pullback", 4, 1), i_n) == Atom("insert_normal", 4, 2)
    assert isinstance(scale(0, iota), Zero)
    assert plus(iota, Zero(iota.sig)) == iota
    assert scale(2, scale(3, iota)) == scale(6, iota)


@settings(max_examples=25)
@given(forms(4, 1, max_degree=2))
def test_symbols_agree_with_direct_calculus(w):
    ops = [
        (O.word(4, 1, "dbar"), d(w)),
        (O.word(4, 1, "deltabar"), codifferential(w)),
        (O.word(4, 1, "star_bar"), hodge_star(w)),
        (O.word(4, 1, "iota"), pullback(w)),
        (O.word(4, 1, "d iota"), d(pullback(w))),
    ]
    for op, expected in ops:
        assert op.apply(w) == expected


def test_word_degree_inference():
    e = O.word(5, 2, "Delta^2 d iota_n dn^3")
    assert e.sig == Signature(5, 2, 4, 2)
    e = O.word(5, 1, "d delta", slice_source=True)
    assert e.sig == Signature(4, 1, 4, 1)


def test_op_equal_examples():
    # d o d is the zero operator
    dd = O.word(4, 1, "d d", slice_source=True)
    assert op_equal(dd, Zero(dd.sig))[0]
    # (lambda+p) iota vs (lambda+p+1) iota differ on a constant form
    a = scale(LAMBDA + 1, O.word(4, 1, "iota"))
    b = scale(LAMBDA + 2, O.word(4, 1, "iota"))
    ok, w = op_equal(a, b)
    assert not ok
    assert w.form.max_poly_degree() == 0 and len(w.form.terms) == 1
    assert w.residual == pullback(w.form).scale(-1)
    with pytest.raises(SignatureError):
        op_equal(a, O.word(4, 2, "iota"))


@pytest.mark.parametrize("t,n,p,N", [(1, 4, 1, 2), (2, 3, 2, 3), (3, 4, 0, 2), (4, 4, 4, 3), (3, 5, 2, 1)])
def test_presentations_agree(t, n, p, N):
    assert op_equal(O.family(t, n, p, N, "normal"), O.family(t, n, p, N, "geometric"))[0]


def test_validation_and_fixed_lambda():
    with pytest.raises(ValueError):
        O.family(1, 4, 4, 1)
    with pytest.raises(ValueError):
        O.family(2, 4, 0, 1)
    with pytest.raises(ValueError):
        O.family(3, 4, 1, 2)
    with pytest.raises(ValueError):
        O.family(4, 4, 3, 2)
    assert O.fixed_lambda(3, 4, 0, 3) == Scalar.coerce(2)
    assert O.fixed_lambda(3, 4, 2, 1) == Scalar.coerce(-2)
    assert O.fixed_lambda(4, 4, 3, 1) == Scalar.coerce(-1)
    assert O.fixed_lambda(1, 4, 1, 1) is None


def test_specialize_and_derivative():
    D = O.family_first(4, 1, 2)
    D0 = O.specialize(D, 3)
    lam = GaussianRational(3)
    assert D0.symbol() == D.symbol().map_scalars(lambda c: Scalar.coerce(c.eval_at(lam)))
    dD = O.derivative_op(D)
    assert dD.symbol() == D.symbol().map_scalars(lambda c: c.d_dlambda())
    shifted = O.substitute(D, LAMBDA + 1)
    assert O.specialize(shifted, 2).symbol() == D0.symbol()


def test_json_round_trip():
    for e in (O.family_first(4, 2, 3, "geometric"), O.middle_degree(5, "1b", 2, -1), O.q_poly(5, 1, 4)):
        back = O.from_json(O.to_json(e))
        assert back == e
        assert back.symbol() == e.symbol()


def test_branson_gover_and_hodge_mu():
    L = O.branson_gover(4, 1, 1)
    # (m/2-p+N) delta d + (m/2-p-N) d delta on R^4, p = 1, N = 1
    expected = plus(scale(2, O.word(5, 1, "delta d", True)), scale(0, O.word(5, 1, "d delta", True)))
    assert op_equal(L, expected)[0]


@pytest.mark.parametrize("m", [2, 4, 6])
def test_projections_are_idempotent(m):
    k = m // 2
    # star^2 = mu^2 on middle degree forms
    star2 = compose(Atom("hodge_bar", m, k), Atom("hodge_bar", m, k))
    assert op_equal(star2, scale(O.hodge_mu(k) * O.hodge_mu(k), Atom("id", m, k)))[0]
    for sign in (1, -1):
        pr = O.projection(m, k, sign, bar=True)
        assert op_equal(compose(pr, pr), pr)[0]
    cross = compose(O.projection(m, k, 1, True), O.projection(m, k, -1, True))
    assert cross.symbol().is_zero()


def test_middle_degree_projections_sum():
    # pr_+ + pr_- = id in middle degree
    for n, variant in ((5, "1a"), (4, "2")):
        plus_ = O.middle_degree(n, variant, 2, 1)
        minus = O.middle_degree(n, variant, 2, -1)
        assert op_equal(plus(plus_, minus), O.family_first(n, (n - 1) // 2 if n % 2 else n // 2, 2))[0]


def test_zero_renormalization_divisor():
    with pytest.raises(ZeroDivisionError):
        O.renormalized_first(4, 1, 2, 1)
    with pytest.raises(ZeroDivisionError):
        O.branson_gover_renormalized(4, 3, 1)


def test_renormalized_families():
    R = O.renormalized_first(4, 1, 2, 3)
    D = O.specialize(O.family_first(4, 1, 2), 3)
    assert op_equal(R, scale(Scalar.coerce(GaussianRational(1, 0) / 2), D))[0]


def test_symbol_apply_is_linear():
    D = O.family_second(3, 2, 2)
    basis = monomial_basis(3, 2, 2)
    total = basis[0]
    for w in basis[1:6]:
        total = total + w
    acc = D.apply(basis[0])
    for w in basis[1:6]:
        acc = acc + D.apply(w)
    assert D.apply(total) == acc
