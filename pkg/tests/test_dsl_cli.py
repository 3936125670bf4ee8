import json
import random

import pytest
from click.testing import CliRunner

from displays import FIRST_SECOND, THIRD_FOURTH
from sbo import operators as O
from sbo.cli import main
from sbo.exterior import PolyForm
from sbo.dsl import DSLError, parse_op, parse_scalar, pretty_print, tokenize
from sbo.operators import Atom, Compose, Scale, compose, plus, scale
from sbo.scalars import LAMBDA, Scalar
from sbo.verify import op_equal

AMBIENT = ["dbar", "deltabar", "Delta_bar", "hodge_bar", "dn", "interior_n"]
SLICE = ["d", "delta", "Delta", "hodge_slice"]


def test_spec_examples():
    e = parse_op("(lambda+1) * iota", {"n": 4, "p": 1})
    assert e == Scale(LAMBDA + 1, Atom("pullback", 4, 1))
    e = parse_op("(d delta)^2 iota", {"n": 4, "p": 1})
    assert isinstance(e, Compose) and len(e.factors) == 5
    assert e.sig.src_dim == 4 and e.sig.tgt_dim == 3
    assert parse_op("d d", {"n": 4, "p": 0}).symbol().is_zero()
    assert pretty_print(O.family_first(4, 1, 1)) == "lambda iota dn + d iota i_n"
    assert pretty_print(O.family_first(5, 2, 1)) == "(lambda+1) iota dn + d iota i_n"


def test_bindings_and_scalars():
    assert parse_scalar("(2*lambda+n-3)", {"n": 5}) == 2 * LAMBDA + 2
    assert parse_scalar("lambda^2 - 1/2") == LAMBDA * LAMBDA - Scalar.coerce(1) / 2
    e = parse_op("(dbar deltabar)^N", {"n": 3, "p": 1, "N": 2})
    assert e.sig.src_dim == 3 and len(e.factors) == 4


@pytest.mark.parametrize("text,pos", [
    ("d + ", 4), ("iota d", 0), ("foo iota", 0), ("(d delta", 8), ("d ^ x iota", 4), ("d $ iota", 2),
])
def test_errors_carry_positions(text, pos):
    with pytest.raises(DSLError) as info:
        parse_op(text, {"n": 4, "p": 1})
    assert info.value.pos == pos
    assert info.value.caret().splitlines()[1].index("^") == pos


def test_tokenize():
    kinds = [t.kind for t in tokenize("2/3 * (d delta)^2 iota")]
    assert kinds == ["num", "op", "num", "op", "op", "name", "name", "op", "op", "num", "name", "end"]


def _chain(rng, n, p):
    """A random well-typed composition on p-forms on R^n, as a list of atoms
    with the rightmost factor first applied."""
    atoms, deg = [], p
    for _ in range(rng.randint(0, 3)):
        kind = rng.choice(AMBIENT)
        a = Atom(kind, n, deg)
        if not 0 <= a.sig.tgt_deg <= n:
            continue
        atoms.append(a)
        deg = a.sig.tgt_deg
    if deg > n - 1:
        return None
    atoms.append(Atom("pullback", n, deg))
    for _ in range(rng.randint(0, 3)):
        a = Atom(rng.choice(SLICE), n - 1, deg)
        if not 0 <= a.sig.tgt_deg <= n - 1:
            continue
        atoms.append(a)
        deg = a.sig.tgt_deg
    return list(reversed(atoms))


def _random_scalar(rng):
    return Scalar.coerce(rng.randint(-3, 3)) + LAMBDA * rng.randint(0, 2) + Scalar.coerce(rng.randint(1, 4)) / 3


def _random_expr(rng):
    while True:
        n = rng.randint(3, 5)
        p = rng.randint(0, n)
        chains = [c for c in (_chain(rng, n, p) for _ in range(4)) if c]
        if not chains:
            continue
        q = chains[0][0].sig.tgt_deg
        terms = []
        for c in chains:
            if c[0].sig.tgt_deg != q:
                continue
            op = compose(*c)
            if rng.random() < 0.6:
                op = scale(_random_scalar(rng), op)
            terms.append(op)
        e = plus(*terms)
        # the text "0" carries no signature, so zero sums are skipped
        if not isinstance(e, O.Zero):
            return e, n, p


def test_round_trip_on_random_expressions():
    rng = random.Random(2024)
    for _ in range(200):
        e, n, p = _random_expr(rng)
        text = pretty_print(e)
        back = parse_op(text, {"n": n, "p": p})
        assert back == e, text
        assert pretty_print(back) == text
        assert back.sig == e.sig
        assert op_equal(back, e)[0], text


@pytest.mark.parametrize("t", [1, 2, 3, 4])
@pytest.mark.parametrize("presentation", ["normal", "geometric"])
def test_builders_survive_printing(t, presentation):
    for n in (3, 4):
        for p in range(0, n + 1):
            for N in range(0, 4):
                try:
                    e = O.family(t, n, p, N, presentation)
                except ValueError:
                    continue
                back = parse_op(pretty_print(e), {"n": n, "p": p}, source="ambient")
                assert op_equal(back, e)[0]


@pytest.mark.parametrize("key", sorted(FIRST_SECOND))
def test_first_second_displays_parse(key):
    t, N = key
    for n in (3, 4, 5):
        for p in (range(0, n) if t == 1 else range(1, n + 1)):
            for text, pres in zip(FIRST_SECOND[key], ("normal", "geometric")):
                e = parse_op(text, {"n": n, "p": p, "N": N}, source="ambient")
                assert op_equal(e, O.family(t, n, p, N, pres))[0], (text, n, p)


@pytest.mark.parametrize("key", sorted(THIRD_FOURTH))
def test_third_fourth_displays_parse(key):
    t, N = key
    for n in (3, 4, 5):
        p = 0 if t == 3 else n
        e = parse_op(THIRD_FOURTH[key], {"n": n, "p": p, "N": N}, source="ambient")
        assert op_equal(e, O.family(t, n, p, N))[0], n


# -- command line


def _run(*args):
    return CliRunner().invoke(main, list(args))


def test_cli_family_json():
    r = _run("family", "--type", "1", "--n", "4", "--p", "1", "--order", "2", "--format", "json")
    assert r.exit_code == 0, r.output
    e = O.from_json(json.loads(r.output))
    assert op_equal(e, O.family(1, 4, 1, 2))[0]


def test_cli_family_text_and_lambda():
    r = _run("family", "--type", "2", "--n", "3", "--p", "2", "--order", "1", "--lambda", "1/2")
    assert r.exit_code == 0 and "iota" in r.output


def test_cli_coeffs():
    r = _run("coeffs", "--n", "4", "--order", "2", "--family", "a", "--format", "json")
    assert r.exit_code == 0
    assert len(json.loads(r.output)) == 3


def test_cli_apply():
    w = PolyForm.monomial(3, (0, 0, 2))
    r = _run("apply", "--form", json.dumps(w.to_json()), "--expr", "iota dn^2", "--n", "3", "--p", "0",
             "--format", "json")
    assert r.exit_code == 0, r.output
    assert PolyForm.from_json(json.loads(r.output)) == PolyForm.monomial(2, (0, 0), (), 2)
    r = _run("apply", "--form", json.dumps(w.to_json()), "--type", "1", "--order", "2", "--n", "3", "--p", "0")
    assert r.exit_code == 0, r.output


def test_cli_singular_verify_and_solve():
    assert _run("singular", "--type", "1", "--n", "4", "--p", "1", "--order", "3", "--action", "verify").exit_code == 0
    r = _run("singular", "--type", "3", "--n", "4", "--p", "0", "--order", "2", "--action", "solve")
    assert r.exit_code == 0 and "dimension 1" in r.output
    r = _run("singular", "--type", "1", "--n", "4", "--p", "1", "--order", "2", "--action", "translate")
    assert r.exit_code == 0 and "iota" in r.output


def test_cli_check_hodge():
    r = _run("check", "--suite", "hodge", "--n-max", "4")
    assert r.exit_code == 0, r.output


@pytest.mark.parametrize("args", [
    ["family", "--type", "1", "--n", "4", "--p", "5", "--order", "2"],
    ["family", "--type", "7", "--n", "4", "--p", "1", "--order", "2"],
    ["apply", "--form", "{}", "--n", "3", "--p", "0"],
    ["apply", "--form", "{}", "--expr", "iota d", "--n", "3", "--p", "0"],
    ["coeffs", "--n", "4", "--order", "2", "--lambda", "x/y"],
    ["check", "--suite", "nope"],
])
def test_cli_usage_errors(args):
    r = _run(*args)
    assert r.exit_code != 0
