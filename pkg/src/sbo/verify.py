"""Exact operator equality and the identity suites.

Every suite is a list of ``Case`` objects.  A case names an identity with
its parameters and points at a module level function that returns a
``CaseOutcome``; this keeps cases picklable so suites can run in a process
pool.  Nothing here is approximate: operators are compared through their
symbols with exact Gaussian-rational coefficients in lambda.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple, Union

from gmpy2 import mpq

from . import coeffs as C
from . import operators as O
from . import singular as S
from .exterior import PolyForm, constant_forms, monomial_basis, poly_map_scalars
from .operators import Atom, OpExpr, Symbol
from .rep import check_intertwining
from .scalars import LAMBDA, ONE, GaussianRational, Scalar, rational

Operand = Union[OpExpr, Symbol]

SUITES = ("coeffs", "presentation", "equivariance", "hodge", "main-fact", "supp-fact",
          "gauge-q", "singular", "kkp", "curved")


# ---------------------------------------------------------------------------
# equality


def _sym(a: Operand) -> Symbol:
    return a if isinstance(a, Symbol) else a.symbol()


@dataclass
class Witness:
    form: PolyForm
    residual: PolyForm

    def to_json(self) -> dict:
        return {"basis_form": self.form.to_json(), "residual": self.residual.to_json()}


def op_equal(A: Operand, B: Operand, degree_bound: Optional[int] = None) -> Tuple[bool, Optional[Witness]]:
    """Decide A == B and return a witness form on which they differ.

    Without ``degree_bound`` the symbols are compared, which is exact for
    constant-coefficient operators.  With a bound, both operators are applied
    to every monomial form of coefficient degree at most the bound.
    """
    a, b = _sym(A), _sym(B)
    if a.sig != b.sig:
        raise O.SignatureError("cannot compare %s with %s" % (a.sig, b.sig))
    if degree_bound is None:
        w = a.difference_witness(b)
        if w is None:
            return True, None
        return False, Witness(w, a.apply(w) - b.apply(w))
    for w in monomial_basis(a.sig.src_dim, a.sig.src_deg, degree_bound):
        r = a.apply(w) - b.apply(w)
        if not r.is_zero():
            return False, Witness(w, r)
    return True, None


def op_equal_on_closed(A: Operand, B: Operand) -> Tuple[bool, Optional[Witness]]:
    """Equality on closed forms of the source.

    Closed polynomial p-forms are spanned by dbar of polynomial (p-1)-forms
    together with the constant p-forms (constants only when p = 0), so it is
    enough to compare A o dbar with B o dbar and the values on constants.
    """
    a, b = _sym(A), _sym(B)
    if a.sig != b.sig:
        raise O.SignatureError("cannot compare %s with %s" % (a.sig, b.sig))
    m, p = a.sig.src_dim, a.sig.src_deg
    for w in constant_forms(m, p):
        r = a.apply(w) - b.apply(w)
        if not r.is_zero():
            return False, Witness(w, r)
    if p == 0:
        return True, None
    dbar = Atom("dbar", m, p - 1).symbol()
    ad, bd = a.compose(dbar), b.compose(dbar)
    w = ad.difference_witness(bd)
    if w is None:
        return True, None
    form = dbar.apply(w)
    return False, Witness(form, a.apply(form) - b.apply(form))


# ---------------------------------------------------------------------------
# reports


@dataclass
class CaseOutcome:
    passed: bool
    counterexample: Optional[dict] = None
    info: Dict = field(default_factory=dict)


@dataclass
class Case:
    suite: str
    name: str
    params: Dict
    func: Callable
    args: tuple = ()
    expect_fail: bool = False


@dataclass
class CaseResult:
    suite: str
    name: str
    params: Dict
    passed: bool
    counterexample: Optional[dict]
    info: Dict
    seconds: float

    def to_json(self) -> dict:
        return {"suite": self.suite, "case": self.name, "params": self.params, "passed": self.passed,
                "counterexample": self.counterexample, "info": self.info,
                "seconds": round(self.seconds, 4)}


@dataclass
class SuiteReport:
    name: str
    results: List[CaseResult]
    seconds: float

    @property
    def failures(self) -> List[CaseResult]:
        return [r for r in self.results if not r.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.passed

    def summary(self) -> str:
        return "%-12s %4d cases  %3d failed  %7.2fs" % (self.name, len(self.results),
                                                      len(self.failures), self.seconds)

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "cases": len(self.results),
                "failed": len(self.failures), "seconds": round(self.seconds, 3),
                "results": [r.to_json() for r in self.results]}


def _outcome(ok: bool, witness: Optional[Witness], **info) -> CaseOutcome:
    return CaseOutcome(ok, witness.to_json() if witness else None, info)


def _run_case(case: Case) -> CaseResult:
    t0 = time.perf_counter()
    try:
        out = case.func(*case.args)
    except Exception as exc:  # a crash is a failure with a message, never a pass
        out = CaseOutcome(False, {"error": "%s: %s" % (type(exc).__name__, exc)})
    passed = out.passed != case.expect_fail
    info = dict(out.info)
    if case.expect_fail:
        info["expected_failure"] = True
    ce = out.counterexample if not passed or case.expect_fail else None
    return CaseResult(case.suite, case.name, case.params, passed, ce, info, time.perf_counter() - t0)


def run_cases(name: str, cases: List[Case], jobs: int = 1) -> SuiteReport:
    t0 = time.perf_counter()
    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_case, cases, chunksize=1))
    else:
        results = [_run_case(c) for c in cases]
    return SuiteReport(name, results, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# shared building blocks (cached per process)


def _q(x) -> GaussianRational:
    return GaussianRational.coerce(rational(x) if not isinstance(x, GaussianRational) else x)


@lru_cache(maxsize=None)
def fam(t: int, n: int, p: int, N: int, presentation: str = "normal") -> Symbol:
    return O.family(t, n, p, N, presentation).symbol()


def at(sym: Symbol, lam0) -> Symbol:
    lam0 = _q(lam0)
    return sym.map_scalars(lambda c: Scalar.coerce(c.eval_at(lam0)))


def dot(sym: Symbol) -> Symbol:
    return sym.map_scalars(lambda c: c.d_dlambda())


@lru_cache(maxsize=None)
def word(n: int, p: int, text: str, slice_source: bool = False) -> Symbol:
    return O.word(n, p, text, slice_source).symbol()


@lru_cache(maxsize=None)
def bg(m: int, p: int, N: int, bar: bool) -> Symbol:
    return O.branson_gover(m, p, N, bar).symbol()


def _c(x) -> Scalar:
    return Scalar.coerce(_q(x))


def _eq(a: Symbol, b: Symbol, **info) -> CaseOutcome:
    ok, w = op_equal(a, b)
    return _outcome(ok, w, **info)


def _eq_closed(a: Symbol, b: Symbol, **info) -> CaseOutcome:
    ok, w = op_equal_on_closed(a, b)
    return _outcome(ok, w, **info)


def _half(x) -> mpq:
    return mpq(x, 2)


# ---------------------------------------------------------------------------
# coefficients


def _case_coeff(name, n, N):
    bad = []
    if name == "gegen-rec":
        for j in range(1, N + 1):
            if C.gegen_rec1_residual(N, j, n) or C.gegen_rec2_residual(N, j, n):
                bad.append(j)
    elif name == "closed-form":
        bad = [j for j in range(N + 1) if C.a(N, j, n) != C.a_closed(N, j, n) or C.b(N, j, n) != C.b_closed(N, j, n)]
    elif name == "jacobi-gegenbauer":
        bad = [i for i in range(N + 1)
               if C.alpha_from_a(N, i, n) != C.alpha(N, i, n) or C.beta_from_b(N, i, n) != C.beta(N, i, n)]
    elif name == "gamma-alternative":
        bad = [(i, p) for p in range(n + 1) for i in range(1, N + 1)
               if C.gamma(N, i, p, n) != C.gamma_alt(N, i, p, n)
               or C.gamma(N, i, p, n) != C.gamma_pm(N, i, p, n, 1) + C.gamma_pm(N, i, p, n, -1)]
    elif name == "generating":
        al = [C.alpha(N, i, n) for i in range(N + 1)]
        be = [C.beta(N, i, n) for i in range(N + 1)]
        if not C.zpoly_equal(C.alpha_generating(N, n), al):
            bad.append("alpha")
        if not C.zpoly_equal(C.beta_generating(N, n), be):
            bad.append("beta")
        h = _half(n)
        for tag, coeffs, b in (("alpha-jacobi", al, mpq(-1, 2)), ("beta-jacobi", be, mpq(1, 2))):
            jac = C.zpoly_compose_affine(C.jacobi_P(N, -LAMBDA - h, b), 1, -2)
            if not C.zpoly_proportional(jac, coeffs):
                bad.append(tag)
    elif name == "gegenbauer":
        for m in (2 * N, 2 * N + 1):
            if not C.zpoly_equal(C.gegenbauer_C(m, LAMBDA + mpq(1, 2)), C.gegenbauer_via_a(m, n)):
                bad.append(m)
    else:
        raise ValueError(name)
    return CaseOutcome(not bad, {"failing": [str(b) for b in bad]} if bad else None)


COEFF_CASES = ("gegen-rec", "closed-form", "jacobi-gegenbauer", "gamma-alternative", "generating", "gegenbauer")


def suite_coefficients(n_max=6, order_max=6) -> List[Case]:
    return [Case("coeffs", name, dict(n=n, N=N), _case_coeff, (name, n, N))
            for name in COEFF_CASES for n in range(2, max(n_max, 6) + 1) for N in range(0, max(order_max, 6) + 1)]


# ---------------------------------------------------------------------------
# presentation and equivariance


def _case_presentation(t, n, p, N):
    return _eq(fam(t, n, p, N, "normal"), fam(t, n, p, N, "geometric"))


def _case_presentation_middle(n, variant, N, sign):
    a = O.middle_degree(n, variant, N, sign, "normal").symbol()
    b = O.middle_degree(n, variant, N, sign, "geometric").symbol()
    return _eq(a, b)


def family_params(n_max: int, order_max: int, types=(1, 2, 3, 4), n_min: int = 2):
    for t in types:
        for n in range(n_min, n_max + 1):
            for N in range(0, order_max + 1):
                for p in range(0, n + 1):
                    try:
                        O.validate_family(t, n, p, N)
                    except ValueError:
                        continue
                    yield t, n, p, N


def middle_params(n_max: int, order_max: int, n_min: int = 2):
    for n in range(n_min, n_max + 1):
        variants = ("1a", "1b") if n % 2 else ("2",)
        for v in variants:
            for N in range(0, order_max + 1):
                for sign in (1, -1):
                    yield n, v, N, sign


def suite_presentation(n_max=5, order_max=5) -> List[Case]:
    cases = [Case("presentation", "family", dict(type=t, n=n, p=p, N=N), _case_presentation, (t, n, p, N))
             for t, n, p, N in family_params(n_max, order_max)]
    cases += [Case("presentation", "middle", dict(n=n, variant=v, N=N, sign=s), _case_presentation_middle,
                   (n, v, N, s)) for n, v, N, s in middle_params(n_max, order_max)]
    return cases


def _intertwining_outcome(report) -> CaseOutcome:
    ce = report.failures[0].to_json() if report.failures else None
    return CaseOutcome(report.passed, ce, {"checked": report.checked})


def _case_equivariance(t, n, p, N):
    D = O.family(t, n, p, N)
    lam = O.fixed_lambda(t, n, p, N)
    return _intertwining_outcome(
        check_intertwining(D, n, p, D.sig.tgt_deg, N, lam=lam, case="type %d" % t))


def _case_equivariance_middle(n, variant, N, sign):
    D = O.middle_degree(n, variant, N, sign)
    return _intertwining_outcome(
        check_intertwining(D, n, D.sig.src_deg, D.sig.tgt_deg, N, case="middle %s" % variant))


def perturbed_family(n: int, p: int, N: int) -> OpExpr:
    """family_first with one extra term; it is no longer equivariant."""
    extra = O.word(n, p, "iota dn^%d" % N) if N else O.word(n, p, "iota")
    return O.plus(O.family_first(n, p, N), O.scale(ONE, extra))


def _case_equivariance_perturbed(n, p, N):
    D = perturbed_family(n, p, N)
    return _intertwining_outcome(check_intertwining(D, n, p, p, N, case="perturbed"))


def suite_equivariance(n_max=5, order_max=3) -> List[Case]:
    cases = [Case("equivariance", "family", dict(type=t, n=n, p=p, N=N), _case_equivariance, (t, n, p, N))
             for t, n, p, N in family_params(n_max, order_max)]
    cases += [Case("equivariance", "middle", dict(n=n, variant=v, N=N, sign=s), _case_equivariance_middle,
                   (n, v, N, s)) for n, v, N, s in middle_params(n_max, order_max)]
    for n, p, N in ((3, 1, 2), (4, 1, 1), (2, 0, 3)):
        if n <= max(n_max, 2):
            cases.append(Case("equivariance", "perturbed", dict(n=n, p=p, N=N), _case_equivariance_perturbed,
                              (n, p, N), expect_fail=True))
    return cases


# ---------------------------------------------------------------------------
# Hodge conjugation


def _conj(sym: Symbol, n: int, p: int) -> Symbol:
    """star o D o star_bar for D acting on (n-p)-forms."""
    star_bar = Atom("hodge_bar", n, p).symbol()
    star = Atom("hodge_slice", n - 1, sym.sig.tgt_deg).symbol()
    return star.compose(sym.compose(star_bar))


def _case_hodge_12(n, p, N):
    lhs = fam(2, n, p, N)
    rhs = _conj(fam(1, n, n - p, N), n, p).scale((-1) ** (p * n))
    return _eq(lhs, rhs)


def hodge_34_sign(n: int, p: int, N: int) -> int:
    """Sign in D^{(p->p-2)} = sign * star D^{(n-p->n-p+1)} star_bar."""
    s = (-1) ** (n - p + p * n)
    if p == n and N >= 1:
        # the p = n family carries its own sign
        s = -s
    return s


def _case_hodge_34(n, p, N):
    lhs = fam(4, n, p, N)
    rhs = _conj(fam(3, n, n - p, N), n, p).scale(hodge_34_sign(n, p, N))
    return _eq(lhs, rhs)


def suite_hodge(n_max=5, order_max=5) -> List[Case]:
    cases = []
    for n in range(2, n_max + 1):
        for p in range(1, n + 1):
            for N in range(0, order_max + 1):
                cases.append(Case("hodge", "hodge-1-2", dict(n=n, p=p, N=N), _case_hodge_12, (n, p, N)))
        for p in range(2, n + 1):
            for N in range(1, order_max + 1):
                if p == n or N == 1:
                    cases.append(Case("hodge", "hodge-3-4", dict(n=n, p=p, N=N), _case_hodge_34, (n, p, N)))
    return cases


# ---------------------------------------------------------------------------
# main factorizations


def _lhs_rhs(coef, lhs: Symbol, rhs: Symbol, **info) -> CaseOutcome:
    return _eq(lhs.scale(_c(coef)), rhs, **info)


def _case_fact_b1(t, n, p, N, k):
    """(n/2 -+ p +- k) D_N(k - n/2) = D_{N-2k}(-k - n/2) o Lbar_{2k}^{(p)}."""
    coef = _half(n) - p + k if t == 1 else _half(n) - p - k
    lhs = at(fam(t, n, p, N), k - _half(n))
    rhs = at(fam(t, n, p, N - 2 * k), -k - _half(n)).compose(bg(n, p, k, True))
    return _lhs_rhs(coef, lhs, rhs)


def _case_fact_b2(t, n, p, N, k):
    """c D_N(N - k - (n-1)/2) = L_{2k} o D_{N-2k}(N - k - (n-1)/2)."""
    lam0 = N - k - _half(n - 1)
    if t == 1:
        coef, q = _half(n - 1) - p - k, p
    else:
        coef, q = _half(n + 1) - p + k, p - 1
    lhs = at(fam(t, n, p, N), lam0)
    rhs = bg(n - 1, q, k, False).compose(at(fam(t, n, p, N - 2 * k), lam0))
    return _lhs_rhs(coef, lhs, rhs)


def _case_fact_extremal(t, n, p, N, side):
    """D_{2N}(N - (n-1)/2) = -L_{2N} o tail and D_{2N}(N - n/2) = -tail o Lbar_{2N}."""
    M = N // 2
    tail = word(n, p, "iota" if t == 1 else "iota_n")
    if side == "slice":
        lhs = at(fam(t, n, p, N), M - _half(n - 1))
        rhs = bg(n - 1, p if t == 1 else p - 1, M, False).compose(tail).scale(-1)
    else:
        lhs = at(fam(t, n, p, N), M - _half(n))
        rhs = tail.compose(bg(n, p, M, True)).scale(-1)
    return _eq(lhs, rhs)


def _renorm(t, n, p, N, lam0) -> Symbol:
    if N == 0:
        return word(n, p, "iota") if t == 1 else word(n, p, "iota_n").scale(-1)
    lam0 = _q(lam0)
    div = lam0 + (p - N) if t == 1 else lam0 + (n - p)
    if div.is_zero():
        raise ZeroDivisionError("renormalization divisor vanishes")
    return at(fam(t, n, p, N), lam0).scale(Scalar.coerce(div.inverse()))


def _renorm_bg(m, p, k, bar):
    c = _half(m) - p + k
    return bg(m, p, k, bar).scale(_c(1 / c))


def _case_reno(t, n, p, N, k, which):
    if which == 1:
        lhs = _renorm(t, n, p, N, k - _half(n))
        rhs = _renorm(t, n, p, N - 2 * k, -k - _half(n)).compose(_renorm_bg(n, p, k, True))
    else:
        lam0 = N - k - _half(n - 1)
        lhs = _renorm(t, n, p, N, lam0)
        rhs = _renorm_bg(n - 1, p if t == 1 else p - 1, k, False).compose(_renorm(t, n, p, N - 2 * k, lam0))
    return _eq(lhs, rhs)


def _reno_points(t, n, p, N, k, which):
    """(order, lambda) of the two renormalized families in a reno identity."""
    lam0 = k - _half(n) if which == 1 else N - k - _half(n - 1)
    lam1 = -k - _half(n) if which == 1 else lam0
    return (N, lam0), (N - 2 * k, lam1)


def _reno_divisor(t, n, p, order, lam0):
    if order == 0:
        return None
    return _q(lam0) + (p - order if t == 1 else n - p)


def _reno_defined(t, n, p, N, k, which) -> bool:
    return all(_reno_divisor(t, n, p, o, l) != 0 for o, l in _reno_points(t, n, p, N, k, which))


def _case_reno_undefined(t, n, p, N, k, which):
    """A parameter point where a renormalized family divides by zero and does
    not vanish there, so the renormalized identity has no meaning."""
    for order, lam0 in _reno_points(t, n, p, N, k, which):
        div = _reno_divisor(t, n, p, order, lam0)
        if div is not None and div == 0 and not at(fam(t, n, p, order), lam0).is_zero():
            return CaseOutcome(True, None, {"singular_factor": {"order": order, "lambda": str(lam0)}})
    return CaseOutcome(False, {"reason": "expected a vanishing divisor"})


def suite_main_factorizations(n_max=5, order_max=5) -> List[Case]:
    cases = []
    for n in range(2, n_max + 1):
        for t in (1, 2):
            prange = range(0, n) if t == 1 else range(1, n + 1)
            for p in prange:
                for N in range(2, order_max + 1):
                    even = N % 2 == 0
                    kmax = N // 2 - 1 if even else N // 2
                    tag = "even" if even else "odd"
                    for k in range(1, kmax + 1):
                        params = dict(type=t, n=n, p=p, order=N, k=k)
                        cases.append(Case("main-fact", "%s-b1-type%d" % (tag, t), params, _case_fact_b1,
                                          (t, n, p, N, k)))
                        if n >= 3 or t == 1 or p - 1 <= n - 1:
                            cases.append(Case("main-fact", "%s-b2-type%d" % (tag, t), params, _case_fact_b2,
                                              (t, n, p, N, k)))
                    if even:
                        for side in ("slice", "ambient"):
                            cases.append(Case("main-fact", "extremal-%s-type%d" % (side, t),
                                              dict(type=t, n=n, p=p, order=N), _case_fact_extremal,
                                              (t, n, p, N, side)))
                # renormalized identities: n even, p < n/2, k = 1..N including k = N
                if n % 2 == 0 and p < n // 2:
                    for N in range(2, order_max + 1, 2):
                        for k in range(1, N // 2 + 1):
                            for which in (1, 2):
                                params = dict(type=t, n=n, p=p, order=N, k=k)
                                if _reno_defined(t, n, p, N, k, which):
                                    cases.append(Case("main-fact", "reno-%d-type%d" % (which, t), params,
                                                      _case_reno, (t, n, p, N, k, which)))
                                else:
                                    cases.append(Case("main-fact", "reno-undefined", dict(params, which=which),
                                                      _case_reno_undefined, (t, n, p, N, k, which)))
    return cases


# ---------------------------------------------------------------------------
# supplementary factorizations


def _case_supp(name, n, p, N):
    """The supplementary identities; N is the half order as in the statements."""
    d_slice = lambda deg: Atom("d", n - 1, deg).symbol()  # noqa: E731
    delta_slice = lambda deg: Atom("delta", n - 1, deg).symbol()  # noqa: E731
    dbar = lambda deg: Atom("dbar", n, deg).symbol()  # noqa: E731
    deltabar = lambda deg: Atom("deltabar", n, deg).symbol()  # noqa: E731
    if name == "supp2b":
        lam0 = -p + 2 * N
        lhs = at(fam(1, n, p, 2 * N), lam0)
        rhs = d_slice(p - 1).compose(at(fam(2, n, p, 2 * N - 1), lam0)).scale(-2 * N)
    elif name == "supp2":
        lhs = at(fam(1, n, p, 2 * N), -p)
        rhs = at(fam(2, n, p + 1, 2 * N - 1), -p - 1).compose(dbar(p)).scale(2 * N)
    elif name == "supp1":
        lam0 = p - n + 2 * N + 1
        lhs = at(fam(2, n, p, 2 * N + 1), lam0).scale(n - 2 * p - 2 * N - 1)
        rhs = delta_slice(p).compose(at(fam(1, n, p, 2 * N), lam0))
    elif name == "supp1b":
        lhs = at(fam(2, n, p + 1, 2 * N + 1), -n + p + 1).scale(n - 2 * p + 2 * N)
        rhs = at(fam(1, n, p, 2 * N), -n + p).compose(deltabar(p + 1))
    elif name == "supp2-i":
        lam0 = p - n + 2 * N
        lhs = at(fam(2, n, p, 2 * N), lam0)
        rhs = delta_slice(p).compose(at(fam(1, n, p, 2 * N - 1), lam0)).scale(-2 * N)
    elif name == "supp2-ii":
        # the right hand factor sits at p - n - 1 and the constant is -2N
        lhs = at(fam(2, n, p, 2 * N), p - n)
        rhs = at(fam(1, n, p - 1, 2 * N - 1), p - n - 1).compose(deltabar(p)).scale(-2 * N)
    elif name == "supp2-iii":
        lam0 = -p + 2 * N + 1
        lhs = at(fam(1, n, p, 2 * N + 1), lam0).scale(-n + 2 * p - 2 * N - 1)
        rhs = d_slice(p - 1).compose(at(fam(2, n, p, 2 * N), lam0))
    elif name == "supp2-iv":
        lhs = at(fam(1, n, p, 2 * N + 1), -p).scale(n - 2 * p - 2 * N - 2)
        rhs = at(fam(2, n, p + 1, 2 * N), -p - 1).compose(dbar(p))
    else:
        raise ValueError(name)
    return _eq(lhs, rhs)


def _case_vanishing(name, n, p, N):
    """d o D_N^{(p->p)}(N-p) = 0, D_N^{(p->p)}(-p) o dbar = 0 and the second type duals."""
    if name == "d-after-first":
        A = Atom("d", n - 1, p).symbol().compose(at(fam(1, n, p, N), N - p))
    elif name == "first-after-dbar":
        A = at(fam(1, n, p, N), -p).compose(Atom("dbar", n, p - 1).symbol())
    elif name == "delta-after-second":
        A = Atom("delta", n - 1, p - 1).symbol().compose(at(fam(2, n, p, N), N - n + p))
    elif name == "second-after-deltabar":
        A = at(fam(2, n, p, N), p - n).compose(Atom("deltabar", n, p + 1).symbol())
    else:
        raise ValueError(name)
    zero = Symbol(A.sig, {})
    return _eq(A, zero)


def _case_sf_cbgo(n, N, which):
    """Consequences of the supplementary identities at critical parameters."""
    if which == 1:
        # n odd, p = (n-1)/2 - N: delta D_{2N}^{(p->p)}(N - (n-1)/2) = 0
        p = (n - 1) // 2 - N
        A = Atom("delta", n - 1, p).symbol().compose(at(fam(1, n, p, 2 * N), N - _half(n - 1)))
    else:
        # n even, p = n/2 - N - 1: D_{2N}^{(p+1->p)}(N - n/2) dbar = 0
        p = n // 2 - N - 1
        A = at(fam(2, n, p + 1, 2 * N), N - _half(n)).compose(Atom("dbar", n, p).symbol())
    return _eq(A, Symbol(A.sig, {}))


def suite_supplementary(n_max=5, order_max=5) -> List[Case]:
    cases = []
    for n in range(2, n_max + 1):
        for N in range(1, order_max // 2 + 1):
            for p in range(1, n):
                cases.append(Case("supp-fact", "supp2b", dict(n=n, p=p, N=N), _case_supp, ("supp2b", n, p, N)))
                cases.append(Case("supp-fact", "supp2-i", dict(n=n, p=p, N=N), _case_supp, ("supp2-i", n, p, N)))
            for p in range(0, n):
                cases.append(Case("supp-fact", "supp2", dict(n=n, p=p, N=N), _case_supp, ("supp2", n, p, N)))
            for p in range(1, n + 1):
                cases.append(Case("supp-fact", "supp2-ii", dict(n=n, p=p, N=N), _case_supp, ("supp2-ii", n, p, N)))
        for N in range(0, (order_max - 1) // 2 + 1):
            for p in range(1, n):
                cases.append(Case("supp-fact", "supp1", dict(n=n, p=p, N=N), _case_supp, ("supp1", n, p, N)))
                cases.append(Case("supp-fact", "supp2-iii", dict(n=n, p=p, N=N), _case_supp, ("supp2-iii", n, p, N)))
            for p in range(0, n):
                cases.append(Case("supp-fact", "supp1b", dict(n=n, p=p, N=N), _case_supp, ("supp1b", n, p, N)))
                cases.append(Case("supp-fact", "supp2-iv", dict(n=n, p=p, N=N), _case_supp, ("supp2-iv", n, p, N)))
        for N in range(0, order_max + 1):
            for p in range(0, n - 1):
                cases.append(Case("supp-fact", "d-after-first", dict(n=n, p=p, N=N), _case_vanishing,
                                  ("d-after-first", n, p, N)))
            for p in range(1, n):
                cases.append(Case("supp-fact", "first-after-dbar", dict(n=n, p=p, N=N), _case_vanishing,
                                  ("first-after-dbar", n, p, N)))
            for p in range(2, n + 1):
                cases.append(Case("supp-fact", "delta-after-second", dict(n=n, p=p, N=N), _case_vanishing,
                                  ("delta-after-second", n, p, N)))
            for p in range(1, n):
                cases.append(Case("supp-fact", "second-after-deltabar", dict(n=n, p=p, N=N), _case_vanishing,
                                  ("second-after-deltabar", n, p, N)))
        for N in range(1, order_max // 2 + 1):
            if n % 2 == 1 and (n - 1) // 2 - N >= 0:
                cases.append(Case("supp-fact", "critical-delta", dict(n=n, N=N), _case_sf_cbgo, (n, N, 1)))
            if n % 2 == 0 and n // 2 - N - 1 >= 0:
                cases.append(Case("supp-fact", "critical-dbar", dict(n=n, N=N), _case_sf_cbgo, (n, N, 2)))
    return cases


# ---------------------------------------------------------------------------
# gauge companion and Q-curvature


def _case_gauge(n, p):
    """D_{n-2p}^{(p->p-1)}(-p) = -G_{n-2p}^{(p)} iota* on closed forms."""
    lhs = at(fam(2, n, p, n - 2 * p), -p)
    rhs = O.gauge_companion(n - 1, p).symbol().compose(word(n, p, "iota")).scale(-1)
    return _eq_closed(lhs, rhs)


def _case_q_definition(n, p, N):
    """(lambda + p) Q_{2N}^{(p)}(lambda) = D_{2N}^{(p->p)}(lambda) on closed forms."""
    lhs = O.q_poly(n, p, 2 * N).symbol().scale(LAMBDA + p)
    return _eq_closed(lhs, fam(1, n, p, 2 * N))


def _case_q_tangential(n, p, N):
    """Q_{2N}^{(p)}(N - (n-1)/2) = (d delta)^N iota*."""
    lhs = at(O.q_poly(n, p, 2 * N).symbol(), N - _half(n - 1))
    rhs = word(n, p, " ".join(["d delta"] * N + ["iota"]))
    return _eq(lhs, rhs)


def _case_holo(n, p):
    """dD_{n-1-2p}^{(p->p)}/dlambda at -p equals Q_{n-1-2p}^{(p)} iota* on closed forms."""
    lhs = at(dot(fam(1, n, p, n - 1 - 2 * p)), -p)
    rhs = O.q_curvature_op(n - 1, p).symbol().compose(word(n, p, "iota"))
    return _eq_closed(lhs, rhs)


def _case_one_side(n, p):
    """L_{n-2p-1}^{(p)} = (n-2p-1) delta Q^{(p+1)} d on R^{n-1}."""
    m = n - 1
    lhs = bg(m, p, (n - 1) // 2 - p, False)
    q = O.q_curvature_op(m, p + 1).symbol()
    rhs = Atom("delta", m, p + 1).symbol().compose(q.compose(Atom("d", m, p).symbol())).scale(n - 2 * p - 1)
    return _eq(lhs, rhs)


def _case_double_fact_2(n, p):
    """iota* Lbar_{2p-n}^{(p)} = (n-2p) d dD_{2p-n-2}^{(p-1->p-1)}(p-n-1) deltabar."""
    lhs = word(n, p, "iota").compose(bg(n, p, p - n // 2, True))
    inner = at(dot(fam(1, n, p - 1, 2 * p - n - 2)), p - n - 1)
    rhs = Atom("d", n - 1, p - 1).symbol().compose(inner.compose(Atom("deltabar", n, p).symbol()))
    return _eq(lhs, rhs.scale(n - 2 * p))


def suite_gauge_and_q(n_max=7, order_max=None) -> List[Case]:
    cases = []
    for n in range(2, n_max + 1):
        if n % 2 == 1:
            for p in range(1, (n - 1) // 2 + 1):
                cases.append(Case("gauge-q", "gauge", dict(n=n, p=p), _case_gauge, (n, p)))
            for p in range(0, n):
                if n - 2 * p >= 3:
                    cases.append(Case("gauge-q", "holo", dict(n=n, p=p), _case_holo, (n, p)))
                if 2 * p < n - 1:
                    cases.append(Case("gauge-q", "one-side", dict(n=n, p=p), _case_one_side, (n, p)))
        else:
            for p in range(n // 2 + 1, n):
                cases.append(Case("gauge-q", "double-fact-2", dict(n=n, p=p), _case_double_fact_2, (n, p)))
        nmax_q = (order_max // 2) if order_max else max(1, (n - 1) // 2)
        for N in range(1, nmax_q + 1):
            for p in range(0, n):
                cases.append(Case("gauge-q", "q-definition", dict(n=n, p=p, N=N), _case_q_definition, (n, p, N)))
                cases.append(Case("gauge-q", "q-tangential", dict(n=n, p=p, N=N), _case_q_tangential, (n, p, N)))
    return cases


# ---------------------------------------------------------------------------
# singular vectors


def _case_sv_annihilated(t, n, p, N):
    v = S.build(t, n, p, N)
    rep = S.verify_annihilated(v)
    ce = None
    if rep.failures:
        J, j, r = rep.failures[0]
        ce = {"source": list(J), "j": j, "residual": r.to_json()}
    return CaseOutcome(rep.passed and not v.is_zero(), ce)


def _case_sv_middle(n, N, sign, variant):
    v = S.build(1, n, (n - 1) // 2 if n % 2 else n // 2, N)
    w = S.middle_star(v, sign) if variant == "1b" else S.middle_projections(v, sign)
    rep = S.verify_annihilated(w)
    return CaseOutcome(rep.passed and not w.is_zero(), None if rep.passed else {"failures": len(rep.failures)})


def _case_sv_perturbed(n, p, N):
    from dataclasses import replace
    v = S.build(1, n, p, N)
    t0 = v.terms[0]
    terms = (S.Term(t0.coeff + ONE, t0.a, t0.b, t0.word),) + v.terms[1:]
    rep = S.verify_annihilated(replace(v, terms=terms))
    return CaseOutcome(rep.passed)


def _case_sv_ode(n, p, N, parity):
    P, Q, R = S.first_type_pqr(n, p, N, parity)
    res = S.ode_residuals(n, p, N, parity, P, Q, R)
    bad = [i + 1 for i, r in enumerate(res) if r]
    return CaseOutcome(not bad, {"nonzero_residuals": bad} if bad else None)


def _random_lambdas(seed: int, count: int = 5):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        x = mpq(rng.randint(-40, 40), rng.randint(1, 9)) + mpq(1, 97)
        out.append(x)
    return out


def _case_sv_kernel(t, n, p, N, seed):
    q = p + {1: 0, 2: -1, 3: 1, 4: -2}[t]
    dims = []
    for lam0 in _random_lambdas(seed):
        ker = S.solve_ansatz(n, p, q, N, lam0)
        dims.append(len(ker))
        if t in (1, 2) and len(ker) == 1:
            if S.proportional(ker[0], S.build(t, n, p, N).at(lam0)) is None:
                return CaseOutcome(False, {"lambda": str(lam0), "reason": "kernel not spanned by closed form"})
    expected = 1 if t in (1, 2) else 0
    ok = all(d == expected for d in dims)
    return CaseOutcome(ok, None if ok else {"dims": dims}, {"dims": dims})


def _case_sv_kernel_special(t, n, p, N):
    """At the special parameter types 3 and 4 have a one-dimensional kernel."""
    v = S.build(t, n, p, N)
    lam0 = v.lam.coeff(0)
    ker = S.solve_ansatz(n, p, v.q, N, lam0)
    ok = len(ker) == 1 and S.proportional(ker[0], v) is not None
    return CaseOutcome(ok, None if ok else {"dim": len(ker)}, {"dim": len(ker)})


def _symbol_ratio(a: Symbol, b: Symbol):
    """c with a = c b for symbols with polynomial-in-lambda entries, or None."""
    if a.sig != b.sig or set(a.entries) != set(b.entries):
        return None
    ratio = None
    for k, pa in a.entries.items():
        pb = b.entries[k]
        if set(pa) != set(pb):
            return None
        for e, c in pa.items():
            qt, rem = c.divmod(pb[e])
            if not rem.is_zero() or not qt.is_constant():
                return None
            if ratio is None:
                ratio = qt
            elif qt != ratio:
                return None
    return ratio


def _case_sv_translate(t, n, p, N):
    v = S.build(t, n, p, N)
    D = S.translate(v).symbol()
    if D != S.transpose_symbol(v):
        return CaseOutcome(False, {"reason": "translation differs from the transposed vector"})
    r = _symbol_ratio(D, fam(t, n, p, N))
    ok = r is not None and not r.is_zero()
    return CaseOutcome(ok, None if ok else {"reason": "not proportional"},
                       {"constant": r.to_text() if r is not None else None})


def _case_sv_vanishing(n_max, N_max):
    res = S.vanishing_checks(n_max, N_max)
    bad = [r.to_json() for r in res if not r.passed]
    return CaseOutcome(not bad, {"failures": bad[:5]} if bad else None, {"checked": len(res)})


def suite_singular(n_max=5, order_max=4, seed=20240) -> List[Case]:
    cases = []
    for t, n, p, N in family_params(n_max, order_max):
        params = dict(type=t, n=n, p=p, N=N)
        cases.append(Case("singular", "annihilated", params, _case_sv_annihilated, (t, n, p, N)))
        cases.append(Case("singular", "translate", params, _case_sv_translate, (t, n, p, N)))
        if t in (3, 4):
            cases.append(Case("singular", "kernel-special", params, _case_sv_kernel_special, (t, n, p, N)))
    for n, v, N, s in middle_params(n_max, order_max):
        cases.append(Case("singular", "middle", dict(n=n, variant=v, N=N, sign=s), _case_sv_middle, (n, N, s, v)))
    for n in range(2, n_max + 1):
        for p in range(0, n):
            for N in range(1, order_max + 1):
                for parity in ("odd", "even"):
                    cases.append(Case("singular", "ode", dict(n=n, p=p, N=N, parity=parity), _case_sv_ode,
                                      (n, p, N, parity)))
    kmax = min(order_max, 3)
    for t in (1, 2, 3, 4):
        for n in range(2, n_max + 1):
            for p in range(0, n + 1):
                q = p + {1: 0, 2: -1, 3: 1, 4: -2}[t]
                if not (0 <= p <= n and 0 <= q <= n - 1):
                    continue
                for N in range(0 if t < 3 else 1, kmax + 1):
                    params = dict(type=t, n=n, p=p, N=N)
                    cases.append(Case("singular", "kernel-generic", params, _case_sv_kernel,
                                      (t, n, p, N, seed + 1000 * n + 100 * p + N)))
    cases.append(Case("singular", "vanishing", dict(n_max=n_max, N_max=order_max), _case_sv_vanishing,
                      (n_max, order_max)))
    cases.append(Case("singular", "perturbed", dict(n=4, p=1, N=3), _case_sv_perturbed, (4, 1, 3),
                      expect_fail=True))
    return cases


# ---------------------------------------------------------------------------
# comparison with the n = 2 operators built from Gegenbauer polynomials


def _gegenbauer_symbol(m: int, shift) -> Dict[tuple, Scalar]:
    """(i d_x)^m C_m^{alpha}(d_y / (i d_x)) with alpha = lambda + shift, as a
    polynomial in (d_x, d_y)."""
    if m < 0:
        return {}
    alpha = LAMBDA + shift
    out = {}
    for k in range(m // 2 + 1):
        c = C.pochhammer(alpha, m - k) * mpq(2 ** (m - 2 * k), _fact(m - 2 * k) * _fact(k))
        out[(2 * k, m - 2 * k)] = c
    return out


def _fact(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _pmul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = (ea[0] + eb[0], ea[1] + eb[1])
            out[e] = out.get(e, Scalar.coerce(0)) + ca * cb
    return {e: c for e, c in out.items() if c}


def kkp_symbol(m: int) -> Symbol:
    """f dx + g dy -> iota*(D^1_m f + D^2_m g) as a symbol on 1-forms on R^2."""
    dx = {(1, 0): ONE}
    dy = {(0, 1): ONE}
    lap = {(2, 0): ONE, (0, 2): ONE}
    c1 = Scalar.coerce(m) * (2 * LAMBDA + (m - 1))
    first = _pmul(_pmul({(0, 0): c1}, dx), _gegenbauer_symbol(m - 1, mpq(1, 2)))
    c2 = 2 * LAMBDA * LAMBDA + 2 * (m - 1) * LAMBDA + m * (m - 1)
    second = _pmul(_pmul({(0, 0): c2}, dy), _gegenbauer_symbol(m - 1, mpq(1, 2)))
    if m >= 2:
        c3 = (LAMBDA - 1) * (2 * LAMBDA + 1)
        extra = _pmul(_pmul({(0, 0): c3}, lap), _gegenbauer_symbol(m - 2, mpq(3, 2)))
        for e, c in extra.items():
            second[e] = second.get(e, Scalar.coerce(0)) + c
        second = {e: c for e, c in second.items() if c}
    return Symbol(O.Signature(2, 1, 1, 0), {((), (1,)): first, ((), (2,)): second})


def kkp_constant(m: int) -> Scalar:
    half = LAMBDA + mpq(1, 2)
    if m % 2 == 0:
        N = m // 2
        return C.pochhammer(half, N) * mpq((-1) ** N * 2, _fact(N - 1))
    N = (m - 1) // 2
    return C.pochhammer(half, N) * (LAMBDA + N) * mpq((-1) ** N * 2 * (2 * N + 1), _fact(N))


def _case_kkp(m, degree):
    lhs = kkp_symbol(m)
    fam_neg = fam(2, 2, 1, m).map_scalars(lambda s: s.subs(-LAMBDA))
    rhs = fam_neg.scale(kkp_constant(m))
    ok, w = op_equal(lhs, rhs)
    if ok:
        # also on the monomial inputs f dx + g dy of degree <= ``degree``
        ok, w = op_equal(lhs, rhs, degree_bound=degree)
    return _outcome(ok, w)


def suite_kkp(m_max=5, degree=4) -> List[Case]:
    return [Case("kkp", "kkp-%s" % ("even" if m % 2 == 0 else "odd"), dict(n=2, m=m, degree=degree),
                 _case_kkp, (m, degree)) for m in range(1, m_max + 1)]


# ---------------------------------------------------------------------------
# curved first order families at H = 0


def _case_curved(t, n, p):
    if t == 1:
        rhs = O.substitute(O.curved_first_flat(n, p), LAMBDA + (p - 1)).symbol()
    else:
        rhs = O.substitute(O.curved_second_flat(n, p), LAMBDA + (p - 2)).symbol()
    return _eq(fam(t, n, p, 1), rhs)


def suite_curved(n_max=5) -> List[Case]:
    cases = []
    for n in range(2, n_max + 1):
        for p in range(0, n):
            cases.append(Case("curved", "curved-first", dict(n=n, p=p), _case_curved, (1, n, p)))
        for p in range(1, n + 1):
            cases.append(Case("curved", "curved-second", dict(n=n, p=p), _case_curved, (2, n, p)))
    return cases


# ---------------------------------------------------------------------------
# dispatch


def build_suite(name: str, n_max: int = 5, order_max: int = 4) -> List[Case]:
    if name == "coeffs":
        return suite_coefficients(n_max, order_max)
    if name == "presentation":
        return suite_presentation(n_max, order_max)
    if name == "equivariance":
        return suite_equivariance(n_max, min(order_max, 3))
    if name == "hodge":
        return suite_hodge(n_max, order_max)
    if name == "main-fact":
        return suite_main_factorizations(n_max, order_max)
    if name == "supp-fact":
        return suite_supplementary(n_max, order_max)
    if name == "gauge-q":
        return suite_gauge_and_q(max(n_max, 2), None)
    if name == "singular":
        return suite_singular(n_max, order_max)
    if name == "kkp":
        return suite_kkp(max(order_max, 5))
    if name == "curved":
        return suite_curved(n_max)
    raise ValueError("unknown suite %r" % name)


def run_suite(name: str, n_max: int = 5, order_max: int = 4, jobs: int = 1) -> SuiteReport:
    return run_cases(name, build_suite(name, n_max, order_max), jobs)


def run_all(n_max: int = 5, order_max: int = 4, jobs: int = 1, suites=SUITES) -> List[SuiteReport]:
    return [run_suite(s, n_max, order_max, jobs) for s in suites]
