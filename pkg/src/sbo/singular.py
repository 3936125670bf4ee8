"""Singular vectors of the four types and their translation into operators.

A singular vector of homogeneity N is a p'-homomorphism

    Lambda^q(R^{n-1}) -> Pol_N(xi_1..xi_n) (x) Lambda^p(R^n).

It is stored as a list of terms ``c * xi_n^a |xi'|^{2b} * word``, where a
word is a composition of the maps E_n ^ ., alpha ^ . and i_E (alpha and i_E
involve only the tangential variables xi_1..xi_{n-1}).  Optional maps act on
the source before the terms (projections, i_E, alpha) or on the values after
them (Hodge star, projections).  Values are represented as ``PolyForm`` in the
xi variables whose basis dx_k stands for E_k.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from . import coeffs as C
from .exterior import (MultiIndex, PolyForm, all_indices, alpha_wedge, dx_wedge, euler_insert,
                       hodge_sign, hodge_star, poly_mul, poly_scale)
from .operators import (Atom, OpExpr, Signature, Symbol, compose, plus, scale, sum_of, word as op_word,
                        hodge_mu)
from .rep import fourier_P
from .scalars import IMAG, LAMBDA, ONE, ZERO, GaussianRational, Scalar

Word = Tuple[str, ...]
_WORD_XI_DEGREE = {"En": 0, "alpha": 1, "iE": 1}


@dataclass(frozen=True)
class Term:
    coeff: Scalar
    a: int          # power of xi_n
    b: int          # power of |xi'|^2
    word: Word      # applied right to left

    def xi_degree(self) -> int:
        return self.a + 2 * self.b + sum(_WORD_XI_DEGREE[w] for w in self.word)


@dataclass(frozen=True)
class SingularVector:
    """A homomorphism Lambda^q(R^{n-1}) -> Pol_N (x) Lambda^p(R^n)."""

    n: int
    p: int
    q: int
    N: int
    vtype: str
    terms: Tuple[Term, ...]
    lam: Scalar = LAMBDA
    pre: Tuple[tuple, ...] = ()
    post: Tuple[tuple, ...] = ()

    def __post_init__(self):
        for t in self.terms:
            if t.xi_degree() != self.N:
                raise ValueError("term %r is not homogeneous of degree %d" % (t, self.N))

    @property
    def fixed(self) -> bool:
        return self.lam.is_constant()

    # -- evaluation

    def source_degree(self) -> int:
        """Degree of the source seen by the terms, after the pre-maps."""
        deg = self.q
        for m in self.pre:
            deg += {"iE": -1, "alpha": 1, "pr": 0}[m[0]]
        return deg

    def _apply_terms(self, w: PolyForm) -> PolyForm:
        """The terms applied to a source element (a q-form in the xi variables)."""
        n = self.n
        acc = PolyForm.zero(n, self.p if not self.post else self._pre_post_degree())
        for t in self.terms:
            img = _apply_word(t.word, w)
            if img is None or img.is_zero():
                continue
            poly = _xi_factor(n, t.a, t.b)
            acc = acc + img.mul_poly(poly).scale(t.coeff)
        return acc

    def _pre_post_degree(self) -> int:
        deg = self.p
        for m in reversed(self.post):
            if m[0] == "star":
                deg = self.n - deg
        return deg

    def image(self, J: MultiIndex) -> PolyForm:
        """v(E_J) for a basis element of Lambda^q(R^{n-1})."""
        n = self.n
        w = PolyForm.basis(n, J)
        for m in self.pre:
            w = _apply_source_map(m, w, n)
            if w is None:
                return PolyForm.zero(n, self.p)
        out = self._apply_terms(w)
        for m in self.post:
            out = _apply_value_map(m, out)
        return out

    def images(self) -> Dict[MultiIndex, PolyForm]:
        return {J: self.image(J) for J in all_indices(self.n - 1, self.q)}

    def map_coeffs(self, fn) -> "SingularVector":
        return replace(self, terms=tuple(Term(fn(t.coeff), t.a, t.b, t.word) for t in self.terms
                                         if not fn(t.coeff).is_zero()))

    def at(self, lam0) -> "SingularVector":
        """Specialize lambda to a number."""
        lam0 = GaussianRational.coerce(lam0)
        return replace(self.map_coeffs(lambda s: Scalar.coerce(s.eval_at(lam0))), lam=Scalar.coerce(lam0))

    def derivative(self) -> "SingularVector":
        return self.map_coeffs(lambda s: s.d_dlambda())

    def scaled(self, c) -> "SingularVector":
        c = Scalar.coerce(c)
        return self.map_coeffs(lambda s: s * c)

    def with_pre(self, m: tuple) -> "SingularVector":
        """Precompose with a map on the source (i_E, alpha or a projection)."""
        dq = {"iE": 1, "alpha": -1, "pr": 0}[m[0]]
        return replace(self, pre=(m,) + self.pre, q=self.q + dq)

    def with_post(self, m: tuple) -> "SingularVector":
        if m[0] == "star":
            return replace(self, post=self.post + (m,), p=self.n - self.p)
        return replace(self, post=self.post + (m,))

    def is_zero(self) -> bool:
        return all(img.is_zero() for img in self.images().values())

    def to_json(self) -> dict:
        return {
            "n": self.n, "p": self.p, "q": self.q, "homogeneity": self.N, "type": self.vtype,
            "lambda": self.lam.to_json(),
            "terms": [{"coeff": t.coeff.to_json(), "xi_n": t.a, "xi_prime_sq": t.b, "word": list(t.word)}
                      for t in self.terms],
            "pre": [list(m) for m in self.pre], "post": [list(m) for m in self.post],
            "images": {",".join(map(str, J)) or "": img.to_json() for J, img in self.images().items()},
        }

    def to_text(self) -> str:
        parts = []
        for t in self.terms:
            xi = []
            if t.b:
                xi.append("|xi'|^%d" % (2 * t.b))
            if t.a:
                xi.append("xi_n" + ("^%d" % t.a if t.a > 1 else ""))
            w = " ".join({"En": "E_n^", "alpha": "alpha^", "iE": "i_E"}[x] for x in t.word) or "id"
            parts.append("(%s) %s %s" % (t.coeff.to_text(), " ".join(xi), w))
        text = " + ".join(p.replace("  ", " ") for p in parts) or "0"
        if self.pre:
            text = "(%s) o %s" % (text, " o ".join(_map_name(m) for m in self.pre))
        if self.post:
            text = "%s o (%s)" % (" o ".join(_map_name(m) for m in reversed(self.post)), text)
        return text


def _map_name(m: tuple) -> str:
    if m[0] == "pr":
        return "pr_%s" % ("+" if m[1] > 0 else "-")
    return {"iE": "i_E", "alpha": "alpha", "star": "star_bar"}[m[0]]


def _xi_factor(n: int, a: int, b: int) -> dict:
    """xi_n^a |xi'|^{2b} as a polynomial in n variables."""
    poly = {(0,) * n: ONE}
    sq = {}
    for k in range(n - 1):
        e = [0] * n
        e[k] = 2
        sq[tuple(e)] = ONE
    for _ in range(b):
        poly = poly_mul(poly, sq)
    e = [0] * n
    e[-1] = a
    return poly_mul(poly, {tuple(e): ONE})


def _apply_word(word: Word, w: PolyForm) -> Optional[PolyForm]:
    m = w.ambient_dim
    for x in reversed(word):
        if x == "iE":
            if w.degree == 0:
                return None
            w = euler_insert(w, tangential=True)
        elif x == "alpha":
            if w.degree >= m:
                return None
            w = alpha_wedge(w, tangential=True)
        elif x == "En":
            if w.degree >= m:
                return None
            w = dx_wedge(m, w)
        else:
            raise ValueError("unknown word letter %r" % x)
    return w


def _slice_star(w: PolyForm, n: int) -> PolyForm:
    """Hodge star on R^{n-1} applied to a form in the tangential basis."""
    m = n - 1
    out: Dict[MultiIndex, dict] = {}
    for I, poly in w.terms.items():
        J = tuple(k for k in range(1, m + 1) if k not in I)
        out[J] = poly_scale(poly, hodge_sign(m, I))
    return PolyForm._raw(n, m - w.degree, out)


def _half_projection(w: PolyForm, star_w: PolyForm, degree: int, sign: int) -> PolyForm:
    mu = hodge_mu(degree)
    factor = Scalar.coerce(mpq(sign, 2)) * (ONE if mu == ONE else -IMAG)
    return w.scale(mpq(1, 2)) + star_w.scale(factor)


def _apply_source_map(m: tuple, w: PolyForm, n: int) -> Optional[PolyForm]:
    kind = m[0]
    if kind == "iE":
        return None if w.degree == 0 else euler_insert(w, tangential=True)
    if kind == "alpha":
        return None if w.degree >= n - 1 else alpha_wedge(w, tangential=True)
    if kind == "pr":
        return _half_projection(w, _slice_star(w, n), w.degree, m[1])
    raise ValueError(kind)


def _apply_value_map(m: tuple, w: PolyForm) -> PolyForm:
    kind = m[0]
    if kind == "star":
        return hodge_star(w)
    if kind == "pr":
        return _half_projection(w, hodge_star(w), w.degree, m[1])
    raise ValueError(kind)


# ---------------------------------------------------------------------------
# closed forms


def _split(N: int) -> Tuple[int, bool]:
    return N // 2, bool(N % 2)


def _sub1(s: Scalar) -> Scalar:
    return s.subs(LAMBDA - 1)


def _lam(c) -> Scalar:
    return LAMBDA + c


def build_first(n: int, p: int, M: int, parity: str) -> SingularVector:
    """First type, homogeneity 2M (parity "even") or 2M+1 ("odd"); values in
    Lambda^p(R^n), source Lambda^p(R^{n-1})."""
    if not 0 <= p <= n - 1:
        raise ValueError("first type needs 0 <= p <= n-1")
    _check_parity(M, parity)
    terms: List[Term] = []
    if parity == "odd":
        N = 2 * M + 1
        for j in range(M + 1):
            terms.append(Term(_lam(p - 2 * M - 1) * C.b(M, j, n), N - 2 * j, j, ()))
            terms.append(Term(_sub1(C.a(M, j, n)), N - 1 - 2 * j, j, ("En", "iE")))
        for j in range(M):
            terms.append(Term(_sub1(C.b(M - 1, j, n) * (2 * M)), N - 2 - 2 * j, j, ("alpha", "iE")))
    else:
        N = 2 * M
        for j in range(M + 1):
            terms.append(Term(_lam(p - 2 * M) * C.a(M, j, n), N - 2 * j, j, ()))
        for j in range(M):
            q = _sub1(C.b(M - 1, j, n) * (2 * LAMBDA + (n - 2 * M + 1)) * (-2 * M))
            terms.append(Term(q, N - 1 - 2 * j, j, ("En", "iE")))
            terms.append(Term(_sub1(C.a(M - 1, j, n) * (2 * M)), N - 2 - 2 * j, j, ("alpha", "iE")))
    return _make(n, p, p, N, "1", terms)


def build_second(n: int, p: int, M: int, parity: str) -> SingularVector:
    """Second type; values in Lambda^p(R^n), source Lambda^{p-1}(R^{n-1})."""
    if not 1 <= p <= n:
        raise ValueError("second type needs 1 <= p <= n")
    _check_parity(M, parity)
    terms: List[Term] = []
    if parity == "odd":
        N = 2 * M + 1
        for j in range(M + 1):
            terms.append(Term(-_lam(n - p - 2 * M + 2 * j - 1) * C.b(M, j, n), N - 2 * j, j, ("En",)))
            terms.append(Term(_sub1(C.a(M, j, n)), N - 1 - 2 * j, j, ("alpha",)))
        for j in range(M):
            terms.append(Term(_sub1(C.b(M - 1, j, n) * (2 * M)), N - 2 - 2 * j, j, ("En", "alpha", "iE")))
    else:
        N = 2 * M
        for j in range(M + 1):
            terms.append(Term(-_lam(n - p - 2 * M + 2 * j) * C.a(M, j, n), N - 2 * j, j, ("En",)))
        for j in range(M):
            q = _sub1(C.b(M - 1, j, n) * (2 * LAMBDA + (n - 2 * M + 1)) * (-2 * M))
            terms.append(Term(q, N - 1 - 2 * j, j, ("alpha",)))
            terms.append(Term(_sub1(C.a(M - 1, j, n) * (2 * M)), N - 2 - 2 * j, j, ("En", "alpha", "iE")))
    return _make(n, p, p - 1, N, "2", terms)


def build_third(n: int, p: int, N: int) -> SingularVector:
    """Third type; values in Lambda^p(R^n), source Lambda^{p+1}(R^{n-1}).

    Exists for p = 0 at lambda = N-1 (any N >= 1) and for N = 1 at lambda = -p.
    """
    if N == 1 and 0 <= p <= n - 2:
        return _make(n, p, p + 1, 1, "3", [Term(ONE, 0, 0, ("iE",))], lam=Scalar.coerce(-p))
    if p != 0 or N < 1 or n < 2:
        raise ValueError("third type exists for p = 0 or N = 1 only")
    M, odd = _split(N)
    terms = []
    if odd:
        for j in range(M + 1):
            terms.append(Term(Scalar.coerce(C.a(M, j, n).eval_at(2 * M)), 2 * M - 2 * j, j, ("iE",)))
    else:
        for j in range(M):
            terms.append(Term(Scalar.coerce(C.b(M - 1, j, n).eval_at(2 * M - 1)), 2 * M - 1 - 2 * j, j, ("iE",)))
    return _make(n, 0, 1, N, "3", terms, lam=Scalar.coerce(N - 1))


def build_fourth(n: int, p: int, N: int) -> SingularVector:
    """Fourth type; values in Lambda^p(R^n), source Lambda^{p-2}(R^{n-1}).

    Exists for p = n at lambda = N-1 (any N >= 1) and for N = 1 at lambda = p-n.
    """
    if N == 1 and 2 <= p <= n:
        return _make(n, p, p - 2, 1, "4", [Term(ONE, 0, 0, ("En", "alpha"))], lam=Scalar.coerce(p - n))
    if p != n or N < 1:
        raise ValueError("fourth type exists for p = n or N = 1 only")
    M, odd = _split(N)
    terms = []
    if odd:
        for j in range(M + 1):
            terms.append(Term(Scalar.coerce(C.a(M, j, n).eval_at(2 * M)), 2 * M - 2 * j, j, ("En", "alpha")))
    else:
        for j in range(M):
            terms.append(Term(Scalar.coerce(C.b(M - 1, j, n).eval_at(2 * M - 1)), 2 * M - 1 - 2 * j, j,
                              ("En", "alpha")))
    return _make(n, n, n - 2, N, "4", terms, lam=Scalar.coerce(N - 1))


def build(vtype: int, n: int, p: int, N: int) -> SingularVector:
    """Singular vector of the given type and homogeneity N."""
    if vtype in (1, 2):
        M, odd = _split(N)
        fn = build_first if vtype == 1 else build_second
        return fn(n, p, M, "odd" if odd else "even")
    if vtype == 3:
        return build_third(n, p, N)
    if vtype == 4:
        return build_fourth(n, p, N)
    raise ValueError("unknown type %r" % vtype)


def _check_parity(M: int, parity: str):
    if parity not in ("odd", "even"):
        raise ValueError("parity must be 'odd' or 'even'")
    if M < 0:
        raise ValueError("negative order")


def _make(n, p, q, N, vtype, terms, lam=LAMBDA) -> SingularVector:
    terms = tuple(t for t in terms if not t.coeff.is_zero())
    return SingularVector(n, p, q, N, vtype, terms, lam)


def middle_projections(v: SingularVector, sign: int) -> SingularVector:
    """Middle degree singular vectors built from first type vectors.

    n odd, p = (n-1)/2: restriction to Lambda^p_+-(R^{n-1}) (case 1a).
    n odd, p = (n+1)/2 after a Hodge star: use ``middle_star`` (case 1b).
    n even, p = n/2: projection of the values onto Lambda^p_+-(R^n) (case 2).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if v.vtype != "1":
        raise ValueError("projections apply to first type vectors")
    n, p = v.n, v.p
    if n % 2 == 1 and p == (n - 1) // 2:
        return replace(v.with_pre(("pr", sign)), vtype="1a%s" % ("+" if sign > 0 else "-"))
    if n % 2 == 0 and p == n // 2:
        return replace(v.with_post(("pr", sign)), vtype="2%s" % ("+" if sign > 0 else "-"))
    raise ValueError("middle degree projections need p = (n-1)/2 (n odd) or p = n/2 (n even)")


def middle_star(v: SingularVector, sign: int) -> SingularVector:
    """Case 1b: star_bar o v restricted to Lambda^{(n-1)/2}_+-(R^{n-1})."""
    w = middle_projections(v, sign)
    if not w.vtype.startswith("1a"):
        raise ValueError("case 1b needs odd n")
    return replace(w.with_post(("star",)), vtype="1b%s" % ("+" if sign > 0 else "-"))


# ---------------------------------------------------------------------------
# annihilation


@dataclass
class AnnihilationReport:
    vector: SingularVector
    failures: List[Tuple[MultiIndex, int, PolyForm]]

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {"type": self.vector.vtype, "n": self.vector.n, "p": self.vector.p,
                "homogeneity": self.vector.N, "passed": self.passed,
                "failures": [{"source": list(J), "j": j, "residual": r.to_json()}
                             for J, j, r in self.failures]}


def verify_annihilated(v: SingularVector, lam=None) -> AnnihilationReport:
    """Check P_j(lambda) v(E_J) = 0 for all j <= n-1 and all source basis elements."""
    lam = v.lam if lam is None else Scalar.coerce(lam)
    failures = []
    for J, img in v.images().items():
        if img.is_zero():
            continue
        for j in range(1, v.n):
            r = fourier_P(v.n, lam, img.degree, j, img)
            if not r.is_zero():
                failures.append((J, j, r))
    return AnnihilationReport(v, failures)


# ---------------------------------------------------------------------------
# ODE systems in t = |xi'|^2 / xi_n^2


TPoly = List[Scalar]


def _tp(p: Sequence) -> TPoly:
    return [Scalar.coerce(c) for c in p]


def _tp_add(*ps: TPoly) -> TPoly:
    size = max((len(p) for p in ps), default=0)
    out = [ZERO] * size
    for p in ps:
        for k, c in enumerate(p):
            out[k] = out[k] + c
    while out and out[-1].is_zero():
        out.pop()
    return out


def _tp_scale(p: TPoly, c) -> TPoly:
    c = Scalar.coerce(c)
    return [x * c for x in p]


def _tp_diff(p: TPoly) -> TPoly:
    return [p[k] * k for k in range(1, len(p))]


def _tp_t(p: TPoly) -> TPoly:
    return [ZERO] + list(p) if p else []


def _ode2(P: TPoly, c1, c2, c0) -> TPoly:
    """2t(t+1)P'' + c1 t P' + c2 P' + c0 P."""
    d1 = _tp_diff(P)
    d2 = _tp_diff(d1)
    t_d2 = _tp_t(d2)
    return _tp_add(_tp_scale(_tp_add(_tp_t(t_d2), t_d2), 2), _tp_scale(_tp_t(d1), c1),
                   _tp_scale(d1, c2), _tp_scale(P, c0))


def ode_residuals(n: int, p: int, N: int, parity: str, P: Sequence, Q: Sequence, R: Sequence,
                  lam=LAMBDA) -> List[TPoly]:
    """The six residuals of the first type ODE system (homogeneity 2N+1 or 2N)."""
    P, Q, R = _tp(P), _tp(Q), _tp(R)
    lam = Scalar.coerce(lam)
    dP, dQ, dR = _tp_diff(P), _tp_diff(Q), _tp_diff(R)
    if parity == "odd":
        return [
            _ode2(P, 1 - 4 * N, 2 * lam + (n - 4 * N - 1), N * (2 * N + 1)),
            _tp_add(_tp_scale(dP, 2), _tp_scale(Q, 2 * N), _tp_scale(_tp_t(dQ), -2),
                    _tp_scale(_tp_t(dR), 2), _tp_scale(R, lam + (n - p - 2 * N))),
            _tp_add(_tp_scale(dP, -2), _tp_scale(R, lam + (p - 2 * N - 1))),
            _tp_add(_tp_scale(_tp_t(dP), 2), _tp_scale(P, -(2 * N + 1)), _tp_scale(Q, lam + (p - 2 * N - 1))),
            _tp_add(_ode2(Q, 3 - 4 * N, 2 * lam + (n - 4 * N + 1), N * (2 * N - 1)),
                    _tp_scale(_tp_t(dR), 2), _tp_scale(R, -(2 * N - 1))),
            _ode2(R, 5 - 4 * N, 2 * lam + (n - 4 * N + 1), (N - 1) * (2 * N - 1)),
        ]
    if parity == "even":
        return [
            _ode2(P, 3 - 4 * N, 2 * lam + (n - 4 * N + 1), N * (2 * N - 1)),
            _tp_add(_tp_scale(dP, 2), _tp_scale(Q, 2 * N - 1), _tp_scale(_tp_t(dQ), -2),
                    _tp_scale(_tp_t(dR), 2), _tp_scale(R, lam + (n - p - 2 * N + 1))),
            _tp_add(_tp_scale(dP, -2), _tp_scale(R, lam + (p - 2 * N))),
            _tp_add(_tp_scale(_tp_t(dP), 2), _tp_scale(P, -2 * N), _tp_scale(Q, lam + (p - 2 * N))),
            _tp_add(_ode2(Q, 5 - 4 * N, 2 * lam + (n - 4 * N + 3), (N - 1) * (2 * N - 1)),
                    _tp_scale(_tp_t(dR), 2), _tp_scale(R, -(2 * N - 2))),
            _ode2(R, 7 - 4 * N, 2 * lam + (n - 4 * N + 3), (N - 1) * (2 * N - 3)),
        ]
    raise ValueError("parity must be 'odd' or 'even'")


def first_type_pqr(n: int, p: int, N: int, parity: str) -> Tuple[TPoly, TPoly, TPoly]:
    """The coefficient polynomials P, Q, R of the first type vector."""
    if parity == "odd":
        P = [_lam(p - 2 * N - 1) * C.b(N, j, n) for j in range(N + 1)]
        Q = [_sub1(C.a(N, j, n)) for j in range(N + 1)]
        R = [_sub1(C.b(N - 1, j, n) * (2 * N)) for j in range(N)]
    else:
        P = [_lam(p - 2 * N) * C.a(N, j, n) for j in range(N + 1)]
        Q = [_sub1(C.b(N - 1, j, n) * (2 * LAMBDA + (n - 2 * N + 1)) * (-2 * N)) for j in range(N)]
        R = [_sub1(C.a(N - 1, j, n) * (2 * N)) for j in range(N)]
    return P, Q, R


# ---------------------------------------------------------------------------
# solving the ansatz


_ANSATZ = {
    0: (("",), ("En", "iE"), ("alpha", "iE")),
    -1: (("En",), ("alpha",), ("En", "alpha", "iE")),
    1: (("iE",),),
    -2: (("En", "alpha"),),
}


def ansatz_terms(n: int, p: int, q: int, N: int) -> List[Term]:
    """Homogeneous homomorphisms Lambda^q(R^{n-1}) -> Pol_N (x) Lambda^p(R^n)."""
    if q - p not in _ANSATZ:
        raise ValueError("q must be one of p-2, p-1, p, p+1")
    out = []
    for w in _ANSATZ[q - p]:
        w = tuple(x for x in w if x)
        rest = N - sum(_WORD_XI_DEGREE[x] for x in w)
        for b in range(rest // 2 + 1) if rest >= 0 else ():
            out.append(Term(ONE, rest - 2 * b, b, w))
    return out


def _flatten_images(v: SingularVector) -> Dict[tuple, GaussianRational]:
    out = {}
    for J, img in v.images().items():
        for I, poly in img.terms.items():
            for e, c in poly.items():
                out[(J, I, e)] = c
    return out


def _flatten_P(v: SingularVector, lam) -> Dict[tuple, GaussianRational]:
    out = {}
    for J, img in v.images().items():
        if img.is_zero():
            continue
        for j in range(1, v.n):
            r = fourier_P(v.n, lam, img.degree, j, img)
            for I, poly in r.terms.items():
                for e, c in poly.items():
                    out[(J, j, I, e)] = c
    return out


def _domain_matrix(columns: List[Dict[tuple, Scalar]]):
    from sympy.polys.domains import QQ, QQ_I
    from sympy.polys.matrices import DomainMatrix

    keys = sorted({k for col in columns for k in col}, key=repr)
    complex_entries = any(not c.is_real() for col in columns for c in col.values())
    dom = QQ_I if complex_entries else QQ
    rows = []
    for k in keys:
        row = []
        for col in columns:
            c = col.get(k)
            g = GaussianRational(0) if c is None else c.coeff(0)
            row.append(QQ_I(g.re, g.im) if complex_entries else QQ(g.re))
        rows.append(row)
    if not rows:
        rows = [[dom.zero] * len(columns)]
    return DomainMatrix(rows, (len(rows), len(columns)), dom), dom


def _to_gauss(x, dom) -> GaussianRational:
    if hasattr(x, "x"):
        return GaussianRational(x.x, x.y)
    return GaussianRational(x, 0)


def solve_ansatz(n: int, p: int, q: int, N: int, lam0) -> List[SingularVector]:
    """Basis of the singular vectors of homogeneity N at lambda = lam0 inside
    the span of the ansatz homomorphisms (exact linear algebra)."""
    lam0 = Scalar.coerce(GaussianRational.coerce(lam0))
    candidates = [SingularVector(n, p, q, N, "ansatz", (t,), lam0) for t in ansatz_terms(n, p, q, N)]
    candidates = [c for c in candidates if not c.is_zero()]
    if not candidates:
        return []
    A, dom = _domain_matrix([{k: Scalar.coerce(c) for k, c in _flatten_images(c).items()} for c in candidates])
    _, pivots = A.rref()
    basis = [candidates[i] for i in pivots]
    B, dom = _domain_matrix([{k: Scalar.coerce(c) for k, c in _flatten_P(c, lam0).items()} for c in basis])
    null = B.nullspace()
    out = []
    for r in range(null.shape[0]):
        row = [_to_gauss(null[r, k].element, dom) for k in range(null.shape[1])]
        terms = tuple(Term(Scalar.coerce(c), t.terms[0].a, t.terms[0].b, t.terms[0].word)
                      for c, t in zip(row, basis) if c)
        out.append(SingularVector(n, p, q, N, "solved", terms, lam0))
    return out


def proportional(u: SingularVector, v: SingularVector):
    """Return c with u = c v (as maps), or None."""
    fu, fv = _flatten_images(u), _flatten_images(v)
    if set(fu) != set(fv):
        return None
    if not fu:
        return GaussianRational(1)
    ratio = None
    for k, c in fu.items():
        d = fv[k]
        cu, cv = c.coeff(0) if isinstance(c, Scalar) else c, d.coeff(0) if isinstance(d, Scalar) else d
        if not (c.is_constant() and d.is_constant()):
            return None
        r = cu / cv
        if ratio is None:
            ratio = r
        elif r != ratio:
            return None
    return ratio


# ---------------------------------------------------------------------------
# translation into operators

_LETTER_OP = {"iE": ("d", IMAG), "alpha": ("delta", -IMAG), "En": ("i_n", ONE)}


def translate(v: SingularVector) -> OpExpr:
    """The differential operator Omega^p(R^n) -> Omega^q(R^{n-1}) dual to v.

    Uses xi_j -> i d_j, E_n ^ -> i_n, i_E -> i d and alpha ^ -> -i delta; the
    order of compositions is reversed.  The powers of i are kept, so the
    result is the exact dual; family operators agree with it up to a constant.
    """
    n = v.n
    deg_p = v._pre_post_degree()
    terms = []
    for t in v.terms:
        c = t.coeff * (IMAG ** t.a)
        slice_part = []
        ambient_part = []
        for x in reversed(t.word):
            name, factor = _LETTER_OP[x]
            c = c * factor
            (ambient_part if x == "En" else slice_part).append(name)
        text = " ".join(["Delta"] * t.b + slice_part + ["iota"] + ambient_part + ["dn"] * t.a)
        terms.append(scale(c, op_word(n, deg_p, text)))
    op = sum_of(terms, Signature(n, deg_p, n - 1, v.source_degree()))
    # value-side maps become maps on the source of the operator (transposed)
    for m in v.post:
        op = compose(op, _transposed_value_map(m, n, op.sig.src_deg, v))
    # source-side maps become maps on the target of the operator (transposed)
    for m in reversed(v.pre):
        op = compose(_transposed_source_map(m, n, op.sig.tgt_deg), op)
    return op


def _transposed_value_map(m: tuple, n: int, deg: int, v: SingularVector) -> OpExpr:
    """Operator on the ambient source transposed to a value-side map."""
    if m[0] == "star":
        # the vector maps Lambda^k -> Lambda^{n-k}; the operator needs
        # Omega^{n-k} -> Omega^k, i.e. (-1)^{k(n-k)} star_bar
        k = deg
        return scale((-1) ** (k * (n - k)), Atom("hodge_bar", n, n - k))
    if m[0] == "pr":
        k = deg
        mu = hodge_mu(k)
        sgn = m[1] * (-1) ** (k * (n - k))
        half = Scalar.coerce(mpq(1, 2))
        star = scale(half * sgn * (ONE if mu == ONE else -IMAG), Atom("hodge_bar", n, k))
        return plus(scale(half, Atom("id", n, k)), star)
    raise ValueError(m)


def _transposed_source_map(m: tuple, n: int, deg: int) -> OpExpr:
    """Operator on the slice target transposed to a source-side map."""
    m_dim = n - 1
    if m[0] == "pr":
        k = deg
        mu = hodge_mu(k)
        sgn = m[1] * (-1) ** (k * (m_dim - k))
        half = Scalar.coerce(mpq(1, 2))
        star = scale(half * sgn * (ONE if mu == ONE else -IMAG), Atom("hodge_slice", m_dim, k))
        return plus(scale(half, Atom("id", m_dim, k)), star)
    if m[0] == "iE":
        return scale(IMAG, Atom("d", m_dim, deg))
    if m[0] == "alpha":
        return scale(-IMAG, Atom("delta", m_dim, deg))
    raise ValueError(m)


def transpose_symbol(v: SingularVector) -> Symbol:
    """Operator symbol obtained by transposing the matrix of v and replacing
    xi by i d/dx; an independent route to ``translate``."""
    n = v.n
    imgs = v.images()
    deg_p = next((img.degree for img in imgs.values()), v.p)
    entries = {}
    for J, img in imgs.items():
        for I, poly in img.terms.items():
            entries[(J, I)] = {e: c * (IMAG ** sum(e)) for e, c in poly.items()}
    return Symbol(Signature(n, deg_p, n - 1, v.q), entries)


# ---------------------------------------------------------------------------
# vanishing relations


@dataclass
class VanishingResult:
    name: str
    n: int
    p: int
    N: int
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "n": self.n, "p": self.p, "N": self.N, "passed": self.passed}


def vanishing_checks(n_max: int = 5, N_max: int = 4) -> List[VanishingResult]:
    out = []
    for n in range(2, n_max + 1):
        for N in range(1, N_max + 1):
            for p in range(0, n - 1):
                # v_N^{(p->p)}(N-p) o i_E = 0
                v = build(1, n, p, N).at(N - p).with_pre(("iE",))
                out.append(VanishingResult("first_iE", n, p, N, v.is_zero()))
            for p in range(2, n + 1):
                # v_N^{(p-1->p)}(N-n+p) o alpha = 0
                v = build(2, n, p, N).at(N - n + p).with_pre(("alpha",))
                out.append(VanishingResult("second_alpha", n, p, N, v.is_zero()))
            # type 3 from the derivative of the first type family
            lhs = build_third(n, 0, N)
            rhs = build(1, n, 0, N - 1).derivative().at(N - 1).with_pre(("iE",))
            out.append(VanishingResult("third_derivative", n, 0, N, _same_images(lhs, rhs)))
            lhs = build_fourth(n, n, N)
            rhs = build(2, n, n, N - 1).derivative().at(N - 1).with_pre(("alpha",)).scaled(-1)
            out.append(VanishingResult("fourth_derivative", n, n, N, _same_images(lhs, rhs)))
    return out


def _same_images(u: SingularVector, v: SingularVector) -> bool:
    iu, iv = u.images(), v.images()
    if set(iu) != set(iv):
        return False
    return all((iu[J] - iv[J]).is_zero() for J in iu)
