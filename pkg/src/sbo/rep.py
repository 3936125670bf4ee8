"""Infinitesimal actions on polynomial forms and the intertwining checker.

The dual action of the conformal Lie algebra on p-forms on R^n with spectral
parameter lambda is realized on ``PolyForm``:

    E_j^+  ->  -1/2 |x|^2 d_j + x_j (E - lambda) + dx_j ^ i_E - alpha ^ i_{e_j}
    E_j^-  ->  d_j
    E      ->  E - lambda
    M_ij   ->  x_i d_j - x_j d_i + dx_i ^ i_{e_j} - dx_j ^ i_{e_i}

where E = sum x_k d_k and alpha = sum x_k dx_k.  With E_j^- -> +d_j this is
not a Lie algebra homomorphism on the nose: the map sending E_j^- to -d_j and
the other generators as above is one.  Intertwining relations are insensitive
to that sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional

from gmpy2 import mpq

from .exterior import MultiIndex, Poly, PolyForm, insert_sign, monomial_basis, poly_add_into, remove_sign
from .operators import OpExpr, Symbol
from .scalars import LAMBDA, ONE, GaussianRational, Scalar

_HALF = mpq(1, 2)


@dataclass(frozen=True)
class Generator:
    """A basis element of so(n+1,1): Eplus(j), Eminus(j), GradingE or Rotation(i,j)."""

    kind: str
    i: int = 0
    j: int = 0

    def __post_init__(self):
        if self.kind not in ("Eplus", "Eminus", "GradingE", "Rotation"):
            raise ValueError("unknown generator kind %r" % self.kind)
        if self.kind in ("Eplus", "Eminus") and self.j < 1:
            raise ValueError("generator index must be positive")
        if self.kind == "Rotation" and not 1 <= self.i < self.j:
            raise ValueError("rotation needs 1 <= i < j")

    @staticmethod
    def Eplus(j: int) -> "Generator":
        return Generator("Eplus", 0, j)

    @staticmethod
    def Eminus(j: int) -> "Generator":
        return Generator("Eminus", 0, j)

    @staticmethod
    def E() -> "Generator":
        return Generator("GradingE")

    @staticmethod
    def Rotation(i: int, j: int) -> "Generator":
        return Generator("Rotation", i, j)

    def max_index(self) -> int:
        return max(self.i, self.j)

    def __str__(self):
        if self.kind == "GradingE":
            return "E"
        if self.kind == "Rotation":
            return "M_%d%d" % (self.i, self.j)
        return "%s(%d)" % (self.kind, self.j)


def subalgebra_generators(m: int) -> List[Generator]:
    """Generators of so(m,1) inside so(m+1,1): all indices at most m-1."""
    out = [Generator.E()]
    for j in range(1, m):
        out.append(Generator.Eplus(j))
        out.append(Generator.Eminus(j))
    for i in range(1, m):
        for j in range(i + 1, m):
            out.append(Generator.Rotation(i, j))
    return out


def all_generators(n: int) -> List[Generator]:
    """Generators of so(n+1,1) acting on forms on R^n."""
    return subalgebra_generators(n + 1)


class _Acc:
    """Accumulator for a form under construction."""

    __slots__ = ("terms",)

    def __init__(self):
        self.terms: Dict[MultiIndex, Poly] = {}

    def add(self, index: MultiIndex, exps, c):
        if not c:
            return
        poly = self.terms.setdefault(index, {})
        old = poly.get(exps)
        if old is None:
            poly[exps] = c
        else:
            s = old + c
            if s:
                poly[exps] = s
            else:
                del poly[exps]


def _shift(e, k, by):
    e = list(e)
    e[k - 1] += by
    return tuple(e)


def act_dual(n: int, lam, p: int, g: Generator, w: PolyForm) -> PolyForm:
    """Action of the generator g on the p-form w on R^n with parameter lam."""
    if w.ambient_dim != n or w.degree != p:
        raise ValueError("form (R^%d, %d) does not match (R^%d, %d)" % (w.ambient_dim, w.degree, n, p))
    if g.max_index() > n:
        raise ValueError("generator %s out of range for R^%d" % (g, n))
    lam = Scalar.coerce(lam)
    acc = _Acc()
    if g.kind == "Eminus":
        j = g.j
        for I, poly in w.terms.items():
            for e, c in poly.items():
                if e[j - 1]:
                    acc.add(I, _shift(e, j, -1), c * e[j - 1])
    elif g.kind == "GradingE":
        for I, poly in w.terms.items():
            for e, c in poly.items():
                acc.add(I, e, c * (sum(e) - lam))
    elif g.kind == "Rotation":
        i, j = g.i, g.j
        for I, poly in w.terms.items():
            for e, c in poly.items():
                if e[j - 1]:
                    acc.add(I, _shift(_shift(e, j, -1), i, 1), c * e[j - 1])
                if e[i - 1]:
                    acc.add(I, _shift(_shift(e, i, -1), j, 1), -c * e[i - 1])
                # dx_i ^ i_{e_j} - dx_j ^ i_{e_i}
                for a, b, s in ((i, j, 1), (j, i, -1)):
                    s1, K = remove_sign(b, I)
                    if s1:
                        s2, J = insert_sign(a, K)
                        if s2:
                            acc.add(J, e, c * (s * s1 * s2))
    else:
        j = g.j
        for I, poly in w.terms.items():
            for e, c in poly.items():
                deg = sum(e)
                ej = e[j - 1]
                if ej:
                    base = _shift(e, j, -1)
                    half = c * (-_HALF * ej)
                    for k in range(1, n + 1):
                        acc.add(I, _shift(base, k, 2), half)
                acc.add(I, _shift(e, j, 1), c * (deg - lam))
                # dx_j ^ i_E
                for k in I:
                    s1, K = remove_sign(k, I)
                    s2, J = insert_sign(j, K)
                    if s2:
                        acc.add(J, _shift(e, k, 1), c * (s1 * s2))
                # - alpha ^ i_{e_j}
                s1, K = remove_sign(j, I)
                if s1:
                    for k in range(1, n + 1):
                        s2, J = insert_sign(k, K)
                        if s2:
                            acc.add(J, _shift(e, k, 1), c * (-s1 * s2))
    return PolyForm._raw(n, p, acc.terms)


def fourier_P(n: int, lam, p: int, j: int, v: PolyForm) -> PolyForm:
    """P_j(lam) = 1/2 xi_j Delta_xi + (lam - E_xi) d_j - sum_k d_k (E_k ^ i_j - E_j ^ i_k).

    ``v`` is a polynomial in xi_1..xi_n with values in p-vectors, stored as a
    PolyForm whose basis dx_k stands for E_k.
    """
    if v.ambient_dim != n or v.degree != p:
        raise ValueError("vector (R^%d, %d) does not match (R^%d, %d)" % (v.ambient_dim, v.degree, n, p))
    if not 1 <= j <= n:
        raise ValueError("index %d out of range" % j)
    lam = Scalar.coerce(lam)
    acc = _Acc()
    for I, poly in v.terms.items():
        for e, c in poly.items():
            # 1/2 xi_j Delta
            for k in range(1, n + 1):
                ek = e[k - 1]
                if ek >= 2:
                    acc.add(I, _shift(_shift(e, k, -2), j, 1), c * (_HALF * ek * (ek - 1)))
            ej = e[j - 1]
            if ej:
                acc.add(I, _shift(e, j, -1), c * ej * (lam - (sum(e) - 1)))
            # - sum_k d_k E_k ^ i_j
            s1, K = remove_sign(j, I)
            if s1:
                for k in range(1, n + 1):
                    if e[k - 1]:
                        s2, J = insert_sign(k, K)
                        if s2:
                            acc.add(J, _shift(e, k, -1), c * (-s1 * s2 * e[k - 1]))
            # + sum_k d_k E_j ^ i_k
            for k in I:
                if e[k - 1]:
                    s1, K = remove_sign(k, I)
                    s2, J = insert_sign(j, K)
                    if s2:
                        acc.add(J, _shift(e, k, -1), c * (s1 * s2 * e[k - 1]))
    return PolyForm._raw(n, p, acc.terms)


# ---------------------------------------------------------------------------
# intertwining


@dataclass
class IntertwiningEntry:
    case: str
    generator: Generator
    basis_form: PolyForm
    residual: PolyForm

    @property
    def residual_nonzero(self) -> bool:
        return not self.residual.is_zero()

    def to_json(self) -> dict:
        return {"case": self.case, "generator": str(self.generator),
                "basis_form": self.basis_form.to_json(),
                "residual_nonzero": self.residual_nonzero,
                "residual": self.residual.to_json()}


@dataclass
class IntertwiningReport:
    case: str
    checked: int
    failures: List[IntertwiningEntry]

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        return {"case": self.case, "checked": self.checked, "passed": self.passed,
                "failures": [f.to_json() for f in self.failures]}


def check_intertwining(D: OpExpr, n: int, p: int, q: int, N: int, lam=None,
                       target_lam=None, case: str = "", max_degree: Optional[int] = None,
                       max_failures: int = 5) -> IntertwiningReport:
    """Check D o act(lam, p) = act'(lam - N, q) o D for all so(n,1) generators.

    ``lam`` defaults to the symbolic spectral parameter; pass a number for
    operators that exist only at one value.  Every monomial basis form of
    degree at most ``N + 2`` is tested.
    """
    sig = D.sig
    if (sig.src_dim, sig.src_deg, sig.tgt_dim, sig.tgt_deg) != (n, p, n - 1, q):
        raise ValueError("operator signature %s does not match (%d, %d) -> (%d, %d)"
                         % (sig, n, p, n - 1, q))
    lam = LAMBDA if lam is None else Scalar.coerce(lam)
    target_lam = lam - N if target_lam is None else Scalar.coerce(target_lam)
    max_degree = N + 2 if max_degree is None else max_degree
    symbol: Symbol = D.symbol()
    memo: Dict = {}

    def apply_memo(w: PolyForm) -> PolyForm:
        # D is linear, so cache its value on unit monomials
        acc = _Acc()
        for I, poly in w.terms.items():
            for e, c in poly.items():
                key = (I, e)
                img = memo.get(key)
                if img is None:
                    img = symbol.apply(PolyForm._raw(n, p, {I: {e: ONE}}))
                    memo[key] = img
                for J, ipoly in img.terms.items():
                    for f, b in ipoly.items():
                        acc.add(J, f, b * c)
        return PolyForm._raw(n - 1, q, acc.terms)

    basis = monomial_basis(n, p, max_degree)
    images = [symbol.apply(w) for w in basis]
    failures: List[IntertwiningEntry] = []
    checked = 0
    for g in subalgebra_generators(n):
        for w, Dw in zip(basis, images):
            lhs = apply_memo(act_dual(n, lam, p, g, w))
            rhs = act_dual(n - 1, target_lam, q, g, Dw)
            checked += 1
            res = lhs - rhs
            if not res.is_zero():
                failures.append(IntertwiningEntry(case, g, w, res))
                if len(failures) >= max_failures:
                    return IntertwiningReport(case, checked, failures)
    return IntertwiningReport(case, checked, failures)


def commutator_on(n: int, lam, p: int, g1: Generator, g2: Generator, w: PolyForm,
                  sign1: int = 1, sign2: int = 1) -> PolyForm:
    """[s1 g1, s2 g2] applied to w, with optional signs on the generators."""
    a = act_dual(n, lam, p, g1, act_dual(n, lam, p, g2, w))
    b = act_dual(n, lam, p, g2, act_dual(n, lam, p, g1, w))
    return (a - b).scale(sign1 * sign2)
