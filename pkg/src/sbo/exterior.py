"""Polynomial differential forms on R^m and Euclidean exterior calculus.

A form is stored as a map from a ``MultiIndex`` (strictly increasing tuple of
axes, 1-based) to a ``Poly``.  A ``Poly`` is a plain dict from exponent tuples
of length m to nonzero ``Scalar`` coefficients.  The same machinery is used
for Fourier-side objects, where the variables are read as xi_1..xi_m.
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Dict, Iterable, Tuple

from .scalars import ONE, ZERO, Scalar

MultiIndex = Tuple[int, ...]
Exps = Tuple[int, ...]
Poly = Dict[Exps, Scalar]


# ---------------------------------------------------------------------------
# polynomials


def poly_add_into(target: Poly, src: Poly, factor=None) -> None:
    """target += factor * src, dropping zero coefficients."""
    for e, c in src.items():
        if factor is not None:
            c = c * factor
        old = target.get(e)
        if old is None:
            if c:
                target[e] = c
        else:
            s = old + c
            if s:
                target[e] = s
            else:
                del target[e]


def poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    poly_add_into(out, b)
    return out


def poly_scale(a: Poly, c) -> Poly:
    c = Scalar.coerce(c)
    if not c:
        return {}
    out = {}
    for e, v in a.items():
        w = v * c
        if w:
            out[e] = w
    return out


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = ca * cb
            old = out.get(e)
            out[e] = v if old is None else old + v
    return {e: v for e, v in out.items() if v}


def poly_diff(a: Poly, k: int) -> Poly:
    """Partial derivative in the variable with 0-based position k."""
    out: Poly = {}
    for e, c in a.items():
        ek = e[k]
        if ek:
            e2 = e[:k] + (ek - 1,) + e[k + 1:]
            out[e2] = c * ek
    return out


def poly_mul_var(a: Poly, k: int) -> Poly:
    """Multiply by the variable with 0-based position k."""
    return {e[:k] + (e[k] + 1,) + e[k + 1:]: c for e, c in a.items()}


def poly_map_scalars(a: Poly, fn) -> Poly:
    out = {}
    for e, c in a.items():
        v = fn(c)
        if v:
            out[e] = v
    return out


def poly_monomial(exps: Exps, c=ONE) -> Poly:
    c = Scalar.coerce(c)
    return {tuple(exps): c} if c else {}


def poly_const(m: int, c=ONE) -> Poly:
    return poly_monomial((0,) * m, c)


def poly_var(m: int, k: int) -> Poly:
    """The coordinate x_k (1-based) on R^m."""
    e = [0] * m
    e[k - 1] = 1
    return {tuple(e): ONE}


def poly_degree(a: Poly) -> int:
    return max((sum(e) for e in a), default=-1)


def poly_str(a: Poly, var: str = "x") -> str:
    if not a:
        return "0"
    parts = []
    for e in sorted(a, reverse=True):
        c = a[e]
        mono = "*".join(
            ("%s%d" % (var, i + 1)) + ("^%d" % k if k > 1 else "")
            for i, k in enumerate(e) if k)
        ctext = c.to_text()
        if not mono:
            parts.append("(%s)" % ctext)
        elif c == ONE:
            parts.append(mono)
        else:
            parts.append("(%s)*%s" % (ctext, mono))
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# multi-index helpers


def merge_sign(a: MultiIndex, b: MultiIndex):
    """Sign and sorted index of dx_a ^ dx_b, or (0, None) if they overlap."""
    if set(a) & set(b):
        return 0, None
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(a + b))


def insert_sign(k: int, index: MultiIndex):
    """dx_k ^ dx_index = sign * dx_result."""
    if k in index:
        return 0, None
    pos = sum(1 for x in index if x < k)
    return (-1 if pos & 1 else 1), tuple(sorted(index + (k,)))


def remove_sign(k: int, index: MultiIndex):
    """Interior product i_{e_k} dx_index = sign * dx_result."""
    if k not in index:
        return 0, None
    pos = index.index(k)
    return (-1 if pos & 1 else 1), index[:pos] + index[pos + 1:]


def complement(m: int, index: MultiIndex) -> MultiIndex:
    s = set(index)
    return tuple(k for k in range(1, m + 1) if k not in s)


def hodge_sign(m: int, index: MultiIndex) -> int:
    """Sign with dx_I ^ dx_{I^c} = sign * dx_1 ^ ... ^ dx_m."""
    sign, _ = merge_sign(index, complement(m, index))
    return sign


def all_indices(m: int, p: int, axes=None):
    if p < 0 or p > m:
        return []
    axes = range(1, m + 1) if axes is None else axes
    return [tuple(c) for c in combinations(axes, p)]


# ---------------------------------------------------------------------------
# forms


class PolyForm:
    """A p-form on R^m with polynomial coefficients over Scalar."""

    __slots__ = ("ambient_dim", "degree", "terms")

    def __init__(self, ambient_dim: int, degree: int, terms=None):
        if degree < 0 or degree > ambient_dim:
            raise ValueError("form degree %d out of range for R^%d" % (degree, ambient_dim))
        self.ambient_dim = ambient_dim
        self.degree = degree
        self.terms: Dict[MultiIndex, Poly] = {}
        if terms:
            for index, poly in terms.items():
                index = tuple(index)
                if len(index) != degree:
                    raise ValueError("index %r has wrong length for a %d-form" % (index, degree))
                if list(index) != sorted(set(index)) or (index and (index[0] < 1 or index[-1] > ambient_dim)):
                    raise ValueError("bad multi-index %r" % (index,))
                clean = {}
                for e, c in poly.items():
                    if len(e) != ambient_dim:
                        raise ValueError("exponent %r has wrong length" % (e,))
                    c = Scalar.coerce(c)
                    if c:
                        clean[tuple(e)] = c
                if clean:
                    self.terms[index] = clean

    @staticmethod
    def _raw(m: int, p: int, terms: Dict[MultiIndex, Poly]) -> "PolyForm":
        f = PolyForm.__new__(PolyForm)
        f.ambient_dim = m
        f.degree = p
        f.terms = {k: v for k, v in terms.items() if v}
        return f

    # -- constructors

    @staticmethod
    def zero(m: int, p: int) -> "PolyForm":
        return PolyForm._raw(m, p, {})

    @staticmethod
    def monomial(m: int, exps: Exps, index: MultiIndex = (), coeff=ONE) -> "PolyForm":
        index = tuple(index)
        return PolyForm(m, len(index), {index: {tuple(exps): Scalar.coerce(coeff)}})

    @staticmethod
    def function(m: int, poly: Poly) -> "PolyForm":
        return PolyForm._raw(m, 0, {(): dict(poly)})

    @staticmethod
    def basis(m: int, index: MultiIndex, coeff=ONE) -> "PolyForm":
        return PolyForm.monomial(m, (0,) * m, index, coeff)

    # -- linear structure

    def _check(self, other: "PolyForm"):
        if self.ambient_dim != other.ambient_dim or self.degree != other.degree:
            raise ValueError("form mismatch: (%d,%d) vs (%d,%d)" % (
                self.ambient_dim, self.degree, other.ambient_dim, other.degree))

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check(other)
        terms = {k: dict(v) for k, v in self.terms.items()}
        for k, v in other.terms.items():
            if k in terms:
                poly_add_into(terms[k], v)
            else:
                terms[k] = dict(v)
        return PolyForm._raw(self.ambient_dim, self.degree, terms)

    def __neg__(self) -> "PolyForm":
        return self.scale(-ONE)

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def scale(self, c) -> "PolyForm":
        c = Scalar.coerce(c)
        return PolyForm._raw(self.ambient_dim, self.degree,
                             {k: poly_scale(v, c) for k, v in self.terms.items()})

    def __rmul__(self, c) -> "PolyForm":
        return self.scale(c)

    def mul_poly(self, poly: Poly) -> "PolyForm":
        return PolyForm._raw(self.ambient_dim, self.degree,
                             {k: poly_mul(v, poly) for k, v in self.terms.items()})

    def map_scalars(self, fn) -> "PolyForm":
        return PolyForm._raw(self.ambient_dim, self.degree,
                             {k: poly_map_scalars(v, fn) for k, v in self.terms.items()})

    def eval_lambda(self, lam0) -> "PolyForm":
        return self.map_scalars(lambda c: Scalar.coerce(c.eval_at(lam0)))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.degree == other.degree
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ambient_dim, self.degree,
                     frozenset((k, frozenset(v.items())) for k, v in self.terms.items())))

    def max_poly_degree(self) -> int:
        return max((poly_degree(v) for v in self.terms.values()), default=-1)

    def is_homogeneous(self, degree: int) -> bool:
        return all(sum(e) == degree for v in self.terms.values() for e in v)

    def coefficient(self, index: MultiIndex) -> Poly:
        return dict(self.terms.get(tuple(index), {}))

    def __repr__(self):
        return "PolyForm(%d, %d, %s)" % (self.ambient_dim, self.degree, self.to_text())

    def to_text(self, var: str = "x") -> str:
        if not self.terms:
            return "0"
        chunks = []
        for index in sorted(self.terms):
            basis = "^".join("d%s%d" % (var, k) for k in index) or "1"
            chunks.append("[%s] %s" % (poly_str(self.terms[index], var), basis))
        return " + ".join(chunks)

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "degree": self.degree,
            "terms": [
                {"index": list(index),
                 "coeff": [{"exponents": list(e), "lambda_coeffs": c.to_json()}
                           for e, c in sorted(poly.items())]}
                for index, poly in sorted(self.terms.items())
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "PolyForm":
        terms: Dict[MultiIndex, Poly] = {}
        for t in data["terms"]:
            poly = terms.setdefault(tuple(t["index"]), {})
            for c in t["coeff"]:
                poly_add_into(poly, {tuple(c["exponents"]): Scalar.from_json(c["lambda_coeffs"])})
        return PolyForm(data["ambient_dim"], data["degree"], terms)


def _accumulate(out: Dict[MultiIndex, Poly], index: MultiIndex, poly: Poly, sign: int = 1):
    if not poly:
        return
    target = out.setdefault(index, {})
    if sign == 1:
        poly_add_into(target, poly)
    else:
        poly_add_into(target, poly, -ONE)


def _axes(m: int, tangential: bool):
    return range(1, m) if tangential else range(1, m + 1)


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("dimension mismatch in wedge")
    m = a.ambient_dim
    if a.degree + b.degree > m:
        raise ValueError("wedge degree %d exceeds dimension %d" % (a.degree + b.degree, m))
    out: Dict[MultiIndex, Poly] = {}
    for ia, pa in a.terms.items():
        for ib, pb in b.terms.items():
            sign, idx = merge_sign(ia, ib)
            if sign:
                _accumulate(out, idx, poly_mul(pa, pb), sign)
    return PolyForm._raw(m, a.degree + b.degree, out)


def d(w: PolyForm, tangential: bool = False) -> PolyForm:
    """Exterior derivative; ``tangential`` restricts to axes 1..m-1."""
    m = w.ambient_dim
    if w.degree == m:
        raise ValueError("d of a top-degree form leaves the exterior algebra")
    out: Dict[MultiIndex, Poly] = {}
    for index, poly in w.terms.items():
        for k in _axes(m, tangential):
            sign, idx = insert_sign(k, index)
            if sign:
                _accumulate(out, idx, poly_diff(poly, k - 1), sign)
    return PolyForm._raw(m, w.degree + 1, out)


def codifferential(w: PolyForm, tangential: bool = False) -> PolyForm:
    """delta = -sum_k i_{e_k} d/dx_k."""
    m = w.ambient_dim
    if w.degree == 0:
        raise ValueError("codifferential of a function is undefined")
    out: Dict[MultiIndex, Poly] = {}
    for index, poly in w.terms.items():
        for k in index:
            if tangential and k == m:
                continue
            sign, idx = remove_sign(k, index)
            _accumulate(out, idx, poly_diff(poly, k - 1), -sign)
    return PolyForm._raw(m, w.degree - 1, out)


delta = codifferential


def laplacian(w: PolyForm, tangential: bool = False) -> PolyForm:
    """The form Laplacian delta d + d delta = -sum_k d^2/dx_k^2."""
    m = w.ambient_dim
    out: Dict[MultiIndex, Poly] = {}
    for index, poly in w.terms.items():
        for k in _axes(m, tangential):
            _accumulate(out, index, poly_diff(poly_diff(poly, k - 1), k - 1), -1)
    return PolyForm._raw(m, w.degree, out)


def hodge_star(w: PolyForm) -> PolyForm:
    m = w.ambient_dim
    out: Dict[MultiIndex, Poly] = {}
    for index, poly in w.terms.items():
        _accumulate(out, complement(m, index), poly, hodge_sign(m, index))
    return PolyForm._raw(m, m - w.degree, out)


def interior(k: int, w: PolyForm) -> PolyForm:
    """Interior product with the coordinate vector field e_k."""
    m = w.ambient_dim
    if not 1 <= k <= m:
        raise ValueError("axis %d out of range for R^%d" % (k, m))
    if w.degree == 0:
        raise ValueError("interior product of a 0-form")
    out: Dict[MultiIndex, Poly] = {}
    for index, poly in w.terms.items():
        sign, idx = remove_sign(k, index)
        if sign:
            _accumulate(out, idx, poly, sign)
    return PolyForm._raw(m, w.degree - 1, out)


def partial(k: int, w: PolyForm) -> PolyForm:
    m = w.ambient_dim
    if not 1 <= k <= m:
        raise ValueError("axis %d out of range for R^%d" % (k, m))
    return PolyForm._raw(m, w.degree, {i: poly_diff(p, k - 1) for i, p in w.terms.items()})


def partial_n(w: PolyForm) -> PolyForm:
    return partial(w.ambient_dim, w)


def interior_n(w: PolyForm) -> PolyForm:
    return interior(w.ambient_dim, w)


def euler_insert(w: PolyForm, tangential: bool = False) -> PolyForm:
    """i_E with E = sum_k x_k e_k over the chosen axes."""
    m = w.ambient_dim
    if w.degree == 0:
        raise ValueError("interior product of a 0-form")
    out: Dict[MultiIndex, Poly] = {}
    for index, poly in w.terms.items():
        for k in index:
            if tangential and k == m:
                continue
            sign, idx = remove_sign(k, index)
            _accumulate(out, idx, poly_mul_var(poly, k - 1), sign)
    return PolyForm._raw(m, w.degree - 1, out)


def alpha_wedge(w: PolyForm, tangential: bool = False) -> PolyForm:
    """alpha ^ w with alpha = sum_k x_k dx_k over the chosen axes."""
    m = w.ambient_dim
    if w.degree >= m:
        raise ValueError("degree too high for alpha_wedge")
    out: Dict[MultiIndex, Poly] = {}
    for index, poly in w.terms.items():
        for k in _axes(m, tangential):
            sign, idx = insert_sign(k, index)
            if sign:
                _accumulate(out, idx, poly_mul_var(poly, k - 1), sign)
    return PolyForm._raw(m, w.degree + 1, out)


def dx_wedge(k: int, w: PolyForm) -> PolyForm:
    """dx_k ^ w."""
    m = w.ambient_dim
    out: Dict[MultiIndex, Poly] = {}
    for index, poly in w.terms.items():
        sign, idx = insert_sign(k, index)
        if sign:
            _accumulate(out, idx, poly, sign)
    return PolyForm._raw(m, w.degree + 1, out)


def pullback(w: PolyForm) -> PolyForm:
    """Restriction to the hyperplane x_m = 0."""
    m = w.ambient_dim
    out: Dict[MultiIndex, Poly] = {}
    for index, poly in w.terms.items():
        if index and index[-1] == m:
            continue
        q = {e[:-1]: c for e, c in poly.items() if e[-1] == 0}
        if q:
            out[index] = q
    if w.degree == m:
        raise ValueError("pullback of a top-degree form")
    return PolyForm._raw(m - 1, w.degree, out)


def embed(w: PolyForm) -> PolyForm:
    """View a form on R^{m} as a form on R^{m+1} independent of x_{m+1}."""
    return PolyForm._raw(w.ambient_dim + 1, w.degree,
                         {i: {e + (0,): c for e, c in p.items()} for i, p in w.terms.items()})


def exponent_vectors(m: int, max_degree: int, exact: bool = False):
    """All exponent vectors of length m with total degree <= max_degree."""
    out = []

    def rec(prefix, left, k):
        if k == m:
            if not exact or left == 0:
                out.append(tuple(prefix))
            return
        for e in range(left + 1):
            prefix.append(e)
            rec(prefix, left - e, k + 1)
            prefix.pop()

    rec([], max_degree, 0)
    return out


def monomial_basis(m: int, p: int, max_degree: int) -> list:
    """All forms x^gamma dx_I with |gamma| <= max_degree and |I| = p."""
    exps = exponent_vectors(m, max_degree)
    return [PolyForm.monomial(m, e, index) for index in all_indices(m, p) for e in exps]


def monomial_basis_count(m: int, p: int, max_degree: int) -> int:
    return comb(m, p) * comb(m + max_degree, m)


def constant_forms(m: int, p: int) -> list:
    return [PolyForm.basis(m, index) for index in all_indices(m, p)]


def closed_spanning_set(m: int, p: int, max_degree: int) -> list:
    """A spanning set of closed polynomial p-forms of coefficient degree <= max_degree.

    By the polynomial Poincare lemma every closed p-form with p >= 1 is d of a
    polynomial (p-1)-form, and closed 0-forms are constants.  We return d of
    the monomial (p-1)-forms of degree <= max_degree + 1 together with the
    constant p-forms.
    """
    forms = []
    if p == 0:
        return [PolyForm.monomial(m, (0,) * m)]
    for w in monomial_basis(m, p - 1, max_degree + 1):
        dw = d(w)
        if dw:
            forms.append(dw)
    forms.extend(constant_forms(m, p))
    return forms


def iter_terms(w: PolyForm) -> Iterable:
    for index, poly in w.terms.items():
        for e, c in poly.items():
            yield index, e, c
