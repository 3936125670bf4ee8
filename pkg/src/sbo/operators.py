"""Operator expressions, their evaluation, and the operator families.

Every operator in this package is a constant-coefficient differential
operator, possibly followed by restriction to the hyperplane x_n = 0.  An
``OpExpr`` therefore compiles to a *symbol*: a matrix indexed by (target
multi-index, source multi-index) whose entries are polynomials in the
derivatives d/dx_1..d/dx_m of the source space.  Composition multiplies
symbols, and two expressions are equal as operators exactly when their
symbols agree.

Slice-side atoms (d, delta, Delta, star) act on forms on R^{n-1}; atoms to the
right of the pullback act on R^n.  Since tangential constant-coefficient
operators commute with restriction, a slice atom after a pullback is
multiplied into the ambient symbol with a zero exponent for d/dx_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from gmpy2 import mpq

from . import coeffs as C
from .exterior import (MultiIndex, Poly, PolyForm, all_indices, complement, hodge_sign,
                       insert_sign, poly_add_into, poly_mul, poly_scale, remove_sign)
from .scalars import IMAG, LAMBDA, ONE, ZERO, GaussianRational, Scalar, rational


@dataclass(frozen=True)
class Signature:
    src_dim: int
    src_deg: int
    tgt_dim: int
    tgt_deg: int

    def __str__(self):
        return "(R^%d, %d) -> (R^%d, %d)" % (self.src_dim, self.src_deg, self.tgt_dim, self.tgt_deg)


class SignatureError(ValueError):
    pass


# ---------------------------------------------------------------------------
# symbols


class Symbol:
    """Symbol matrix of a constant-coefficient operator.

    ``entries[(J, I)]`` is a polynomial in the source derivatives; when
    ``restrict`` is set the result is restricted to x_m = 0 afterwards.
    """

    __slots__ = ("sig", "entries", "_cols", "_table")

    def __init__(self, sig: Signature, entries: Dict[Tuple[MultiIndex, MultiIndex], Poly]):
        self.sig = sig
        self.entries = {k: v for k, v in entries.items() if v}
        self._cols = None
        self._table = None

    @property
    def restrict(self) -> bool:
        return self.sig.tgt_dim < self.sig.src_dim

    def columns(self) -> Dict[MultiIndex, List[Tuple[MultiIndex, Poly]]]:
        if self._cols is None:
            cols: Dict[MultiIndex, List] = {}
            for (J, I), poly in self.entries.items():
                cols.setdefault(I, []).append((J, poly))
            self._cols = cols
        return self._cols

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return isinstance(other, Symbol) and self.sig == other.sig and self.entries == other.entries

    def __add__(self, other: "Symbol") -> "Symbol":
        if self.sig != other.sig:
            raise SignatureError("sum of operators with signatures %s and %s" % (self.sig, other.sig))
        out = {k: dict(v) for k, v in self.entries.items()}
        for k, v in other.entries.items():
            if k in out:
                poly_add_into(out[k], v)
            else:
                out[k] = dict(v)
        return Symbol(self.sig, out)

    def scale(self, c) -> "Symbol":
        c = Scalar.coerce(c)
        return Symbol(self.sig, {k: poly_scale(v, c) for k, v in self.entries.items()})

    def __sub__(self, other: "Symbol") -> "Symbol":
        return self + other.scale(-ONE)

    def map_scalars(self, fn) -> "Symbol":
        out = {}
        for k, v in self.entries.items():
            w = {}
            for e, c in v.items():
                c2 = fn(c)
                if c2:
                    w[e] = c2
            out[k] = w
        return Symbol(self.sig, out)

    def compose(self, right: "Symbol") -> "Symbol":
        """self o right."""
        if right.sig.tgt_dim != self.sig.src_dim or right.sig.tgt_deg != self.sig.src_deg:
            raise SignatureError("cannot compose %s after %s" % (self.sig, right.sig))
        if self.restrict and right.restrict:
            raise SignatureError("two restrictions in one composition")
        pad = right.restrict
        left_rows: Dict[MultiIndex, List] = {}
        for (J, K), poly in self.entries.items():
            if pad:
                poly = {e + (0,): c for e, c in poly.items()}
            left_rows.setdefault(K, []).append((J, poly))
        out: Dict[Tuple[MultiIndex, MultiIndex], Poly] = {}
        for (K, I), rpoly in right.entries.items():
            for J, lpoly in left_rows.get(K, ()):
                prod = poly_mul(lpoly, rpoly)
                key = (J, I)
                if key in out:
                    poly_add_into(out[key], prod)
                else:
                    out[key] = prod
        sig = Signature(right.sig.src_dim, right.sig.src_deg, self.sig.tgt_dim, self.sig.tgt_deg)
        return Symbol(sig, out)

    def _apply_table(self):
        """Entries grouped by source index and, for restricting symbols, by
        the exponent of d/dx_m (only that exponent survives restriction)."""
        if self._table is None:
            table: Dict[MultiIndex, Dict] = {}
            for (J, I), poly in self.entries.items():
                bucket = table.setdefault(I, {})
                for beta, c in poly.items():
                    key = beta[-1] if self.restrict else None
                    bucket.setdefault(key, []).append((J, beta, c))
            self._table = table
        return self._table

    def apply(self, w: PolyForm) -> PolyForm:
        sig = self.sig
        if w.ambient_dim != sig.src_dim or w.degree != sig.src_deg:
            raise SignatureError("form (R^%d, %d) does not match operator source %s"
                                 % (w.ambient_dim, w.degree, sig))
        restrict = self.restrict
        table = self._apply_table()
        out: Dict[MultiIndex, Poly] = {}
        for I, fpoly in w.terms.items():
            bucket = table.get(I)
            if not bucket:
                continue
            for gamma, a in fpoly.items():
                if restrict:
                    cands = bucket.get(gamma[-1], ())
                    head = gamma[:-1]
                else:
                    cands = bucket.get(None, ())
                    head = gamma
                for J, beta, c in cands:
                    factor = 1
                    new = []
                    for g, b in zip(head, beta):
                        if g < b:
                            factor = 0
                            break
                        for t in range(b):
                            factor *= g - t
                        new.append(g - b)
                    if not factor:
                        continue
                    if restrict:
                        for t in range(gamma[-1]):
                            factor *= t + 1
                    key = tuple(new)
                    val = (a * c) * factor
                    acc = out.get(J)
                    if acc is None:
                        out[J] = {key: val}
                    else:
                        old = acc.get(key)
                        if old is None:
                            acc[key] = val
                        else:
                            s = old + val
                            if s:
                                acc[key] = s
                            else:
                                del acc[key]
        return PolyForm._raw(sig.tgt_dim, sig.tgt_deg, out)

    def difference_witness(self, other: "Symbol"):
        """A monomial form on which self and other differ, or None."""
        diff = self - other
        if diff.is_zero():
            return None
        best = None
        for (J, I), poly in diff.entries.items():
            for e in poly:
                key = (sum(e), e, I)
                if best is None or key < best:
                    best = key
        _, e, I = best
        return PolyForm.monomial(self.sig.src_dim, e, I)


def _zero_symbol(sig: Signature) -> Symbol:
    return Symbol(sig, {})


def _var_exps(m: int, k: int) -> Tuple[int, ...]:
    e = [0] * m
    e[k - 1] = 1
    return tuple(e)


def _sq_exps(m: int, k: int) -> Tuple[int, ...]:
    e = [0] * m
    e[k - 1] = 2
    return tuple(e)


_NEG_ONE = -ONE


def _d_entries(m: int, p: int, axes) -> Dict:
    out: Dict = {}
    for I in all_indices(m, p):
        for k in axes:
            sign, J = insert_sign(k, I)
            if sign:
                out.setdefault((J, I), {})[_var_exps(m, k)] = ONE if sign > 0 else _NEG_ONE
    return out


def _delta_entries(m: int, p: int, axes) -> Dict:
    out: Dict = {}
    axes = set(axes)
    for I in all_indices(m, p):
        for k in I:
            if k not in axes:
                continue
            sign, J = remove_sign(k, I)
            out.setdefault((J, I), {})[_var_exps(m, k)] = _NEG_ONE if sign > 0 else ONE
    return out


def _laplace_entries(m: int, p: int, axes) -> Dict:
    out: Dict = {}
    for I in all_indices(m, p):
        poly = {_sq_exps(m, k): _NEG_ONE for k in axes}
        if poly:
            out[(I, I)] = poly
    return out


def _const(m: int, c) -> Poly:
    return {(0,) * m: Scalar.coerce(c)}


# kind -> (side, target rule)
ATOM_KINDS = {
    "id": ("any",),
    "d": ("slice",),
    "delta": ("slice",),
    "Delta": ("slice",),
    "hodge_slice": ("slice",),
    "dbar": ("ambient",),
    "deltabar": ("ambient",),
    "Delta_bar": ("ambient",),
    "hodge_bar": ("ambient",),
    "pullback": ("ambient",),
    "insert_normal": ("ambient",),
    "dn": ("ambient",),
    "interior_n": ("ambient",),
    "tangential_d": ("ambient",),
    "tangential_delta": ("ambient",),
    "tangential_Delta": ("ambient",),
}


def atom_signature(kind: str, m: int, p: int) -> Signature:
    if kind not in ATOM_KINDS:
        raise ValueError("unknown atom %r" % kind)
    if kind in ("d", "dbar", "tangential_d"):
        return Signature(m, p, m, p + 1)
    if kind in ("delta", "deltabar", "tangential_delta", "interior_n"):
        return Signature(m, p, m, p - 1)
    if kind in ("hodge_slice", "hodge_bar"):
        return Signature(m, p, m, m - p)
    if kind == "pullback":
        return Signature(m, p, m - 1, p)
    if kind == "insert_normal":
        return Signature(m, p, m - 1, p - 1)
    return Signature(m, p, m, p)


def atom_symbol(kind: str, m: int, p: int) -> Symbol:
    sig = atom_signature(kind, m, p)
    if not (0 <= p <= m) or not (0 <= sig.tgt_deg <= sig.tgt_dim):
        return _zero_symbol(sig)
    full = range(1, m + 1)
    tang = range(1, m)
    if kind == "id":
        ent = {(I, I): _const(m, ONE) for I in all_indices(m, p)}
    elif kind in ("d", "dbar"):
        ent = _d_entries(m, p, full)
    elif kind == "tangential_d":
        ent = _d_entries(m, p, tang)
    elif kind in ("delta", "deltabar"):
        ent = _delta_entries(m, p, full)
    elif kind == "tangential_delta":
        ent = _delta_entries(m, p, tang)
    elif kind in ("Delta", "Delta_bar"):
        ent = _laplace_entries(m, p, full)
    elif kind == "tangential_Delta":
        ent = _laplace_entries(m, p, tang)
    elif kind in ("hodge_slice", "hodge_bar"):
        ent = {(complement(m, I), I): _const(m, hodge_sign(m, I)) for I in all_indices(m, p)}
    elif kind == "pullback":
        ent = {(I, I): _const(m, ONE) for I in all_indices(m, p) if not I or I[-1] < m}
    elif kind in ("insert_normal", "interior_n"):
        ent = {}
        for I in all_indices(m, p):
            if I and I[-1] == m:
                sign, J = remove_sign(m, I)
                ent[(J, I)] = _const(m, sign)
    elif kind == "dn":
        ent = {(I, I): {_var_exps(m, m): ONE} for I in all_indices(m, p)}
    else:
        raise ValueError(kind)
    return Symbol(sig, ent)


# ---------------------------------------------------------------------------
# expression nodes


class OpExpr:
    """Base class of the immutable operator AST."""

    sig: Signature

    def symbol(self) -> Symbol:
        cached = self.__dict__.get("_symbol")
        if cached is None:
            cached = self._compute_symbol()
            object.__setattr__(self, "_symbol", cached)
        return cached

    def _compute_symbol(self) -> Symbol:
        raise NotImplementedError

    def apply(self, w: PolyForm) -> PolyForm:
        return self.symbol().apply(w)

    def __call__(self, w: PolyForm) -> PolyForm:
        return self.apply(w)

    def __add__(self, other: "OpExpr") -> "OpExpr":
        return plus(self, other)

    def __sub__(self, other: "OpExpr") -> "OpExpr":
        return plus(self, scale(-ONE, other))

    def __neg__(self) -> "OpExpr":
        return scale(-ONE, self)

    def __rmul__(self, c) -> "OpExpr":
        return scale(c, self)

    def __matmul__(self, other: "OpExpr") -> "OpExpr":
        return compose(self, other)

    def __str__(self):
        from .dsl import pretty_print
        return pretty_print(self)


@dataclass(frozen=True, eq=True)
class Atom(OpExpr):
    kind: str
    dim: int
    deg: int
    sig: Signature = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "sig", atom_signature(self.kind, self.dim, self.deg))

    def _compute_symbol(self):
        return atom_symbol(self.kind, self.dim, self.deg)


@dataclass(frozen=True, eq=True)
class Zero(OpExpr):
    sig: Signature

    def _compute_symbol(self):
        return _zero_symbol(self.sig)


@dataclass(frozen=True, eq=True)
class Compose(OpExpr):
    factors: Tuple[OpExpr, ...]
    sig: Signature = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        fs = self.factors
        for left, right in zip(fs, fs[1:]):
            if (left.sig.src_dim, left.sig.src_deg) != (right.sig.tgt_dim, right.sig.tgt_deg):
                raise SignatureError("cannot compose %s after %s" % (left.sig, right.sig))
        sig = Signature(fs[-1].sig.src_dim, fs[-1].sig.src_deg, fs[0].sig.tgt_dim, fs[0].sig.tgt_deg)
        if sig.src_dim - sig.tgt_dim not in (0, 1):
            raise SignatureError("composition drops more than one dimension")
        object.__setattr__(self, "sig", sig)

    def _compute_symbol(self):
        sym = self.factors[-1].symbol()
        for f in reversed(self.factors[:-1]):
            sym = f.symbol().compose(sym)
        return sym


@dataclass(frozen=True, eq=True)
class Sum(OpExpr):
    terms: Tuple[OpExpr, ...]
    sig: Signature = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        sig = self.terms[0].sig
        for t in self.terms[1:]:
            if t.sig != sig:
                raise SignatureError("sum of operators with signatures %s and %s" % (sig, t.sig))
        object.__setattr__(self, "sig", sig)

    def _compute_symbol(self):
        out = {}
        for t in self.terms:
            for k, v in t.symbol().entries.items():
                if k in out:
                    poly_add_into(out[k], v)
                else:
                    out[k] = dict(v)
        return Symbol(self.sig, out)


@dataclass(frozen=True, eq=True)
class Scale(OpExpr):
    scalar: Scalar
    expr: OpExpr
    sig: Signature = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "sig", self.expr.sig)

    def _compute_symbol(self):
        return self.expr.symbol().scale(self.scalar)


# ---------------------------------------------------------------------------
# smart constructors


def _is_zero_node(e: OpExpr) -> bool:
    return isinstance(e, Zero)


def compose(*factors: OpExpr) -> OpExpr:
    """Composition, leftmost factor applied last.  Nested compositions are
    flattened, identities dropped and i_n followed by the pullback merged."""
    flat: List[OpExpr] = []
    for f in factors:
        if isinstance(f, Compose):
            flat.extend(f.factors)
        else:
            flat.append(f)
    if not flat:
        raise ValueError("empty composition")
    sig = Compose(tuple(flat)).sig if len(flat) > 1 else flat[0].sig
    if any(_is_zero_node(f) for f in flat):
        return Zero(sig)
    merged: List[OpExpr] = []
    for f in flat:
        if (merged and isinstance(f, Atom) and f.kind == "interior_n"
                and isinstance(merged[-1], Atom) and merged[-1].kind == "pullback"):
            merged[-1] = Atom("insert_normal", f.dim, f.deg)
        else:
            merged.append(f)
    kept = [f for f in merged if not (isinstance(f, Atom) and f.kind == "id")]
    if not kept:
        return merged[-1]
    if len(kept) == 1:
        return kept[0]
    return Compose(tuple(kept))


def plus(*terms: OpExpr) -> OpExpr:
    flat: List[OpExpr] = []
    sig = None
    for t in terms:
        sig = sig or t.sig
        if t.sig != sig:
            raise SignatureError("sum of operators with signatures %s and %s" % (sig, t.sig))
        if isinstance(t, Sum):
            flat.extend(t.terms)
        elif not isinstance(t, Zero):
            flat.append(t)
    if sig is None:
        raise ValueError("empty sum")
    if not flat:
        return Zero(sig)
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def scale(c, e: OpExpr) -> OpExpr:
    c = Scalar.coerce(c)
    if c.is_zero() or isinstance(e, Zero):
        return Zero(e.sig)
    if c == ONE:
        return e
    if isinstance(e, Scale):
        return scale(c * e.scalar, e.expr)
    return Scale(c, e)


def sum_of(terms: List[OpExpr], sig: Signature) -> OpExpr:
    return plus(*terms) if terms else Zero(sig)


# ---------------------------------------------------------------------------
# AST transformations


def map_scalars(e: OpExpr, fn) -> OpExpr:
    if isinstance(e, Scale):
        return scale(fn(e.scalar), map_scalars(e.expr, fn))
    if isinstance(e, Sum):
        return plus(*[map_scalars(t, fn) for t in e.terms])
    if isinstance(e, Compose):
        return compose(*[map_scalars(f, fn) for f in e.factors])
    return e


def specialize(e: OpExpr, lam0) -> OpExpr:
    """Evaluate every lambda-dependent coefficient at lam0."""
    lam0 = GaussianRational.coerce(lam0) if not isinstance(lam0, Scalar) else lam0
    if isinstance(lam0, Scalar):
        return map_scalars(e, lambda s: s.subs(lam0))
    return map_scalars(e, lambda s: Scalar.coerce(s.eval_at(lam0)))


def substitute(e: OpExpr, value: Scalar) -> OpExpr:
    """Replace lambda by the Scalar ``value`` (e.g. lambda - 1)."""
    return map_scalars(e, lambda s: s.subs(value))


def derivative_op(e: OpExpr) -> OpExpr:
    """d/dlambda of an operator family, by the product rule."""
    if isinstance(e, (Atom, Zero)):
        return Zero(e.sig)
    if isinstance(e, Scale):
        return plus(scale(e.scalar.d_dlambda(), e.expr), scale(e.scalar, derivative_op(e.expr)))
    if isinstance(e, Sum):
        return plus(*[derivative_op(t) for t in e.terms])
    if isinstance(e, Compose):
        terms = []
        for i, f in enumerate(e.factors):
            df = derivative_op(f)
            if isinstance(df, Zero):
                continue
            terms.append(compose(*(e.factors[:i] + (df,) + e.factors[i + 1:])))
        return sum_of(terms, e.sig)
    raise TypeError(e)


def to_json(e: OpExpr) -> dict:
    sig = e.sig
    base = {"signature": [sig.src_dim, sig.src_deg, sig.tgt_dim, sig.tgt_deg]}
    if isinstance(e, Atom):
        base.update(node="atom", kind=e.kind, dim=e.dim, deg=e.deg)
    elif isinstance(e, Zero):
        base.update(node="zero")
    elif isinstance(e, Compose):
        base.update(node="compose", factors=[to_json(f) for f in e.factors])
    elif isinstance(e, Sum):
        base.update(node="sum", terms=[to_json(t) for t in e.terms])
    elif isinstance(e, Scale):
        base.update(node="scale", scalar=e.scalar.to_json(), expr=to_json(e.expr))
    return base


def from_json(data: dict) -> OpExpr:
    node = data["node"]
    if node == "atom":
        return Atom(data["kind"], data["dim"], data["deg"])
    if node == "zero":
        return Zero(Signature(*data["signature"]))
    if node == "compose":
        return Compose(tuple(from_json(f) for f in data["factors"]))
    if node == "sum":
        return Sum(tuple(from_json(t) for t in data["terms"]))
    if node == "scale":
        return Scale(Scalar.from_json(data["scalar"]), from_json(data["expr"]))
    raise ValueError("unknown node %r" % node)


# ---------------------------------------------------------------------------
# words: compact construction of compositions

_WORD_ATOMS = {
    "id": "id", "d": "d", "delta": "delta", "Delta": "Delta", "star": "hodge_slice",
    "dbar": "dbar", "deltabar": "deltabar", "Delta_bar": "Delta_bar", "star_bar": "hodge_bar",
    "iota": "pullback", "iota_n": "insert_normal", "dn": "dn", "i_n": "interior_n",
    "d_t": "tangential_d", "delta_t": "tangential_delta", "Delta_t": "tangential_Delta",
}


def word(n: int, p: int, text: str, slice_source: bool = False) -> OpExpr:
    """Composition written left to right, e.g. ``"Delta^2 d iota_n dn^3"``.

    The source is p-forms on R^n (or on R^{n-1} if ``slice_source``).
    Degrees are inferred from right to left.
    """
    tokens = []
    for tok in text.split():
        if "^" in tok:
            name, k = tok.split("^")
            tokens.extend([name] * int(k))
        else:
            tokens.append(tok)
    dim = n - 1 if slice_source else n
    deg = p
    atoms: List[OpExpr] = []
    for tok in reversed(tokens):
        kind = _WORD_ATOMS[tok]
        a = Atom(kind, dim, deg)
        atoms.append(a)
        dim, deg = a.sig.tgt_dim, a.sig.tgt_deg
    if not atoms:
        return Atom("id", dim, deg)
    return compose(*reversed(atoms))


def _lam(c) -> Scalar:
    return LAMBDA + rational(c)


def _sub1(s: Scalar) -> Scalar:
    return s.subs(LAMBDA - 1)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


# ---------------------------------------------------------------------------
# family specifications


FAMILY_TYPES = (1, 2, 3, 4)


@dataclass(frozen=True)
class FamilySpec:
    family_type: int
    n: int
    p: int
    order: int
    presentation: str = "normal"

    def __post_init__(self):
        validate_family(self.family_type, self.n, self.p, self.order)
        if self.presentation not in ("normal", "geometric"):
            raise ValueError("presentation must be 'normal' or 'geometric'")

    def build(self) -> OpExpr:
        return family(self.family_type, self.n, self.p, self.order, self.presentation)

    def target_degree(self) -> int:
        return self.p + {1: 0, 2: -1, 3: 1, 4: -2}[self.family_type]


def validate_family(ftype: int, n: int, p: int, N: int):
    if n < 2:
        raise ValueError("the ambient dimension must be at least 2")
    if N < 0:
        raise ValueError("negative order")
    if ftype == 1:
        if not 0 <= p <= n - 1:
            raise ValueError("type 1 needs 0 <= p <= n-1")
    elif ftype == 2:
        if not 1 <= p <= n:
            raise ValueError("type 2 needs 1 <= p <= n")
    elif ftype == 3:
        if N < 1 or not ((p == 0) or (N == 1 and 0 <= p <= n - 2)):
            raise ValueError("type 3 exists for p = 0 (any N >= 1) or N = 1 (0 <= p <= n-2)")
    elif ftype == 4:
        if N < 1 or not ((p == n) or (N == 1 and 2 <= p <= n)):
            raise ValueError("type 4 exists for p = n (any N >= 1) or N = 1 (2 <= p <= n)")
    else:
        raise ValueError("unknown family type %r" % ftype)


def fixed_lambda(ftype: int, n: int, p: int, N: int) -> Optional[Scalar]:
    """The spectral parameter at which a type 3 or type 4 operator is defined."""
    validate_family(ftype, n, p, N)
    if ftype == 3:
        return Scalar.coerce(N - 1 if p == 0 else -p)
    if ftype == 4:
        return Scalar.coerce(N - 1 if p == n else p - n)
    return None


def family(ftype: int, n: int, p: int, N: int, presentation: str = "normal") -> OpExpr:
    builders = {1: family_first, 2: family_second, 3: family_third, 4: family_fourth}
    if ftype not in builders:
        raise ValueError("unknown family type %r" % ftype)
    return builders[ftype](n, p, N, presentation)


# -- first type


def family_first(n: int, p: int, N: int, presentation: str = "normal") -> OpExpr:
    """D_N^{(p->p)}(lambda): p-forms on R^n -> p-forms on R^{n-1}."""
    validate_family(1, n, p, N)
    if presentation == "geometric" and N > 0:
        return _first_geometric(n, p, N)
    if N == 0:
        return scale(_lam(p), word(n, p, "iota"))
    terms: List[OpExpr] = []
    if N % 2 == 0:
        M = N // 2
        for j in range(M + 1):
            c = _lam(p - 2 * M) * C.a(M, j, n) * _sign(M - j)
            terms.append(scale(c, word(n, p, "Delta^%d iota dn^%d" % (j, 2 * M - 2 * j))))
        for j in range(M):
            q = _sub1(C.b(M - 1, j, n) * (2 * LAMBDA + (n - 2 * M + 1)) * (-2 * M))
            terms.append(scale(q * _sign(M - j),
                               word(n, p, "Delta^%d d iota_n dn^%d" % (j, 2 * M - 2 * j - 1))))
        for j in range(M):
            r = _sub1(C.a(M - 1, j, n) * (2 * M))
            terms.append(scale(r * _sign(M - j - 1),
                               word(n, p, "Delta^%d d delta iota dn^%d" % (j, 2 * M - 2 * j - 2))))
    else:
        M = (N - 1) // 2
        for j in range(M + 1):
            c = _lam(p - 2 * M - 1) * C.b(M, j, n) * _sign(M - j)
            terms.append(scale(c, word(n, p, "Delta^%d iota dn^%d" % (j, 2 * M + 1 - 2 * j))))
        for j in range(M + 1):
            q = _sub1(C.a(M, j, n))
            terms.append(scale(q * _sign(M - j),
                               word(n, p, "Delta^%d d iota_n dn^%d" % (j, 2 * M - 2 * j))))
        for j in range(M):
            r = _sub1(C.b(M - 1, j, n) * (2 * M))
            terms.append(scale(r * _sign(M - j - 1),
                               word(n, p, "Delta^%d d delta iota dn^%d" % (j, 2 * M - 1 - 2 * j))))
    return plus(*terms)


def _pw(name: str, k: int) -> str:
    """``(a b)^k`` written out as a word fragment."""
    return " ".join([name] * k)


def _first_geometric(n: int, p: int, N: int) -> OpExpr:
    terms: List[OpExpr] = []
    if N % 2 == 0:
        M = N // 2
        for i in range(M + 1):
            al = C.alpha(M, i, n)
            terms.append(scale(_lam(p) * al, word(n, p, "%s iota %s" % (_pw("d delta", M - i), _pw("dbar deltabar", i)))))
        for i in range(1, M):
            al = C.alpha(M, i, n)
            terms.append(scale(_lam(p - 2 * i) * al, word(n, p, "%s iota %s" % (_pw("d delta", M - i), _pw("deltabar dbar", i)))))
        for i in range(M + 1):
            al = C.alpha(M, i, n)
            terms.append(scale(_lam(p - 2 * M) * al, word(n, p, "%s iota %s" % (_pw("delta d", M - i), _pw("deltabar dbar", i)))))
    else:
        M = (N - 1) // 2
        for i in range(1, M + 1):
            terms.append(scale(C.gamma(M, i, p, n),
                               word(n, p, "%s d iota_n %s" % (_pw("d delta", M - i), _pw("deltabar dbar", i)))))
        for i in range(M + 1):
            be = C.beta(M, i, n)
            terms.append(scale(_lam(p) * be, word(n, p, "%s d iota_n %s" % (_pw("d delta", M - i), _pw("dbar deltabar", i)))))
        for i in range(M + 1):
            be = C.beta(M, i, n)
            terms.append(scale(_lam(p - 2 * M - 1) * be,
                               word(n, p, "%s iota_n dbar %s" % (_pw("delta d", M - i), _pw("deltabar dbar", i)))))
    return plus(*terms)


# -- second type


def family_second(n: int, p: int, N: int, presentation: str = "normal") -> OpExpr:
    """D_N^{(p->p-1)}(lambda): p-forms on R^n -> (p-1)-forms on R^{n-1}."""
    validate_family(2, n, p, N)
    if presentation == "geometric" and N > 0:
        return _second_geometric(n, p, N)
    if N == 0:
        return scale(-_lam(n - p), word(n, p, "iota_n"))
    terms: List[OpExpr] = []
    if N % 2 == 0:
        M = N // 2
        for j in range(M + 1):
            c = -_lam(n - p - 2 * M + 2 * j) * C.a(M, j, n) * _sign(M - j)
            terms.append(scale(c, word(n, p, "Delta^%d iota_n dn^%d" % (j, 2 * M - 2 * j))))
        for j in range(M):
            q = _sub1(C.b(M - 1, j, n) * (2 * LAMBDA + (n - 2 * M + 1)) * (-2 * M))
            terms.append(scale(q * _sign(M - j - 1),
                               word(n, p, "Delta^%d delta iota dn^%d" % (j, 2 * M - 1 - 2 * j))))
        for j in range(M):
            r = _sub1(C.a(M - 1, j, n) * (2 * M))
            terms.append(scale(r * _sign(M - j - 1),
                               word(n, p, "Delta^%d d delta iota_n dn^%d" % (j, 2 * M - 2 - 2 * j))))
    else:
        M = (N - 1) // 2
        for j in range(M + 1):
            c = -_lam(n - p - 2 * M + 2 * j - 1) * C.b(M, j, n) * _sign(M - j)
            terms.append(scale(c, word(n, p, "Delta^%d iota_n dn^%d" % (j, 2 * M + 1 - 2 * j))))
        for j in range(M + 1):
            q = _sub1(C.a(M, j, n))
            terms.append(scale(q * _sign(M - j - 1),
                               word(n, p, "Delta^%d delta iota dn^%d" % (j, 2 * M - 2 * j))))
        for j in range(M):
            r = _sub1(C.b(M - 1, j, n) * (2 * M))
            terms.append(scale(r * _sign(M - j - 1),
                               word(n, p, "Delta^%d d delta iota_n dn^%d" % (j, 2 * M - 1 - 2 * j))))
    return plus(*terms)


def _second_geometric(n: int, p: int, N: int) -> OpExpr:
    terms: List[OpExpr] = []
    if N % 2 == 0:
        M = N // 2
        for i in range(M + 1):
            al = C.alpha(M, i, n)
            terms.append(scale(-_lam(n - p - 2 * M) * al,
                               word(n, p, "%s iota_n %s" % (_pw("d delta", M - i), _pw("dbar deltabar", i)))))
        for i in range(1, M):
            al = C.alpha(M, i, n)
            terms.append(scale(-_lam(n - p - 2 * i) * al,
                               word(n, p, "%s iota_n %s" % (_pw("delta d", M - i), _pw("dbar deltabar", i)))))
        for i in range(M + 1):
            al = C.alpha(M, i, n)
            terms.append(scale(-_lam(n - p) * al,
                               word(n, p, "%s iota_n %s" % (_pw("delta d", M - i), _pw("deltabar dbar", i)))))
    else:
        M = (N - 1) // 2
        for i in range(1, M + 1):
            terms.append(scale(-C.gamma(M, i, n - p, n),
                               word(n, p, "%s delta iota %s" % (_pw("delta d", M - i), _pw("dbar deltabar", i)))))
        for i in range(M + 1):
            be = C.beta(M, i, n)
            terms.append(scale(_lam(n - p - 2 * M - 1) * be,
                               word(n, p, "%s iota deltabar %s" % (_pw("d delta", M - i), _pw("dbar deltabar", i)))))
        for i in range(M + 1):
            be = C.beta(M, i, n)
            terms.append(scale(-_lam(n - p) * be,
                               word(n, p, "%s delta iota %s" % (_pw("delta d", M - i), _pw("deltabar dbar", i)))))
    return plus(*terms)


# -- third and fourth type


def family_third(n: int, p: int, N: int, presentation: str = "normal") -> OpExpr:
    """D_N^{(0->1)} at lambda = N-1, and D_1^{(p->p+1)} = d iota at lambda = -p."""
    validate_family(3, n, p, N)
    if p != 0 or N == 1:
        return word(n, p, "d iota")
    if presentation == "geometric":
        terms = []
        if N % 2 == 0:
            M = N // 2
            for i in range(M):
                c = C.beta(M - 1, i, n).eval_at(2 * M - 1)
                terms.append(scale(c, word(n, p, "%s d iota_n dbar %s" % (_pw("d delta", M - i - 1), _pw("deltabar dbar", i)))))
        else:
            M = (N - 1) // 2
            for i in range(M + 1):
                c = C.alpha(M, i, n).eval_at(2 * M)
                terms.append(scale(c, word(n, p, "%s d iota %s" % (_pw("d delta", M - i), _pw("deltabar dbar", i)))))
        return plus(*terms)
    terms = []
    if N % 2 == 0:
        M = N // 2
        for j in range(M):
            c = C.b(M - 1, j, n).eval_at(2 * M - 1) * _sign(M - j - 1)
            terms.append(scale(c, word(n, p, "d %s iota dn^%d" % (_pw("delta d", j), 2 * M - 2 * j - 1))))
    else:
        M = (N - 1) // 2
        for j in range(M + 1):
            c = C.a(M, j, n).eval_at(2 * M) * _sign(M - j)
            terms.append(scale(c, word(n, p, "d %s iota dn^%d" % (_pw("delta d", j), 2 * M - 2 * j))))
    return plus(*terms)


def family_fourth(n: int, p: int, N: int, presentation: str = "normal") -> OpExpr:
    """D_N^{(n->n-2)} at lambda = N-1, and D_1^{(p->p-2)} = delta iota i_n at lambda = p-n."""
    validate_family(4, n, p, N)
    if p != n:
        return word(n, p, "delta iota_n")
    if presentation == "geometric":
        terms = []
        if N % 2 == 0:
            M = N // 2
            for i in range(M):
                c = C.beta(M - 1, i, n).eval_at(2 * M - 1)
                terms.append(scale(c, word(n, p, "%s delta iota deltabar %s" % (_pw("delta d", M - i - 1), _pw("dbar deltabar", i)))))
        else:
            M = (N - 1) // 2
            for i in range(M + 1):
                c = -C.alpha(M, i, n).eval_at(2 * M)
                terms.append(scale(c, word(n, p, "%s delta iota_n %s" % (_pw("delta d", M - i), _pw("dbar deltabar", i)))))
        return plus(*terms)
    terms = []
    if N % 2 == 0:
        M = N // 2
        for j in range(M):
            c = C.b(M - 1, j, n).eval_at(2 * M - 1) * _sign(M - j)
            terms.append(scale(c, word(n, p, "delta %s iota_n dn^%d" % (_pw("d delta", j), 2 * M - 2 * j - 1))))
    else:
        M = (N - 1) // 2
        for j in range(M + 1):
            c = C.a(M, j, n).eval_at(2 * M) * _sign(M - j + 1)
            terms.append(scale(c, word(n, p, "delta %s iota_n dn^%d" % (_pw("d delta", j), 2 * M - 2 * j))))
    return plus(*terms)


# -- middle degree


def hodge_mu(p: int) -> Scalar:
    """Square root of star^2 on middle-degree forms: 1 for even p, i for odd p."""
    return ONE if p % 2 == 0 else IMAG


def projection(m: int, p: int, sign: int, bar: bool) -> OpExpr:
    """pr_{+-} = (1 +- star/mu)/2 on middle-degree p-forms on R^m (m = 2p)."""
    if m != 2 * p:
        raise ValueError("projections need middle degree forms (m = 2p)")
    kind = "hodge_bar" if bar else "hodge_slice"
    mu = hodge_mu(p)
    star_over_mu = scale(ONE / mu if mu == ONE else -IMAG, Atom(kind, m, p))
    half = Scalar.coerce(mpq(1, 2))
    return plus(scale(half, Atom("id", m, p)), scale(half * sign, star_over_mu))


def middle_degree(n: int, variant: str, N: int, sign: int = 1,
                  presentation: str = "normal") -> OpExpr:
    """Middle degree families.

    variant "1a": n odd, pr_+- o D_N^{(q->q)}, q = (n-1)/2;
    variant "1b": n odd, pr_+- o D_N^{(q->q)} o star_bar on (q+1)-forms;
    variant "2":  n even, D_N^{(q->q)} o pr_bar_+- with q = n/2.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if variant in ("1a", "1b"):
        if n % 2 == 0:
            raise ValueError("variant %s needs odd n" % variant)
        q = (n - 1) // 2
        D = family_first(n, q, N, presentation)
        pr = projection(n - 1, q, sign, bar=False)
        if variant == "1a":
            return compose(pr, D)
        return compose(pr, D, Atom("hodge_bar", n, q + 1))
    if variant == "2":
        if n % 2:
            raise ValueError("variant 2 needs even n")
        q = n // 2
        return compose(family_first(n, q, N, presentation), projection(n, q, sign, bar=True))
    raise ValueError("unknown middle degree variant %r" % variant)


# -- Branson-Gover, gauge companion, Q-curvature


def branson_gover(m: int, p: int, N: int, bar: bool = False) -> OpExpr:
    """L_{2N}^{(p)} = (m/2-p+N)(delta d)^N + (m/2-p-N)(d delta)^N on R^m."""
    h = mpq(m, 2)
    dd = "deltabar dbar" if bar else "delta d"
    ddl = "dbar deltabar" if bar else "d delta"
    # word() with slice_source uses dimension n-1, so pass m+1 for slice forms
    wn, slice_source = (m, False) if bar else (m + 1, True)
    if N == 0:
        return scale(Scalar.coerce(2 * (h - p)), Atom("id", m, p))
    t1 = scale(h - p + N, word(wn, p, _pw(dd, N), slice_source))
    t2 = scale(h - p - N, word(wn, p, _pw(ddl, N), slice_source))
    return plus(t1, t2)


def branson_gover_renormalized(m: int, p: int, N: int, bar: bool = False) -> OpExpr:
    c = mpq(m, 2) - p + N
    if c == 0:
        raise ZeroDivisionError("renormalization constant vanishes")
    return scale(Scalar.coerce(1 / c), branson_gover(m, p, N, bar))


def gauge_companion(m: int, p: int) -> OpExpr:
    """G^{(p)} = delta (d delta)^{m/2-p} on p-forms on R^m (m even, 1 <= p <= m/2)."""
    if m % 2:
        raise ValueError("the gauge companion operator needs even dimension")
    k = m // 2 - p
    if k < 0 or p < 1:
        raise ValueError("degree out of the critical window")
    return word(m + 1, p, "delta " + _pw("d delta", k), slice_source=True)


def q_curvature_op(m: int, p: int) -> OpExpr:
    """Critical Q-curvature operator (d delta)^{m/2-p} on closed p-forms on R^m."""
    if m % 2:
        raise ValueError("the Q-curvature operator needs even dimension")
    k = m // 2 - p
    if k < 0:
        raise ValueError("degree out of the critical window")
    return word(m + 1, p, _pw("d delta", k), slice_source=True)


def q_poly(n: int, p: int, N: int) -> OpExpr:
    """Q-curvature polynomial of order N (N even): sum_i alpha_i (d delta)^{M-i} iota (dbar deltabar)^i."""
    if N % 2:
        raise ValueError("Q-curvature polynomials have even order")
    if not 0 <= p <= n - 1:
        raise ValueError("degree out of range")
    M = N // 2
    terms = [scale(C.alpha(M, i, n), word(n, p, "%s iota %s" % (_pw("d delta", M - i), _pw("dbar deltabar", i))))
             for i in range(M + 1)]
    return plus(*terms)


def renormalized_first(n: int, p: int, N: int, lam0) -> OpExpr:
    """D~_N^{(p->p)}(lam0) = D_N^{(p->p)}(lam0) / (lam0 + p - N), N even."""
    lam0 = GaussianRational.coerce(lam0)
    div = lam0 + (p - N)
    if div.is_zero():
        raise ZeroDivisionError("renormalization divisor vanishes")
    return scale(Scalar.coerce(div.inverse()), specialize(family_first(n, p, N), lam0))


def renormalized_second(n: int, p: int, N: int, lam0) -> OpExpr:
    """D~_N^{(p->p-1)}(lam0) = D_N^{(p->p-1)}(lam0) / (lam0 + n - p)."""
    lam0 = GaussianRational.coerce(lam0)
    div = lam0 + (n - p)
    if div.is_zero():
        raise ZeroDivisionError("renormalization divisor vanishes")
    return scale(Scalar.coerce(div.inverse()), specialize(family_second(n, p, N), lam0))


def curved_first_flat(n: int, p: int) -> OpExpr:
    """Flat (H = 0) form of the curved first order family of the first type."""
    return plus(scale(LAMBDA, word(n, p, "iota_n dbar")),
                scale(_lam(1), word(n, p, "d iota_n")))


def curved_second_flat(n: int, p: int) -> OpExpr:
    """Flat (H = 0) form of the curved first order family of the second type."""
    return plus(scale(_lam(n - 2 * p + 1), word(n, p, "iota deltabar")),
                scale(-_lam(n - 2 * p + 2), word(n, p, "delta iota")))
