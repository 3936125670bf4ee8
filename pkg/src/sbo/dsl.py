"""A small language for operator expressions.

    (lambda+p-1) iota dn + d iota i_n
    (d delta)^2 iota (dbar deltabar)^N

Juxtaposition is composition with the rightmost factor applied first, ``^``
repeats a factor, ``*`` multiplies by a scalar and ``+``/``-`` add.  Scalars
are polynomials in ``lambda`` with Gaussian rational coefficients (``I`` is
the imaginary unit).  The names ``n``, ``p`` and ``N`` are replaced by their
bindings when the text is parsed.

Degrees are inferred from right to left: the source is p-forms on R^n, or on
R^{n-1} if the first operator applied is a slice operator (d, delta, Delta,
star).  The grammar is written out in docs/grammar.md.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from gmpy2 import mpq

from .operators import Atom, Compose, OpExpr, Scale, Sum, Zero, compose, plus, scale
from .scalars import IMAG, LAMBDA, ONE, Scalar, rational_str

# token name -> (atom kind, side it acts on)
ATOMS = {
    "d": ("d", "slice"),
    "delta": ("delta", "slice"),
    "Delta": ("Delta", "slice"),
    "star": ("hodge_slice", "slice"),
    "dbar": ("dbar", "ambient"),
    "deltabar": ("deltabar", "ambient"),
    "Delta_bar": ("Delta_bar", "ambient"),
    "star_bar": ("hodge_bar", "ambient"),
    "iota": ("pullback", "ambient"),
    "iota_n": ("insert_normal", "ambient"),
    "i_n": ("interior_n", "ambient"),
    "dn": ("dn", "ambient"),
    "d_t": ("tangential_d", "ambient"),
    "delta_t": ("tangential_delta", "ambient"),
    "Delta_t": ("tangential_Delta", "ambient"),
    "id": ("id", "any"),
}

_KIND_NAME = {kind: name for name, (kind, _) in ATOMS.items()}
_KIND_NAME["insert_normal"] = "iota i_n"

BINDABLE = ("n", "p", "N")


class DSLError(ValueError):
    """A parse or typing error; ``pos`` is the character offset in the input."""

    def __init__(self, message: str, pos: int = 0, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__("%s at position %d" % (message, pos))

    def caret(self) -> str:
        return "%s\n%s^" % (self.text, " " * self.pos)


# ---------------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op" or "end"
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:]
            if not rest.strip():
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise DSLError("unexpected character %r" % text[bad], bad, text)
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


# ---------------------------------------------------------------------------
# untyped tree


@dataclass
class Node:
    pos: int


@dataclass
class Num(Node):
    value: Scalar


@dataclass
class Name(Node):
    name: str


@dataclass
class Add(Node):
    terms: List[Tuple[int, Node]]  # (sign, term)


@dataclass
class Mul(Node):
    left: Node
    right: Node


@dataclass
class Juxt(Node):
    items: List[Node]


@dataclass
class Pow(Node):
    base: Node
    exp: Node


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise DSLError(msg, tok.pos, self.text)

    def take(self, text: Optional[str] = None) -> Token:
        t = self.tok
        if text is not None and t.text != text:
            self.error("expected %r" % text)
        self.i += 1
        return t

    def parse(self) -> Node:
        if self.tok.kind == "end":
            self.error("empty expression")
        node = self.sum()
        if self.tok.kind != "end":
            self.error("unexpected %r" % self.tok.text)
        return node

    def sum(self) -> Node:
        pos = self.tok.pos
        terms = []
        sign = 1
        if self.tok.text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
        terms.append((sign, self.product()))
        while self.tok.text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
            terms.append((sign, self.product()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Add(pos, terms)

    def product(self) -> Node:
        node = self.juxt()
        while self.tok.text == "*":
            pos = self.take().pos
            node = Mul(pos, node, self.juxt())
        return node

    def _starts_primary(self) -> bool:
        t = self.tok
        return t.kind in ("num", "name") or t.text == "("

    def juxt(self) -> Node:
        if not self._starts_primary():
            self.error("expected an operator or a scalar")
        pos = self.tok.pos
        items = [self.power()]
        while self._starts_primary():
            items.append(self.power())
        return items[0] if len(items) == 1 else Juxt(pos, items)

    def power(self) -> Node:
        base = self.primary()
        if self.tok.text == "^":
            pos = self.take().pos
            t = self.tok
            if t.kind == "num":
                self.take()
                exp = Num(t.pos, Scalar.coerce(int(t.text)))
            elif t.kind == "name":
                self.take()
                exp = Name(t.pos, t.text)
            else:
                self.error("expected an exponent")
            base = Pow(pos, base, exp)
        return base

    def primary(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.take()
            if self.tok.text == "/":
                self.take()
                den = self.tok
                if den.kind != "num":
                    self.error("expected a denominator")
                self.take()
                if int(den.text) == 0:
                    self.error("zero denominator", den)
                return Num(t.pos, Scalar.coerce(mpq(int(t.text), int(den.text))))
            return Num(t.pos, Scalar.coerce(int(t.text)))
        if t.kind == "name":
            self.take()
            return Name(t.pos, t.text)
        if t.text == "(":
            self.take()
            node = self.sum()
            self.take(")")
            return node
        self.error("unexpected %r" % (t.text or "end of input"))


def parse_tree(text: str) -> Node:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# elaboration


class _Elaborator:
    def __init__(self, text: str, bindings: Dict[str, int]):
        self.text = text
        self.bindings = dict(bindings)
        if "n" not in self.bindings:
            raise DSLError("the binding n is required", 0, text)

    def error(self, msg: str, node: Node):
        raise DSLError(msg, node.pos, self.text)

    def is_scalar(self, node: Node) -> bool:
        if isinstance(node, Num):
            return True
        if isinstance(node, Name):
            return node.name not in ATOMS
        if isinstance(node, Add):
            return all(self.is_scalar(t) for _, t in node.terms)
        if isinstance(node, Mul):
            return self.is_scalar(node.left) and self.is_scalar(node.right)
        if isinstance(node, Juxt):
            return all(self.is_scalar(t) for t in node.items)
        if isinstance(node, Pow):
            return self.is_scalar(node.base)
        raise TypeError(node)

    def integer(self, node: Node) -> int:
        s = self.scalar(node)
        c = s.coeff(0)
        if not s.is_constant() or c.im != 0 or c.re.denominator != 1:
            self.error("expected an integer", node)
        return int(c.re)

    def scalar(self, node: Node) -> Scalar:
        if isinstance(node, Num):
            return node.value
        if isinstance(node, Name):
            if node.name == "lambda":
                return LAMBDA
            if node.name == "I":
                return IMAG
            if node.name in self.bindings:
                return Scalar.coerce(self.bindings[node.name])
            self.error("unbound symbol %r" % node.name, node)
        if isinstance(node, Add):
            out = Scalar.coerce(0)
            for sign, t in node.terms:
                out = out + self.scalar(t) * sign
            return out
        if isinstance(node, Mul):
            return self.scalar(node.left) * self.scalar(node.right)
        if isinstance(node, Juxt):
            out = ONE
            for t in node.items:
                out = out * self.scalar(t)
            return out
        if isinstance(node, Pow):
            k = self.integer(node.exp)
            if k < 0:
                self.error("negative exponent", node)
            return self.scalar(node.base) ** k
        raise TypeError(node)

    def first_side(self, node: Node) -> str:
        """Side ("slice" or "ambient") of the first operator applied, if any."""
        if isinstance(node, Name):
            return ATOMS[node.name][1] if node.name in ATOMS else "any"
        if isinstance(node, Num):
            return "any"
        if isinstance(node, Add):
            for _, t in node.terms:
                s = self.first_side(t)
                if s != "any":
                    return s
            return "any"
        if isinstance(node, Mul):
            s = self.first_side(node.right)
            return s if s != "any" else self.first_side(node.left)
        if isinstance(node, Juxt):
            for t in reversed(node.items):
                s = self.first_side(t)
                if s != "any":
                    return s
            return "any"
        if isinstance(node, Pow):
            return self.first_side(node.base)
        raise TypeError(node)

    def op(self, node: Node, side: str, deg: int) -> OpExpr:
        """Elaborate ``node`` as an operator acting on ``deg``-forms on ``side``."""
        n = self.bindings["n"]
        dim = n if side == "ambient" else n - 1
        if self.is_scalar(node):
            return scale(self.scalar(node), Atom("id", dim, deg))
        if isinstance(node, Name):
            kind, where = ATOMS[node.name]
            if where == "ambient" and side == "slice":
                self.error("%s acts on forms on R^%d, not on the slice" % (node.name, n), node)
            if where == "slice" and side == "ambient":
                self.error("%s acts on the slice; restrict with iota first" % node.name, node)
            # out of range degrees give zero atoms, as in the builders
            return Atom(kind, dim, deg)
        if isinstance(node, Add):
            terms = []
            for sign, t in node.terms:
                e = self.op(t, side, deg)
                if terms and e.sig != terms[0].sig:
                    self.error("summands have different signatures %s and %s" % (terms[0].sig, e.sig), t)
                terms.append(scale(sign, e))
            return plus(*terms)
        if isinstance(node, Mul):
            if not self.is_scalar(node.left):
                self.error("the left side of * must be a scalar", node)
            return scale(self.scalar(node.left), self.op(node.right, side, deg))
        if isinstance(node, Juxt):
            return self._chain(list(node.items), side, deg)
        if isinstance(node, Pow):
            k = self.integer(node.exp)
            if k < 0:
                self.error("negative exponent", node)
            if k == 0:
                return Atom("id", dim, deg)
            return self._chain([node.base] * k, side, deg)
        raise TypeError(node)

    def _chain(self, items: List[Node], side: str, deg: int) -> OpExpr:
        n = self.bindings["n"]
        acc: Optional[OpExpr] = None
        for item in reversed(items):
            if self.is_scalar(item):
                c = self.scalar(item)
                if acc is None:
                    dim = n if side == "ambient" else n - 1
                    acc = scale(c, Atom("id", dim, deg))
                else:
                    acc = scale(c, acc)
                continue
            e = self.op(item, side, deg)
            acc = e if acc is None else compose(e, acc)
            side = "ambient" if e.sig.tgt_dim == n else "slice"
            deg = e.sig.tgt_deg
        return acc


def parse_op(text: str, bindings: Optional[Dict[str, int]] = None, source: Optional[str] = None) -> OpExpr:
    """Parse ``text`` into an operator.

    ``bindings`` must give ``n`` and should give ``p`` (the source degree,
    default 0); ``N`` may be used in exponents and scalars.  ``source`` forces
    the source to be "ambient" or "slice"; by default it is read off the first
    operator applied.
    """
    bindings = dict(bindings or {})
    for k in bindings:
        if k not in BINDABLE:
            raise DSLError("unknown binding %r" % k, 0, text)
    tree = parse_tree(text)
    el = _Elaborator(text, bindings)
    side = source or el.first_side(tree)
    if side == "any":
        side = "ambient"
    if side not in ("ambient", "slice"):
        raise ValueError("source must be 'ambient' or 'slice'")
    return el.op(tree, side, bindings.get("p", 0))


def parse_scalar(text: str, bindings: Optional[Dict[str, int]] = None) -> Scalar:
    tree = parse_tree(text)
    el = _Elaborator(text, dict(bindings or {}, n=(bindings or {}).get("n", 0)))
    if not el.is_scalar(tree):
        raise DSLError("expected a scalar", tree.pos, text)
    return el.scalar(tree)


# ---------------------------------------------------------------------------
# printing


def scalar_text(s: Scalar) -> str:
    return s.to_text().replace(" ", "")


def _is_simple(s: Scalar) -> bool:
    """True for scalars that can stand in front of an operator without parentheses."""
    t = scalar_text(s)
    return re.fullmatch(r"-?(\d+(/\d+)?|lambda|I)", t) is not None


def _scalar_prefix(s: Scalar) -> str:
    t = scalar_text(s)
    return t if _is_simple(s) else "(%s)" % t


def _factor_text(e: OpExpr) -> str:
    if isinstance(e, (Sum, Scale)):
        return "(%s)" % pretty_print(e)
    return pretty_print(e)


def _plain_atom(f) -> bool:
    return isinstance(f, Atom) and f.kind != "insert_normal"


def _compose_text(factors) -> str:
    parts: List[str] = []
    i = 0
    while i < len(factors):
        f = factors[i]
        j = i + 1
        if _plain_atom(f):
            while j < len(factors) and _plain_atom(factors[j]) and factors[j].kind == f.kind:
                j += 1
        if j - i == 1 and i + 1 < len(factors) and _plain_atom(f) and _plain_atom(factors[i + 1]):
            # repeated pairs such as (d delta)^k
            pair = (f.kind, factors[i + 1].kind)
            k = 1
            while (i + 2 * k + 1 < len(factors) and _plain_atom(factors[i + 2 * k])
                   and _plain_atom(factors[i + 2 * k + 1])
                   and (factors[i + 2 * k].kind, factors[i + 2 * k + 1].kind) == pair):
                k += 1
            if k > 1:
                parts.append("(%s %s)^%d" % (_KIND_NAME[pair[0]], _KIND_NAME[pair[1]], k))
                i += 2 * k
                continue
        text = _factor_text(f)
        parts.append(text if j - i == 1 else "%s^%d" % (text, j - i))
        i = j
    return " ".join(parts)


def _negated(e: OpExpr) -> Optional[OpExpr]:
    """-e as a node if e carries a visibly negative coefficient."""
    if isinstance(e, Scale) and _is_simple(e.scalar) and scalar_text(e.scalar).startswith("-"):
        return scale(-ONE, e)
    return None


def pretty_print(e: OpExpr) -> str:
    """Text that ``parse_op`` reads back to an equal expression."""
    if isinstance(e, Atom):
        return _KIND_NAME[e.kind]
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, Compose):
        return _compose_text(e.factors)
    if isinstance(e, Scale):
        inner = e.expr
        body = _factor_text(inner) if isinstance(inner, Sum) else pretty_print(inner)
        t = scalar_text(e.scalar)
        if t == "-1":
            return "-" + body
        return "%s %s" % (_scalar_prefix(e.scalar), body)
    if isinstance(e, Sum):
        out = ""
        for i, t in enumerate(e.terms):
            neg = _negated(t)
            if i == 0:
                out = pretty_print(t)
            elif neg is not None:
                out += " - " + pretty_print(neg)
            else:
                out += " + " + pretty_print(t)
        return out
    raise TypeError(e)


__all__ = ["ATOMS", "DSLError", "Token", "tokenize", "parse_tree", "parse_op", "parse_scalar",
           "pretty_print", "scalar_text", "rational_str"]
