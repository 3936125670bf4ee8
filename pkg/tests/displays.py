"""Low order operators written out by hand in the expression language.

Each entry maps (type, order) to the normal and the geometric text; the
texts use the bindings n and p.  These are the oracles for the builders.
"""

FIRST_SECOND = {
    (1, 0): ["(lambda+p) iota"],
    (2, 0): ["-(lambda+n-p) iota i_n"],
    (1, 1): ["(lambda+p-1) iota dn + d iota i_n",
             "(lambda+p) d iota i_n + (lambda+p-1) iota i_n dbar"],
    (2, 1): ["-(lambda+n-p-1) iota i_n dn - delta iota",
             "-(lambda+n-p) delta iota + (lambda+n-p-1) iota deltabar"],
    (1, 2): ["(lambda+p-2) Delta iota + (2*lambda+n-3)*(lambda+p-2) iota dn^2"
             " + 2*(2*lambda+n-3) d iota i_n dn + 2 d delta iota",
             "(2*lambda+n-2)*((lambda+p) d delta + (lambda+p-2) delta d) iota"
             " - (2*lambda+n-3) iota ((lambda+p) dbar deltabar + (lambda+p-2) deltabar dbar)"],
    (2, 2): ["-(lambda+n-p) Delta iota i_n - (2*lambda+n-3)*(lambda+n-p-2) iota i_n dn^2"
             " - 2*(2*lambda+n-3) delta iota dn + 2 d delta iota i_n",
             "-(2*lambda+n-2)*((lambda+n-p) delta d + (lambda+n-p-2) d delta) iota i_n"
             " + (2*lambda+n-3) iota i_n ((lambda+n-p) deltabar dbar + (lambda+n-p-2) dbar deltabar)"],
    (1, 3): ["(lambda+p-3) Delta iota dn + Delta d iota i_n + 2 d delta iota dn"
             " + 1/3*(2*lambda+n-5)*(lambda+p-3) iota dn^3 + (2*lambda+n-5) d iota i_n dn^2",
             "1/3*(2*lambda+n-2)*(lambda+p) d delta d iota i_n"
             " - 1/3*(2*lambda+n-5)*(lambda+p-3) iota i_n dbar deltabar dbar"
             " + 1/3*(2*lambda+n-2)*(lambda+p-3) delta d iota i_n dbar"
             " - 1/3*(2*lambda+n-5)*(lambda+p) d iota i_n dbar deltabar"
             " + 1/3*(2*(lambda+p-3)*(2*lambda+n-2) + 3*(lambda+n-p)) d delta iota i_n dbar"],
    (2, 3): ["-(lambda+n-p-1) Delta iota i_n dn - Delta delta iota + 2 d delta iota i_n dn"
             " - 1/3*(2*lambda+n-5)*(lambda+n-p-3) iota i_n dn^3 - (2*lambda+n-5) delta iota dn^2",
             "-1/3*(2*lambda+n-2)*(lambda+n-p) delta d delta iota"
             " - 1/3*(2*lambda+n-5)*(lambda+n-p-3) iota deltabar dbar deltabar"
             " + 1/3*(2*lambda+n-2)*(lambda+n-p-3) d delta iota deltabar"
             " + 1/3*(2*lambda+n-5)*(lambda+n-p) delta iota deltabar dbar"
             " + 1/3*(2*(lambda+n-p-3)*(2*lambda+n-2) + 3*(lambda+p)) delta d iota deltabar"],
}

# third type on functions (p = 0) and fourth type on top forms (p = n)
THIRD_FOURTH = {
    (3, 1): "d iota",
    (3, 2): "d iota dn",
    (3, 3): "d delta d iota + (n+1) d iota dn^2",
    (3, 4): "1/3*(n+1) d iota dn^3 + d delta d iota dn",
    (4, 1): "-delta iota i_n",
    (4, 2): "-delta iota i_n dn",
    (4, 3): "-(n+1) delta iota i_n dn^2 - delta d delta iota i_n",
    # the pullback is implicit in the printed fourth order formula
    (4, 4): "-1/3*(n+1) delta iota i_n dn^3 - delta d delta iota i_n dn",
}


def singular_display(t, n, p, k):
    """Low homogeneity singular vectors of the first (t=1) and second (t=2) type,
    written out term by term: (coeff, power of xi_n, power of |xi'|^2, word)."""
    from sbo.scalars import LAMBDA as L, Scalar
    from sbo.singular import SingularVector, Term

    one = Scalar.coerce(1)
    two = Scalar.coerce(2)
    if t == 1:
        table = {
            0: [(L + p, 0, 0, ())],
            1: [(L + p - 1, 1, 0, ()), (one, 0, 0, ("En", "iE"))],
            2: [(L + p - 2, 0, 1, ()), (-(2 * L + n - 3) * (L + p - 2), 2, 0, ()),
                (-2 * (2 * L + n - 3), 1, 0, ("En", "iE")), (two, 0, 0, ("alpha", "iE"))],
            3: [(L + p - 3, 1, 1, ()), (-(2 * L + n - 5) * (L + p - 3) / 3, 3, 0, ()),
                (one, 0, 1, ("En", "iE")), (-(2 * L + n - 5), 2, 0, ("En", "iE")),
                (two, 1, 0, ("alpha", "iE"))],
        }
        q = p
    else:
        table = {
            0: [(-(L + n - p), 0, 0, ("En",))],
            1: [(-(L + n - p - 1), 1, 0, ("En",)), (one, 0, 0, ("alpha",))],
            2: [(-(L + n - p), 0, 1, ("En",)), ((2 * L + n - 3) * (L + n - p - 2), 2, 0, ("En",)),
                (-2 * (2 * L + n - 3), 1, 0, ("alpha",)), (two, 0, 0, ("En", "alpha", "iE"))],
            3: [(-(L + n - p - 1), 1, 1, ("En",)), ((2 * L + n - 5) * (L + n - p - 3) / 3, 3, 0, ("En",)),
                (one, 0, 1, ("alpha",)), (-(2 * L + n - 5), 2, 0, ("alpha",)),
                (two, 1, 0, ("En", "alpha", "iE"))],
        }
        q = p - 1
    terms = tuple(Term(Scalar.coerce(c), a, b, w) for c, a, b, w in table[k])
    return SingularVector(n, p, q, k, "display", terms)
