"""Shared hypothesis strategies."""

from gmpy2 import mpq
from hypothesis import strategies as st

from sbo.exterior import PolyForm, all_indices
from sbo.scalars import GaussianRational, Scalar

small_q = st.builds(lambda a, b: mpq(a, b), st.integers(-9, 9), st.integers(1, 6))
gaussian = st.builds(GaussianRational, small_q, small_q)


@st.composite
def scalars(draw, max_degree=3, complex_=True):
    deg = draw(st.integers(0, max_degree))
    coeffs = [draw(gaussian if complex_ else small_q) for _ in range(deg + 1)]
    return Scalar.from_coefficients(coeffs)


@st.composite
def forms(draw, m, p, max_degree=3, max_terms=4):
    idx = all_indices(m, p)
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        I = draw(st.sampled_from(idx))
        e = tuple(draw(st.integers(0, max_degree)) for _ in range(m))
        terms.setdefault(I, {})[e] = draw(scalars(1, complex_=False))
    return PolyForm(m, p, terms)
