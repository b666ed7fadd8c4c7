"""Hypothesis strategies shared by the property tests."""

from gmpy2 import mpq
from hypothesis import strategies as st

from pudq.polyalg import Poly

PU_VARS = ("q", "p_q", "x", "p_x")

coeffs = st.builds(mpq, st.integers(-5, 5), st.integers(1, 4))


@st.composite
def polys(draw, max_degree=4, max_terms=4, names=PU_VARS):
    p = Poly.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        total = draw(st.integers(0, max_degree))
        powers = {}
        for _ in range(total):
            v = draw(st.sampled_from(names))
            powers[v] = powers.get(v, 0) + 1
        p = p + Poly.monomial(powers, draw(coeffs))
    return p
