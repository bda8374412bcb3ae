"""Shared hypothesis strategies for jet-polynomial properties."""

from fractions import Fraction

from hypothesis import strategies as st

from p3lenard.diffpoly import U_RING, u, s, const

MAX_JET_ORDER = 4
MAX_DEGREE = 4

coefficients = st.builds(
    Fraction,
    st.integers(min_value=-9, max_value=9).filter(lambda n: n != 0),
    st.integers(min_value=1, max_value=9),
)


@st.composite
def monomials(draw):
    term = const(draw(coefficients))
    term *= s(1) ** draw(st.integers(min_value=0, max_value=2))
    orders = draw(st.lists(st.integers(min_value=0, max_value=MAX_JET_ORDER),
                           max_size=2, unique=True))
    degree_left = MAX_DEGREE
    for order in orders:
        e = draw(st.integers(min_value=1, max_value=max(1, degree_left)))
        term *= u(order) ** e
        degree_left -= e
    return term


@st.composite
def diffpolys(draw):
    out = U_RING.zero()
    for term in draw(st.lists(monomials(), max_size=4)):
        out += term
    return out
