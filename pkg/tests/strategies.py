"""Hypothesis strategies shared by the property tests."""
import numpy as np
from hypothesis import assume
from hypothesis import strategies as st

coord = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)


@st.composite
def unit_vectors(draw, dim: int = 3):
    v = np.array([draw(coord) for _ in range(dim)])
    n = np.linalg.norm(v)
    assume(n > 1e-3)
    return v / n


@st.composite
def independent_triples(draw):
    m = np.vstack([draw(unit_vectors()) for _ in range(3)])
    assume(abs(np.linalg.det(m)) > 1e-3)
    return m
