from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from symcalc.multipoly import Poly


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_matrices(rng, n, dim, scale=1.0):
    return [scale * (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) for _ in range(n)]


coefficients = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@st.composite
def polys(draw, nvars=None, max_degree=8, max_terms=8):
    n = draw(st.integers(1, 4)) if nvars is None else nvars
    alphas = st.lists(st.integers(0, max_degree), min_size=n, max_size=n).filter(lambda a: sum(a) <= max_degree)
    terms = draw(st.dictionaries(alphas.map(tuple), coefficients, max_size=max_terms))
    return Poly(n, terms)
