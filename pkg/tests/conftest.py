import random

import pytest
from hypothesis import strategies as st

from slicesieve.laurent import LaurentPoly


def small_ints(lo=-9, hi=9):
    return st.integers(min_value=lo, max_value=hi)


@st.composite
def laurent_polys(draw, ring="ZZ", max_terms=6, nonzero=True, min_exp=-4, max_exp=6):
    n = draw(st.integers(min_value=1 if nonzero else 0, max_value=max_terms))
    coeffs = {}
    for _ in range(n):
        e = draw(st.integers(min_value=min_exp, max_value=max_exp))
        c = draw(small_ints())
        coeffs[e] = c
    f = LaurentPoly(coeffs, ring)
    if nonzero and f.is_zero():
        f = LaurentPoly.const(draw(st.sampled_from([1, -1, 2, 3])), ring)
    return f


def random_poly(rng: random.Random, max_deg=4, lo=-4, hi=4, laurent=True) -> LaurentPoly:
    shift = rng.randint(-2, 2) if laurent else 0
    coeffs = [rng.randint(lo, hi) for _ in range(rng.randint(1, max_deg + 1))]
    return LaurentPoly.from_list(coeffs, shift)


@pytest.fixture
def rng():
    return random.Random(20240517)
