import numpy as np
import pytest
from hypothesis import strategies as st

from nhtwist.deformations import DeformationSpec, Family, Variant

ALL_PAIRS = [(fam, var) for fam in Family for var in Variant]
NH_PAIRS = [(fam, var) for fam, var in ALL_PAIRS if var is not Variant.LIMIT]


def pair_id(pair):
    return f"{pair[0].value}-{pair[1].value}"


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


@st.composite
def specs(draw, kappa=st.floats(-1, 1), tau=st.floats(0.5, 5)):
    fam = draw(st.sampled_from(list(Family)))
    var = draw(st.sampled_from(list(Variant)))
    return DeformationSpec(fam, var, draw(kappa), draw(tau))


def central_diff(fn, t, h=None):
    h = 1e-5 * (1 + abs(t)) if h is None else h
    return (fn(t + h) - fn(t - h)) / (2 * h)
