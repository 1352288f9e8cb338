import os

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from fpk import special_frames as sf
from fpk.frames import random_parseval
from fpk.povm import LabeledFrame

settings.register_profile("fpk", max_examples=60, deadline=None)
settings.load_profile("fpk")

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def mercedes():
    return LabeledFrame(sf.example_mercedes_frame(), [1.0, 2.0, 3.0])


@pytest.fixture
def two_ray():
    return LabeledFrame(sf.two_ray_example_frame(), [1.0, 2.0, 3.0])


@st.composite
def parseval_frames(draw, d_max=6, k_max=12, real=None):
    """Random Parseval frame built from a drawn seed and shape."""
    d = draw(st.integers(1, d_max))
    k = draw(st.integers(d, k_max))
    seed = draw(st.integers(0, 2**32 - 1))
    is_real = draw(st.booleans()) if real is None else real
    return random_parseval(d, k, np.random.default_rng(seed), is_real)


@st.composite
def labeled_frames(draw, d_max=6, k_max=12):
    F = draw(parseval_frames(d_max, k_max))
    labels = draw(
        st.lists(st.floats(-10, 10, allow_nan=False), min_size=F.k, max_size=F.k)
    )
    return LabeledFrame(F, labels)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
