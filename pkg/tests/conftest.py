from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("default")


def yz_of(a1, a2):
    """(y, z) of the slice with the given alpha1, alpha2 (alpha3 from the trace)."""
    y = (a1 - 1 / 16) / math.sqrt(7 / 8)
    z = (a2 - 1 / 14 + a1 / 7) / math.sqrt(3 / 28)
    return y, z


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
