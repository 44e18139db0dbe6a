import math

import pytest
from hypothesis import settings

from decohist.model import ConstantProfile, OscillatorParams, Partition

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def quarter():
    """m = omega = 1 and omega T = pi/2, so sin(omega T) = 1 and g = 4/pi."""
    return OscillatorParams(1.0, 1.0, math.pi / 2)


@pytest.fixture
def narrow_partition():
    return Partition(0.1)


@pytest.fixture
def driven_quarter():
    return OscillatorParams(1.0, 1.0, math.pi / 2, driving=ConstantProfile(5.0))
