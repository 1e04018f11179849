import math
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from transport_gates.beams import COUNTER_PROPAGATING, BeamGeometry  # noqa: E402
from transport_gates.physics import BE9, BE9_NOMINAL, TWO_PI, TrapContext  # noqa: E402


@pytest.fixture
def ctx():
    return TrapContext(BE9, TWO_PI * 4e6)


@pytest.fixture
def ctx_table():
    return TrapContext(BE9_NOMINAL, TWO_PI * 4e6)


@pytest.fixture
def gate_beam():
    return BeamGeometry(20e-6, 313e-9, math.pi / 2, COUNTER_PROPAGATING)


@pytest.fixture
def rot_beam():
    return BeamGeometry(20e-6, 313e-9, math.pi / 2)
