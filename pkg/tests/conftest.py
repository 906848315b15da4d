import os

import numpy as np
import pytest

from atmfv.grid import Field, make_grid
from atmfv.physics import AdvectionModel


def pytest_report_header(config):
    gates = []
    if os.environ.get("ATMFV_LONG_TESTS"):
        gates.append("ATMFV_LONG_TESTS (N=400 swirl, dx=50 density current)")
    return "optional gates: " + (", ".join(gates) if gates else "off")


LONG_TESTS = bool(os.environ.get("ATMFV_LONG_TESTS"))


@pytest.fixture
def unit_grid():
    return make_grid(8, 8, 0.0, 1.0, 0.0, 1.0)


@pytest.fixture
def const_advection_model():
    return AdvectionModel(lambda x, z: np.ones(np.broadcast(x, z).shape),
                          lambda x, z: np.ones(np.broadcast(x, z).shape))
