import numpy as np
import pytest

from svc_tunneling.geometry import SvcParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def stage4_params():
    """rho = 2.5, G = 4, V = 20, L = 15."""
    return SvcParams(2.5, 4, 20.0, 15.0)


@pytest.fixture
def area_params():
    """rho = 3.5, V0 = 10, L = 1 with area preservation, G = 5."""
    return SvcParams(3.5, 5, 10.0, 1.0, area_preserving=True)
