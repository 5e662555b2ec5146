import numpy as np
import pytest

from dppdc import CrystalModel, PumpConfig


@pytest.fixture(scope="session")
def bbo():
    """Reference BBO model, cut at the exact collinear phase-matching angle."""
    return CrystalModel.bbo()


@pytest.fixture(scope="session")
def pplt():
    """Poled tantalate at 75 C with the exactly matched poling period."""
    return CrystalModel.pplt()


@pytest.fixture(scope="session")
def pplt_fig_poling():
    """Poled tantalate with the nominal 7.79 um period (open emission tubes)."""
    return CrystalModel.pplt(poling_period=7.79)


@pytest.fixture(scope="session")
def pplt_pump():
    """Symmetric +-1.2 deg tilts, balanced amplitudes."""
    return PumpConfig(theta_p1=np.radians(-1.2), theta_p2=np.radians(1.2))


@pytest.fixture(scope="session")
def bbo_pump():
    """One pump on axis, one at 1.2 deg (the resonance-study configuration)."""
    return PumpConfig(theta_p1=0.0, theta_p2=np.radians(1.2))
