"""Internal unit system and boundary conversions.

Everything inside the library uses micrometres for length, femtoseconds for
time and radians for angles, so that optical wavenumbers are O(1-30) um^-1
and frequencies O(1) rad/fs.  Degrees, nanometres and millimetres are
accepted only at the CLI/config boundary.
"""

import numpy as np

C_UM_FS = 0.299792458  # speed of light [um/fs]


def omega_from_wavelength(lambda_um):
    """Angular frequency [rad/fs] of vacuum wavelength [um]."""
    return 2.0 * np.pi * C_UM_FS / lambda_um


def wavelength_from_omega(omega):
    """Vacuum wavelength [um] of angular frequency [rad/fs]."""
    return 2.0 * np.pi * C_UM_FS / omega


def deg(x):
    """Degrees -> radians."""
    return np.radians(x)


def nm_to_um(x):
    return x * 1e-3


def mm_to_um(x):
    return x * 1e3
