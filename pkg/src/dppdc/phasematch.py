"""Phase-mismatch evaluation and phase-matching surface generation.

The longitudinal mismatch of the down-conversion process pairing a signal
mode w = (qx, qy, Omega) with a pump plane wave of transverse wavevector Q is

    D(w; Q) = k_sz(w) + k_sz(Q - w, -Omega) - k_pz(Q) + G_z ,

with k_z = sqrt(k^2 - q^2) exactly, or the paraxial expansions
k_sz ~ k_s - q^2/(2 k_s) and k_pz ~ k_pj - Q^2/(2 k_p).  Within the paraxial
approximation the locus D = 0 at fixed Omega is a circle in the (qx, qy)
plane; :func:`surface_radius` returns its squared radius and centre, and
:func:`sample_surface` walks the whole emission surface over a frequency
grid.

A negative squared radius is a meaningful outcome (no real circle at that
frequency), not an error.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import dispersion as disp
from .dispersion import CrystalKind, CrystalModel

EVANESCENT_MARGIN = 1e-6  # guard: require q < (1 - margin) k to take the sqrt


@dataclass(frozen=True)
class ModeCoord:
    """Spatio-temporal Fourier mode of the signal field."""

    qx: float  # um^-1
    qy: float  # um^-1
    omega: float  # rad/fs, offset from omega_s

    @property
    def q2(self):
        return self.qx * self.qx + self.qy * self.qy


@dataclass(frozen=True)
class PumpModeCoord:
    """Transverse wavevector of one classical pump wave (Omega_p = 0)."""

    qx: float  # um^-1
    qy: float = 0.0

    @property
    def q2(self):
        return self.qx * self.qx + self.qy * self.qy


class MismatchMethod(enum.Enum):
    EXACT = "exact"
    PARAXIAL = "paraxial"


@dataclass(frozen=True)
class MismatchValue:
    value: float  # um^-1
    method: MismatchMethod


def pump_mode_from_tilt(model: CrystalModel, theta_p):
    """Pump mode with Q = k_p(gamma0) sin(theta_p) along x."""
    return PumpModeCoord(qx=disp.pump_transverse_q(model, theta_p))


def _pump_kp(model: CrystalModel, pump: PumpModeCoord, beta):
    """Pump wavenumber for the mode's tilt; tilt-independent for the poled
    crystal, angle-dependent extraordinary index for BBO."""
    k_ref = disp.pump_wavenumber(model)
    if model.kind is CrystalKind.PPLT_TYPE0:
        return k_ref
    theta = np.arcsin(np.sqrt(pump.q2) / k_ref) * np.sign(pump.qx if pump.qx else 1.0)
    gamma = disp.pump_gamma(theta, beta, model.cut_angle_gamma0)
    return disp.pump_wavenumber(model, gamma)


def collinear_mismatch(model: CrystalModel, omega_offset):
    """Delta_coll(Omega) = k_s(Omega) + k_s(-Omega) - k_p + G_z [um^-1].

    Even in Omega by construction; ~0 at each crystal's design point.
    """
    return (
        disp.signal_wavenumber(model, omega_offset)
        + disp.signal_wavenumber(model, -omega_offset)
        - disp.pump_wavenumber(model)
        + model.grating_vector
    )


def _ksz_exact(model, qx, qy, omega):
    ks = disp.signal_wavenumber(model, omega)
    q2 = qx * qx + qy * qy
    lim = (1.0 - EVANESCENT_MARGIN) * ks
    if np.any(q2 >= lim * lim):
        raise ValueError(
            f"evanescent signal mode: |q| = {np.sqrt(np.max(q2)):.4f} um^-1 "
            f">= k_s = {np.min(ks):.4f} um^-1"
        )
    return np.sqrt(ks * ks - q2)


def mismatch(
    model: CrystalModel,
    pump: PumpModeCoord,
    signal: ModeCoord,
    method=MismatchMethod.PARAXIAL,
    beta=0.0,
) -> MismatchValue:
    """Phase mismatch D(w; Q) for one signal mode against one pump wave."""
    method = MismatchMethod(method)
    kpj = _pump_kp(model, pump, beta)
    gz = model.grating_vector
    idx, idy, ido = pump.qx - signal.qx, pump.qy - signal.qy, -signal.omega
    if method is MismatchMethod.EXACT:
        ksz = _ksz_exact(model, signal.qx, signal.qy, signal.omega)
        kiz = _ksz_exact(model, idx, idy, ido)
        kpz = np.sqrt(kpj * kpj - pump.q2)
        value = ksz + kiz - kpz + gz
    else:
        ks = disp.signal_wavenumber(model, signal.omega)
        ki = disp.signal_wavenumber(model, ido)
        k_p = disp.pump_wavenumber(model)
        ksz = ks - signal.q2 / (2.0 * ks)
        kiz = ki - (idx * idx + idy * idy) / (2.0 * ki)
        kpz = kpj - pump.q2 / (2.0 * k_p)
        value = ksz + kiz - kpz + gz
    return MismatchValue(value=float(value), method=method)


@dataclass(frozen=True)
class SurfaceCircle:
    """Paraxial phase-matching locus at one frequency: a circle of squared
    radius F centred on (center_qx, center_qy).  F < 0 means no real circle."""

    F: float  # um^-2
    center_qx: float
    center_qy: float

    @property
    def radius(self):
        return np.sqrt(self.F) if self.F >= 0 else np.nan


def surface_radius(
    model: CrystalModel, pump: PumpModeCoord, omega_offset, beta=0.0
) -> SurfaceCircle:
    """Squared radius and centre of the emission circle of one pump.

    F_j = kbar [ Dcoll - (k_pj - k_p) + (Q_j^2/2) (1/k_p - 1/S) ] with
    S = k_s(Omega) + k_s(-Omega) and centre Q_j k_s(Omega)/S; every point of
    the circle satisfies the paraxial mismatch identically.
    """
    ks = disp.signal_wavenumber(model, omega_offset)
    ki = disp.signal_wavenumber(model, -omega_offset)
    s = ks + ki
    kbar = 2.0 * ks * ki / s
    k_p = disp.pump_wavenumber(model)
    kpj = _pump_kp(model, pump, beta)
    dcoll = s - k_p + model.grating_vector
    f = kbar * (dcoll - (kpj - k_p) + 0.5 * pump.q2 * (1.0 / k_p - 1.0 / s))
    scale = ks / s
    return SurfaceCircle(F=float(f), center_qx=pump.qx * scale, center_qy=pump.qy * scale)


def symmetric_omega_grid(n_half: int, omega_max: float):
    """Frequency grid symmetric about 0 containing every +-Omega pair
    exactly (2*n_half + 1 points), so conjugate-mode lookups never
    interpolate."""
    if n_half < 1:
        raise ValueError("need at least one positive frequency")
    pos = np.linspace(0.0, omega_max, n_half + 1)
    return np.concatenate([-pos[:0:-1], pos])


@dataclass(frozen=True)
class SurfaceSample:
    mode: ModeCoord
    theta_x: float
    theta_y: float
    lambda_um: float


def sample_surface(
    model: CrystalModel,
    pump: PumpModeCoord,
    omega_grid,
    n_azimuth: int,
    beta=0.0,
):
    """Discretize the emission surface of one pump.

    For every frequency with F_j >= 0, emits ``n_azimuth`` points on the
    circle, with angular coordinates theta = q / k_s(Omega) attached.
    Frequencies without a real circle contribute nothing.
    """
    if n_azimuth < 1 or len(omega_grid) == 0:
        raise ValueError("empty sampling grids")
    phis = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    out = []
    for omega in omega_grid:
        circ = surface_radius(model, pump, omega, beta)
        if circ.F < 0.0:
            continue
        r = np.sqrt(circ.F)
        ks = disp.signal_wavenumber(model, omega)
        lam = 2.0 * np.pi * disp.C_UM_FS / (model.omega_signal + omega)
        for phi in phis:
            qx = circ.center_qx + r * np.cos(phi)
            qy = circ.center_qy + r * np.sin(phi)
            out.append(
                SurfaceSample(
                    mode=ModeCoord(qx=float(qx), qy=float(qy), omega=float(omega)),
                    theta_x=float(qx / ks),
                    theta_y=float(qy / ks),
                    lambda_um=float(lam),
                )
            )
    return out
