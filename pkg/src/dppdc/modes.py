"""Shared and coupled mode location, resonance conditions and the
walk-off interpretation of the resonance.

A *shared* mode is a signal mode simultaneously phase matched with both
pumps; its two *coupled* partners are fixed by transverse-momentum and
energy conservation with each pump, w_{b,c} = Q_{1,2} - w0 (conjugate
frequency, mirrored qy).  A *resonance* occurs when a coupled mode lands on
the shared mode of the conjugate frequency, q0(Omega) + q0(-Omega) = Q_j,
merging two independent triplets into a quadruplet; in the birefringent
configuration this can be reached by rotating the tilt plane.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import dispersion as disp
from .dispersion import CrystalKind, CrystalModel
from .phasematch import (
    MismatchMethod,
    ModeCoord,
    PumpModeCoord,
    mismatch,
    surface_radius,
)


@dataclass(frozen=True)
class PumpConfig:
    """The two classical pump waves driving the process.

    Tilts are internal angles against z; ``beta`` is the rotation of the
    tilt direction in the crystal facet; ``chi1``/``chi2`` convert pump
    amplitude to a gain per unit length, so g_j = chi_j |alpha_j| [um^-1].
    """

    theta_p1: float
    theta_p2: float
    beta: float = 0.0
    alpha1: complex = 1.0 + 0.0j
    alpha2: complex = 1.0 + 0.0j
    chi1: float = 1.0
    chi2: float = 1.0

    def __post_init__(self):
        if max(abs(self.theta_p1), abs(self.theta_p2)) >= 0.2:
            raise ValueError("pump tilts outside the paraxial range")
        if self.gbar <= 0.0:
            raise ValueError("at least one pump must have nonzero amplitude")

    @property
    def g1(self) -> complex:
        return self.chi1 * self.alpha1

    @property
    def g2(self) -> complex:
        return self.chi2 * self.alpha2

    @property
    def gbar(self) -> float:
        return float(np.hypot(abs(self.g1), abs(self.g2)))

    @property
    def phi1(self) -> float:
        return float(np.angle(self.alpha1))

    @property
    def phi2(self) -> float:
        return float(np.angle(self.alpha2))

    @property
    def phi_plus(self) -> float:
        return 0.5 * (self.phi1 + self.phi2)

    @property
    def phi_minus(self) -> float:
        return 0.5 * (self.phi1 - self.phi2)

    @property
    def abar(self) -> complex:
        mag = np.hypot(abs(self.alpha1), abs(self.alpha2))
        return mag * np.exp(1j * self.phi_plus)

    @property
    def theta_mean(self) -> float:
        return 0.5 * (self.theta_p1 + self.theta_p2)

    def pump_modes(self, model: CrystalModel):
        return (
            PumpModeCoord(qx=disp.pump_transverse_q(model, self.theta_p1)),
            PumpModeCoord(qx=disp.pump_transverse_q(model, self.theta_p2)),
        )


@dataclass(frozen=True)
class ModeCluster:
    """A solved triplet (shared + two coupled partners) or quadruplet."""

    kind: str  # "triplet" | "quadruplet"
    shared: ModeCoord
    coupled_b: ModeCoord  # partner via pump 1
    coupled_c: ModeCoord  # partner via pump 2
    residuals: dict
    y_branch: str  # "plus" | "minus"
    shared_conjugate: Optional[ModeCoord] = None  # populated for quadruplets
    merged_with: Optional[str] = None  # "b" or "c" for quadruplets


def shared_qx(model: CrystalModel, pump: PumpConfig, omega_offset):
    """Closed-form x-coordinate of the shared mode:
    q0x = (Q1+Q2)/2 (1 - k_s(-Omega)/k_p) + (dk_p/dQ_p) k_s(-Omega)."""
    q1, q2 = (m.qx for m in pump.pump_modes(model))
    ki = disp.signal_wavenumber(model, -omega_offset)
    k_p = disp.pump_wavenumber(model)
    if model.kind is CrystalKind.PPLT_TYPE0:
        ratio = 0.0
    else:
        ratio = disp.dkp_dQp(model, pump.theta_p1, pump.theta_p2, pump.beta).exact
    return 0.5 * (q1 + q2) * (1.0 - ki / k_p) + ratio * ki


def shared_mode(
    model: CrystalModel, pump: PumpConfig, omega_offset, y_branch="plus"
) -> Optional[ModeCoord]:
    """Locate the shared mode at one frequency, or None when the two
    emission circles do not intersect.

    The +- roots of the circle intersection are first-class branches; the
    convention q0y(-Omega) = -q0y(Omega) ties the branch label across
    conjugate frequencies.
    """
    if y_branch not in ("plus", "minus"):
        raise ValueError("y_branch must be 'plus' or 'minus'")
    if pump.theta_p1 == pump.theta_p2:
        raise ValueError("coincident pump tilts do not define shared modes")
    q0x = shared_qx(model, pump, omega_offset)
    p1, _ = pump.pump_modes(model)
    circ = surface_radius(model, p1, omega_offset, pump.beta)
    radicand = circ.F - (q0x - circ.center_qx) ** 2
    if radicand < 0.0:
        return None
    mag = np.sqrt(radicand)
    sign = 1.0 if y_branch == "plus" else -1.0
    if omega_offset < 0.0:
        sign = -sign
    return ModeCoord(qx=float(q0x), qy=float(sign * mag), omega=float(omega_offset))


def coupled_modes(model: CrystalModel, pump: PumpConfig, shared: ModeCoord):
    """Partners of a shared mode: w_b = Q1 - w0 and w_c = Q2 - w0, both at
    the conjugate frequency with mirrored qy."""
    p1, p2 = pump.pump_modes(model)
    w_b = ModeCoord(qx=p1.qx - shared.qx, qy=-shared.qy, omega=-shared.omega)
    w_c = ModeCoord(qx=p2.qx - shared.qx, qy=-shared.qy, omega=-shared.omega)
    return w_b, w_c


def shared_angles(model: CrystalModel, pump: PumpConfig, omega_offset):
    """First-order angular positions of shared and coupled modes.

    Returns (theta_0x, theta_bx, theta_cx) per the paraxial formulas; the
    shared angle is also reported with the poled-crystal correction term
    (G_z - Dcoll)/k_s, which is usually dropped.
    """
    ks = disp.signal_wavenumber(model, omega_offset)
    ki = disp.signal_wavenumber(model, -omega_offset)
    k_p = disp.pump_wavenumber(model)
    tbar = pump.theta_mean
    half = 0.5 * (pump.theta_p1 - pump.theta_p2)
    if model.kind is CrystalKind.PPLT_TYPE0:
        ratio = 0.0
        from .phasematch import collinear_mismatch

        corr = tbar * (model.grating_vector - collinear_mismatch(model, omega_offset)) / ks
    else:
        ratio = disp.dkp_dQp(model, pump.theta_p1, pump.theta_p2, pump.beta).exact
        corr = 0.0
    theta_0 = tbar + ratio * ki / ks
    theta_b = tbar + half * k_p / ks - ratio
    theta_c = tbar - half * k_p / ks - ratio
    return {
        "theta_0x": float(theta_0),
        "theta_0x_corrected": float(theta_0 + corr),
        "theta_bx": float(theta_b),
        "theta_cx": float(theta_c),
    }


@dataclass(frozen=True)
class ResonanceBetas:
    """Facet rotations at which a coupled branch merges with the shared one.

    ``beta_merge_b``: shared modes merge with the branch generated by pump 1
    (upper sign of the resonance condition); ``beta_merge_c``: merge with
    the pump-2 branch (lower sign).
    """

    beta_merge_b: float
    beta_merge_c: float


def resonance_beta(model: CrystalModel, theta_p1, theta_p2) -> ResonanceBetas:
    """Solve sin(beta_res) = +-(theta_p1 - theta_p2)/(2 rho0)
    + (theta_p1 + theta_p2)/(2 tan gamma0) for both signs.

    Requires walk-off (BBO) and a tilt difference below twice the walk-off
    angle; otherwise no facet rotation can reach the resonance.
    """
    if model.kind is CrystalKind.PPLT_TYPE0:
        raise ValueError("non-critical configuration has no resonance")
    gamma0 = model.cut_angle_gamma0
    rho0 = disp.walk_off(model, gamma0)
    if abs(theta_p1 - theta_p2) >= 2.0 * rho0:
        raise ValueError(
            "tilt difference exceeds twice the walk-off angle: no resonance"
        )
    common = 0.5 * (theta_p1 + theta_p2) / np.tan(gamma0)
    s_b = 0.5 * (theta_p1 - theta_p2) / rho0 + common
    s_c = -0.5 * (theta_p1 - theta_p2) / rho0 + common
    if max(abs(s_b), abs(s_c)) > 1.0:
        raise ValueError("no facet rotation satisfies the resonance condition")
    return ResonanceBetas(
        beta_merge_b=float(np.arcsin(s_b)), beta_merge_c=float(np.arcsin(s_c))
    )


@dataclass(frozen=True)
class ResidualPair:
    """Transverse-momentum defect |q0(Omega) + q0(-Omega) - Q_j| for each
    pump.  Both are always reported; degenerate near-resonant configurations
    are physically meaningful and never auto-selected."""

    pump1: float
    pump2: float

    @property
    def nearest(self) -> float:
        return min(self.pump1, self.pump2)


def resonance_residual(model: CrystalModel, pump: PumpConfig, omega_offset=0.0) -> ResidualPair:
    """Distance of the configuration from either resonance at one frequency.

    The qy components cancel by the branch pairing q0y(-Omega) = -q0y(Omega),
    so only the x defect remains.
    """
    q1, q2 = (m.qx for m in pump.pump_modes(model))
    total = shared_qx(model, pump, omega_offset) + shared_qx(model, pump, -omega_offset)
    return ResidualPair(pump1=float(abs(total - q1)), pump2=float(abs(total - q2)))


def poynting_angle(model: CrystalModel, pump: PumpConfig) -> float:
    """Transverse-x direction of the pump carrier's energy flux.

    The carrier propagates at the mean tilt; its Poynting vector walks off
    by rho in the principal plane, whose transverse projection along the
    tilt direction is rho sin(beta):  theta_S = (theta_p1+theta_p2)/2
    - rho_gamma sin(beta).  At beta = +-pi/2 the geometry is planar and at
    resonance theta_S coincides with one of the pump directions.
    """
    if model.kind is CrystalKind.PPLT_TYPE0:
        return pump.theta_mean
    gbar_angle = disp.pump_gamma(pump.theta_mean, pump.beta, model.cut_angle_gamma0)
    rho = disp.walk_off(model, gbar_angle)
    return float(pump.theta_mean - rho * np.sin(pump.beta))


def mismatch_tolerance(crystal_length_um: float) -> float:
    """|D| below which a mode counts as phase matched for a crystal of the
    given length: one tenth of the 2*pi/L_c phase-matching width."""
    return 2.0 * np.pi / (10.0 * crystal_length_um)


def solve_cluster(
    model: CrystalModel,
    pump: PumpConfig,
    omega_offset,
    y_branch="plus",
    crystal_length_um=4000.0,
) -> Optional[ModeCluster]:
    """Locate the cluster seeded by the shared mode at one frequency.

    Returns a triplet, upgraded to a quadruplet when one coupled partner is
    itself phase matched with the other pump (the resonance), or None when
    the emission circles do not intersect.
    """
    w0 = shared_mode(model, pump, omega_offset, y_branch)
    if w0 is None:
        return None
    p1, p2 = pump.pump_modes(model)
    w_b, w_c = coupled_modes(model, pump, w0)
    tol = mismatch_tolerance(crystal_length_um)

    d1 = mismatch(model, p1, w0, MismatchMethod.PARAXIAL, pump.beta).value
    d2 = mismatch(model, p2, w0, MismatchMethod.PARAXIAL, pump.beta).value
    cross_b = mismatch(model, p2, w_b, MismatchMethod.PARAXIAL, pump.beta).value
    cross_c = mismatch(model, p1, w_c, MismatchMethod.PARAXIAL, pump.beta).value

    residuals = {
        "shared_pump1": float(d1),
        "shared_pump2": float(d2),
        "coupled_b_pump2": float(cross_b),
        "coupled_c_pump1": float(cross_c),
    }
    merged = None
    if abs(cross_b) < tol:
        merged = "b"
    elif abs(cross_c) < tol:
        merged = "c"
    if merged is not None:
        conj = shared_mode(model, pump, -omega_offset, y_branch)
        return ModeCluster(
            kind="quadruplet",
            shared=w0,
            coupled_b=w_b,
            coupled_c=w_c,
            residuals=residuals,
            y_branch=y_branch,
            shared_conjugate=conj,
            merged_with=merged,
        )
    return ModeCluster(
        kind="triplet",
        shared=w0,
        coupled_b=w_b,
        coupled_c=w_c,
        residuals=residuals,
        y_branch=y_branch,
    )


def planar_shared_omega(model: CrystalModel, pump: PumpConfig, omega_max, n_scan=400):
    """Frequency at which the shared mode crosses the qy = 0 plane.

    In the reduced 2D+1 geometry shared modes exist only where the two
    emission curves in the (qx, Omega) plane intersect, i.e. where the
    circle-intersection radicand changes sign.  Returns the smallest
    positive root, or None if there is no crossing below omega_max.
    """
    from scipy.optimize import brentq

    p1, _ = pump.pump_modes(model)

    def radicand(om):
        q0x = shared_qx(model, pump, om)
        circ = surface_radius(model, p1, om, pump.beta)
        return circ.F - (q0x - circ.center_qx) ** 2

    oms = np.linspace(1e-4, omega_max, n_scan)
    vals = [radicand(o) for o in oms]
    for i in range(len(oms) - 1):
        if vals[i] == 0.0:
            return float(oms[i])
        if vals[i] * vals[i + 1] < 0.0:
            return float(brentq(radicand, oms[i], oms[i + 1], xtol=1e-12))
    return None


def enumerate_clusters(
    model: CrystalModel,
    pump: PumpConfig,
    omega_grid,
    branches=("plus", "minus"),
    crystal_length_um=4000.0,
):
    """All clusters over a frequency grid and the requested y branches."""
    clusters = []
    for omega in omega_grid:
        for branch in branches:
            cl = solve_cluster(model, pump, omega, branch, crystal_length_um)
            if cl is not None:
                clusters.append(cl)
    return clusters
