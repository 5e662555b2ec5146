"""Refractive indices, wavenumbers and pump-geometry relations.

Two reference media are built in:

* beta-barium borate (BBO), type I e->oo, with the Sellmeier fit of
  Kato, IEEE J. Quantum Electron. 22, 1013 (1986).  Temperature
  independent.
* MgO-doped lithium tantalate for the periodically poled type 0 e->ee
  configuration, with the temperature-dependent Sellmeier fit of
  Dolev et al., Appl. Phys. B 96, 423 (2009), DOI 10.1007/s00340-009-3502-3.

Additional coefficient sets can be supplied at runtime from a key-value
config file (see :func:`register_sellmeier_config`), so no code change is
needed to model another crystal.

Conventions: wavelengths in um, angles in rad, temperatures in deg C,
wavenumbers in um^-1.  ``gamma`` always denotes the angle between a wave
vector and the optical axis of the uniaxial medium.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .units import C_UM_FS, omega_from_wavelength


class SellmeierForm(enum.Enum):
    """Supported functional forms for n^2(lambda[, T])."""

    # n^2 = A + B/(lambda^2 - C) + D*lambda^2
    THREE_TERM = "three_term"
    # n^2 = a0 + b0 f + (a1 + b1 f)/(l^2 - (a2 + b2 f)^2)
    #          + (a3 + b3 f)/(l^2 - (a4 + b4 f)^2) - a5 l^2,
    # f = (T - 24.5)(T + 24.5 + 2*273.16)
    THERMAL_TWO_POLE = "thermal_two_pole"


@dataclass(frozen=True)
class SellmeierSet:
    """One dispersion fit: coefficients per polarization plus provenance."""

    name: str
    form: SellmeierForm
    ordinary: tuple
    extraordinary: tuple
    window_um: tuple  # accepted wavelength range (lo, hi)
    citation: str
    thermal_b_ordinary: tuple = ()
    thermal_b_extraordinary: tuple = ()

    def index(self, wavelength, polarization, temperature=20.0):
        coeffs = self.ordinary if polarization == "ordinary" else self.extraordinary
        if self.form is SellmeierForm.THREE_TERM:
            a, b, c, d = coeffs
            l2 = wavelength * wavelength
            return np.sqrt(a + b / (l2 - c) + d * l2)
        bcoef = (
            self.thermal_b_ordinary
            if polarization == "ordinary"
            else self.thermal_b_extraordinary
        )
        a = coeffs
        b = bcoef
        f = (temperature - 24.5) * (temperature + 24.5 + 2.0 * 273.16)
        l2 = wavelength * wavelength
        n2 = (
            a[0]
            + b[0] * f
            + (a[1] + b[1] * f) / (l2 - (a[2] + b[2] * f) ** 2)
            + (a[3] + b[3] * f) / (l2 - (a[4] + b[4] * f) ** 2)
            - a[5] * l2
        )
        return np.sqrt(n2)


# Kato 1986 fit for beta-BaB2O4.  The published fit covers 0.2128-1.0642 um;
# the accepted window is extended into the near IR where the same fit is
# routinely used for down-conversion design (signal band of the reference
# setup reaches 2.1 um).
BBO_KATO_1986 = SellmeierSet(
    name="bbo_kato1986",
    form=SellmeierForm.THREE_TERM,
    ordinary=(2.7359, 0.01878, 0.01822, -0.01354),
    extraordinary=(2.3753, 0.01224, 0.01667, -0.01516),
    window_um=(0.22, 2.2),
    citation="K. Kato, IEEE J. Quantum Electron. 22, 1013 (1986)",
)

# Dolev et al. 2009 fit for MgO-doped lithium tantalate (thermal form).
SLT_DOLEV_2009 = SellmeierSet(
    name="slt_dolev2009",
    form=SellmeierForm.THERMAL_TWO_POLE,
    ordinary=(4.5082, 0.084888, 0.19552, 1.1570, 8.2517, 0.0237),
    extraordinary=(4.5615, 0.08488, 0.1927, 5.5832, 8.3067, 0.021696),
    thermal_b_ordinary=(2.0704e-8, 1.4449e-8, 1.597e-8, 4.768e-6, 1.1127e-5),
    thermal_b_extraordinary=(4.782e-7, 3.0913e-8, 2.7326e-8, 1.4837e-5, 1.3647e-7),
    window_um=(0.4, 4.0),
    citation="I. Dolev et al., Appl. Phys. B 96, 423 (2009)",
)

_SELLMEIER_REGISTRY = {
    BBO_KATO_1986.name: BBO_KATO_1986,
    SLT_DOLEV_2009.name: SLT_DOLEV_2009,
}


def register_sellmeier(sset: SellmeierSet):
    _SELLMEIER_REGISTRY[sset.name] = sset


def get_sellmeier(name: str) -> SellmeierSet:
    try:
        return _SELLMEIER_REGISTRY[name]
    except KeyError:
        raise KeyError(
            f"unknown Sellmeier set {name!r}; known: {sorted(_SELLMEIER_REGISTRY)}"
        ) from None


def register_sellmeier_config(path):
    """Load extra Sellmeier sets from a key-value config file.

    Expected sections ``[sellmeier.<name>]`` with keys ``form``,
    ``ordinary``, ``extraordinary`` (comma-separated floats), ``window_um``,
    ``citation`` and, for the thermal form, ``thermal_b_ordinary`` /
    ``thermal_b_extraordinary``.  Returns the list of registered names.
    """
    import configparser

    parser = configparser.ConfigParser()
    with open(path) as fh:
        parser.read_file(fh)
    names = []
    for section in parser.sections():
        if not section.startswith("sellmeier."):
            continue
        sec = parser[section]
        name = section.split(".", 1)[1]

        def floats(key, sec=sec):
            return tuple(float(v) for v in sec[key].split(","))

        sset = SellmeierSet(
            name=name,
            form=SellmeierForm(sec["form"]),
            ordinary=floats("ordinary"),
            extraordinary=floats("extraordinary"),
            window_um=floats("window_um"),
            citation=sec.get("citation", "user supplied"),
            thermal_b_ordinary=floats("thermal_b_ordinary")
            if "thermal_b_ordinary" in sec
            else (),
            thermal_b_extraordinary=floats("thermal_b_extraordinary")
            if "thermal_b_extraordinary" in sec
            else (),
        )
        register_sellmeier(sset)
        names.append(name)
    return names


class CrystalKind(enum.Enum):
    PPLT_TYPE0 = "pplt"
    BBO_TYPE1 = "bbo"


@dataclass(frozen=True)
class WaveIndexQuery:
    """A single index lookup: wavelength, polarization and, for the
    extraordinary wave, the angle to the optical axis."""

    wavelength: float  # um
    polarization: str = "ordinary"  # "ordinary" | "extraordinary"
    gamma: float = 0.5 * np.pi  # rad, used only for extraordinary waves


@dataclass(frozen=True)
class CrystalModel:
    """Dispersion + geometry of one of the two crystal configurations.

    For the poled crystal (type 0) the grating vector G_z = 2*pi/poling_period
    enters the longitudinal momentum balance; for BBO there is no poling and
    G_z = 0.  ``cut_angle_gamma0`` is the angle between the mean propagation
    direction z and the optical axis.
    """

    kind: CrystalKind
    sellmeier: str
    cut_angle_gamma0: float  # rad
    temperature: float  # deg C
    pump_wavelength: float  # um
    poling_period: Optional[float] = None  # um, None for BBO

    def __post_init__(self):
        if self.kind is CrystalKind.PPLT_TYPE0:
            if self.poling_period is None or self.poling_period <= 0:
                raise ValueError("PPLT model requires poling_period > 0")
        else:
            if self.poling_period is not None:
                raise ValueError("BBO model must not carry a poling period (G_z = 0)")
        if not 0.0 < self.cut_angle_gamma0 < 0.5 * np.pi:
            raise ValueError("cut angle must lie in (0, pi/2)")

    # -- factories -------------------------------------------------------

    @classmethod
    def pplt(
        cls,
        temperature=75.0,
        poling_period=None,
        pump_wavelength=0.532,
        sellmeier=SLT_DOLEV_2009.name,
    ):
        """Periodically poled LiTaO3 slab, pumps in the plane perpendicular
        to the optical axis (non-critical phase matching).

        ``poling_period=None`` selects the period that exactly phase-matches
        the collinear degenerate process at the given temperature.
        """
        model = cls(
            kind=CrystalKind.PPLT_TYPE0,
            sellmeier=sellmeier,
            cut_angle_gamma0=0.5 * np.pi * (1 - 1e-12),  # optical axis ~ transverse
            temperature=temperature,
            pump_wavelength=pump_wavelength,
            poling_period=1.0,  # placeholder, replaced below
        )
        if poling_period is None:
            poling_period = matched_poling_period(model)
        return replace(model, poling_period=poling_period)

    @classmethod
    def bbo(
        cls,
        cut_angle=None,
        pump_wavelength=0.352,
        temperature=20.0,
        sellmeier=BBO_KATO_1986.name,
    ):
        """BBO crystal cut for the collinear degenerate type I process.

        ``cut_angle=None`` solves the exact collinear phase-matching angle
        (about 33.44 deg for a 352 nm pump with the embedded fit).
        """
        model = cls(
            kind=CrystalKind.BBO_TYPE1,
            sellmeier=sellmeier,
            cut_angle_gamma0=np.radians(33.44),  # placeholder if solving below
            temperature=temperature,
            pump_wavelength=pump_wavelength,
            poling_period=None,
        )
        if cut_angle is None:
            cut_angle = collinear_cut_angle(model)
        return replace(model, cut_angle_gamma0=cut_angle)

    # -- basic properties -------------------------------------------------

    @property
    def grating_vector(self):
        """G_z = 2*pi/poling_period, or 0 without poling [um^-1]."""
        if self.poling_period is None:
            return 0.0
        return 2.0 * np.pi / self.poling_period

    @property
    def omega_pump(self):
        return omega_from_wavelength(self.pump_wavelength)

    @property
    def omega_signal(self):
        return 0.5 * self.omega_pump

    @property
    def signal_wavelength(self):
        return 2.0 * self.pump_wavelength


def _check_window(model: CrystalModel, wavelength):
    sset = get_sellmeier(model.sellmeier)
    lo, hi = sset.window_um
    wl = np.asarray(wavelength)
    if np.any(wl < lo) or np.any(wl > hi):
        raise ValueError(
            f"wavelength {wavelength} um outside the validity window "
            f"[{lo}, {hi}] um of Sellmeier set {sset.name!r}"
        )
    return sset


def refractive_index(model: CrystalModel, query: WaveIndexQuery):
    """Refractive index for a query; uniaxial angle dependence applied for
    extraordinary waves: 1/n_e(gamma)^2 = cos^2/n_o^2 + sin^2/n_e(pi/2)^2."""
    if query.polarization not in ("ordinary", "extraordinary"):
        raise ValueError("polarization must be 'ordinary' or 'extraordinary'")
    sset = _check_window(model, query.wavelength)
    temp = model.temperature
    if query.polarization == "ordinary":
        return sset.index(query.wavelength, "ordinary", temp)
    if not (np.all(np.asarray(query.gamma) >= 0.0) and np.all(np.asarray(query.gamma) <= 0.5 * np.pi + 1e-12)):
        raise ValueError("gamma must lie in [0, pi/2]")
    n_o = sset.index(query.wavelength, "ordinary", temp)
    n_e = sset.index(query.wavelength, "extraordinary", temp)
    inv2 = np.cos(query.gamma) ** 2 / n_o**2 + np.sin(query.gamma) ** 2 / n_e**2
    return 1.0 / np.sqrt(inv2)


def signal_index(model: CrystalModel, wavelength):
    """Index seen by the down-converted field.

    Ordinary for type I BBO; extraordinary at gamma ~ pi/2 for the type 0
    poled crystal (all waves polarized along the optical axis, propagating
    in the perpendicular plane).
    """
    sset = _check_window(model, wavelength)
    if model.kind is CrystalKind.BBO_TYPE1:
        return sset.index(wavelength, "ordinary", model.temperature)
    return sset.index(wavelength, "extraordinary", model.temperature)


def signal_wavenumber(model: CrystalModel, omega_offset=0.0):
    """Signal wavenumber k_s(Omega) [um^-1] at frequency omega_s + Omega."""
    omega = model.omega_signal + np.asarray(omega_offset)
    if np.any(omega <= 0):
        raise ValueError("omega_s + Omega must be positive")
    wavelength = 2.0 * np.pi * C_UM_FS / omega
    return signal_index(model, wavelength) * omega / C_UM_FS


def pump_index(model: CrystalModel, gamma=None, omega_offset=0.0):
    """Pump index: extraordinary at angle gamma (default: the cut angle)."""
    if gamma is None:
        gamma = model.cut_angle_gamma0
    omega = model.omega_pump + omega_offset
    wavelength = 2.0 * np.pi * C_UM_FS / omega
    return refractive_index(
        model, WaveIndexQuery(wavelength, "extraordinary", gamma)
    )


def pump_wavenumber(model: CrystalModel, gamma=None, omega_offset=0.0):
    """Pump wavenumber k_p [um^-1] at angle gamma to the optical axis."""
    omega = model.omega_pump + omega_offset
    return pump_index(model, gamma, omega_offset) * omega / C_UM_FS


def pump_gamma(theta_p, beta, gamma0):
    """Angle between a tilted pump and the optical axis.

    cos(gamma) = cos(theta_p) cos(gamma0) + sin(theta_p) sin(gamma0) sin(beta),
    where theta_p is the tilt from the z axis and beta the rotation of the
    tilt direction in the crystal input facet.  Paraxial use only
    (|theta_p| < 0.2 rad).
    """
    theta_p = np.asarray(theta_p, dtype=float)
    if np.any(np.abs(theta_p) >= 0.2):
        raise ValueError("pump tilt outside the paraxial range |theta| < 0.2 rad")
    cosg = np.cos(theta_p) * np.cos(gamma0) + np.sin(theta_p) * np.sin(gamma0) * np.sin(beta)
    return np.arccos(np.clip(cosg, -1.0, 1.0))


def walk_off(model: CrystalModel, gamma, wavelength=None):
    """Walk-off angle rho = -(1/k)(dk/dgamma) of the extraordinary wave.

    Analytic derivative of the uniaxial index ellipsoid:
    rho(gamma) = (n_e(gamma)^2 / 2) sin(2 gamma) (1/n_e^2 - 1/n_o^2) with the
    principal indices at the given wavelength (pump wavelength by default).
    Positive for a negative uniaxial crystal; zero on the ellipsoid axes.
    """
    if wavelength is None:
        wavelength = model.pump_wavelength
    sset = _check_window(model, wavelength)
    n_o = sset.index(wavelength, "ordinary", model.temperature)
    n_e = sset.index(wavelength, "extraordinary", model.temperature)
    n_g = refractive_index(model, WaveIndexQuery(wavelength, "extraordinary", gamma))
    return 0.5 * n_g**2 * np.sin(2.0 * gamma) * (1.0 / n_e**2 - 1.0 / n_o**2)


def matched_poling_period(model: CrystalModel):
    """Poling period that cancels the collinear degenerate mismatch,
    Lambda = lambda_p / (n(lambda_p) - n(2 lambda_p)), at the model's
    temperature."""
    n_p = signal_index(model, model.pump_wavelength)
    n_s = signal_index(model, model.signal_wavelength)
    return model.pump_wavelength / (n_p - n_s)


def collinear_cut_angle(model: CrystalModel):
    """Cut angle for which the collinear degenerate type I process is
    phase matched: n_e(lambda_p, gamma) = n_o(2 lambda_p)."""
    n_target = signal_index(model, model.signal_wavelength)

    def f(gamma):
        return pump_index(model, gamma) - n_target

    return brentq(f, 1e-3, 0.5 * np.pi - 1e-3, xtol=1e-14)


@dataclass(frozen=True)
class PumpTiltRatio:
    """Rate of variation of the pump wavenumber with transverse tilt,
    Delta k_p / Delta Q_p: the exact incremental ratio between the two pump
    waves and the first-order walk-off expression evaluated at the mean
    tilt."""

    exact: float
    first_order: float


def dgamma_dtheta(theta_p, beta, gamma0):
    """d gamma / d theta_p from the exact angle relation."""
    gamma = pump_gamma(theta_p, beta, gamma0)
    return (
        -np.sin(beta) * np.cos(theta_p) * np.sin(gamma0)
        + np.sin(theta_p) * np.cos(gamma0)
    ) / np.sin(gamma)


def dkp_dQp(model: CrystalModel, theta_p1, theta_p2, beta) -> PumpTiltRatio:
    """Delta k_p / Delta Q_p for a pump pair tilted at theta_p1, theta_p2.

    The poled configuration is non-critical: the pump wavenumbers do not
    depend on the tilt and both entries are exactly zero.  For BBO the exact
    entry is (k_p2 - k_p1)/(Q_2 - Q_1) with Q_j = k_p(gamma0) sin(theta_pj),
    and the first-order entry is -rho_gamma (dgamma/dtheta) at the mean tilt.
    """
    if theta_p1 == theta_p2:
        raise ValueError("pump tilts must differ")
    if model.kind is CrystalKind.PPLT_TYPE0:
        return PumpTiltRatio(exact=0.0, first_order=0.0)
    k_ref = pump_wavenumber(model)
    g1 = pump_gamma(theta_p1, beta, model.cut_angle_gamma0)
    g2 = pump_gamma(theta_p2, beta, model.cut_angle_gamma0)
    kp1 = pump_wavenumber(model, g1)
    kp2 = pump_wavenumber(model, g2)
    q1 = k_ref * np.sin(theta_p1)
    q2 = k_ref * np.sin(theta_p2)
    exact = (kp2 - kp1) / (q2 - q1)

    tbar = 0.5 * (theta_p1 + theta_p2)
    gbar = pump_gamma(tbar, beta, model.cut_angle_gamma0)
    rho = walk_off(model, gbar)
    first = -rho * dgamma_dtheta(tbar, beta, model.cut_angle_gamma0)
    return PumpTiltRatio(exact=float(exact), first_order=float(first))


def pump_transverse_q(model: CrystalModel, theta_p):
    """Transverse wavevector Q = k_p(gamma0) sin(theta_p) [um^-1]."""
    return pump_wavenumber(model) * np.sin(theta_p)


def group_index(model: CrystalModel, wavelength):
    """Group index n_g = n - lambda dn/dlambda of the signal-polarized wave
    (central difference on the embedded fit)."""
    h = 1e-6
    n = signal_index(model, wavelength)
    dn = (signal_index(model, wavelength + h) - signal_index(model, wavelength - h)) / (2 * h)
    return n - wavelength * dn


def signal_gvd(model: CrystalModel, omega_offset=0.0):
    """k''_s = d^2 k_s / d Omega^2 [fs^2/um] by central difference."""
    h = 1e-4
    return (
        signal_wavenumber(model, omega_offset + h)
        - 2.0 * signal_wavenumber(model, omega_offset)
        + signal_wavenumber(model, omega_offset - h)
    ) / h**2
