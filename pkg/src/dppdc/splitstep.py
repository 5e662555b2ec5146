"""Split-step spectral simulator of the coupled pump/signal propagation.

The classical counterpart of the coupled equations is integrated on an
(x, y, t) grid by Strang splitting: half a linear step, one nonlinear step,
half a linear step.  The linear step applies the exact dispersive phase
e^{i k_z dz} per spectral bin in a frame co-moving with the signal group
velocity; the nonlinear step is the pointwise midpoint update of

    dA_s/dz = sigma A_p A_s^*  e^{-i delta0 z}
    dA_p/dz = -(sigma/2) A_s^2 e^{+i delta0 z}

where delta0 is the residual carrier mismatch (zero for a design-matched
crystal) and the -1/2 halves the pump photon loss per converted pair, so
N_p + N_s/2 is conserved.  Spontaneous emission is emulated by half a
photon of Gaussian noise per signal mode at the input (Wigner-style
seeding); this reproduces mean intensities of spontaneous down-conversion
and is a classical emulation, not a full quantum simulation.

The hot inner loop (the midpoint update) is provided both as a compiled
Cython kernel and as a NumPy fallback; see `dppdc._kernels`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.fft import fftfreq, fftn, ifftn

from . import dispersion as disp
from ._kernels import nl_midpoint_depleted, nl_midpoint_undepleted
from .dispersion import CrystalKind, CrystalModel
from .units import C_UM_FS


class NumericalInstability(RuntimeError):
    """Raised when the integration blows up; carries the z position."""

    def __init__(self, message, z):
        super().__init__(f"{message} (z = {z:.1f} um)")
        self.z = z


@dataclass(frozen=True)
class SimGrid:
    """Discretization of the transverse/temporal window and of z."""

    nx: int
    nt: int
    dx: float  # um
    dt: float  # fs
    crystal_length: float  # um
    n_steps: int
    ny: int = 1
    dy: float = 1.0  # um

    def __post_init__(self):
        for n, name in ((self.nx, "nx"), (self.nt, "nt")):
            if n < 2 or (n & (n - 1)) != 0:
                raise ValueError(f"{name} must be a power of two >= 2")
        if self.ny != 1 and (self.ny & (self.ny - 1)) != 0:
            raise ValueError("ny must be 1 or a power of two")
        if self.n_steps < 1:
            raise ValueError("need at least one z step")

    @property
    def dz(self):
        return self.crystal_length / self.n_steps

    @property
    def shape(self):
        return (self.nx, self.ny, self.nt)

    @property
    def cell_volume(self):
        vol = self.dx * self.dt
        if self.ny > 1:
            vol *= self.dy
        return vol

    def axes(self):
        x = (np.arange(self.nx) - self.nx // 2) * self.dx
        y = (np.arange(self.ny) - self.ny // 2) * self.dy
        t = (np.arange(self.nt) - self.nt // 2) * self.dt
        return x, y, t

    def spectral_axes(self):
        qx = 2.0 * np.pi * fftfreq(self.nx, self.dx)
        qy = 2.0 * np.pi * fftfreq(self.ny, self.dy) if self.ny > 1 else np.zeros(1)
        om = 2.0 * np.pi * fftfreq(self.nt, self.dt)
        return qx, qy, om


@dataclass(frozen=True)
class PumpPulseSpec:
    """Two tilted Gaussian pump pulses sharing one envelope."""

    waist: float  # um, 1/e amplitude radius
    duration: float  # fs, 1/e amplitude half width
    alpha1: complex
    alpha2: complex
    theta_p1: float  # rad
    theta_p2: float  # rad
    beta: float = 0.0
    chi1: float = 1.0  # um^-1 per unit amplitude
    chi2: float = 1.0

    def gains(self):
        """(g1, g2, gbar) in um^-1."""
        g1 = self.chi1 * abs(self.alpha1)
        g2 = self.chi2 * abs(self.alpha2)
        return g1, g2, float(np.hypot(g1, g2))


@dataclass
class FieldState:
    """Pump and signal envelopes on the grid; leading axes may batch
    independent realizations of the signal."""

    A_s: np.ndarray
    A_p: np.ndarray
    z: float = 0.0


@dataclass
class FarFieldRecord:
    """Realization-averaged far-field intensity (photons per mode) at each
    checkpoint, plus the axes and run diagnostics."""

    qx: np.ndarray
    qy: np.ndarray
    omega: np.ndarray
    checkpoints: dict  # z -> ndarray (nx, ny, nt)
    evanescent_energy_fraction: float
    evanescent_flag: bool
    realizations: int
    rng_seed: Optional[int]
    grid: SimGrid

    def final(self):
        zmax = max(self.checkpoints)
        return zmax, self.checkpoints[zmax]


class SplitStepSim:
    """Precomputed spectral phases and masks for one (model, grid, pumps)
    combination.  One instance owns its arrays exclusively; parallelism
    happens across stochastic realizations batched in the leading axis."""

    def __init__(self, model: CrystalModel, grid: SimGrid, pumps: PumpPulseSpec, sigma=None):
        self.model = model
        self.grid = grid
        self.pumps = pumps
        if sigma is None:
            sigma = max(pumps.chi1, pumps.chi2)
        if sigma <= 0:
            raise ValueError("coupling sigma must be positive")
        self.sigma = float(sigma)

        qx, qy, om = grid.spectral_axes()
        QX, QY, OM = np.meshgrid(qx, qy, om, indexing="ij")
        q2 = QX**2 + QY**2

        k_ref = disp.pump_wavenumber(model)
        q_need = 2.0 * k_ref * max(abs(pumps.theta_p1), abs(pumps.theta_p2))
        if np.abs(qx).max() <= q_need:
            raise ValueError(
                f"spectral window too small for the pump tilts: max|qx| = "
                f"{np.abs(qx).max():.3f} <= {q_need:.3f} um^-1"
            )
        if pumps.waist < 8 * grid.dx or pumps.duration < 8 * grid.dt:
            raise ValueError("pump waist/duration not resolvable (need >= 8 samples)")

        self._ks0 = disp.signal_wavenumber(model, 0.0)
        self._kp0 = k_ref
        h = 1e-5
        self._inv_vg = (
            disp.signal_wavenumber(model, h) - disp.signal_wavenumber(model, -h)
        ) / (2 * h)

        self.phi_s, self.evanescent_s = self._signal_phase(OM, q2)
        self.phi_p, self.evanescent_p = self._pump_phase(QX, OM, q2)

        qmaxx = np.abs(qx).max()
        ommax = np.abs(om).max()
        self.dealias = (np.abs(QX) <= (2.0 / 3.0) * qmaxx) & (
            np.abs(OM) <= (2.0 / 3.0) * ommax
        )
        if grid.ny > 1:
            self.dealias &= np.abs(QY) <= (2.0 / 3.0) * np.abs(qy).max()

        # residual carrier mismatch of the design point
        self.delta0 = float(
            2.0 * self._ks0 - self._kp0 + model.grating_vector
        )
        self._qx, self._qy, self._om = qx, qy, om
        self._zeroed_energy = 0.0

    # -- dispersive phases -------------------------------------------------

    def _signal_phase(self, OM, q2):
        sset = disp.get_sellmeier(self.model.sellmeier)
        lo, hi = sset.window_um
        omega_tot = self.model.omega_signal + OM
        lam = np.where(omega_tot > 0, 2.0 * np.pi * C_UM_FS / np.maximum(omega_tot, 1e-9), np.inf)
        valid = (lam >= lo) & (lam <= hi)
        lam_safe = np.clip(lam, lo, hi)
        n = disp.signal_index(self.model, lam_safe)
        k = n * omega_tot / C_UM_FS
        kz2 = k * k - q2
        prop = valid & (kz2 > 0)
        phase = np.where(prop, np.sqrt(np.where(prop, kz2, 1.0)) - self._ks0 - self._inv_vg * OM, 0.0)
        return phase, ~prop

    def _pump_phase(self, QX, OM, q2):
        model = self.model
        sset = disp.get_sellmeier(model.sellmeier)
        lo, hi = sset.window_um
        omega_tot = model.omega_pump + OM
        lam = 2.0 * np.pi * C_UM_FS / np.maximum(omega_tot, 1e-9)
        valid = (omega_tot > 0) & (lam >= lo) & (lam <= hi)
        lam_safe = np.clip(lam, lo, hi)
        if model.kind is CrystalKind.PPLT_TYPE0:
            n = sset.index(lam_safe, "extraordinary", model.temperature)
        else:
            # tilt-dependent extraordinary index: the walk-off enters here
            theta = np.arcsin(np.clip(QX / self._kp0, -0.5, 0.5))
            gamma = np.arccos(
                np.clip(
                    np.cos(theta) * np.cos(model.cut_angle_gamma0)
                    + np.sin(theta) * np.sin(model.cut_angle_gamma0) * np.sin(self.pumps.beta),
                    -1.0,
                    1.0,
                )
            )
            n_o = sset.index(lam_safe, "ordinary", model.temperature)
            n_e = sset.index(lam_safe, "extraordinary", model.temperature)
            n = 1.0 / np.sqrt(np.cos(gamma) ** 2 / n_o**2 + np.sin(gamma) ** 2 / n_e**2)
        k = n * omega_tot / C_UM_FS
        kz2 = k * k - q2
        prop = valid & (kz2 > 0)
        phase = np.where(prop, np.sqrt(np.where(prop, kz2, 1.0)) - self._kp0 - self._inv_vg * OM, 0.0)
        return phase, ~prop

    # -- field construction ------------------------------------------------

    def initial_pump(self) -> np.ndarray:
        """Two tilted plane-wave components under a shared Gaussian envelope;
        per-pump nonlinearity is folded into the component amplitudes."""
        p = self.pumps
        x, y, t = self.grid.axes()
        X, Y, T = np.meshgrid(x, y, t, indexing="ij")
        r2 = X**2 if self.grid.ny == 1 else X**2 + Y**2
        env = np.exp(-r2 / p.waist**2 - T**2 / p.duration**2)
        q1 = disp.pump_transverse_q(self.model, p.theta_p1)
        q2 = disp.pump_transverse_q(self.model, p.theta_p2)
        a1 = p.alpha1 * (p.chi1 / self.sigma)
        a2 = p.alpha2 * (p.chi2 / self.sigma)
        return env * (a1 * np.exp(1j * q1 * X) + a2 * np.exp(1j * q2 * X))

    def vacuum_noise(self, rng: np.random.Generator, realizations: int) -> np.ndarray:
        """Half a photon per mode of complex Gaussian noise."""
        shape = (realizations, *self.grid.shape)
        scale = np.sqrt(1.0 / (4.0 * self.grid.cell_volume))
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * scale

    def coherent_seed(self, amplitude, waist=None, duration=None, realizations=1) -> np.ndarray:
        """Deterministic Gaussian signal seed (classical injection)."""
        x, y, t = self.grid.axes()
        X, Y, T = np.meshgrid(x, y, t, indexing="ij")
        w = waist if waist is not None else self.pumps.waist
        tau = duration if duration is not None else self.pumps.duration
        if self.grid.ny == 1:
            env = np.exp(-(X**2) / w**2 - T**2 / tau**2)
        else:
            env = np.exp(-(X**2 + Y**2) / w**2 - T**2 / tau**2)
        seed = amplitude * env
        return np.broadcast_to(seed, (realizations, *self.grid.shape)).copy()

    # -- elementary steps ---------------------------------------------------

    def _apply_phase(self, A, phase_dz_masked):
        spec = fftn(A, axes=(-3, -2, -1), workers=_fft_workers())
        spec *= phase_dz_masked
        return ifftn(spec, axes=(-3, -2, -1), workers=_fft_workers())

    def linear_multiplier(self, which: str, dz: float, dealias=False):
        if which == "signal":
            phase, dead = self.phi_s, self.evanescent_s
        else:
            phase, dead = self.phi_p, self.evanescent_p
        mult = np.exp(1j * phase * dz)
        mult = np.where(dead, 0.0, mult)
        if dealias:
            mult = mult * self.dealias
        return mult

    def zeroed_energy_fraction(self, A, which="pump") -> float:
        """Fraction of spectral energy sitting on evanescent bins."""
        dead = self.evanescent_p if which == "pump" else self.evanescent_s
        if not dead.any():
            return 0.0
        spec = np.abs(fftn(A, axes=(-3, -2, -1))) ** 2
        total = spec.sum()
        if total == 0:
            return 0.0
        return float(spec[..., dead].sum() / total)


def _fft_workers():
    import os

    try:
        return max(1, int(os.environ.get("DPPDC_THREADS", "2")))
    except ValueError:
        return 2


def linear_step(sim: SplitStepSim, state: FieldState, dz: float) -> FieldState:
    """Exact dispersive phase per spectral bin; unitary on propagating bins,
    evanescent bins are hard-zeroed."""
    state.A_s = sim._apply_phase(state.A_s, sim.linear_multiplier("signal", dz))
    state.A_p = sim._apply_phase(state.A_p, sim.linear_multiplier("pump", dz))
    state.z += dz
    return state


def nonlinear_step(sim: SplitStepSim, state: FieldState, dz: float, deplete=True) -> FieldState:
    """Pointwise midpoint update of the coupled nonlinear equations.

    With ``deplete=False`` the pump is frozen during the substep (its linear
    propagation is untouched), which realizes the parametric approximation.
    ``state.z`` is read as the start of the integration interval for the
    mismatch phase and is not advanced (the interleaved linear steps own the
    z bookkeeping in a split-step composition).
    """
    c1 = np.exp(-1j * sim.delta0 * state.z)
    c2 = np.exp(-1j * sim.delta0 * (state.z + 0.5 * dz))
    if deplete:
        if sim.pumps.chi1 != sim.pumps.chi2:
            raise ValueError(
                "per-pump nonlinearity requires the undepleted-pump limit"
            )
        nl_midpoint_depleted(state.A_s, state.A_p, sim.sigma, dz, c1, c2)
    else:
        nl_midpoint_undepleted(state.A_s, state.A_p, sim.sigma, dz, c1, c2)
    return state


def _photon_sums(state: FieldState, cell):
    n_s = float(np.sum(np.abs(state.A_s) ** 2)) * cell
    n_p = float(np.sum(np.abs(state.A_p) ** 2)) * cell
    return n_s, n_p


def run_simulation(
    sim: SplitStepSim,
    seed: str = "stochastic_vacuum",
    rng_seed: Optional[int] = 0,
    realizations: int = 1,
    checkpoint_every: Optional[int] = None,
    deplete: bool = False,
    seed_amplitude: complex = 0.0,
    energy_balance_tol: float = 1e-3,
) -> FarFieldRecord:
    """Integrate the full crystal and record realization-averaged far-field
    intensities (photons per mode) at regular z checkpoints.

    Deterministic for a fixed ``rng_seed``.  With depletion on, a per-step
    Manley-Rowe drift beyond ``energy_balance_tol`` aborts with the z
    position (step-size instability).
    """
    grid = sim.grid
    if checkpoint_every is None:
        checkpoint_every = max(1, grid.n_steps // 10)
    rng = np.random.default_rng(rng_seed)
    if seed == "stochastic_vacuum":
        A_s = sim.vacuum_noise(rng, realizations)
    elif seed == "coherent_seed":
        A_s = sim.coherent_seed(seed_amplitude, realizations=realizations)
    else:
        raise ValueError("seed must be 'stochastic_vacuum' or 'coherent_seed'")

    Ap0 = sim.initial_pump()
    ev_frac = sim.zeroed_energy_fraction(Ap0)

    dz = grid.dz
    cell = grid.cell_volume
    nmodes = grid.nx * grid.ny * grid.nt
    workers = _fft_workers()

    mult_s_half = sim.linear_multiplier("signal", 0.5 * dz)
    mult_s_half_deal = sim.linear_multiplier("signal", 0.5 * dz, dealias=True)
    mult_p_half = sim.linear_multiplier("pump", 0.5 * dz)
    mult_p_half_deal = sim.linear_multiplier("pump", 0.5 * dz, dealias=True)

    checkpoints = {}
    if deplete:
        A_p = np.broadcast_to(Ap0, (realizations, *grid.shape)).copy()
        total0 = None
    else:
        Ap_spec0 = fftn(Ap0, axes=(-3, -2, -1), workers=workers)
        Ap_spec0[sim.evanescent_p] = 0.0
        phase_p = sim.phi_p

    for step in range(grid.n_steps):
        z0 = step * dz
        if deplete:
            A_s = ifftn(
                fftn(A_s, axes=(-3, -2, -1), workers=workers) * mult_s_half,
                axes=(-3, -2, -1),
                workers=workers,
            )
            A_p = ifftn(
                fftn(A_p, axes=(-3, -2, -1), workers=workers) * mult_p_half,
                axes=(-3, -2, -1),
                workers=workers,
            )
            n_s0, n_p0 = float(np.sum(np.abs(A_s) ** 2)), float(np.sum(np.abs(A_p) ** 2))
            if total0 is None:
                total0 = n_p0 + 0.5 * n_s0
            c1 = np.exp(-1j * sim.delta0 * (z0 + 0.5 * dz))
            nl_midpoint_depleted(A_s, A_p, sim.sigma, dz, c1, c1)
            n_s1, n_p1 = float(np.sum(np.abs(A_s) ** 2)), float(np.sum(np.abs(A_p) ** 2))
            drift = abs((n_p1 + 0.5 * n_s1) - (n_p0 + 0.5 * n_s0)) / max(total0, 1e-300)
            if not np.isfinite(drift) or drift > energy_balance_tol:
                raise NumericalInstability(
                    f"energy balance violated by {drift:.2e} in one step", z0
                )
            A_s = ifftn(
                fftn(A_s, axes=(-3, -2, -1), workers=workers) * mult_s_half_deal,
                axes=(-3, -2, -1),
                workers=workers,
            )
            A_p = ifftn(
                fftn(A_p, axes=(-3, -2, -1), workers=workers) * mult_p_half_deal,
                axes=(-3, -2, -1),
                workers=workers,
            )
        else:
            Ap_mid = ifftn(
                Ap_spec0 * np.exp(1j * phase_p * (z0 + 0.5 * dz)),
                axes=(-3, -2, -1),
                workers=workers,
            )
            A_s = ifftn(
                fftn(A_s, axes=(-3, -2, -1), workers=workers) * mult_s_half,
                axes=(-3, -2, -1),
                workers=workers,
            )
            c1 = np.exp(-1j * sim.delta0 * (z0 + 0.5 * dz))
            nl_midpoint_undepleted(A_s, Ap_mid, sim.sigma, dz, c1, c1)
            A_s = ifftn(
                fftn(A_s, axes=(-3, -2, -1), workers=workers) * mult_s_half_deal,
                axes=(-3, -2, -1),
                workers=workers,
            )

        if not np.isfinite(A_s.reshape(-1)[:: max(1, A_s.size // 997)]).all():
            raise NumericalInstability("non-finite signal field", (step + 1) * dz)

        if (step + 1) % checkpoint_every == 0 or step + 1 == grid.n_steps:
            spec = np.abs(fftn(A_s, axes=(-3, -2, -1), workers=workers)) ** 2
            mean_spec = spec.mean(axis=0) if spec.ndim == 4 else spec
            checkpoints[(step + 1) * dz] = mean_spec * (cell / nmodes)

    return FarFieldRecord(
        qx=sim._qx,
        qy=sim._qy,
        omega=sim._om,
        checkpoints=checkpoints,
        evanescent_energy_fraction=ev_frac,
        evanescent_flag=ev_frac > 1e-9,
        realizations=realizations,
        rng_seed=rng_seed,
        grid=grid,
    )


@dataclass(frozen=True)
class WindowSpec:
    """A far-field window: centre bin indices and half widths."""

    iq: int
    iomega: int
    half_q: int = 1
    half_omega: int = 1

    def mean_intensity(self, intensity, nx, nt, iy=0):
        iq = [(self.iq + k) % nx for k in range(-self.half_q, self.half_q + 1)]
        io = [(self.iomega + k) % nt for k in range(-self.half_omega, self.half_omega + 1)]
        return float(intensity[np.ix_(iq, [iy], io)].mean())


@dataclass(frozen=True)
class GainReport:
    hot_exponent: float
    background_exponent: float
    ratio: float
    r_squared_hot: float
    r_squared_background: float
    flagged: bool  # fit quality below threshold


def _fit_exponent(zs, values, r2_min):
    zs = np.asarray(zs)
    y = np.log(np.maximum(np.asarray(values), 1e-300))
    slope, intercept = np.polyfit(zs, y, 1)
    resid = y - (slope * zs + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 0.0
    return slope, r2, r2 < r2_min


def hotspot_gain(
    record: FarFieldRecord,
    hot_window: WindowSpec,
    background_window: WindowSpec,
    z_min: float = 0.0,
    r2_min: float = 0.99,
) -> GainReport:
    """Fit exponential growth of the mean photon number in a hot-spot window
    against a background window and return the exponent ratio.

    At least three checkpoints above ``z_min`` are required; fits with
    R^2 below ``r2_min`` are flagged as non-exponential.
    """
    zs = sorted(z for z in record.checkpoints if z >= z_min)
    if len(zs) < 3:
        raise ValueError("need at least 3 checkpoints in the fit range")
    nx, nt = record.grid.nx, record.grid.nt
    hot = [hot_window.mean_intensity(record.checkpoints[z], nx, nt) - 0.5 for z in zs]
    bg = [background_window.mean_intensity(record.checkpoints[z], nx, nt) - 0.5 for z in zs]
    slope_h, r2_h, flag_h = _fit_exponent(zs, hot, r2_min)
    slope_b, r2_b, flag_b = _fit_exponent(zs, bg, r2_min)
    return GainReport(
        hot_exponent=float(slope_h),
        background_exponent=float(slope_b),
        ratio=float(slope_h / slope_b),
        r_squared_hot=float(r2_h),
        r_squared_background=float(r2_b),
        flagged=bool(flag_h or flag_b),
    )


# --- binary checkpoint format ------------------------------------------------

CHECKPOINT_MAGIC = b"DPPDCCKP"
CHECKPOINT_VERSION = 1


def write_checkpoint(path, state_or_intensity, z, grid: SimGrid):
    """Binary checkpoint: magic, version u32, dims (nx, ny, nt) u32, z f64,
    then the array as little-endian float64 (re, im interleaved for complex
    fields, plain values for intensity records)."""
    arr = np.asarray(state_or_intensity)
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(np.uint32(CHECKPOINT_VERSION).tobytes())
        for d in (grid.nx, grid.ny, grid.nt):
            fh.write(np.uint32(d).tobytes())
        fh.write(np.uint32(1 if np.iscomplexobj(arr) else 0).tobytes())
        fh.write(np.float64(z).astype("<f8").tobytes())
        if np.iscomplexobj(arr):
            fh.write(arr.astype("<c16").tobytes())
        else:
            fh.write(arr.astype("<f8").tobytes())


def read_checkpoint(path):
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != CHECKPOINT_MAGIC:
            raise ValueError("not a dppdc checkpoint file")
        version = int(np.frombuffer(fh.read(4), "<u4")[0])
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        nx, ny, nt, is_complex = (int(np.frombuffer(fh.read(4), "<u4")[0]) for _ in range(4))
        z = float(np.frombuffer(fh.read(8), "<f8")[0])
        dtype = "<c16" if is_complex else "<f8"
        data = np.frombuffer(fh.read(), dtype=dtype).reshape(nx, ny, nt)
    return data, z
