"""Closed-form and numerical evolution of the 3-mode and 4-mode clusters.

Triplet (shared mode a0 plus side modes a1, a2 coupled through pump 1 and
pump 2): a passive rotation of the side modes decouples the system into a
standard two-mode squeezer on (a0, a_plus) at the collective gain
gbar = sqrt(|g1|^2 + |g2|^2), while the orthogonal combination a_minus does
not evolve.  The inverse rotation factors into local phase shifts times a
real beam splitter whose splitting ratio equals the pump amplitude ratio.

Quadruplet (b_s, b_i, c_s, c_i at resonance): a rotation applied separately
to signal and idler pairs splits the dynamics into two independent EPR
squeezers with eigenvalues

    lambda_{sigma,delta} = |g1| f_pm(rho),   f_pm = (1 +- sqrt(1+4 rho^2))/2,

rho = |g2|/|g1|.  For rho = 1 the eigenvalues are |g1| Phi and -|g1|/Phi
with Phi the golden ratio; lambda_sigma/gbar peaks at 2/sqrt(3) for
rho = sqrt(2).

Mode order conventions: triplet (a0, a1, a2); quadruplet (b_s, b_i, c_s,
c_i).  Nonzero common mismatch is handled by the RK4 symplectic integrator
(`gaussian.propagate_symplectic`); the closed forms require delta = 0 and
are tested against that path.  The paper-facing symbol theta is reserved
for pump tilts; the rotation angle of the decomposition is `mix_cos` /
`mix_sin` throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import (
    GaussianState,
    apply_symplectic,
    passive_symplectic,
    propagate_symplectic,
    two_mode_squeezer,
)

TRIPLET_MODE_ORDER = ("a0", "a1", "a2")
QUAD_MODE_ORDER = ("b_s", "b_i", "c_s", "c_i")


@dataclass(frozen=True)
class CouplingParams:
    """Gains of the two concurrent processes, common mismatch and length.

    g1, g2 carry the pump phases (g_j = chi_j alpha_j, in um^-1); delta is
    the common phase mismatch of the cluster and must be small against gbar
    for the resonance solutions to apply.
    """

    g1: complex
    g2: complex
    delta: float = 0.0  # um^-1
    z: float = 1.0  # um

    def __post_init__(self):
        if self.gbar <= 0.0:
            raise ValueError("gbar must be positive")

    @property
    def gbar(self) -> float:
        return float(np.hypot(abs(self.g1), abs(self.g2)))

    @property
    def rho(self) -> float:
        if abs(self.g1) == 0.0:
            return np.inf
        return abs(self.g2) / abs(self.g1)

    @property
    def phi1(self) -> float:
        return float(np.angle(self.g1))

    @property
    def phi2(self) -> float:
        return float(np.angle(self.g2))

    @property
    def phi_plus(self) -> float:
        return 0.5 * (self.phi1 + self.phi2)


def coupling_matrix_triplet(params: CouplingParams) -> np.ndarray:
    """Symmetric coupling M of the 3-mode system: da0 = (g1 a1^dag
    + g2 a2^dag), da1 = g1 a0^dag, da2 = g2 a0^dag (mismatch phases apart)."""
    g1, g2 = params.g1, params.g2
    return np.array(
        [[0.0, g1, g2], [g1, 0.0, 0.0], [g2, 0.0, 0.0]], dtype=complex
    )


def coupling_matrix_quad(params: CouplingParams) -> np.ndarray:
    """Symmetric coupling M of the resonant 4-mode system in the order
    (b_s, b_i, c_s, c_i); note the absent c_s^dag c_i^dag process."""
    g1, g2 = params.g1, params.g2
    M = np.zeros((4, 4), dtype=complex)
    M[0, 1] = M[1, 0] = g1
    M[0, 3] = M[3, 0] = g2
    M[1, 2] = M[2, 1] = g2
    return M


# --- triplet ------------------------------------------------------------


def triplet_decouple(alpha1: complex, alpha2: complex) -> np.ndarray:
    """Unitary acting on the side modes: (a_plus, a_minus) = V (a1, a2).

    a_plus is the pump-shaped combination, the only one amplified; a_minus
    is orthogonal to the pump and frozen.
    """
    mag = np.hypot(abs(alpha1), abs(alpha2))
    if mag == 0.0:
        raise ValueError("both pump amplitudes vanish")
    phip = 0.5 * (np.angle(alpha1) + np.angle(alpha2))
    abar = mag * np.exp(1j * phip)
    return np.array(
        [
            [np.conj(alpha1) / np.conj(abar), np.conj(alpha2) / np.conj(abar)],
            [-alpha2 / abar, alpha1 / abar],
        ]
    )


@dataclass(frozen=True)
class BeamSplitterFactors:
    """Factorization of the inverse decoupling as local phases e^{+-i phi_minus}
    times a real lossless beam splitter."""

    t: float  # |alpha1| / |abar|
    r: float  # -|alpha2| / |abar|
    phi_minus: float

    @property
    def ratio(self) -> float:
        return self.r / self.t


def beam_splitter_factors(alpha1: complex, alpha2: complex) -> BeamSplitterFactors:
    mag = np.hypot(abs(alpha1), abs(alpha2))
    if mag == 0.0:
        raise ValueError("both pump amplitudes vanish")
    return BeamSplitterFactors(
        t=abs(alpha1) / mag,
        r=-abs(alpha2) / mag,
        phi_minus=0.5 * (np.angle(alpha1) - np.angle(alpha2)),
    )


@dataclass(frozen=True)
class BogoliubovPair:
    """cosh/sinh coefficients of the phase-matched two-mode solution."""

    cosh_coef: complex
    sinh_coef: complex

    def symplectic_defect(self) -> float:
        return abs(abs(self.cosh_coef) ** 2 - abs(self.sinh_coef) ** 2 - 1.0)


def bogoliubov(params: CouplingParams) -> BogoliubovPair:
    """a0(z) = cosh(gbar z) a0_in + e^{i phi_plus} sinh(gbar z) a_plus_in^dag.

    Phase-matched form; nonzero delta goes through the ODE path instead.
    """
    if params.delta != 0.0:
        raise ValueError("closed Bogoliubov form requires delta = 0")
    arg = params.gbar * params.z
    return BogoliubovPair(
        cosh_coef=complex(np.cosh(arg)),
        sinh_coef=np.exp(1j * params.phi_plus) * np.sinh(arg),
    )


def triplet_symplectic(params: CouplingParams) -> np.ndarray:
    """Symplectic propagator of the triplet over params.z.

    delta = 0: decouple -> two-mode squeeze of (a0, a_plus) at gbar z with
    pump phase phi_plus -> recouple.  Otherwise: RK4 on the full generator.
    """
    if params.delta != 0.0:
        return propagate_symplectic(
            coupling_matrix_triplet(params), params.z, params.delta
        )
    V = triplet_decouple(params.g1, params.g2)
    W = np.eye(3, dtype=complex)
    W[1:, 1:] = V
    SW = passive_symplectic(W)
    Ssq = two_mode_squeezer(3, 0, 1, params.gbar * params.z, params.phi_plus)
    return SW.T @ Ssq @ SW


def triplet_evolve(params: CouplingParams, state: GaussianState | None = None) -> GaussianState:
    """Evolve a 3-mode state (vacuum by default) through the crystal."""
    if state is None:
        state = GaussianState.vacuum(3)
    if state.n_modes != 3:
        raise ValueError("triplet evolution needs a 3-mode state")
    return apply_symplectic(state, triplet_symplectic(params))


# --- quadruplet ---------------------------------------------------------


def f_plus(rho):
    return 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * rho * rho))


def f_minus(rho):
    return 0.5 * (1.0 - np.sqrt(1.0 + 4.0 * rho * rho))


@dataclass(frozen=True)
class QuadDecomposition:
    """Squeeze eigenvalues and mixing of the two independent EPR pairs.

    lambda_sigma + lambda_delta = |g1| and lambda_sigma lambda_delta =
    -|g2|^2 hold identically.  phase_b / phase_c are the local phases of
    the unitary recombining (sigma, delta) into (b, c).
    """

    lambda_sigma: float  # um^-1
    lambda_delta: float  # um^-1, negative
    mix_cos: float
    mix_sin: float
    phase_b: float  # phi1 / 2
    phase_c: float  # phi2 / 2 - phi_minus

    def unitary(self) -> np.ndarray:
        rot = np.array(
            [[self.mix_cos, self.mix_sin], [-self.mix_sin, self.mix_cos]]
        )
        return np.diag([np.exp(1j * self.phase_b), np.exp(1j * self.phase_c)]) @ rot


def quad_decompose(params: CouplingParams) -> QuadDecomposition:
    """Split the 4-mode coupling into two independent EPR squeezers.

    The g1 = 0 limit is the two-independent-EPR special case: eigenvalues
    +-|g2| with a balanced mixer.
    """
    phi1, phi2 = params.phi1, params.phi2
    phim = 0.5 * (phi1 - phi2)
    if abs(params.g1) == 0.0:
        inv = 1.0 / np.sqrt(2.0)
        return QuadDecomposition(
            lambda_sigma=abs(params.g2),
            lambda_delta=-abs(params.g2),
            mix_cos=inv,
            mix_sin=-inv,
            phase_b=0.5 * phi1,
            phase_c=0.5 * phi2 - phim,
        )
    rho = params.rho
    fp, fm = f_plus(rho), f_minus(rho)
    norm = np.sqrt(rho * rho + fp * fp)
    return QuadDecomposition(
        lambda_sigma=abs(params.g1) * fp,
        lambda_delta=abs(params.g1) * fm,
        mix_cos=fp / norm,
        mix_sin=-rho / norm,
        phase_b=0.5 * phi1,
        phase_c=0.5 * phi2 - phim,
    )


def quad_signal_idler_unitary(decomp: QuadDecomposition) -> np.ndarray:
    """4x4 passive map from (sigma_s, sigma_i, delta_s, delta_i) to
    (b_s, b_i, c_s, c_i): the 2x2 unitary applied separately to signal and
    idler pairs."""
    U = decomp.unitary()
    T = np.zeros((4, 4), dtype=complex)
    T[0, 0] = U[0, 0]
    T[0, 2] = U[0, 1]
    T[2, 0] = U[1, 0]
    T[2, 2] = U[1, 1]
    T[1, 1] = U[0, 0]
    T[1, 3] = U[0, 1]
    T[3, 1] = U[1, 0]
    T[3, 3] = U[1, 1]
    return T


def quad_block_residual(params: CouplingParams) -> float:
    """Frobenius norm of the off-block part of the transformed coupling:
    T^dag M T^* must be block diagonal with blocks lambda_sigma, lambda_delta."""
    decomp = quad_decompose(params)
    T = quad_signal_idler_unitary(decomp)
    M = coupling_matrix_quad(params)
    Mt = T.conj().T @ M @ T.conj()
    target = np.zeros_like(Mt)
    target[0, 1] = target[1, 0] = decomp.lambda_sigma
    target[2, 3] = target[3, 2] = decomp.lambda_delta
    return float(np.linalg.norm(Mt - target))


def quad_symplectic(params: CouplingParams) -> np.ndarray:
    """Symplectic propagator of the quadruplet over params.z (closed form
    for delta = 0, RK4 otherwise)."""
    if params.delta != 0.0:
        return propagate_symplectic(
            coupling_matrix_quad(params), params.z, params.delta
        )
    decomp = quad_decompose(params)
    ST = passive_symplectic(quad_signal_idler_unitary(decomp))
    Ssq = two_mode_squeezer(4, 0, 1, decomp.lambda_sigma * params.z) @ two_mode_squeezer(
        4, 2, 3, decomp.lambda_delta * params.z
    )
    return ST @ Ssq @ ST.T


def quad_evolve(params: CouplingParams, state: GaussianState | None = None) -> GaussianState:
    """Evolve a 4-mode state (vacuum by default) through the crystal."""
    if state is None:
        state = GaussianState.vacuum(4)
    if state.n_modes != 4:
        raise ValueError("quadruplet evolution needs a 4-mode state")
    return apply_symplectic(state, quad_symplectic(params))


def perturbative_pair_amplitudes(params: CouplingParams) -> dict:
    """First-order two-photon amplitudes of the quadruplet (gbar z << 1).

    Pairs (b_s, b_i): g1 z; (b_s, c_i) and (c_s, b_i): g2 z; no photon pair
    appears in (c_s, c_i) at first order.
    """
    z = params.z
    return {
        ("b_s", "b_i"): params.g1 * z,
        ("b_s", "c_i"): params.g2 * z,
        ("c_s", "b_i"): params.g2 * z,
        ("c_s", "c_i"): 0.0 + 0.0j,
    }


def near_field_profiles(alpha1: complex, alpha2: complex, q1: float, x_grid):
    """Transverse pump mode u_p and its orthogonal complement u_p_perp for
    symmetric tilts Q2 = -Q1, sampled on x_grid.

    u_p(x) = (alpha1 e^{i q1 x} + alpha2 e^{-i q1 x}) / abar is the pump
    spatial mode (the amplified combination); u_p_perp has the smallest
    superposition with the pump and is untouched by the interaction.
    """
    mag = np.hypot(abs(alpha1), abs(alpha2))
    if mag == 0.0:
        raise ValueError("both pump amplitudes vanish")
    abar = mag * np.exp(0.5j * (np.angle(alpha1) + np.angle(alpha2)))
    x = np.asarray(x_grid, dtype=float)
    plus = np.exp(1j * q1 * x)
    minus = np.exp(-1j * q1 * x)
    u_p = (alpha1 * plus + alpha2 * minus) / abar
    u_perp = (-np.conj(alpha2) * plus + np.conj(alpha1) * minus) / np.conj(abar)
    return u_p, u_perp
