"""Covariance-matrix representation of multimode Gaussian states and the
quadripartite entanglement witnesses.

Quadrature convention: X = a + a^dag, Y = -i(a - a^dag), so [X, Y] = 2i and
the vacuum covariance is the identity.  Quadratures are interleaved as
r = (X_1, Y_1, ..., X_N, Y_N).  The paper-style variance Var(X_a - X_b) = 2
for two vacua relies on this normalization.

A multimode squeezing interaction da_m/dz = sum_j M_mj a_j^dag (M complex
symmetric, units um^-1) maps to a linear flow dr/dz = K r with K in
sp(2N, R); propagation is the symplectic S = exp(K z) applied as
cov -> S cov S^T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal J with [[0, 1], [-1, 0]] per mode: [r_i, r_j] = 2i J_ij."""
    j2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), j2)


def squeezing_generator(M: np.ndarray) -> np.ndarray:
    """Real quadrature generator K for da/dz = M a^dag.

    Per (m, j) block: [[Re M, Im M], [Im M, -Re M]].  Requires M symmetric;
    the result lies in the symplectic algebra (K J + J K^T = 0).
    """
    M = np.asarray(M, dtype=complex)
    if not np.allclose(M, M.T, atol=1e-12):
        raise ValueError("coupling matrix must be symmetric")
    n = M.shape[0]
    K = np.zeros((2 * n, 2 * n))
    re, im = M.real, M.imag
    K[0::2, 0::2] = re
    K[0::2, 1::2] = im
    K[1::2, 0::2] = im
    K[1::2, 1::2] = -re
    return K


def passive_symplectic(U: np.ndarray) -> np.ndarray:
    """Orthogonal symplectic matrix of a passive transformation a' = U a."""
    U = np.asarray(U, dtype=complex)
    n = U.shape[0]
    S = np.zeros((2 * n, 2 * n))
    S[0::2, 0::2] = U.real
    S[0::2, 1::2] = -U.imag
    S[1::2, 0::2] = U.imag
    S[1::2, 1::2] = U.real
    return S


def two_mode_squeezer(n_modes: int, i: int, j: int, r: float, phi: float = 0.0) -> np.ndarray:
    """Symplectic of a_i -> cosh(r) a_i + e^{i phi} sinh(r) a_j^dag (i <-> j)."""
    if i == j:
        raise ValueError("two-mode squeezer needs distinct modes")
    S = np.eye(2 * n_modes)
    ch, sh = np.cosh(r), np.sinh(r)
    c, s = np.cos(phi), np.sin(phi)
    for m, p in ((i, j), (j, i)):
        S[2 * m, 2 * m] = ch
        S[2 * m + 1, 2 * m + 1] = ch
        S[2 * m, 2 * p] = sh * c
        S[2 * m, 2 * p + 1] = sh * s
        S[2 * m + 1, 2 * p] = sh * s
        S[2 * m + 1, 2 * p + 1] = -sh * c
    return S


@dataclass(frozen=True)
class GaussianState:
    """Covariance matrix (2N x 2N) and mean vector of N quadrature pairs."""

    covariance: np.ndarray
    mean: np.ndarray

    @classmethod
    def vacuum(cls, n_modes: int) -> "GaussianState":
        return cls(covariance=np.eye(2 * n_modes), mean=np.zeros(2 * n_modes))

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def validate(self, atol=1e-10):
        cov = self.covariance
        if cov.shape != (self.mean.size, self.mean.size):
            raise ValueError("covariance / mean dimension mismatch")
        if not np.allclose(cov, cov.T, atol=1e-12):
            raise ValueError("covariance matrix not symmetric")
        J = symplectic_form(self.n_modes)
        eigs = np.linalg.eigvalsh(cov + 1j * J)
        if eigs.min() < -atol:
            raise ValueError(
                f"state violates the uncertainty relation (min eig {eigs.min():.2e})"
            )

    def symplectic_eigenvalues(self) -> np.ndarray:
        J = symplectic_form(self.n_modes)
        ev = np.linalg.eigvals(1j * J @ self.covariance)
        return np.sort(np.abs(ev.real))[::2][::-1]

    def purity_det(self) -> float:
        """det(cov); equals 1 for pure states in this normalization."""
        return float(np.linalg.det(self.covariance))


def apply_symplectic(state: GaussianState, S: np.ndarray) -> GaussianState:
    return GaussianState(covariance=S @ state.covariance @ S.T, mean=S @ state.mean)


def evolve_state(
    state: GaussianState, coupling: np.ndarray, z: float, delta: float = 0.0, n_steps=None
) -> GaussianState:
    """Propagate a state under the squeezing generator over a length z.

    For delta = 0 the flow is z-independent and S = exp(K z) is used; a
    common mismatch delta makes the coupling rotate as M e^{-i delta z} and
    the symplectic is integrated by fixed-step RK4.
    """
    state.validate()
    if delta == 0.0:
        S = expm(squeezing_generator(np.asarray(coupling)) * z)
    else:
        S = propagate_symplectic(coupling, z, delta, n_steps=n_steps)
    return apply_symplectic(state, S)


def propagate_symplectic(coupling, z, delta=0.0, n_steps=None):
    """Fixed-step RK4 integration of dS/dz = K(z) S with
    K(z) generated by M e^{-i delta z}; S(0) = identity.

    This path is the ground truth for nonzero common mismatch and the
    oracle against which the closed forms are tested.
    """
    M = np.asarray(coupling, dtype=complex)
    n = M.shape[0]
    if n_steps is None:
        gbar = max(np.abs(M).max(), 1e-30)
        n_steps = max(200, int(50 * (abs(gbar * z) + abs(delta * z) + 1)))
    S = np.eye(2 * n)
    dz = z / n_steps

    def K_at(zz):
        return squeezing_generator(M * np.exp(-1j * delta * zz))

    for step in range(n_steps):
        z0 = step * dz
        k1 = K_at(z0) @ S
        k2 = K_at(z0 + 0.5 * dz) @ (S + 0.5 * dz * k1)
        k3 = K_at(z0 + 0.5 * dz) @ (S + 0.5 * dz * k2)
        k4 = K_at(z0 + dz) @ (S + dz * k3)
        S = S + (dz / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return S


def quadrature_vector(n_modes: int, mode: int, phase: float, kind: str) -> np.ndarray:
    """Coefficient vector of a rotated quadrature of one mode.

    X(phase) = a e^{-i phase} + h.c. = cos(phase) X + sin(phase) Y;
    Y(phase) is the conjugate quadrature of the same rotated frame.
    """
    v = np.zeros(2 * n_modes)
    if kind == "X":
        v[2 * mode] = np.cos(phase)
        v[2 * mode + 1] = np.sin(phase)
    elif kind == "Y":
        v[2 * mode] = -np.sin(phase)
        v[2 * mode + 1] = np.cos(phase)
    else:
        raise ValueError("kind must be 'X' or 'Y'")
    return v


def observable_variance(state: GaussianState, coeffs: np.ndarray) -> float:
    """Variance of the linear observable f = coeffs . r."""
    return float(coeffs @ state.covariance @ coeffs)


def commutator_value(c: np.ndarray, d: np.ndarray) -> float:
    """[f, g] / i for linear observables f = c.r, g = d.r: equals 2 c^T J d."""
    n = c.size // 2
    return float(2.0 * c @ symplectic_form(n) @ d)


def pairwise_commutators(vectors) -> np.ndarray:
    """Antisymmetric matrix of [f_i, f_j]/i over a list of observables."""
    k = len(vectors)
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(k):
            if i != j:
                out[i, j] = commutator_value(vectors[i], vectors[j])
    return out


# --- quadripartite witnesses -------------------------------------------------

QUAD_MODE_ORDER = ("b_s", "b_i", "c_s", "c_i")


def witness_vectors(mix_cos, mix_sin, phi1, phi2):
    """Coefficient vectors of the four separability witnesses.

    Quadratures of the b modes are referenced to phi1/2 and those of the c
    modes to phi2/2 - (phi1 - phi2)/2; mode order (b_s, b_i, c_s, c_i).
    """
    phim = 0.5 * (phi1 - phi2)
    ph_b = 0.5 * phi1
    ph_c = 0.5 * phi2 - phim
    n = 4
    Xb_s = quadrature_vector(n, 0, ph_b, "X")
    Xb_i = quadrature_vector(n, 1, ph_b, "X")
    Xc_s = quadrature_vector(n, 2, ph_c, "X")
    Xc_i = quadrature_vector(n, 3, ph_c, "X")
    Yb_s = quadrature_vector(n, 0, ph_b, "Y")
    Yb_i = quadrature_vector(n, 1, ph_b, "Y")
    Yc_s = quadrature_vector(n, 2, ph_c, "Y")
    Yc_i = quadrature_vector(n, 3, ph_c, "Y")
    c, s = mix_cos, mix_sin
    f1 = c * (Xb_s - Xb_i) - s * (Xc_s - Xc_i)
    f2 = s * (Xb_s + Xb_i) + c * (Xc_s + Xc_i)
    f3 = c * (Yb_s + Yb_i) - s * (Yc_s + Yc_i)
    f4 = s * (Yb_s - Yb_i) + c * (Yc_s - Yc_i)
    return f1, f2, f3, f4


@dataclass(frozen=True)
class WitnessReport:
    var_f1: float
    var_f2: float
    var_f3: float
    var_f4: float
    predicted_sigma: float  # 2 exp(-2 lambda_sigma z)
    predicted_delta: float  # 2 exp(-2 |lambda_delta| z)

    def as_dict(self):
        return {
            "var_fI": self.var_f1,
            "var_fII": self.var_f2,
            "var_fIII": self.var_f3,
            "var_fIV": self.var_f4,
            "predicted_sigma": self.predicted_sigma,
            "predicted_delta": self.predicted_delta,
        }


def witness_variances(state: GaussianState, decomposition, phi1, phi2, z) -> WitnessReport:
    """Variances of the four witnesses on a 4-mode state, plus the
    predicted decays 2 e^{-2 lambda_sigma z} / 2 e^{-2 |lambda_delta| z}.

    ``decomposition`` is the squeeze-eigenvalue decomposition of the
    coupling (see dynamics.quad_decompose); the state must hold the modes
    in the order (b_s, b_i, c_s, c_i).
    """
    if state.n_modes != 4:
        raise ValueError("witnesses are defined on the 4-mode cluster")
    f1, f2, f3, f4 = witness_vectors(
        decomposition.mix_cos, decomposition.mix_sin, phi1, phi2
    )
    return WitnessReport(
        var_f1=observable_variance(state, f1),
        var_f2=observable_variance(state, f2),
        var_f3=observable_variance(state, f3),
        var_f4=observable_variance(state, f4),
        predicted_sigma=float(2.0 * np.exp(-2.0 * decomposition.lambda_sigma * z)),
        predicted_delta=float(2.0 * np.exp(-2.0 * abs(decomposition.lambda_delta) * z)),
    )
