"""NumPy implementation of the midpoint nonlinear update.

Both kernels advance the fields in place over one z step of size dz:

    dA_s/dz = sigma A_p A_s^* c(z)        c(z) = e^{-i delta0 z}
    dA_p/dz = -(sigma/2) A_s^2 / c(z)

using the second-order midpoint rule; ``c1`` is the phase factor at the
stage-1 position and ``c2`` at the midpoint.  The signal array may carry
leading batch axes; the pump is either shared (undepleted, broadcast) or
batched alongside the signal (depleted).
"""

import numpy as np


def nl_midpoint_undepleted(A_s, A_p, sigma, dz, c1, c2):
    """Frozen-pump update of the signal only (parametric limit)."""
    k1 = (sigma * c1) * A_p * np.conj(A_s)
    half = A_s + (0.5 * dz) * k1
    A_s += dz * (sigma * c2) * A_p * np.conj(half)
    return A_s


def nl_midpoint_depleted(A_s, A_p, sigma, dz, c1, c2):
    """Coupled update of signal and pump; conserves N_p + N_s/2 to O(dz^3)
    per step."""
    k1s = (sigma * c1) * A_p * np.conj(A_s)
    k1p = (-0.5 * sigma * np.conj(c1)) * A_s * A_s
    half_s = A_s + (0.5 * dz) * k1s
    half_p = A_p + (0.5 * dz) * k1p
    A_s += dz * (sigma * c2) * half_p * np.conj(half_s)
    A_p += dz * (-0.5 * sigma * np.conj(c2)) * half_s * half_s
    return A_s, A_p
