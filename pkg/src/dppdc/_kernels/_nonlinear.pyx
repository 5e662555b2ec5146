# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled midpoint nonlinear update (see fallback.py for the reference
semantics).  Fuses the stage arithmetic into a single pass per grid point,
avoiding the temporaries of the NumPy version.  Arrays must be C-contiguous;
updates happen in place."""

cimport cython


def nl_midpoint_undepleted(A_s, A_p, double sigma, double dz, c1, c2):
    cdef double complex sc1 = sigma * complex(c1)
    cdef double complex sc2 = sigma * complex(c2)
    if not (A_s.flags["C_CONTIGUOUS"] and A_p.flags["C_CONTIGUOUS"]):
        raise ValueError("kernel requires C-contiguous arrays")
    a_s = A_s.reshape(-1, A_p.size)
    a_p = A_p.reshape(-1)
    _undepleted_loop(a_s, a_p, sc1, sc2, dz)
    return A_s


def nl_midpoint_depleted(A_s, A_p, double sigma, double dz, c1, c2):
    cdef double complex sc1 = sigma * complex(c1)
    cdef double complex sc2 = sigma * complex(c2)
    cdef double complex pc1 = -0.5 * sigma * complex(c1).conjugate()
    cdef double complex pc2 = -0.5 * sigma * complex(c2).conjugate()
    if not (A_s.flags["C_CONTIGUOUS"] and A_p.flags["C_CONTIGUOUS"]):
        raise ValueError("kernel requires C-contiguous arrays")
    if A_s.size != A_p.size:
        raise ValueError("depleted kernel needs matching signal/pump shapes")
    a_s = A_s.reshape(-1)
    a_p = A_p.reshape(-1)
    _depleted_loop(a_s, a_p, sc1, sc2, pc1, pc2, dz)
    return A_s, A_p


@cython.boundscheck(False)
@cython.wraparound(False)
def _undepleted_loop(double complex[:, ::1] a_s, double complex[::1] a_p,
                     double complex sc1, double complex sc2, double dz):
    cdef Py_ssize_t r, i
    cdef Py_ssize_t nr = a_s.shape[0]
    cdef Py_ssize_t n = a_s.shape[1]
    cdef double complex s, p, half
    cdef double hdz = 0.5 * dz
    for r in range(nr):
        for i in range(n):
            s = a_s[r, i]
            p = a_p[i]
            half = s + hdz * sc1 * p * s.conjugate()
            a_s[r, i] = s + dz * sc2 * p * half.conjugate()


@cython.boundscheck(False)
@cython.wraparound(False)
def _depleted_loop(double complex[::1] a_s, double complex[::1] a_p,
                   double complex sc1, double complex sc2,
                   double complex pc1, double complex pc2, double dz):
    cdef Py_ssize_t i
    cdef Py_ssize_t n = a_s.shape[0]
    cdef double complex s, p, half_s, half_p
    cdef double hdz = 0.5 * dz
    for i in range(n):
        s = a_s[i]
        p = a_p[i]
        half_s = s + hdz * sc1 * p * s.conjugate()
        half_p = p + hdz * pc1 * s * s
        a_s[i] = s + dz * sc2 * half_p * half_s.conjugate()
        a_p[i] = p + dz * pc2 * half_s * half_s
