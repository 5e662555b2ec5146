import numpy as np
import pytest

from dppdc._kernels import BACKEND, HAVE_COMPILED, fallback


def _random_fields(rng, shape):
    return (
        (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)),
        (rng.standard_normal(shape[-3:]) + 1j * rng.standard_normal(shape[-3:])),
    )


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel unavailable")
class TestBackendEquivalence:
    def test_undepleted_matches_fallback(self):
        from dppdc._kernels import _nonlinear

        rng = np.random.default_rng(0)
        A_s, A_p = _random_fields(rng, (3, 8, 1, 16))
        c1, c2 = np.exp(-0.3j), np.exp(-0.45j)
        ref = A_s.copy()
        fallback.nl_midpoint_undepleted(ref, A_p, 0.7, 0.05, c1, c2)
        got = A_s.copy()
        _nonlinear.nl_midpoint_undepleted(got, A_p, 0.7, 0.05, c1, c2)
        np.testing.assert_allclose(got, ref, rtol=1e-14, atol=1e-15)

    def test_depleted_matches_fallback(self):
        from dppdc._kernels import _nonlinear

        rng = np.random.default_rng(1)
        A_s, _ = _random_fields(rng, (8, 1, 16))
        A_p = rng.standard_normal((8, 1, 16)) + 1j * rng.standard_normal((8, 1, 16))
        c1, c2 = np.exp(0.2j), np.exp(0.1j)
        rs, rp = A_s.copy(), A_p.copy()
        fallback.nl_midpoint_depleted(rs, rp, 0.4, 0.02, c1, c2)
        gs, gp = A_s.copy(), A_p.copy()
        _nonlinear.nl_midpoint_depleted(gs, gp, 0.4, 0.02, c1, c2)
        np.testing.assert_allclose(gs, rs, rtol=1e-14, atol=1e-15)
        np.testing.assert_allclose(gp, rp, rtol=1e-14, atol=1e-15)

    def test_updates_in_place(self):
        from dppdc._kernels import _nonlinear

        rng = np.random.default_rng(2)
        A_s, A_p = _random_fields(rng, (2, 4, 1, 8))
        before = A_s.copy()
        out = _nonlinear.nl_midpoint_undepleted(A_s, A_p, 1.0, 0.1, 1.0 + 0j, 1.0 + 0j)
        assert out is A_s
        assert not np.allclose(A_s, before)


def test_fallback_pointwise_formula():
    # one grid point, hand-evaluated midpoint stages
    A_s = np.array([[[[0.3 + 0.1j]]]])
    A_p = np.array([[[2.0 - 0.5j]]])
    sigma, dz = 0.8, 0.1
    c1, c2 = np.exp(-0.2j), np.exp(-0.3j)
    s, p = A_s[0, 0, 0, 0], A_p[0, 0, 0]
    k1 = sigma * c1 * p * np.conj(s)
    half = s + 0.5 * dz * k1
    expected = s + dz * sigma * c2 * p * np.conj(half)
    fallback.nl_midpoint_undepleted(A_s, A_p, sigma, dz, c1, c2)
    assert A_s[0, 0, 0, 0] == pytest.approx(expected, rel=1e-15)


def test_backend_reported():
    assert BACKEND in ("cython", "numpy")
