import numpy as np
import pytest

from dppdc import dynamics as dyn
from dppdc.dynamics import CouplingParams
from dppdc.gaussian import propagate_symplectic, symplectic_form


def random_params(rng, delta=0.0, gbar_z=2.0):
    g1 = (rng.standard_normal() + 1j * rng.standard_normal()) * 0.4
    g2 = (rng.standard_normal() + 1j * rng.standard_normal()) * 0.4
    gbar = np.hypot(abs(g1), abs(g2))
    return CouplingParams(g1=g1, g2=g2, delta=delta, z=gbar_z / gbar)


class TestTripletDecouple:
    def test_single_pump_limit(self):
        V = dyn.triplet_decouple(1.0, 0.0)
        assert np.allclose(V, np.eye(2))
        bs = dyn.beam_splitter_factors(1.0, 0.0)
        assert bs.t == 1.0 and bs.r == 0.0

    def test_balanced_pumps(self):
        bs = dyn.beam_splitter_factors(1.0, 1.0)
        assert bs.t == pytest.approx(1 / np.sqrt(2))
        assert bs.r == pytest.approx(-1 / np.sqrt(2))

    def test_splitting_ratio_and_unitarity(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a1 = rng.standard_normal() + 1j * rng.standard_normal()
            a2 = rng.standard_normal() + 1j * rng.standard_normal()
            V = dyn.triplet_decouple(a1, a2)
            assert np.max(np.abs(V @ V.conj().T - np.eye(2))) < 1e-14
            bs = dyn.beam_splitter_factors(a1, a2)
            assert bs.ratio == pytest.approx(-abs(a2) / abs(a1), rel=1e-12)

    def test_both_zero_rejected(self):
        with pytest.raises(ValueError):
            dyn.triplet_decouple(0.0, 0.0)


class TestBogoliubov:
    def test_zero_length(self):
        pair = dyn.bogoliubov(CouplingParams(g1=0.3, g2=0.4, z=0.0))
        assert pair.cosh_coef == 1.0 and pair.sinh_coef == 0.0

    @pytest.mark.parametrize("gz", [0.5, 1.0, 2.0])
    def test_symplectic_identity(self, gz):
        params = CouplingParams(g1=0.3 * np.exp(0.4j), g2=0.4, z=gz / 0.5)
        pair = dyn.bogoliubov(params)
        assert pair.symplectic_defect() < 1e-12

    def test_matches_ode(self):
        params = CouplingParams(g1=0.3, g2=0.4, z=2.0)
        pair = dyn.bogoliubov(params)
        S = propagate_symplectic(
            dyn.coupling_matrix_triplet(params), params.z, 0.0, n_steps=2000
        )
        # in the decoupled basis the (a0, a_plus) block is a standard squeezer
        V = dyn.triplet_decouple(params.g1, params.g2)
        W = np.eye(3, dtype=complex)
        W[1:, 1:] = V
        from dppdc.gaussian import passive_symplectic

        SW = passive_symplectic(W)
        S_dec = SW @ S @ SW.T
        assert S_dec[0, 0] == pytest.approx(pair.cosh_coef.real, abs=1e-10)
        assert S_dec[0, 2] == pytest.approx(abs(pair.sinh_coef), abs=1e-10)

    def test_requires_zero_delta(self):
        with pytest.raises(ValueError):
            dyn.bogoliubov(CouplingParams(g1=0.3, g2=0.4, delta=0.1, z=1.0))


class TestTripletEvolve:
    def test_z_zero_identity(self):
        params = CouplingParams(g1=0.5, g2=0.2, z=0.0)
        out = dyn.triplet_evolve(params)
        assert np.allclose(out.covariance, np.eye(6))

    def test_a_minus_invariant(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            params = random_params(rng)
            V = dyn.triplet_decouple(params.g1, params.g2)
            out = dyn.triplet_evolve(params)
            # variance of the pump-orthogonal combination stays at vacuum
            from dppdc.gaussian import quadrature_vector

            v_min = V[1]  # a_minus = v[0] a1 + v[1] a2
            # sum_k (v_k a_k + v_k* a_k^dag) = sum_k |v_k| X_k(-arg v_k)
            vec = np.zeros(6)
            for k, amp in enumerate(v_min, start=1):
                vec += abs(amp) * quadrature_vector(3, k, -np.angle(amp), "X")
            var = vec @ out.covariance @ vec
            assert var == pytest.approx(1.0, abs=1e-10)

    def test_matches_ode_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            params = random_params(rng)
            S_cf = dyn.triplet_symplectic(params)
            S_ode = propagate_symplectic(
                dyn.coupling_matrix_triplet(params), params.z, 0.0, n_steps=1500
            )
            err = np.max(np.abs(S_cf - S_ode)) / np.max(np.abs(S_ode))
            assert err < 1e-8

    def test_symplectic(self):
        rng = np.random.default_rng(13)
        for gz in (1.0, 3.0):
            params = random_params(rng, gbar_z=gz)
            S = dyn.triplet_symplectic(params)
            J = symplectic_form(3)
            assert np.max(np.abs(S @ J @ S.T - J)) < 1e-10

    def test_mismatched_path_via_ode(self):
        params = CouplingParams(g1=0.3, g2=0.2, delta=0.8, z=3.0)
        out = dyn.triplet_evolve(params)
        out.validate()
        # mismatch suppresses the gain relative to the matched case
        matched = dyn.triplet_evolve(CouplingParams(g1=0.3, g2=0.2, z=3.0))
        assert out.covariance[0, 0] < matched.covariance[0, 0]


class TestQuadDecompose:
    def test_golden_ratio_point(self):
        dec = dyn.quad_decompose(CouplingParams(g1=1.0, g2=1.0, z=1.0))
        phi = (1 + np.sqrt(5)) / 2
        assert dec.lambda_sigma == pytest.approx(phi, abs=1e-12)
        assert dec.lambda_delta == pytest.approx(-1 / phi, abs=1e-12)

    def test_maximum_at_sqrt2(self):
        params = CouplingParams(g1=1.0, g2=np.sqrt(2.0), z=1.0)
        dec = dyn.quad_decompose(params)
        assert dec.lambda_sigma / params.gbar == pytest.approx(
            2 / np.sqrt(3), abs=1e-9
        )
        # verify it is a maximum of lambda_sigma/gbar over rho
        for rho in (1.2, 1.6):
            p = CouplingParams(g1=1.0, g2=rho, z=1.0)
            d = dyn.quad_decompose(p)
            assert d.lambda_sigma / p.gbar < 2 / np.sqrt(3)

    def test_pump2_off(self):
        dec = dyn.quad_decompose(CouplingParams(g1=0.7, g2=0.0, z=1.0))
        assert dec.lambda_sigma == pytest.approx(0.7)
        assert dec.lambda_delta == pytest.approx(0.0)
        assert (dec.mix_cos, dec.mix_sin) == (1.0, 0.0)

    def test_pump1_off_special_case(self):
        dec = dyn.quad_decompose(CouplingParams(g1=0.0, g2=0.5, z=1.0))
        assert dec.lambda_sigma == pytest.approx(0.5)
        assert dec.lambda_delta == pytest.approx(-0.5)
        assert dec.mix_cos == pytest.approx(1 / np.sqrt(2))

    def test_eigenvalue_identities_random_rho(self):
        rng = np.random.default_rng(17)
        rhos = 10 ** rng.uniform(-3, 3, 200)
        for rho in rhos:
            dec = dyn.quad_decompose(CouplingParams(g1=1.0, g2=rho, z=1.0))
            assert dec.lambda_sigma + dec.lambda_delta == pytest.approx(
                1.0, rel=1e-12, abs=1e-12
            )
            assert dec.lambda_sigma * dec.lambda_delta == pytest.approx(
                -(rho**2), rel=1e-12
            )
            assert dec.mix_cos**2 + dec.mix_sin**2 == pytest.approx(1.0, rel=1e-14)

    def test_block_diagonalization_residual(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            params = random_params(rng)
            assert dyn.quad_block_residual(params) < 1e-12

    def test_gain_hierarchy(self):
        # collective gain strictly exceeds each single-pump gain when both are on
        rng = np.random.default_rng(23)
        for _ in range(10):
            params = random_params(rng)
            if abs(params.g1) > 0 and abs(params.g2) > 0:
                assert params.gbar > max(abs(params.g1), abs(params.g2))


class TestQuadEvolve:
    def test_z_zero_identity(self):
        out = dyn.quad_evolve(CouplingParams(g1=0.4, g2=0.6, z=0.0))
        assert np.allclose(out.covariance, np.eye(8))

    def test_matches_ode_oracle(self):
        rng = np.random.default_rng(29)
        for _ in range(10):
            params = random_params(rng)
            S_cf = dyn.quad_symplectic(params)
            S_ode = propagate_symplectic(
                dyn.coupling_matrix_quad(params), params.z, 0.0, n_steps=1500
            )
            err = np.max(np.abs(S_cf - S_ode)) / np.max(np.abs(S_ode))
            assert err < 1e-8

    def test_g1_zero_independent_epr_pairs(self):
        # pump 1 off: (b_s, c_i) and (c_s, b_i) squeeze independently
        params = CouplingParams(g1=0.0, g2=0.5, z=2.0)
        out = dyn.quad_evolve(params)
        cov = out.covariance
        # X correlations appear only between the paired modes
        idx = {name: 2 * k for k, name in enumerate(dyn.QUAD_MODE_ORDER)}
        assert abs(cov[idx["b_s"], idx["c_i"]]) > 1.0
        assert abs(cov[idx["c_s"], idx["b_i"]]) > 1.0
        assert abs(cov[idx["b_s"], idx["b_i"]]) < 1e-10
        assert abs(cov[idx["b_s"], idx["c_s"]]) < 1e-10

    def test_symplectic_at_large_gain(self):
        params = CouplingParams(g1=0.5, g2=0.7, z=3.0 / np.hypot(0.5, 0.7))
        S = dyn.quad_symplectic(params)
        J = symplectic_form(4)
        assert np.max(np.abs(S @ J @ S.T - J)) < 1e-10


class TestPerturbative:
    def test_missing_cc_pair(self):
        amps = dyn.perturbative_pair_amplitudes(CouplingParams(g1=0.2, g2=0.3, z=0.5))
        assert amps[("c_s", "c_i")] == 0.0

    def test_amplitude_ratio(self):
        params = CouplingParams(g1=0.2, g2=0.3, z=0.5)
        amps = dyn.perturbative_pair_amplitudes(params)
        assert amps[("b_s", "c_i")] / amps[("b_s", "b_i")] == pytest.approx(
            0.3 / 0.2, rel=1e-14
        )

    def test_matches_derivative_of_evolution(self):
        # d/dz of the anomalous covariance blocks at z -> 0 equals the pair
        # amplitudes (finite difference at gbar z = 1e-4)
        g1, g2 = 0.31, 0.17
        z = 1e-4 / np.hypot(g1, g2)
        out = dyn.quad_evolve(CouplingParams(g1=g1, g2=g2, z=z))
        cov = out.covariance
        idx = {name: 2 * k for k, name in enumerate(dyn.QUAD_MODE_ORDER)}
        # <X_m X_n> = 2 Re<a_m a_n> ~ 2 M_mn z at first order
        for (m, n), expected in (
            (("b_s", "b_i"), g1 * z),
            (("b_s", "c_i"), g2 * z),
            (("c_s", "b_i"), g2 * z),
            (("c_s", "c_i"), 0.0),
        ):
            got = 0.5 * cov[idx[m], idx[n]]
            assert got == pytest.approx(expected, abs=1e-9)


class TestNearField:
    def test_single_pump_plane_wave(self):
        x = np.linspace(-10, 10, 64)
        u_p, _ = dyn.near_field_profiles(2.0, 0.0, 0.5, x)
        assert np.allclose(np.abs(u_p), 1.0)

    def test_balanced_cosine(self):
        q1 = 0.4
        x = np.linspace(0, 2 * np.pi / q1, 129)[:-1]
        u_p, u_perp = dyn.near_field_profiles(1.0, 1.0, q1, x)
        assert np.allclose(u_p.imag, 0.0, atol=1e-12)
        assert np.allclose(u_p, np.sqrt(2) * np.cos(q1 * x), atol=1e-12)

    def test_orthogonality_over_integer_periods(self):
        rng = np.random.default_rng(31)
        q1 = 0.7853981633974483  # 8 periods over the window below
        n = 512
        x = np.arange(n) * (8 * 2 * np.pi / q1) / n
        for _ in range(5):
            a1 = rng.standard_normal() + 1j * rng.standard_normal()
            a2 = rng.standard_normal() + 1j * rng.standard_normal()
            u_p, u_perp = dyn.near_field_profiles(a1, a2, q1, x)
            inner = np.vdot(u_p, u_perp) / n
            assert abs(inner) < 1e-12
