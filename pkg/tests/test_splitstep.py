import numpy as np
import pytest

from dppdc import dispersion as disp
from dppdc.splitstep import (
    FieldState,
    NumericalInstability,
    PumpPulseSpec,
    SimGrid,
    SplitStepSim,
    WindowSpec,
    hotspot_gain,
    linear_step,
    nonlinear_step,
    read_checkpoint,
    run_simulation,
    write_checkpoint,
)


def small_grid(n_steps=50, nx=64, nt=64, length=400.0):
    return SimGrid(
        nx=nx, nt=nt, dx=2.0, dt=6.0, crystal_length=length, n_steps=n_steps
    )


def cw_pumps(alpha1=1.0, alpha2=1.0, tilt_deg=1.2, chi=1e-3):
    t = np.radians(tilt_deg)
    return PumpPulseSpec(
        waist=1e6,
        duration=1e9,
        alpha1=alpha1,
        alpha2=alpha2,
        theta_p1=-t,
        theta_p2=t,
        chi1=chi,
        chi2=chi,
    )


@pytest.fixture(scope="module")
def pplt():
    from dppdc import CrystalModel

    return CrystalModel.pplt()


class TestGridValidation:
    def test_power_of_two_required(self):
        with pytest.raises(ValueError):
            SimGrid(nx=100, nt=64, dx=2.0, dt=6.0, crystal_length=100, n_steps=10)

    def test_window_must_cover_tilts(self, pplt):
        grid = SimGrid(nx=16, nt=64, dx=20.0, dt=6.0, crystal_length=100, n_steps=10)
        with pytest.raises(ValueError, match="spectral window"):
            SplitStepSim(pplt, grid, cw_pumps())

    def test_waist_resolvable(self, pplt):
        grid = small_grid()
        bad = PumpPulseSpec(
            waist=3.0, duration=1e9, alpha1=1.0, alpha2=1.0,
            theta_p1=-0.02, theta_p2=0.02,
        )
        with pytest.raises(ValueError, match="resolvable"):
            SplitStepSim(pplt, grid, bad)


class TestLinearStep:
    def test_zero_field_stays_zero(self, pplt):
        sim = SplitStepSim(pplt, small_grid(), cw_pumps())
        state = FieldState(
            A_s=np.zeros((1, *sim.grid.shape), complex),
            A_p=np.zeros(sim.grid.shape, complex),
        )
        linear_step(sim, state, 10.0)
        assert not state.A_s.any() and not state.A_p.any()

    def test_norm_conserved_over_many_steps(self, pplt):
        sim = SplitStepSim(pplt, small_grid(), cw_pumps())
        rng = np.random.default_rng(0)
        state = FieldState(
            A_s=sim.vacuum_noise(rng, 1),
            A_p=sim.initial_pump().astype(complex),
        )
        n0 = np.sum(np.abs(state.A_s) ** 2)
        for _ in range(1000):
            linear_step(sim, state, 2.0)
        n1 = np.sum(np.abs(state.A_s) ** 2)
        assert n1 == pytest.approx(n0, rel=1e-12)

    def test_bbo_pump_phase_carries_tilt_dependence(self):
        # the tilted extraordinary pump: the spectral-phase slope along qx
        # near a pump carrier reproduces the wavenumber tilt derivative from
        # the dispersion module (this is where the walk-off enters the sim)
        from dppdc import CrystalModel

        bbo = CrystalModel.bbo()
        beta = np.pi / 2
        t = np.radians(0.6)
        pumps = PumpPulseSpec(
            waist=1e6, duration=1e9, alpha1=1.0, alpha2=1.0,
            theta_p1=-t, theta_p2=t, beta=beta, chi1=1e-3, chi2=1e-3,
        )
        grid = SimGrid(nx=256, nt=32, dx=1.0, dt=2.0, crystal_length=100, n_steps=10)
        sim = SplitStepSim(bbo, grid, pumps)
        qx, _, om = grid.spectral_axes()
        io = 0
        k_p = disp.pump_wavenumber(bbo)
        iq = int(round(k_p * np.sin(t) / (qx[1] - qx[0])))
        # d(phi_p)/dqx = dk_pz/dQ = dk_p/dQ - Q/k_pz
        slope = (sim.phi_p[iq + 1, 0, io] - sim.phi_p[iq - 1, 0, io]) / (
            qx[iq + 1] - qx[iq - 1]
        )
        ratio = disp.dkp_dQp(bbo, t - 1e-4, t + 1e-4, beta).exact
        gamma = disp.pump_gamma(t, beta, bbo.cut_angle_gamma0)
        kpj = disp.pump_wavenumber(bbo, gamma)
        q_here = qx[iq]
        expected = ratio - q_here / np.sqrt(kpj**2 - q_here**2)
        assert slope == pytest.approx(expected, rel=5e-3)

    def test_plane_wave_phase_matches_dispersion(self, pplt):
        # a single spectral bin advances with exactly k_z dz relative to the
        # co-moving reference, checked against a scalar dispersion evaluation
        sim = SplitStepSim(pplt, small_grid(), cw_pumps())
        iq, io = 5, 12
        A = np.zeros((1, *sim.grid.shape), complex)
        spec = np.zeros(sim.grid.shape, complex)
        spec[iq, 0, io] = 1.0
        from scipy.fft import ifftn

        A[0] = ifftn(spec, axes=(-3, -2, -1))
        state = FieldState(A_s=A, A_p=np.zeros(sim.grid.shape, complex))
        dz = 25.0
        linear_step(sim, state, dz)
        out = np.fft.fftn(state.A_s[0], axes=(-3, -2, -1))
        got_phase = np.angle(out[iq, 0, io])

        qx, _, om = sim.grid.spectral_axes()
        ks = disp.signal_wavenumber(pplt, om[io])
        kz = np.sqrt(ks**2 - qx[iq] ** 2)
        h = 1e-5
        inv_vg = (
            disp.signal_wavenumber(pplt, h) - disp.signal_wavenumber(pplt, -h)
        ) / (2 * h)
        expected = (kz - disp.signal_wavenumber(pplt, 0.0) - inv_vg * om[io]) * dz
        assert np.angle(np.exp(1j * expected)) == pytest.approx(got_phase, abs=1e-9)


class TestNonlinearStep:
    def test_unseeded_signal_stays_zero(self, pplt):
        # no spontaneous term in the classical equations
        sim = SplitStepSim(pplt, small_grid(), cw_pumps())
        state = FieldState(
            A_s=np.zeros((1, *sim.grid.shape), complex), A_p=sim.initial_pump()
        )
        nonlinear_step(sim, state, 5.0, deplete=False)
        assert not state.A_s.any()

    def test_bogoliubov_growth_plane_wave(self, pplt):
        # collinear plane-wave pump + uniform seed: |A_s(z)| follows the
        # cosh/sinh closed form (equal phases: growth factor e^{g z})
        g = 2e-3
        pumps = PumpPulseSpec(
            waist=1e6, duration=1e9, alpha1=1.0, alpha2=0.0,
            theta_p1=0.0, theta_p2=1e-6, chi1=g, chi2=g,
        )
        grid = SimGrid(nx=32, nt=32, dx=2.0, dt=6.0, crystal_length=500.0, n_steps=250)
        sim = SplitStepSim(pplt, grid, pumps)
        record = run_simulation(
            sim, seed="coherent_seed", seed_amplitude=1e-6, realizations=1,
            checkpoint_every=50,
        )
        z, inten = record.final()
        n0 = run_simulation(
            sim, seed="coherent_seed", seed_amplitude=1e-6, realizations=1,
            checkpoint_every=grid.n_steps,
        )
        # seeded mode is the (q=0, Omega=0) bin
        growth = inten[0, 0, 0] / (1e-6**2 * grid.cell_volume * grid.nx * grid.nt)
        expected = np.exp(2 * g * z)
        assert growth == pytest.approx(expected, rel=1e-4)

    def test_manley_rowe_with_depletion(self, pplt):
        grid = SimGrid(nx=64, nt=64, dx=2.0, dt=6.0, crystal_length=400.0, n_steps=400)
        pumps = PumpPulseSpec(
            waist=60.0, duration=150.0, alpha1=1.0, alpha2=1.0,
            theta_p1=-0.02, theta_p2=0.02, chi1=2e-3, chi2=2e-3,
        )
        sim = SplitStepSim(pplt, grid, pumps)
        state = FieldState(
            A_s=sim.coherent_seed(0.3, realizations=1)[0],
            A_p=sim.initial_pump(),
        )
        total0 = np.sum(np.abs(state.A_p) ** 2) + 0.5 * np.sum(np.abs(state.A_s) ** 2)
        for k in range(grid.n_steps):
            linear_step(sim, state, 0.5 * grid.dz)
            nonlinear_step(sim, state, grid.dz, deplete=True)
            state.z -= 0.5 * grid.dz  # nonlinear_step does not advance z
            linear_step(sim, state, 0.5 * grid.dz)
        total1 = np.sum(np.abs(state.A_p) ** 2) + 0.5 * np.sum(np.abs(state.A_s) ** 2)
        assert total1 == pytest.approx(total0, rel=2e-5)

    def test_step_halving_second_order(self, pplt):
        # halving dz changes the final intensity at 2nd order
        results = {}
        for n_steps in (50, 100, 200):
            grid = SimGrid(
                nx=32, nt=32, dx=2.0, dt=6.0, crystal_length=500.0, n_steps=n_steps
            )
            sim = SplitStepSim(pplt, grid, cw_pumps(chi=3e-3 / np.sqrt(2)))
            rec = run_simulation(
                sim, seed="coherent_seed", seed_amplitude=1e-5,
                realizations=1, checkpoint_every=n_steps,
            )
            _, inten = rec.final()
            results[n_steps] = inten[0, 0, 0]
        e1 = abs(results[50] - results[200])
        e2 = abs(results[100] - results[200])
        assert e2 < e1  # refining the step improves the answer
        # halving dz moves the final intensity by well under 1e-3 relative
        assert abs(results[100] - results[200]) / results[200] < 1e-3

    def test_instability_detection(self, pplt):
        grid = SimGrid(nx=16, nt=16, dx=4.0, dt=8.0, crystal_length=2e4, n_steps=10)
        pumps = cw_pumps(tilt_deg=0.2, chi=0.1)  # absurd gain per step
        sim = SplitStepSim(pplt, grid, pumps)
        with pytest.raises(NumericalInstability):
            run_simulation(
                sim, seed="coherent_seed", seed_amplitude=0.5, realizations=1,
                deplete=True,
            )


class TestRunSimulation:
    def test_deterministic_given_seed(self, pplt):
        sim = SplitStepSim(pplt, small_grid(n_steps=20), cw_pumps())
        a = run_simulation(sim, rng_seed=7, realizations=2)
        b = run_simulation(sim, rng_seed=7, realizations=2)
        za, ia = a.final()
        zb, ib = b.final()
        assert za == zb
        np.testing.assert_array_equal(ia, ib)

    def test_vacuum_input_intensity_half_photon(self, pplt):
        # with the pump off, every mode holds half a photon on average
        pumps = cw_pumps(alpha1=0.0, alpha2=0.0, chi=0.0)
        with pytest.raises(ValueError):
            SplitStepSim(pplt, small_grid(), pumps, sigma=0.0)
        sim = SplitStepSim(pplt, small_grid(n_steps=10), pumps, sigma=1e-6)
        rec = run_simulation(sim, rng_seed=3, realizations=20)
        _, inten = rec.final()
        # restrict to bins that survive the 2/3 dealiasing mask
        keep = inten[sim.dealias]
        assert keep.mean() == pytest.approx(0.5, rel=0.05)

    def test_background_scales_as_sinh2(self, pplt):
        # single pump: realization-averaged photon number on the matched ring
        # follows sinh^2(g z) within Monte-Carlo error
        g = 3e-3
        grid = SimGrid(nx=64, nt=64, dx=2.0, dt=6.0, crystal_length=800.0, n_steps=200)
        pumps = PumpPulseSpec(
            waist=1e6, duration=1e9, alpha1=1.0, alpha2=0.0,
            theta_p1=0.0, theta_p2=0.01, chi1=g, chi2=g,
        )
        sim = SplitStepSim(pplt, grid, pumps)
        rec = run_simulation(sim, rng_seed=11, realizations=60, checkpoint_every=100)
        qx, _, om = grid.spectral_axes()
        # pick a bin on the pump-1 phase-matching circle at Omega > 0
        from dppdc.phasematch import PumpModeCoord, surface_radius

        io = 12
        circ = surface_radius(pplt, PumpModeCoord(0.0), om[io])
        assert circ.F > 0
        iq = int(round(np.sqrt(circ.F) / (qx[1] - qx[0])))
        zs = sorted(rec.checkpoints)
        for z in zs:
            got = rec.checkpoints[z][iq, 0, io] - 0.5
            expected = np.sinh(g * z) ** 2
            assert got == pytest.approx(expected, rel=0.5)  # MC tolerance

    def test_evanescent_energy_reported(self, pplt):
        sim = SplitStepSim(pplt, small_grid(n_steps=5), cw_pumps())
        rec = run_simulation(sim, rng_seed=1, realizations=1)
        assert rec.evanescent_energy_fraction < 1e-9
        assert not rec.evanescent_flag


class TestHotspotGain:
    def test_requires_three_checkpoints(self, pplt):
        sim = SplitStepSim(pplt, small_grid(n_steps=20), cw_pumps())
        rec = run_simulation(sim, rng_seed=0, realizations=1, checkpoint_every=20)
        with pytest.raises(ValueError):
            hotspot_gain(rec, WindowSpec(0, 0), WindowSpec(1, 1))

    def test_flags_non_exponential(self, pplt):
        sim = SplitStepSim(pplt, small_grid(n_steps=40), cw_pumps(chi=1e-9))
        rec = run_simulation(sim, rng_seed=0, realizations=1, checkpoint_every=10)
        rep = hotspot_gain(rec, WindowSpec(0, 5), WindowSpec(10, 5))
        assert rep.flagged  # flat noise, not exponential growth


class TestCheckpointIO:
    def test_roundtrip(self, tmp_path, pplt):
        grid = small_grid(n_steps=4)
        arr = np.arange(grid.nx * grid.ny * grid.nt, dtype=float).reshape(grid.shape)
        path = tmp_path / "c.bin"
        write_checkpoint(path, arr, 123.0, grid)
        data, z = read_checkpoint(path)
        assert z == 123.0
        np.testing.assert_array_equal(data, arr)

    def test_complex_roundtrip(self, tmp_path, pplt):
        grid = small_grid(n_steps=4)
        arr = (np.random.default_rng(0).standard_normal(grid.shape)
               + 1j * np.random.default_rng(1).standard_normal(grid.shape))
        path = tmp_path / "c.bin"
        write_checkpoint(path, arr, 5.0, grid)
        data, z = read_checkpoint(path)
        np.testing.assert_array_equal(data, arr)

    def test_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"NOTDPPDC" + b"\x00" * 64)
        with pytest.raises(ValueError, match="checkpoint"):
            read_checkpoint(path)
