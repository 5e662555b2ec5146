import numpy as np
import pytest

from dppdc import dispersion as disp
from dppdc.phasematch import (
    MismatchMethod,
    ModeCoord,
    PumpModeCoord,
    collinear_mismatch,
    mismatch,
    pump_mode_from_tilt,
    sample_surface,
    surface_radius,
    symmetric_omega_grid,
)


class TestMismatch:
    def test_signal_idler_exchange_symmetry(self, pplt_fig_poling, bbo):
        rng = np.random.default_rng(42)
        for model, beta in ((pplt_fig_poling, 0.0), (bbo, 0.35)):
            for _ in range(10):
                pump = PumpModeCoord(qx=rng.uniform(-0.6, 0.6))
                w = ModeCoord(
                    qx=rng.uniform(-0.8, 0.8),
                    qy=rng.uniform(-0.8, 0.8),
                    omega=rng.uniform(-0.15, 0.15),
                )
                w_conj = ModeCoord(
                    qx=pump.qx - w.qx, qy=pump.qy - w.qy, omega=-w.omega
                )
                for method in MismatchMethod:
                    d1 = mismatch(model, pump, w, method, beta).value
                    d2 = mismatch(model, pump, w_conj, method, beta).value
                    assert d1 == pytest.approx(d2, abs=1e-12)

    def test_collinear_design_point(self, pplt, bbo):
        origin = ModeCoord(0.0, 0.0, 0.0)
        on_axis = PumpModeCoord(0.0)
        for model in (pplt, bbo):
            for method in MismatchMethod:
                assert abs(mismatch(model, on_axis, origin, method).value) < 1e-4

    def test_exact_vs_paraxial_window(self, bbo):
        pump = PumpModeCoord(0.0)
        for qx in np.linspace(-0.5, 0.5, 21):
            w = ModeCoord(qx=qx, qy=0.2, omega=0.0)
            de = mismatch(bbo, pump, w, MismatchMethod.EXACT).value
            dp = mismatch(bbo, pump, w, MismatchMethod.PARAXIAL).value
            assert abs(de - dp) < 1e-5

    def test_evanescent_error(self, bbo):
        pump = PumpModeCoord(0.0)
        ks = disp.signal_wavenumber(bbo, 0.0)
        with pytest.raises(ValueError, match="evanescent"):
            mismatch(bbo, pump, ModeCoord(ks * 1.01, 0.0, 0.0), MismatchMethod.EXACT)


class TestCollinearMismatch:
    def test_even_in_omega(self, pplt_fig_poling):
        for om in (0.03, 0.11, 0.19):
            assert collinear_mismatch(pplt_fig_poling, om) == pytest.approx(
                collinear_mismatch(pplt_fig_poling, -om), rel=1e-14
            )

    def test_design_point_near_zero(self, pplt, bbo):
        assert abs(collinear_mismatch(pplt, 0.0)) < 1e-10
        assert abs(collinear_mismatch(bbo, 0.0)) < 1e-10

    def test_small_over_entire_band(self, bbo):
        # |Dcoll / k_p| < 1e-2 for signal wavelengths across 0.43-2.1 um
        k_p = disp.pump_wavenumber(bbo)
        for lam in np.linspace(0.43, 2.1, 40):
            om = 2 * np.pi * disp.C_UM_FS / lam - bbo.omega_signal
            assert abs(collinear_mismatch(bbo, om) / k_p) < 1e-2


class TestSurfaceRadius:
    def test_circle_points_satisfy_mismatch(self, pplt_fig_poling, bbo):
        for model, beta, tilt in ((pplt_fig_poling, 0.0, -1.2), (bbo, 0.2, 1.2)):
            pump = pump_mode_from_tilt(model, np.radians(tilt))
            for om in (0.0, 0.08, -0.15):
                circ = surface_radius(model, pump, om, beta)
                if circ.F < 0:
                    continue
                r = np.sqrt(circ.F)
                for phi in np.linspace(0, 2 * np.pi, 17):
                    w = ModeCoord(
                        qx=circ.center_qx + r * np.cos(phi),
                        qy=circ.center_qy + r * np.sin(phi),
                        omega=om,
                    )
                    d = mismatch(model, pump, w, MismatchMethod.PARAXIAL, beta).value
                    assert abs(d) < 1e-9

    def test_center_angle_tracks_pump_tilt(self, pplt_fig_poling):
        theta = np.radians(1.2)
        pump = pump_mode_from_tilt(pplt_fig_poling, theta)
        circ = surface_radius(pplt_fig_poling, pump, 0.0)
        ks = disp.signal_wavenumber(pplt_fig_poling, 0.0)
        # "roughly collinear": the grating vector shifts the centre by a few %
        assert circ.center_qx / ks == pytest.approx(theta, rel=0.05)

    def test_shape_classification_with_matched_poling(self, pplt, pplt_pump):
        # exactly matched poling pinches the tubes: no circle at degeneracy,
        # reappearance at finite offsets (two branches)
        p1, _ = pplt_pump.pump_modes(pplt)
        assert surface_radius(pplt, p1, 0.0).F < 0
        assert surface_radius(pplt, p1, 0.12).F > 0
        assert surface_radius(pplt, p1, -0.12).F > 0

    def test_open_tube_with_reference_poling(self, pplt_fig_poling, pplt_pump):
        p1, _ = pplt_pump.pump_modes(pplt_fig_poling)
        assert surface_radius(pplt_fig_poling, p1, 0.0).F > 0

    def test_bbo_tilted_surface_morphology_vs_rotation(self, bbo):
        # rotating the tilt plane flips the tilted pump's wavenumber shift:
        # negative rotations leave degenerate (non-collinear) emission, while
        # positive ones open a gap around degeneracy (non-degenerate)
        pump2 = pump_mode_from_tilt(bbo, np.radians(1.2))
        f_neg = surface_radius(bbo, pump2, 0.0, beta=np.radians(-7.16)).F
        f_pos = surface_radius(bbo, pump2, 0.0, beta=np.radians(+9.0)).F
        assert f_neg > 0
        assert f_pos < 0
        # the gap closes again at finite frequency offsets (two branches)
        assert surface_radius(bbo, pump2, 0.35, beta=np.radians(9.0)).F > 0


class TestSampleSurface:
    def test_row_count_matches_positive_radius_count(self, pplt_fig_poling, pplt_pump):
        p1, _ = pplt_pump.pump_modes(pplt_fig_poling)
        grid = symmetric_omega_grid(25, 0.35)
        n_az = 16
        samples = sample_surface(pplt_fig_poling, p1, grid, n_az)
        n_pos = sum(surface_radius(pplt_fig_poling, p1, om).F >= 0 for om in grid)
        assert len(samples) == n_pos * n_az

    def test_empty_at_pinched_frequencies(self, pplt, pplt_pump):
        p1, _ = pplt_pump.pump_modes(pplt)
        samples = sample_surface(pplt, p1, [0.0], 8)
        assert samples == []

    def test_angles_attached(self, pplt_fig_poling, pplt_pump):
        p1, _ = pplt_pump.pump_modes(pplt_fig_poling)
        samples = sample_surface(pplt_fig_poling, p1, [0.05], 8)
        for s in samples:
            ks = disp.signal_wavenumber(pplt_fig_poling, 0.05)
            assert s.theta_x == pytest.approx(s.mode.qx / ks, rel=1e-12)

    def test_empty_grid_raises(self, pplt, pplt_pump):
        p1, _ = pplt_pump.pump_modes(pplt)
        with pytest.raises(ValueError):
            sample_surface(pplt, p1, [], 8)


class TestOmegaGrid:
    def test_symmetric_with_exact_pairs(self):
        grid = symmetric_omega_grid(10, 0.3)
        assert len(grid) == 21
        assert 0.0 in grid
        for om in grid:
            assert -om in grid
