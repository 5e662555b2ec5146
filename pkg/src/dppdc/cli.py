"""Command-line front end: ``dppdc surface|modes|dynamics|simulate``.

Every command is a pure function of (config, rng_seed) to a fresh output
directory named after the config hash and seed; re-running never mutates
prior outputs.  A manifest with the config digest, package versions and
timings is written alongside the data.  Exit codes: 0 ok, 2 config error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import dispersion as disp
from . import dynamics as dyn
from .config import ConfigError, RunConfig, load_config
from .gaussian import GaussianState, witness_variances
from .modes import (
    enumerate_clusters,
    planar_shared_omega,
    resonance_beta,
    resonance_residual,
    shared_qx,
)
from .phasematch import sample_surface, surface_radius
from .splitstep import (
    NumericalInstability,
    PumpPulseSpec,
    SimGrid,
    SplitStepSim,
    WindowSpec,
    hotspot_gain,
    run_simulation,
    write_checkpoint,
)
from .units import C_UM_FS


def _fmt(x):
    return f"{x:.12g}"


def _make_outdir(base: Path, cfg: RunConfig, command: str, seed) -> Path:
    label = cfg.output.get("label", "run")
    stem = f"{label}-{command}-{cfg.sha256[:8]}-s{seed}"
    path = base / stem
    suffix = 1
    while path.exists():
        suffix += 1
        path = base / f"{stem}-{suffix}"
    path.mkdir(parents=True)
    return path


def _write_manifest(outdir: Path, cfg: RunConfig, command, seed, t_start, extra=None):
    import scipy

    manifest = {
        "command": command,
        "config_sha256": cfg.sha256,
        "config_path": cfg.source_path,
        "rng_seed": seed,
        "dppdc_version": __version__,
        "numpy_version": np.__version__,
        "scipy_version": scipy.__version__,
        "elapsed_s": round(time.time() - t_start, 3),
    }
    if extra:
        manifest.update(extra)
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def cmd_surface(cfg: RunConfig, outdir: Path, seed) -> dict:
    """Emit the two phase-matching surfaces as point-cloud CSVs."""
    model = cfg.crystal_model()
    pump = cfg.pump_config()
    omega_grid = cfg.omega_grid()
    p_modes = pump.pump_modes(model)
    rows_total = 0
    for pump_id, pmode in enumerate(p_modes, start=1):
        samples = sample_surface(
            model, pmode, omega_grid, cfg.solver["n_azimuth"], pump.beta
        )
        path = outdir / f"sigma{pump_id}.csv"
        with open(path, "w") as fh:
            fh.write("lambda_um,omega_offset,theta_x_rad,theta_y_rad,qx,qy,branch_id,pump_id\n")
            for s in samples:
                branch = 1 if s.mode.qy >= 0 else -1
                fh.write(
                    ",".join(
                        [
                            _fmt(s.lambda_um),
                            _fmt(s.mode.omega),
                            _fmt(s.theta_x),
                            _fmt(s.theta_y),
                            _fmt(s.mode.qx),
                            _fmt(s.mode.qy),
                            str(branch),
                            str(pump_id),
                        ]
                    )
                    + "\n"
                )
        rows_total += len(samples)
    return {"rows": rows_total}


def _mode_record(model, mode):
    ks = disp.signal_wavenumber(model, mode.omega)
    lam = 2.0 * np.pi * C_UM_FS / (model.omega_signal + mode.omega)
    return {
        "qx": mode.qx,
        "qy": mode.qy,
        "omega_offset": mode.omega,
        "lambda_um": lam,
        "theta_x": mode.qx / ks,
        "theta_y": mode.qy / ks,
    }


def cmd_modes(cfg: RunConfig, outdir: Path, seed, with_resonance=False) -> dict:
    """Solve shared/coupled clusters over the frequency grid; JSON output."""
    model = cfg.crystal_model()
    pump = cfg.pump_config()
    omega_grid = cfg.omega_grid()
    branch = cfg.solver["y_branch"]
    branches = ("plus", "minus") if branch == "both" else (branch,)
    length_um = cfg.solver["crystal_length_mm"] * 1e3
    clusters = enumerate_clusters(model, pump, omega_grid, branches, length_um)

    records = []
    for cl in clusters:
        rec = {
            "kind": cl.kind,
            "y_branch": cl.y_branch,
            "shared": _mode_record(model, cl.shared),
            "coupled_b": {"pump": 1, **_mode_record(model, cl.coupled_b)},
            "coupled_c": {"pump": 2, **_mode_record(model, cl.coupled_c)},
            "residuals_um^-1": cl.residuals,
        }
        if cl.kind == "quadruplet":
            rec["merged_with"] = cl.merged_with
            if cl.shared_conjugate is not None:
                rec["shared_conjugate"] = _mode_record(model, cl.shared_conjugate)
        records.append(rec)

    payload = {"n_clusters": len(records), "clusters": records}
    if with_resonance and model.kind is disp.CrystalKind.BBO_TYPE1:
        betas = resonance_beta(model, pump.theta_p1, pump.theta_p2)
        res = resonance_residual(model, pump, 0.0)
        payload["resonance"] = {
            "beta_merge_b_deg": float(np.degrees(betas.beta_merge_b)),
            "beta_merge_c_deg": float(np.degrees(betas.beta_merge_c)),
            "residual_pump1_um^-1": res.pump1,
            "residual_pump2_um^-1": res.pump2,
        }
    (outdir / "clusters.json").write_text(json.dumps(payload, indent=2) + "\n")
    return {"clusters": len(records)}


def cmd_dynamics(cfg: RunConfig, outdir: Path, seed) -> dict:
    """Squeeze-eigenvalue sweep and witness decay curves."""
    pump = cfg.pump_config()
    d = cfg.dynamics
    g1, g2 = pump.g1, pump.g2
    gbar = pump.gbar

    rho_grid = np.linspace(d["rho_min"], d["rho_max"], d["n_rho"])
    # pin the analytically special points onto the grid
    rho_grid = np.unique(np.concatenate([rho_grid, [1.0, np.sqrt(2.0)]]))
    with open(outdir / "eigen_sweep.csv", "w") as fh:
        fh.write("rho,lambda_sigma_over_gbar,lambda_delta_over_gbar,mix_cos,mix_sin\n")
        for rho in rho_grid:
            if rho == 0.0:
                lam_s, lam_d, ct, st = 1.0, 0.0, 1.0, 0.0
            else:
                p = dyn.CouplingParams(g1=1.0, g2=rho, z=1.0)
                dec = dyn.quad_decompose(p)
                lam_s = dec.lambda_sigma / p.gbar
                lam_d = dec.lambda_delta / p.gbar
                ct, st = dec.mix_cos, dec.mix_sin
            fh.write(",".join(_fmt(v) for v in (rho, lam_s, lam_d, ct, st)) + "\n")

    z_max = d["z_mm"] * 1e3
    zs = np.linspace(0.0, z_max, d["n_z"])
    delta = d["delta_per_mm"] * 1e-3
    decomp = dyn.quad_decompose(dyn.CouplingParams(g1=g1, g2=g2, z=1.0))
    with open(outdir / "witness_decay.csv", "w") as fh:
        fh.write("z_um,var_fI,var_fII,var_fIII,var_fIV,predicted_sigma,predicted_delta\n")
        for z in zs:
            params = dyn.CouplingParams(g1=g1, g2=g2, delta=delta, z=max(z, 0.0))
            state = dyn.quad_evolve(params) if z > 0 else GaussianState.vacuum(4)
            rep = witness_variances(state, decomp, pump.phi1, pump.phi2, z)
            fh.write(
                ",".join(
                    _fmt(v)
                    for v in (
                        z,
                        rep.var_f1,
                        rep.var_f2,
                        rep.var_f3,
                        rep.var_f4,
                        rep.predicted_sigma,
                        rep.predicted_delta,
                    )
                )
                + "\n"
            )

    report = {
        "g1_um^-1": [g1.real, g1.imag],
        "g2_um^-1": [g2.real, g2.imag],
        "gbar_um^-1": gbar,
        "rho": abs(g2) / abs(g1) if abs(g1) > 0 else None,
        "lambda_sigma_um^-1": decomp.lambda_sigma,
        "lambda_delta_um^-1": decomp.lambda_delta,
        "mix_cos": decomp.mix_cos,
        "mix_sin": decomp.mix_sin,
        "phase_b": decomp.phase_b,
        "phase_c": decomp.phase_c,
        "signal_idler_unitary_re": dyn.quad_signal_idler_unitary(decomp).real.tolist(),
        "signal_idler_unitary_im": dyn.quad_signal_idler_unitary(decomp).imag.tolist(),
    }
    (outdir / "decomposition.json").write_text(json.dumps(report, indent=2) + "\n")
    return {"rho_points": len(rho_grid), "z_points": len(zs)}


def _build_sim(cfg: RunConfig):
    model = cfg.crystal_model()
    p = cfg.pump
    s = cfg.sim
    alpha1 = p["alpha1"] * np.exp(1j * np.radians(p["alpha1_phase_deg"]))
    alpha2 = p["alpha2"] * np.exp(1j * np.radians(p["alpha2_phase_deg"]))
    amag = np.hypot(abs(alpha1), abs(alpha2))
    chi = (s["gbar_per_mm"] * 1e-3) / amag  # common nonlinearity from target gain
    pumps = PumpPulseSpec(
        waist=s["waist_um"],
        duration=s["duration_fs"],
        alpha1=alpha1,
        alpha2=alpha2,
        theta_p1=np.radians(p["theta_p1_deg"]),
        theta_p2=np.radians(p["theta_p2_deg"]),
        beta=np.radians(p["beta_deg"]),
        chi1=chi,
        chi2=chi,
    )
    grid = SimGrid(
        nx=s["nx"],
        ny=s["ny"],
        nt=s["nt"],
        dx=s["dx_um"],
        dy=s["dy_um"],
        dt=s["dt_fs"],
        crystal_length=s["crystal_length_mm"] * 1e3,
        n_steps=s["n_steps"],
    )
    return model, SplitStepSim(model, grid, pumps, sigma=chi)


def cmd_simulate(cfg: RunConfig, outdir: Path, seed, gain_report=False) -> dict:
    """Run the split-step simulation; far-field CSV plus optional gain fit."""
    model, sim = _build_sim(cfg)
    s = cfg.sim
    record = run_simulation(
        sim,
        seed=s["seed"],
        rng_seed=seed,
        realizations=s["realizations"],
        checkpoint_every=s["checkpoint_every"],
        deplete=s["deplete"],
        seed_amplitude=s["seed_amplitude"],
    )
    z_final, intensity = record.final()
    order_q = np.argsort(record.qx)
    order_o = np.argsort(record.omega)
    with open(outdir / "farfield.csv", "w") as fh:
        fh.write("qx,omega,intensity\n")
        for iq in order_q:
            for io in order_o:
                fh.write(
                    f"{_fmt(record.qx[iq])},{_fmt(record.omega[io])},"
                    f"{_fmt(intensity[iq, 0, io])}\n"
                )
    if s["write_checkpoints"]:
        for z, inten in sorted(record.checkpoints.items()):
            write_checkpoint(outdir / f"checkpoint_z{int(round(z))}.bin", inten, z, sim.grid)

    extra = {
        "z_final_um": z_final,
        "evanescent_energy_fraction": record.evanescent_energy_fraction,
        "evanescent_flag": record.evanescent_flag,
        "kernel_backend": __import__("dppdc._kernels", fromlist=["BACKEND"]).BACKEND,
    }
    if gain_report:
        pump = cfg.pump_config()
        om_max = np.abs(record.omega).max() * (2.0 / 3.0)
        om_star = planar_shared_omega(model, pump, om_max * 0.9)
        if om_star is None:
            extra["gain_report"] = {"error": "no planar shared mode in the band"}
        else:
            dq = record.qx[1] - record.qx[0]
            dom = record.omega[1] - record.omega[0]
            q0 = shared_qx(model, pump, om_star)
            hot = WindowSpec(
                iq=int(round(q0 / dq)) % sim.grid.nx,
                iomega=int(round(om_star / dom)) % sim.grid.nt,
            )
            om_bg = min(1.45 * om_star, om_max * 0.95)
            p2 = pump.pump_modes(model)[1]
            circ = surface_radius(model, p2, om_bg, pump.beta)
            q_bg = circ.center_qx - np.sqrt(max(circ.F, 0.0))
            bg = WindowSpec(
                iq=int(round(q_bg / dq)) % sim.grid.nx,
                iomega=int(round(om_bg / dom)) % sim.grid.nt,
            )
            fit = hotspot_gain(record, hot, bg, z_min=0.5 * z_final)
            extra["gain_report"] = {
                "hot_exponent_per_um": fit.hot_exponent,
                "background_exponent_per_um": fit.background_exponent,
                "ratio": fit.ratio,
                "r_squared_hot": fit.r_squared_hot,
                "r_squared_background": fit.r_squared_background,
                "flagged_non_exponential": fit.flagged,
            }
    return extra


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dppdc",
        description="Doubly pumped parametric down-conversion toolkit",
    )
    parser.add_argument("command", choices=["surface", "modes", "dynamics", "simulate"])
    parser.add_argument("--config", required=True, help="path to the run config")
    parser.add_argument("--out", default="out", help="output base directory")
    parser.add_argument("--seed", type=int, default=0, help="rng seed (u64)")
    parser.add_argument(
        "--resonance", action="store_true", help="modes: add the resonance report"
    )
    parser.add_argument(
        "--gain-report", action="store_true", help="simulate: fit hot-spot gains"
    )
    args = parser.parse_args(argv)

    t0 = time.time()
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        outdir = _make_outdir(Path(args.out), cfg, args.command, args.seed)
        if args.command == "surface":
            extra = cmd_surface(cfg, outdir, args.seed)
        elif args.command == "modes":
            extra = cmd_modes(cfg, outdir, args.seed, with_resonance=args.resonance)
        elif args.command == "dynamics":
            extra = cmd_dynamics(cfg, outdir, args.seed)
        else:
            extra = cmd_simulate(cfg, outdir, args.seed, gain_report=args.gain_report)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalInstability as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3

    _write_manifest(outdir, cfg, args.command, args.seed, t0, extra)
    print(outdir)
    return 0


if __name__ == "__main__":
    sys.exit(main())
