"""Run configuration: INI-style key-value files with a strict schema.

Angles are given in degrees and wavelengths in nanometres at this boundary
and converted to the internal units (rad, um, fs) on load.  Unknown
sections or keys are rejected with the offending line number.  Every value
has a documented default; a config therefore only states what differs from
the reference setup.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dispersion import CrystalModel
from .modes import PumpConfig


class ConfigError(Exception):
    """Schema or value error; carries a line number when locatable."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


def _find_line(path, needle):
    try:
        with open(path) as fh:
            for i, line in enumerate(fh, start=1):
                stripped = line.strip()
                if stripped.startswith(needle) or stripped.startswith(f"[{needle}]"):
                    return i
    except OSError:
        pass
    return None


# key -> (type, default); defaults are the PPLT reference setup
SCHEMA = {
    "crystal": {
        "kind": (str, "pplt"),
        "temperature_c": (float, 75.0),
        "pump_wavelength_nm": (float, 532.0),
        "poling_period_um": (str, "matched"),  # number or "matched"
        "cut_angle_deg": (str, "matched"),  # number or "matched" (BBO)
        "sellmeier": (str, "default"),
        "sellmeier_file": (str, ""),
    },
    "pump": {
        "theta_p1_deg": (float, -1.2),
        "theta_p2_deg": (float, 1.2),
        "beta_deg": (float, 0.0),
        "alpha1": (float, 1.0),
        "alpha1_phase_deg": (float, 0.0),
        "alpha2": (float, 1.0),
        "alpha2_phase_deg": (float, 0.0),
        "chi1_per_mm": (float, 1.0),
        "chi2_per_mm": (float, 1.0),
    },
    "solver": {
        "lambda_min_nm": (float, 900.0),
        "lambda_max_nm": (float, 1300.0),
        "n_omega_half": (int, 60),
        "n_azimuth": (int, 64),
        "y_branch": (str, "both"),  # plus | minus | both
        "crystal_length_mm": (float, 4.0),
        "mismatch_method": (str, "paraxial"),
    },
    "dynamics": {
        "z_mm": (float, 2.0),
        "n_z": (int, 50),
        "rho_min": (float, 0.0),
        "rho_max": (float, 5.0),
        "n_rho": (int, 201),
        "delta_per_mm": (float, 0.0),
    },
    "sim": {
        "nx": (int, 512),
        "ny": (int, 1),
        "nt": (int, 256),
        "dx_um": (float, 2.0),
        "dy_um": (float, 2.0),
        "dt_fs": (float, 6.0),
        "crystal_length_mm": (float, 2.4),
        "n_steps": (int, 400),
        "waist_um": (float, 250.0),
        "duration_fs": (float, 2.0e5),
        "gbar_per_mm": (float, 3.0),
        "seed": (str, "stochastic_vacuum"),
        "seed_amplitude": (float, 0.0),
        "realizations": (int, 12),
        "checkpoint_every": (int, 40),
        "deplete": (bool, False),
        "write_checkpoints": (bool, False),
    },
    "output": {
        "label": (str, "run"),
    },
}


@dataclass
class RunConfig:
    """Validated configuration; sections as plain dicts in internal units
    where conversion is unambiguous (angles stay in the section dicts as
    radians, lengths as um, see the builders below)."""

    crystal: dict
    pump: dict
    solver: dict
    dynamics: dict
    sim: dict
    output: dict
    source_path: Optional[str] = None
    sha256: str = ""

    # -- builders ---------------------------------------------------------

    def crystal_model(self) -> CrystalModel:
        c = self.crystal
        if c["sellmeier_file"]:
            from .dispersion import register_sellmeier_config

            register_sellmeier_config(c["sellmeier_file"])
        kind = c["kind"].lower()
        lam_um = c["pump_wavelength_nm"] * 1e-3
        if kind == "pplt":
            poling = c["poling_period_um"]
            poling_val = None if poling == "matched" else float(poling)
            kwargs = {} if c["sellmeier"] == "default" else {"sellmeier": c["sellmeier"]}
            return CrystalModel.pplt(
                temperature=c["temperature_c"],
                poling_period=poling_val,
                pump_wavelength=lam_um,
                **kwargs,
            )
        if kind == "bbo":
            cut = c["cut_angle_deg"]
            cut_val = None if cut == "matched" else np.radians(float(cut))
            kwargs = {} if c["sellmeier"] == "default" else {"sellmeier": c["sellmeier"]}
            return CrystalModel.bbo(
                cut_angle=cut_val,
                pump_wavelength=lam_um,
                temperature=c["temperature_c"],
                **kwargs,
            )
        raise ConfigError(f"unknown crystal kind {kind!r} (pplt or bbo)")

    def pump_config(self) -> PumpConfig:
        p = self.pump
        return PumpConfig(
            theta_p1=np.radians(p["theta_p1_deg"]),
            theta_p2=np.radians(p["theta_p2_deg"]),
            beta=np.radians(p["beta_deg"]),
            alpha1=p["alpha1"] * np.exp(1j * np.radians(p["alpha1_phase_deg"])),
            alpha2=p["alpha2"] * np.exp(1j * np.radians(p["alpha2_phase_deg"])),
            chi1=p["chi1_per_mm"] * 1e-3,
            chi2=p["chi2_per_mm"] * 1e-3,
        )

    def omega_grid(self):
        """Symmetric frequency grid covering the solver wavelength range."""
        from .phasematch import symmetric_omega_grid
        from .units import omega_from_wavelength

        model = self.crystal_model()
        s = self.solver
        w_lo = omega_from_wavelength(s["lambda_max_nm"] * 1e-3) - model.omega_signal
        w_hi = omega_from_wavelength(s["lambda_min_nm"] * 1e-3) - model.omega_signal
        omega_max = max(abs(w_lo), abs(w_hi))
        return symmetric_omega_grid(s["n_omega_half"], omega_max)


def _coerce(raw, typ, key, lineno):
    try:
        if typ is bool:
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return typ(raw)
    except ValueError:
        raise ConfigError(f"cannot parse {key} = {raw!r} as {typ.__name__}", lineno)


def load_config(path) -> RunConfig:
    """Parse and validate a config file; raises ConfigError on any unknown
    section/key or unparseable value, before any computation runs."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path) as fh:
            text = fh.read()
        parser.read_string(text, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}")
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        raise ConfigError(f"malformed config: {exc.message if hasattr(exc, 'message') else exc}", lineno)

    sections = {}
    for section in parser.sections():
        if section.startswith("sellmeier."):
            continue  # handled by register_sellmeier_config
        if section not in SCHEMA:
            raise ConfigError(
                f"unknown section [{section}]", _find_line(path, section)
            )
        known = SCHEMA[section]
        values = {}
        for key, raw in parser[section].items():
            if key not in known:
                raise ConfigError(
                    f"unknown key {key!r} in [{section}]", _find_line(path, key)
                )
            typ, _default = known[key]
            values[key] = _coerce(raw, typ, key, _find_line(path, key))
        sections[section] = values

    full = {}
    for section, keys in SCHEMA.items():
        merged = {k: d for k, (_t, d) in keys.items()}
        merged.update(sections.get(section, {}))
        full[section] = merged

    _validate_values(full, path)
    digest = hashlib.sha256(text.encode()).hexdigest()
    return RunConfig(
        crystal=full["crystal"],
        pump=full["pump"],
        solver=full["solver"],
        dynamics=full["dynamics"],
        sim=full["sim"],
        output=full["output"],
        source_path=str(path),
        sha256=digest,
    )


def _validate_values(full, path):
    if full["crystal"]["kind"].lower() not in ("pplt", "bbo"):
        raise ConfigError(
            f"crystal kind must be pplt or bbo, got {full['crystal']['kind']!r}",
            _find_line(path, "kind"),
        )
    if full["solver"]["y_branch"] not in ("plus", "minus", "both"):
        raise ConfigError(
            "y_branch must be plus, minus or both", _find_line(path, "y_branch")
        )
    if full["sim"]["seed"] not in ("stochastic_vacuum", "coherent_seed"):
        raise ConfigError(
            "sim seed must be stochastic_vacuum or coherent_seed",
            _find_line(path, "seed"),
        )
    if full["solver"]["mismatch_method"] not in ("paraxial", "exact"):
        raise ConfigError(
            "mismatch_method must be paraxial or exact",
            _find_line(path, "mismatch_method"),
        )
    for key in ("lambda_min_nm", "lambda_max_nm"):
        if full["solver"][key] <= 0:
            raise ConfigError(f"solver {key} must be positive", _find_line(path, key))
    if full["solver"]["lambda_min_nm"] >= full["solver"]["lambda_max_nm"]:
        raise ConfigError(
            "solver lambda_min_nm must be below lambda_max_nm",
            _find_line(path, "lambda_min_nm"),
        )
    for key in ("poling_period_um", "cut_angle_deg"):
        raw = full["crystal"][key]
        if raw != "matched":
            try:
                float(raw)
            except ValueError:
                raise ConfigError(
                    f"crystal {key} must be a number or 'matched', got {raw!r}",
                    _find_line(path, key),
                )
    if full["pump"]["alpha1"] == 0 and full["pump"]["alpha2"] == 0:
        raise ConfigError(
            "at least one pump amplitude must be nonzero", _find_line(path, "alpha1")
        )
