"""Run configuration: a versioned JSON document.

Complex numbers are written as two-element [re, im] arrays.  The
perturbation is either a list of harmonics {n_x, n_y, c} (synthesized on
the run grid) or a grid_file holding v0 samples in the DS2F binary format.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError

SCHEMA_VERSION = 1

FORMATS = ("csv", "bin", "both")


@dataclass
class RunConfig:
    L_x: float
    L_y: float
    eps: float
    a: float = 1.0
    harmonics: list[tuple[int, int, complex]] = field(default_factory=list)
    grid_file: str | None = None
    nx: int = 64
    ny: int = 64
    times: list[float] = field(default_factory=lambda: [0.0])
    dt: float = 1e-3
    theta_radius: int | str = "adaptive"
    theta_tail_tol: float = 1e-10
    out_dir: str | None = None
    out_format: str = "both"

    def validate(self) -> None:
        if self.L_x <= 0 or self.L_y <= 0:
            raise ConfigError("invalid-period", "periods must be positive")
        if self.a <= 0:
            raise ConfigError("config-parse", "background a must be positive")
        if self.eps <= 0:
            raise ConfigError("config-parse", "eps must be positive")
        if not self.harmonics and not self.grid_file:
            raise ConfigError(
                "config-parse", "perturbation needs harmonics or a grid_file"
            )
        if self.harmonics and self.grid_file:
            raise ConfigError(
                "config-parse", "perturbation: give harmonics or grid_file, not both"
            )
        for n_x, n_y, _ in self.harmonics:
            if n_x == 0 and n_y == 0:
                raise ConfigError(
                    "config-parse", "harmonic (0, 0) violates the zero-mean gauge"
                )
        if self.nx < 8 or self.ny < 8:
            raise ConfigError("config-parse", "grid must be at least 8x8")
        if list(self.times) != sorted(self.times):
            raise ConfigError("config-parse", "times must be sorted non-decreasing")
        if self.dt <= 0:
            raise ConfigError("config-parse", "dt must be positive")
        if self.theta_radius != "adaptive" and (
            not isinstance(self.theta_radius, int) or self.theta_radius < 1
        ):
            raise ConfigError("config-parse", 'theta M must be "adaptive" or int >= 1')
        if self.out_format not in FORMATS:
            raise ConfigError("config-parse", f"format must be one of {FORMATS}")

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "L_x": self.L_x,
            "L_y": self.L_y,
            "a": self.a,
            "eps": self.eps,
            "perturbation": (
                {"grid_file": self.grid_file}
                if self.grid_file
                else {
                    "harmonics": [
                        {"n_x": nx_, "n_y": ny_, "c": [c.real, c.imag]}
                        for nx_, ny_, c in self.harmonics
                    ]
                }
            ),
            "grid": [self.nx, self.ny],
            "times": list(self.times),
            "dt": self.dt,
            "theta": {"M": self.theta_radius, "tail_tol": self.theta_tail_tol},
            "outputs": {"directory": self.out_dir, "format": self.out_format},
        }

    def v0_grid(self) -> np.ndarray:
        """Perturbation samples on the run grid, in the convention
        v0 = sum_n c_n exp(i(k_x x + k_y y))."""
        if self.grid_file:
            from .fieldio import read_field_bin

            f = read_field_bin(self.grid_file)
            if (f.nx, f.ny) != (self.nx, self.ny):
                raise ConfigError(
                    "config-parse",
                    f"grid_file is {f.nx}x{f.ny}, config grid is {self.nx}x{self.ny}",
                )
            return np.asarray(f.u, dtype=complex)
        ix = np.arange(self.nx)
        iy = np.arange(self.ny)
        IX, IY = np.meshgrid(ix, iy, indexing="xy")
        v0 = np.zeros((self.ny, self.nx), dtype=complex)
        for n_x, n_y, c in self.harmonics:
            v0 += c * np.exp(2j * np.pi * (n_x * IX / self.nx + n_y * IY / self.ny))
        return v0


def _parse_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ConfigError("config-parse", f"complex values must be [re, im], got {v!r}")


def config_from_dict(doc: dict) -> RunConfig:
    try:
        if doc.get("schema") != SCHEMA_VERSION:
            raise ConfigError(
                "config-parse", f"unsupported schema {doc.get('schema')!r}"
            )
        pert = doc.get("perturbation", {})
        harmonics = [
            (int(h["n_x"]), int(h["n_y"]), _parse_complex(h["c"]))
            for h in pert.get("harmonics", [])
        ]
        grid = doc.get("grid", [64, 64])
        theta_doc = doc.get("theta", {})
        outputs = doc.get("outputs", {}) or {}
        cfg = RunConfig(
            L_x=float(doc["L_x"]),
            L_y=float(doc["L_y"]),
            a=float(doc.get("a", 1.0)),
            eps=float(doc["eps"]),
            harmonics=harmonics,
            grid_file=pert.get("grid_file"),
            nx=int(grid[0]),
            ny=int(grid[1]),
            times=[float(t) for t in doc.get("times", [0.0])],
            dt=float(doc.get("dt", 1e-3)),
            theta_radius=theta_doc.get("M", "adaptive"),
            theta_tail_tol=float(theta_doc.get("tail_tol", 1e-10)),
            out_dir=outputs.get("directory"),
            out_format=outputs.get("format", "both"),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigError("config-parse", f"bad config field: {err}") from err
    cfg.validate()
    return cfg


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError("config-parse", f"cannot read config {path}: {err}") from err
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(
            "config-parse", f"{path}:{err.lineno}:{err.colno}: {err.msg}"
        ) from err
    return config_from_dict(doc)


def config_hash(cfg: RunConfig) -> str:
    canon = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()
