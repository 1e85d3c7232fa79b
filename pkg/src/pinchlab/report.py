"""Run configuration and machine-readable verification reports.

Reports are deterministic: identical configuration produces byte-identical
JSON (keys sorted, no timestamps, floats via shortest round-trip repr).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .collar import ELL_MAX
from .errors import DomainError

DEFAULT_TOLERANCES = {
    "exact_identity": 1e-10,    # closed-form identity checks
    "fp_guard": 1e-12,          # slack allowance for proved equalities in floating point
    "slope_dev": 0.02,          # allowed deviation of the sharpness slope from -1/2
    "ratio_flat": 1.1,          # max/min of the sharpness ratio on the small-ell window
    "first_variation": 1e-8,    # |first variation - 1/2|
    "residual_4096": 1e-6,      # projection residual at 4096 points
    "residual_drop": 10.0,      # required residual decrease factor 4096 -> 8192
    "pure_re_residual": 1e-10,
    "pure_lie_residual": 1e-8,
    "wp_quad_rel": 1e-8,        # closed form vs quadrature, relative
    "proj_stability": 1e-6,     # |c(4096) - c(8192)| relative
    "refine_frac": 0.05,        # empirical-constant stability under refinement
    "lip_refine_frac": 0.02,    # Lipschitz-constant stability
    "length_decay_frac": 0.05,  # required L(t_last)/L(0) for "L -> 0"
}


@dataclass(frozen=True)
class RunConfig:
    """Sweep bounds, grid sizes, and tolerance overrides for verification runs."""

    ell_min: float = 1e-3
    ell_max: float = ELL_MAX
    ell_samples: int = 64
    grid: int = 512
    time_grid: int = 32
    schedule_spec: str = "power:p=3"
    delta: float = 0.01
    d_max: float = 5.0
    out_dir: str = None
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (0.0 < self.ell_min <= self.ell_max <= ELL_MAX * (1.0 + 1e-12)):
            raise DomainError(
                f"ell bounds must satisfy 0 < ell_min <= ell_max <= {ELL_MAX:.12g}"
            )
        for name in ("ell_samples", "grid", "time_grid"):
            if getattr(self, name) < 16:
                raise DomainError(f"{name} must be >= 16")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise DomainError(
                f"unknown tolerance names {sorted(unknown)}; valid: {sorted(DEFAULT_TOLERANCES)}"
            )

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])

    def ell_sweep(self) -> np.ndarray:
        return np.geomspace(self.ell_min, self.ell_max, self.ell_samples)

    def stamp(self) -> dict:
        tols = dict(DEFAULT_TOLERANCES)
        tols.update(self.tolerances)
        return {
            "ell_min": self.ell_min,
            "ell_max": self.ell_max,
            "ell_samples": self.ell_samples,
            "grid": self.grid,
            "time_grid": self.time_grid,
            "schedule": self.schedule_spec,
            "delta": self.delta,
            "d_max": self.d_max,
            "tolerances": tols,
        }


@dataclass(frozen=True)
class CheckRecord:
    """One verification check: parameters, measured values, tolerance, verdict."""

    check_id: str
    passed: bool
    measured: dict
    tolerance: float = None
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "id": self.check_id,
            "pass": bool(self.passed),
            "measured": _jsonable(self.measured),
            "tolerance": _jsonable(self.tolerance),
            "params": _jsonable(self.params),
        }


@dataclass(frozen=True)
class VerificationReport:
    """A suite's checks plus the empirical constants it measured."""

    suite: str
    config: RunConfig
    checks: tuple
    constants: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(rec.passed for rec in self.checks)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "pass": bool(self.passed),
            "environment": self.config.stamp(),
            "constants": _jsonable(self.constants),
            "checks": [rec.to_json() for rec in self.checks],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


def _jsonable(value):
    """Map numpy scalars/arrays and infinities into deterministic JSON values."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value
