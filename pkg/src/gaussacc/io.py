"""JSON job configs and report documents.

Matrices are stored as row-major flat lists next to an explicit ``modes``
field. Floats are written with Python's shortest round-trip ``repr``, so a
config echoed inside a report reloads bit-for-bit.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__
from .duality import AccInfoReport
from .errors import ConfigError
from .symplectic import as_array

UNITS = ("nats", "bits")
MATRIX_KEYS = ("gamma", "beta", "alpha", "beta_m")


@dataclass
class JobConfig:
    modes: int
    matrices: dict[str, np.ndarray]
    units: str = "nats"
    options: dict[str, Any] = field(default_factory=dict)
    raw: dict[str, Any] = field(default_factory=dict)

    def matrix(self, key: str) -> np.ndarray:
        try:
            return self.matrices[key]
        except KeyError:
            raise ConfigError(f"config is missing the {key!r} matrix") from None


def _flat_to_matrix(key: str, values, modes: int) -> np.ndarray:
    if not isinstance(values, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
    ):
        raise ConfigError(f"{key!r} must be a flat list of numbers")
    dim = 2 * modes
    if len(values) != dim * dim:
        raise ConfigError(f"{key!r} has {len(values)} entries, expected {dim * dim} for {modes} mode(s)")
    m = np.array(values, dtype=float).reshape(dim, dim)
    if not np.all(np.isfinite(m)):
        raise ConfigError(f"{key!r} has non-finite entries")
    return m


def parse_config(raw: Any) -> JobConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    modes = raw.get("modes")
    if not isinstance(modes, int) or isinstance(modes, bool) or modes < 1:
        raise ConfigError("'modes' must be a positive integer")
    units = raw.get("units", "nats")
    if units not in UNITS:
        raise ConfigError(f"'units' must be one of {UNITS}, got {units!r}")
    matrices = {k: _flat_to_matrix(k, raw[k], modes) for k in MATRIX_KEYS if k in raw}
    options = {k: v for k, v in raw.items() if k not in MATRIX_KEYS + ("modes", "units")}
    return JobConfig(modes=modes, matrices=matrices, units=units, options=options, raw=raw)


def load_config(path) -> JobConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return parse_config(raw)


def config_hash(raw: dict) -> str:
    canon = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def flat(m) -> list[float]:
    return [float(x) for x in np.asarray(as_array(m), dtype=float).reshape(-1)]


def convert(nats: float, units: str) -> float:
    return nats / math.log(2.0) if units == "bits" else nats


def provenance(raw: dict, seed: Optional[int] = None) -> dict:
    return {
        "tool": "gaussacc",
        "version": __version__,
        "config_sha256": config_hash(raw),
        "seed": seed,
    }


def report_document(report: AccInfoReport, config: JobConfig, seed: Optional[int] = None) -> dict:
    """JSON-ready mirror of ``report``; quantities absent from it are omitted."""
    u = config.units
    doc: dict[str, Any] = {
        "provenance": provenance(config.raw, seed),
        "modes": config.modes,
        "units": u,
        "config": {
            "modes": config.modes,
            "gamma": flat(config.matrix("gamma")),
            "beta": flat(config.matrix("beta")),
            "units": u,
        },
        "alpha_tilde": flat(report.alpha_tilde),
        "beta_tilde": flat(report.beta_tilde),
        "K_tilde": flat(report.K_tilde),
        "J_beta_tilde": flat(report.J_beta_tilde),
        "threshold_margin": report.threshold_margin,
        "threshold_holds": report.threshold_holds,
        "boundary": report.boundary,
        "sufficient_condition_holds": report.sufficient_condition_holds,
        "gauge_invariant": report.gauge_invariant,
        f"lower_bound_{u}": convert(report.lower_bound_nats, u),
    }
    if report.accessible_info_nats is not None:
        doc[f"accessible_info_{u}"] = convert(report.accessible_info_nats, u)
    if report.beta_star is not None:
        doc["beta_star"] = flat(report.beta_star)
        doc["K_star"] = flat(report.K_star)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False)
