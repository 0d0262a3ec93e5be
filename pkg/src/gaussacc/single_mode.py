"""Closed-form one-mode formulas for diagonal ensembles and the threshold-domain scan.

These formulas are scalar algebra only; they share no code with the matrix
pipeline in :mod:`gaussacc.duality`, which makes them usable as an
independent check of it.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import InvalidMatrixError, ThresholdViolation

THRESHOLD_TOL = 1e-12


@dataclass(frozen=True)
class SingleModeParams:
    beta1: float
    beta2: float
    gamma1: float
    gamma2: float

    def __post_init__(self):
        vals = (self.beta1, self.beta2, self.gamma1, self.gamma2)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidMatrixError("parameters must be finite")
        if self.beta1 <= 0 or self.beta2 <= 0 or self.beta1 * self.beta2 < 0.25 - 1e-12:
            raise InvalidMatrixError("beta1 * beta2 must be at least 1/4")
        if self.gamma1 <= 0 or self.gamma2 <= 0:
            raise InvalidMatrixError("gamma1 and gamma2 must be positive")

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """``(gamma, beta)`` as diagonal 2x2 matrices."""
        return np.diag([self.gamma1, self.gamma2]), np.diag([self.beta1, self.beta2])

    def swapped(self) -> "SingleModeParams":
        return SingleModeParams(self.beta2, self.beta1, self.gamma2, self.gamma1)


def sm_tilde_params(p: SingleModeParams) -> tuple[float, float, float, float]:
    """``(alpha_t1, alpha_t2, beta_t1, beta_t2)`` of the dual observable."""
    a1 = p.beta1 + p.gamma1
    a2 = p.beta2 + p.gamma2
    b1 = a1 / p.gamma1 * (p.beta1 - 1.0 / (4.0 * a2))
    b2 = a2 / p.gamma2 * (p.beta2 - 1.0 / (4.0 * a1))
    return a1, a2, b1, b2


def threshold_bounds(p: SingleModeParams) -> tuple[float, float]:
    """Lower and upper bound on ``gamma1 / gamma2``."""
    lower = 1.0 / (4.0 * (p.beta2 + p.gamma2) * p.beta2)
    upper = 4.0 * (p.beta1 + p.gamma1) * p.beta1
    return lower, upper


def sm_threshold(p: SingleModeParams) -> bool:
    lower, upper = threshold_bounds(p)
    ratio = p.gamma1 / p.gamma2
    return lower - THRESHOLD_TOL <= ratio <= upper + THRESHOLD_TOL


def _require_threshold(p: SingleModeParams) -> None:
    if not sm_threshold(p):
        lower, upper = threshold_bounds(p)
        ratio = p.gamma1 / p.gamma2
        raise ThresholdViolation(
            f"gamma1/gamma2 = {ratio:.6g} outside [{lower:.6g}, {upper:.6g}]",
            min(ratio - lower, upper - ratio),
        )


def sm_accinfo(p: SingleModeParams) -> float:
    """Accessible information (nats) of the diagonal one-mode ensemble."""
    _require_threshold(p)
    a1 = p.beta1 + p.gamma1
    a2 = p.beta2 + p.gamma2
    num = a1 * a2 - 0.25
    den = math.sqrt((a1 * p.beta2 - 0.25) * (a2 * p.beta1 - 0.25)) + 0.5 * math.sqrt(
        p.gamma1 * p.gamma2
    )
    return math.log(num / den)


def sm_optimal_meas(p: SingleModeParams) -> tuple[float, float]:
    """Diagonal entries of the optimal squeezed-heterodyne noise covariance."""
    _require_threshold(p)
    a1, a2, b1, b2 = sm_tilde_params(p)
    r = math.sqrt(b1 / b2)
    d1 = a1 - 0.5 * r
    d2 = a2 - 0.5 / r
    if d1 <= 1e-9 or d2 <= 1e-9:
        raise ThresholdViolation("boundary instance: optimal observable undefined", min(d1, d2))
    s1 = 0.5 * r * (a1 / a2) * (d2 / d1)
    s2 = 0.5 / r * (a2 / a1) * (d1 / d2)
    return s1, s2


def sm_lemma_info(alpha1: float, alpha2: float, beta1: float, beta2: float) -> float:
    """Maximal information of the diagonal observable ``beta`` at average state ``alpha``."""
    if alpha1 * alpha2 < 0.25 - 1e-12 or beta1 * beta2 < 0.25 - 1e-12:
        raise InvalidMatrixError("alpha and beta must satisfy the uncertainty relation")
    ratio = beta1 / beta2
    lower = 1.0 / (4.0 * alpha2**2)
    upper = 4.0 * alpha1**2
    if not (lower - THRESHOLD_TOL <= ratio <= upper + THRESHOLD_TOL):
        raise ThresholdViolation(
            f"beta1/beta2 = {ratio:.6g} outside [{lower:.6g}, {upper:.6g}]",
            min(ratio - lower, upper - ratio),
        )
    return 0.5 * math.log(
        (beta1 + alpha1) * (beta2 + alpha2) / (math.sqrt(beta1 * beta2) + 0.5) ** 2
    )


# --- Threshold-domain scan ---------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    n: int
    scale: str = "log"

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse ``MIN:MAX:N:log|lin``."""
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"grid spec must be MIN:MAX:N[:log|lin], got {text!r}")
        scale = parts[3] if len(parts) == 4 else "log"
        return cls(float(parts[0]), float(parts[1]), int(parts[2]), scale)

    def __post_init__(self):
        if self.scale not in ("log", "lin"):
            raise ValueError(f"grid scale must be 'log' or 'lin', got {self.scale!r}")
        if self.n < 2:
            raise ValueError("grid needs at least 2 points")
        if not (0 < self.lo < self.hi):
            raise ValueError("grid bounds must satisfy 0 < MIN < MAX")

    def points(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.n)
        return np.linspace(self.lo, self.hi, self.n)


@dataclass(frozen=True)
class ScanRow:
    gamma1: float
    gamma2: float
    holds: bool
    accinfo_nats: Optional[float]


def threshold_domain_scan(
    beta: float, grid: GridSpec, *, beta2: Optional[float] = None
) -> list[ScanRow]:
    """Threshold condition and accessible information over a ``(gamma1, gamma2)`` grid.

    By default ``beta1 = beta2 = beta``; pass ``beta2`` for a general diagonal
    ``beta``. Rows are ordered gamma1-outer, gamma2-inner, ascending.
    """
    b2 = beta if beta2 is None else beta2
    if beta * b2 < 0.25 - 1e-12:
        raise ValueError("beta1 * beta2 must be at least 1/4")
    axis = [float(x) for x in grid.points()]
    rows = []
    for g1 in axis:
        for g2 in axis:
            p = SingleModeParams(beta, b2, g1, g2)
            holds = sm_threshold(p)
            rows.append(ScanRow(g1, g2, holds, sm_accinfo(p) if holds else None))
    return rows


CSV_HEADER = ("gamma1", "gamma2", "holds", "accinfo_nats")


def scan_to_csv(rows: Iterable[ScanRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(
            (
                repr(r.gamma1),
                repr(r.gamma2),
                "true" if r.holds else "false",
                "" if r.accinfo_nats is None else repr(r.accinfo_nats),
            )
        )
    return buf.getvalue()


def read_scan_csv(text: str) -> list[ScanRow]:
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header}")
    rows = []
    for g1, g2, holds, acc in reader:
        rows.append(ScanRow(float(g1), float(g2), holds == "true", float(acc) if acc else None))
    return rows


def boundary_brackets(rows: list[ScanRow], n: int) -> list[tuple[ScanRow, ScanRow]]:
    """Pairs of gamma2-adjacent rows whose ``holds`` flag differs."""
    out = []
    for i in range(n):
        line = rows[i * n : (i + 1) * n]
        for a, b in zip(line, line[1:]):
            if a.holds != b.holds:
                out.append((a, b))
    return out


def refine_boundary(
    holds_fn: Callable[[float], bool],
    lo: float,
    hi: float,
    *,
    rtol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Bisect (geometrically) for the switch point of ``holds_fn`` on ``[lo, hi]``."""
    f_lo = holds_fn(lo)
    if f_lo == holds_fn(hi):
        raise ValueError("interval does not bracket a boundary")
    for _ in range(max_iter):
        if hi - lo <= rtol * hi:
            break
        mid = math.sqrt(lo * hi)
        if holds_fn(mid) == f_lo:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)


def boundary_gamma2(beta1: float, beta2: float, gamma1: float) -> list[float]:
    """Values of ``gamma2 > 0`` at which one threshold inequality is an equality.

    The upper inequality gives ``gamma2 = gamma1 / (4 beta1 (beta1 + gamma1))``;
    the lower one, ``4 beta2 gamma1 (beta2 + gamma2) = gamma2``, has a positive
    root only when ``4 beta2 gamma1 < 1``.
    """
    roots = [gamma1 / (4.0 * beta1 * (beta1 + gamma1))]
    denom = 1.0 - 4.0 * beta2 * gamma1
    if denom > 0:
        roots.append(4.0 * beta2**2 * gamma1 / denom)
    return roots
