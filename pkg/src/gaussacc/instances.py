"""Random problem instances for property checks and the ``verify`` suites."""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .duality import threshold_check
from .ensemble import GaussianEnsemble
from .single_mode import SingleModeParams, sm_threshold
from .symplectic import delta_matrix, symmetrize


def random_symplectic(s: int, rng: np.random.Generator, scale: float = 0.4) -> np.ndarray:
    """``expm(Delta H)`` for a random symmetric ``H``; satisfies ``T Delta T^T = Delta``."""
    h = rng.normal(scale=scale, size=(2 * s, 2 * s))
    return expm(delta_matrix(2 * s) @ symmetrize(h))


def random_covariance(
    s: int,
    rng: np.random.Generator,
    nu_range: tuple[float, float] = (0.5, 3.0),
    scale: float = 0.4,
) -> np.ndarray:
    """``T diag(nu_1, nu_1, ..., nu_s, nu_s) T^T`` with random symplectic ``T``."""
    nu = rng.uniform(*nu_range, size=s)
    t = random_symplectic(s, rng, scale)
    return symmetrize(t @ np.diag(np.repeat(nu, 2)) @ t.T)


def random_pd(dim: int, rng: np.random.Generator, scale: float = 1.0, floor: float = 0.05) -> np.ndarray:
    a = rng.normal(scale=scale, size=(dim, dim))
    return symmetrize(a @ a.T / dim + floor * np.eye(dim))


def random_psd(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    rank = int(rng.integers(1, dim + 1))
    a = rng.normal(scale=scale, size=(dim, rank))
    return symmetrize(a @ a.T)


def random_ensemble(s: int, rng: np.random.Generator) -> GaussianEnsemble:
    return GaussianEnsemble(random_pd(2 * s, rng, scale=rng.uniform(0.3, 3.0)), random_covariance(s, rng))


def random_threshold_ensemble(
    s: int, rng: np.random.Generator, min_margin: float = 1e-3, max_tries: int = 10_000
) -> GaussianEnsemble:
    """Random ensemble whose threshold margin exceeds ``min_margin``."""
    for _ in range(max_tries):
        e = random_ensemble(s, rng)
        holds, margin = threshold_check(e)
        if margin > min_margin:
            return e
    raise RuntimeError("no threshold-passing instance found")


def random_gauge_invariant(s: int, rng: np.random.Generator):
    """Ensemble with ``beta = (N + 1/2) I`` and ``gamma = Sigma I`` per mode.

    Returns ``(ensemble, N, Sigma)`` with ``N, Sigma`` as length-``s`` arrays.
    """
    n = rng.uniform(0.0, 3.0, size=s)
    sigma = rng.uniform(0.05, 5.0, size=s)
    beta = np.diag(np.repeat(n + 0.5, 2))
    gamma = np.diag(np.repeat(sigma, 2))
    return GaussianEnsemble(gamma, beta), n, sigma


def random_single_mode(rng: np.random.Generator, max_tries: int = 10_000) -> SingleModeParams:
    """Random diagonal one-mode instance satisfying the threshold inequalities."""
    for _ in range(max_tries):
        b1 = float(np.exp(rng.uniform(np.log(0.1), np.log(5.0))))
        b2 = float(np.exp(rng.uniform(np.log(0.25 / b1), np.log(0.25 / b1) + 3.0)))
        g1, g2 = (float(x) for x in np.exp(rng.uniform(np.log(0.02), np.log(20.0), size=2)))
        p = SingleModeParams(b1, b2, g1, g2)
        if sm_threshold(p):
            return p
    raise RuntimeError("no threshold-passing instance found")
