"""Monte Carlo estimate of the Shannon information of a Gaussian ensemble
measured by a Gaussian observable.

Samples are generated in fixed-size chunks; chunk ``k`` draws from a Philox
generator keyed by ``SeedSequence(seed, spawn_key=(k,))``. Chunks can be
evaluated in any order or in parallel: the per-sample values are
concatenated in chunk order and reduced with ``math.fsum``, so the estimate
depends only on ``(seed, n)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..ensemble import GaussianEnsemble, GaussianObservable
from ..errors import SingularMatrixError
from ..symplectic import symmetrize

CHUNK = 8192
RNG_ALGORITHM = "numpy Philox4x64-10; chunk k keyed by SeedSequence(seed, spawn_key=(k,)); chunk size 8192"
MIN_SAMPLES = 1000


@dataclass(frozen=True)
class McEstimate:
    value_nats: float
    stderr: float
    n_samples: int
    seed: int
    rng_algorithm: str = RNG_ALGORITHM


def thread_count() -> int:
    """Worker cap from ``GAUSSACC_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("GAUSSACC_THREADS", "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError("GAUSSACC_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def _chol(m: np.ndarray, what: str) -> np.ndarray:
    try:
        return np.linalg.cholesky(symmetrize(m))
    except np.linalg.LinAlgError:
        raise SingularMatrixError(f"{what} is not positive definite") from None


def _chunk_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(k,))))


def _chunk_values(k, size, seed, l_prior, l_noise, l_out, half_logdet_gap):
    rng = _chunk_rng(seed, k)
    dim = l_prior.shape[0]
    z = rng.standard_normal((size, dim)) @ l_prior.T
    u = rng.standard_normal((size, dim))
    y = z + u @ l_noise.T
    # log p(y|z) - log pbar(y); the (2 pi) normalizations cancel
    v = np.linalg.solve(l_out, y.T)
    return 0.5 * np.sum(v * v, axis=0) - 0.5 * np.sum(u * u, axis=1) + half_logdet_gap


def mc_mutual_info(
    e: GaussianEnsemble,
    obs: GaussianObservable,
    n: int,
    seed: int,
    *,
    threads: int | None = None,
) -> McEstimate:
    """Estimate ``I = E ln p(y|z)/pbar(y)`` with ``z ~ N(0, gamma)``, ``y|z ~ N(z, beta + beta_m)``.

    The outcome rescaling ``obs.K`` is not applied; it leaves the information
    unchanged.
    """
    n = int(n)
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    noise = e.beta.mat + obs.beta_m.mat
    l_prior = _chol(e.gamma, "gamma")
    l_noise = _chol(noise, "beta + beta_m")
    l_out = _chol(e.gamma + noise, "gamma + beta + beta_m")
    half_logdet_gap = float(np.sum(np.log(np.diag(l_out))) - np.sum(np.log(np.diag(l_noise))))

    sizes = [min(CHUNK, n - k * CHUNK) for k in range(-(-n // CHUNK))]
    args = [(k, size, seed, l_prior, l_noise, l_out, half_logdet_gap) for k, size in enumerate(sizes)]
    workers = min(threads or thread_count(), len(args))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: _chunk_values(*a), args))
    else:
        parts = [_chunk_values(*a) for a in args]
    values = np.concatenate(parts)
    mean = math.fsum(values) / n
    var = math.fsum((values - mean) ** 2) / (n - 1)
    return McEstimate(value_nats=mean, stderr=math.sqrt(var / n), n_samples=n, seed=seed)
