"""Gaussian ensembles, Gaussian observables and classical Gaussian information.

All information quantities are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMatrixError, SingularMatrixError, ThresholdViolation
from .gaussian_ops import COND_LIMIT, GaussianState
from .symplectic import (
    VALIDITY_TOL,
    CovarianceMatrix,
    _check_square_even,
    _check_symmetric,
    _frozen,
    as_array,
    complex_structure,
    symmetrize,
    vacuum_covariance,
    validate_covariance,
)


def _check_prior(gamma) -> np.ndarray:
    g = np.asarray(as_array(gamma), dtype=float)
    _check_square_even(g)
    _check_symmetric(g)
    g = symmetrize(g)
    w = np.linalg.eigvalsh(g)
    if w[0] <= 1e-12 * w[-1]:
        raise SingularMatrixError(
            f"prior covariance must be strictly positive definite (min eigenvalue {w[0]:.3e})"
        )
    return _frozen(g)


@dataclass(frozen=True, eq=False)
class GaussianEnsemble:
    """Displaced copies of ``rho_beta`` with displacements drawn from ``N(0, gamma)``."""

    gamma: np.ndarray
    beta: CovarianceMatrix

    def __post_init__(self):
        g = _check_prior(self.gamma)
        b = validate_covariance(self.beta)
        if g.shape != b.mat.shape:
            raise InvalidMatrixError(f"gamma {g.shape} and beta {b.mat.shape} differ in shape")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "beta", b)

    @property
    def modes(self) -> int:
        return self.beta.modes


@dataclass(frozen=True, eq=False)
class GaussianObservable:
    """POVM ``D(Kz) rho_{beta_m} D(Kz)^* |det K| d^2s z / (2 pi)^s``."""

    K: np.ndarray
    beta_m: CovarianceMatrix

    def __post_init__(self):
        bm = validate_covariance(self.beta_m)
        k = np.asarray(self.K, dtype=float)
        if k.shape != bm.mat.shape:
            raise InvalidMatrixError(f"K has shape {k.shape}, expected {bm.mat.shape}")
        if abs(np.linalg.det(k)) <= 1e-12:
            raise SingularMatrixError("rescaling matrix K is degenerate")
        object.__setattr__(self, "K", _frozen(k))
        object.__setattr__(self, "beta_m", bm)

    @classmethod
    def unscaled(cls, beta_m) -> "GaussianObservable":
        bm = validate_covariance(beta_m)
        return cls(np.eye(bm.mat.shape[0]), bm)


@dataclass(frozen=True, eq=False)
class OutcomeModel:
    """Classical channel ``y = mean_map z + noise``, ``noise ~ N(0, noise_cov)``."""

    mean_map: np.ndarray
    noise_cov: np.ndarray


@dataclass(frozen=True, eq=False)
class OutcomeDensity:
    """Gaussian outcome distribution ``N(mean, cov)``."""

    mean: np.ndarray
    cov: np.ndarray

    def pdf(self, y) -> float:
        """Density with respect to Lebesgue measure."""
        y = np.asarray(y, dtype=float) - self.mean
        n = y.size
        sign, logdet = np.linalg.slogdet(self.cov)
        quad = y @ np.linalg.solve(self.cov, y)
        return float(np.exp(-0.5 * (quad + logdet + n * np.log(2.0 * np.pi))))

    def trace_density(self, y) -> float:
        """Density with respect to ``d^2s y / (2 pi)^s``, i.e. ``Tr rho M(dy)`` per unit measure."""
        s = self.mean.size // 2
        return (2.0 * np.pi) ** s * self.pdf(y)


def average_state(e: GaussianEnsemble) -> GaussianState:
    return GaussianState.centered(symmetrize(e.gamma + e.beta.mat))


def heterodyne_observable(beta) -> GaussianObservable:
    """Squeezed heterodyne observable matched to ``beta``: noise ``Delta J_beta / 2``."""
    bm = vacuum_covariance(complex_structure(beta))
    return GaussianObservable.unscaled(bm)


def outcome_density(state: GaussianState, obs: GaussianObservable) -> OutcomeDensity:
    cov = state.cov.mat + obs.beta_m.mat
    k_inv = np.linalg.inv(obs.K)
    return OutcomeDensity(
        mean=_frozen(k_inv @ state.mean),
        cov=_frozen(symmetrize(k_inv @ cov @ k_inv.T)),
    )


def outcome_model(e: GaussianEnsemble, obs: GaussianObservable) -> OutcomeModel:
    k_inv = np.linalg.inv(obs.K)
    noise = symmetrize(k_inv @ (e.beta.mat + obs.beta_m.mat) @ k_inv.T)
    return OutcomeModel(mean_map=_frozen(k_inv), noise_cov=_frozen(noise))


def logdet_pd(m) -> float:
    """``log det`` of a symmetric PD matrix via Cholesky."""
    m = symmetrize(np.asarray(m, dtype=float))
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMatrixError(f"matrix is ill-conditioned (condition number {cond:.3e})")
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        raise SingularMatrixError("matrix is not positive definite") from None
    return float(2.0 * np.sum(np.log(np.diag(chol))))


def gaussian_mi(prior_cov, cond_cov) -> float:
    """Mutual information of ``y = z + n``, ``z ~ N(0, prior)``, ``n ~ N(0, cond)``."""
    p = np.atleast_2d(np.asarray(prior_cov, dtype=float))
    c = np.atleast_2d(np.asarray(cond_cov, dtype=float))
    if p.shape != c.shape:
        raise InvalidMatrixError(f"shape mismatch {p.shape} vs {c.shape}")
    if min_eig(p) < -VALIDITY_TOL * max(1.0, float(np.max(np.abs(p)))):
        raise SingularMatrixError("prior covariance is not positive semidefinite")
    return 0.5 * (logdet_pd(p + c) - logdet_pd(c))


def min_eig(m) -> float:
    return float(np.linalg.eigvalsh(symmetrize(np.asarray(m, dtype=float)))[0])


def lemma1_max_info(alpha, beta_m) -> tuple[float, np.ndarray]:
    """Maximal information of the observable with noise ``beta_m`` over
    ensembles with average state ``rho_alpha``.

    Returns ``(info_nats, gamma)`` where ``gamma = alpha - Delta J_beta / 2``
    is the prior covariance of the optimal coherent-state ensemble.

    Raises:
        ThresholdViolation: ``alpha - Delta J_beta / 2`` has an eigenvalue
            below -1e-9.
    """
    a = validate_covariance(alpha).mat
    b = validate_covariance(beta_m).mat
    if a.shape != b.shape:
        raise InvalidMatrixError(f"shape mismatch {a.shape} vs {b.shape}")
    vac = vacuum_covariance(complex_structure(b)).mat
    gamma = symmetrize(a - vac)
    margin = min_eig(gamma)
    if margin < -VALIDITY_TOL:
        raise ThresholdViolation(
            f"alpha - Delta J_beta/2 is not PSD (min eigenvalue {margin:.6g})", margin
        )
    info = 0.5 * (logdet_pd(a + b) - logdet_pd(b + vac))
    return info, gamma

