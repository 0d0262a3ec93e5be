r"""Accessible information of a Gaussian ensemble via ensemble-observable duality.

The ensemble ``{N(0, gamma), D(z) rho_beta D(z)^*}`` is mapped to its dual
Gaussian observable with noise covariance ``beta_tilde``; under the threshold
condition ``alpha_tilde >= Delta J_{beta_tilde} / 2`` the accessible
information is the maximal information of that observable over ensembles
with average state ``rho_{alpha_tilde}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ensemble import GaussianEnsemble, gaussian_mi, logdet_pd, min_eig
from .errors import SingularMatrixError, ThresholdViolation, UncertaintyViolation
from .gaussian_ops import COND_LIMIT, kappa
from .symplectic import (
    PURITY_TOL,
    VALIDITY_TOL,
    ComplexStructure,
    CovarianceMatrix,
    complex_structure,
    is_pure,
    symmetrize,
    vacuum_covariance,
    validate_covariance,
)

GAUGE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class DualObservable:
    K_tilde: np.ndarray
    beta_tilde: CovarianceMatrix
    alpha_tilde: CovarianceMatrix
    kappa_tilde: np.ndarray

    def __iter__(self):
        # unpacks as (K_tilde, beta_tilde)
        return iter((self.K_tilde, self.beta_tilde))


@dataclass(frozen=True, eq=False)
class AccInfoReport:
    alpha_tilde: CovarianceMatrix
    beta_tilde: CovarianceMatrix
    K_tilde: np.ndarray
    J_beta_tilde: ComplexStructure
    threshold_margin: float
    threshold_holds: bool
    boundary: bool
    lower_bound_nats: float
    sufficient_condition_holds: bool
    gauge_invariant: bool
    accessible_info_nats: Optional[float] = None
    beta_star: Optional[CovarianceMatrix] = None
    K_star: Optional[np.ndarray] = None


def _inverse(m: np.ndarray, what: str) -> np.ndarray:
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMatrixError(f"{what} is ill-conditioned (condition number {cond:.3e})")
    return np.linalg.inv(m)


def dual_observable(e: GaussianEnsemble) -> DualObservable:
    """Noise covariance and rescaling of the POVM dual to ``e``.

    ``beta_tilde = kappa gamma^{-1} kappa - alpha_tilde`` and
    ``K_tilde = (alpha_tilde + beta_tilde) kappa^{-1}`` with
    ``kappa = Upsilon(alpha_tilde) alpha_tilde``.

    Raises:
        SingularMatrixError: ``gamma`` ill-conditioned.
        UncertaintyViolation: ``beta_tilde`` is not a quantum covariance.
    """
    gamma_inv = _inverse(e.gamma, "gamma")
    a_t = validate_covariance(symmetrize(e.gamma + e.beta.mat))
    k = kappa(a_t)
    b_t = symmetrize(k @ gamma_inv @ k - a_t.mat)
    try:
        b_t = validate_covariance(b_t)
    except UncertaintyViolation as exc:
        raise UncertaintyViolation(f"dual noise covariance invalid: {exc}", exc.margin) from None
    k_tilde = (a_t.mat + b_t.mat) @ _inverse(k, "kappa(alpha_tilde)")
    return DualObservable(K_tilde=k_tilde, beta_tilde=b_t, alpha_tilde=a_t, kappa_tilde=k)


def _threshold_from_dual(d: DualObservable) -> tuple[float, np.ndarray]:
    vac = vacuum_covariance(complex_structure(d.beta_tilde)).mat
    return min_eig(d.alpha_tilde.mat - vac), vac


def threshold_check(e: GaussianEnsemble) -> tuple[bool, float]:
    """Return ``(holds, margin)``; margin is min eig of ``alpha_tilde - Delta J_{beta_tilde}/2``."""
    margin, _ = _threshold_from_dual(dual_observable(e))
    return margin >= -VALIDITY_TOL, margin


def sufficient_condition(e: GaussianEnsemble) -> bool:
    """``gamma >= beta``, which implies the threshold condition."""
    return min_eig(e.gamma - e.beta.mat) >= -VALIDITY_TOL


def _aim(d: DualObservable, vac: np.ndarray) -> float:
    a, b = d.alpha_tilde.mat, d.beta_tilde.mat
    return 0.5 * (logdet_pd(a + b) - logdet_pd(b + vac))


def accessible_info(e: GaussianEnsemble) -> float:
    """Accessible information in nats.

    Raises:
        ThresholdViolation: the closed form does not apply.
    """
    return accessible_info_of_dual(dual_observable(e))


def accessible_info_of_dual(d: DualObservable) -> float:
    """:func:`accessible_info` from an already computed dual observable."""
    margin, vac = _threshold_from_dual(d)
    if margin < -VALIDITY_TOL:
        raise ThresholdViolation(
            f"threshold condition fails (margin {margin:.6g}); accessible information unknown",
            margin,
        )
    return _aim(d, vac)


def _optimal_from_dual(d: DualObservable, margin: float, vac: np.ndarray):
    if margin <= VALIDITY_TOL:
        raise ThresholdViolation(
            f"optimal observable needs a strict threshold margin, got {margin:.6g}", margin
        )
    a = d.alpha_tilde.mat
    k = d.kappa_tilde
    prior = symmetrize(a - vac)
    b_star = symmetrize(k @ _inverse(prior, "alpha_tilde - Delta J/2") @ k - a)
    # pure by construction: rounding may put it just below 1/2
    b_star = validate_covariance(b_star, tol=PURITY_TOL)
    k_star = (a + b_star.mat) @ _inverse(k, "kappa(alpha_tilde)")
    return k_star, b_star


def optimal_observable(e: GaussianEnsemble) -> tuple[np.ndarray, CovarianceMatrix]:
    """``(K_star, beta_star)`` of the squeezed heterodyne observable attaining the maximum.

    ``K_star`` follows the dual-observable rescaling pattern with ``gamma``
    replaced by ``alpha_tilde - Delta J_{beta_tilde}/2``; every information
    quantity is independent of it.
    """
    d = dual_observable(e)
    margin, vac = _threshold_from_dual(d)
    return _optimal_from_dual(d, margin, vac)


def heterodyne_lower_bound(e: GaussianEnsemble) -> float:
    """Information obtained by the squeezed heterodyne measurement matched to ``beta``."""
    vac = vacuum_covariance(complex_structure(e.beta)).mat
    return gaussian_mi(e.gamma, e.beta.mat + vac)


def gauge_invariant_info(n, sigma) -> float:
    """``log det(I + (N + I)^{-1} Sigma)`` for diagonal ``N, Sigma >= 0``."""
    n = np.asarray(n, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if n.ndim == 2:
        n = np.diag(n)
    if sigma.ndim == 2:
        sigma = np.diag(sigma)
    n = np.atleast_1d(n)
    sigma = np.atleast_1d(sigma)
    if n.shape != sigma.shape:
        raise ValueError(f"N and Sigma differ in shape: {n.shape} vs {sigma.shape}")
    if np.any(n < 0) or np.any(sigma < 0):
        raise ValueError("N and Sigma must be entrywise nonnegative")
    return math.fsum(np.log1p(sigma / (n + 1.0)))


def _same(j1: np.ndarray, j2: np.ndarray) -> bool:
    return bool(np.max(np.abs(j1 - j2)) <= GAUGE_TOL)


def full_report(e: GaussianEnsemble) -> AccInfoReport:
    """Every quantity of the accessible-information analysis for ``e``.

    Fields that need the threshold condition are ``None`` when it fails.
    """
    d = dual_observable(e)
    margin, vac = _threshold_from_dual(d)
    holds = margin >= -VALIDITY_TOL
    j_bt = complex_structure(d.beta_tilde)
    j_at = complex_structure(d.alpha_tilde)
    j_b = complex_structure(e.beta)
    gauge = _same(j_at.mat, j_b.mat) and _same(j_b.mat, j_bt.mat)
    extra = {}
    if holds:
        extra["accessible_info_nats"] = _aim(d, vac)
        if margin > VALIDITY_TOL:
            k_star, b_star = _optimal_from_dual(d, margin, vac)
            extra["K_star"] = k_star
            extra["beta_star"] = b_star
    return AccInfoReport(
        alpha_tilde=d.alpha_tilde,
        beta_tilde=d.beta_tilde,
        K_tilde=d.K_tilde,
        J_beta_tilde=j_bt,
        threshold_margin=margin,
        threshold_holds=holds,
        boundary=abs(margin) <= VALIDITY_TOL,
        lower_bound_nats=heterodyne_lower_bound(e),
        sufficient_condition_holds=sufficient_condition(e),
        gauge_invariant=gauge,
        **extra,
    )


def optimal_is_pure(e: GaussianEnsemble) -> bool:
    return is_pure(optimal_observable(e)[1])
