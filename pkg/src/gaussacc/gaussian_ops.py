r"""Covariance-level calculus for Gaussian density operators.

All matrix functions of the non-symmetric operator ``Delta^{-1} alpha`` are
evaluated after conjugation by ``S = alpha^{1/2}``, where they become
functions of the singular values of the skew matrix ``B = S Delta^{-1} S``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMatrixError, SingularMatrixError, UncertaintyViolation
from .symplectic import (
    VALIDITY_TOL,
    CovarianceMatrix,
    _frozen,
    _skew_similarity,
    as_array,
    symmetrize,
    symplectic_eigenvalues,
    validate_covariance,
)

COND_LIMIT = 1e12
PURE_SNAP = 64 * np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Displaced Gaussian state ``D(mean) rho_cov D(mean)^*``."""

    mean: np.ndarray
    cov: CovarianceMatrix

    def __post_init__(self):
        cov = validate_covariance(self.cov)
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        if mean.shape != (cov.mat.shape[0],):
            raise InvalidMatrixError(
                f"mean has length {mean.size}, expected {cov.mat.shape[0]}"
            )
        if not np.all(np.isfinite(mean)):
            raise InvalidMatrixError("mean has non-finite entries")
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", _frozen(mean))

    @classmethod
    def centered(cls, cov) -> "GaussianState":
        cov = validate_covariance(cov)
        return cls(np.zeros(cov.mat.shape[0]), cov)

    @property
    def modes(self) -> int:
        return self.cov.modes


def _vec(w, dim: int) -> np.ndarray:
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.shape != (dim,):
        raise InvalidMatrixError(f"vector has length {w.size}, expected {dim}")
    return w


def char_fn(state: GaussianState, w) -> complex:
    """Quantum characteristic function ``Tr rho W(w)``."""
    w = _vec(w, state.cov.mat.shape[0])
    return complex(np.exp(1j * (w @ state.mean) - 0.5 * (w @ state.cov.mat @ w)))


def displace(state: GaussianState, z) -> GaussianState:
    z = _vec(z, state.cov.mat.shape[0])
    return GaussianState(state.mean + z, state.cov)


def _checked(alpha) -> np.ndarray:
    a = as_array(alpha)
    if not isinstance(alpha, CovarianceMatrix):
        a = validate_covariance(a).mat
    return a


def _upsilon_parts(alpha) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(S, C)`` with ``Upsilon(alpha) = S C S^{-1}`` and ``kappa = S C S``."""
    a = _checked(alpha)
    nu = symplectic_eigenvalues(a)
    if nu[0] < 0.5 - VALIDITY_TOL:
        raise UncertaintyViolation(
            f"symplectic eigenvalue {nu[0]:.6g} < 1/2: Upsilon undefined",
            margin=float(nu[0] - 0.5),
        )
    s_root, b = _skew_similarity(a)
    # B^T B = V diag(w^2) V^T, so the root is diagonal in the same basis
    _, w, vt = np.linalg.svd(b)
    gap = 2.0 * w - 1.0
    if gap.min() < -2.0 * VALIDITY_TOL:
        raise UncertaintyViolation("matrix under the root is indefinite", margin=float(gap.min() / 2))
    # pure modes put a zero under the root; gaps at rounding level are snapped
    # to it, otherwise the root turns 1e-16 noise into 1e-8
    gap[gap <= PURE_SNAP] = 0.0
    inner = gap * (2.0 * w + 1.0) / (4.0 * w**2)
    c = symmetrize((vt.T * np.sqrt(inner)) @ vt)
    return s_root, c


def upsilon(alpha) -> np.ndarray:
    r"""``Upsilon(alpha) = sqrt(I + (2 alpha Delta^{-1})^{-2})``.

    The returned matrix satisfies ``Upsilon alpha = alpha Upsilon^T``.
    """
    s_root, c = _upsilon_parts(alpha)
    return s_root @ c @ np.linalg.inv(s_root)


def kappa(alpha) -> np.ndarray:
    """Symmetric matrix ``kappa = Upsilon(alpha) alpha``."""
    s_root, c = _upsilon_parts(alpha)
    return symmetrize(s_root @ c @ s_root)


def alpha_hat(alpha) -> np.ndarray:
    """Covariance parameter of ``sqrt(rho_alpha)``: ``alpha + kappa``."""
    return symmetrize(_checked(alpha) + kappa(alpha))


def sqrt_char_fn(alpha, w) -> float:
    """``Tr sqrt(rho_alpha) W(w) = det(2 alpha_hat)^{1/4} exp(-w^T alpha_hat w / 2)``."""
    ah = alpha_hat(alpha)
    w = _vec(w, ah.shape[0])
    sign, logdet = np.linalg.slogdet(2.0 * ah)
    return float(np.exp(0.25 * logdet - 0.5 * (w @ ah @ w)))


def sandwich_overlap(alpha, z1, z2) -> float:
    """``Tr W(z1) sqrt(rho) W(-z2) sqrt(rho)`` for centered ``rho_alpha``.

    The value is real.
    """
    a = _checked(alpha)
    k = kappa(a)
    z1 = _vec(z1, a.shape[0])
    z2 = _vec(z2, a.shape[0])
    return float(np.exp(-0.5 * (z2 @ a @ z2) - 0.5 * (z1 @ a @ z1) + z2 @ k @ z1))


def _checked_inverse(m: np.ndarray, what: str) -> np.ndarray:
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMatrixError(f"{what} is numerically singular (condition number {cond:.3e})")
    return np.linalg.inv(m)


@dataclass(frozen=True, eq=False)
class SandwichChar:
    """Characteristic function of ``sqrt(rho_alpha) rho_{beta,z} sqrt(rho_alpha)``.

    ``value = c * exp(i z1^T K z - z1^T alpha121 z1 / 2)``. ``alpha121_margin``
    is the uncertainty margin of ``alpha121`` (min symplectic eigenvalue - 1/2),
    or ``-inf`` when it is not positive definite.
    """

    value: complex
    c: float
    K: np.ndarray
    alpha121: np.ndarray
    alpha121_margin: float


def _margin(m: np.ndarray) -> float:
    try:
        return float(symplectic_eigenvalues(m)[0] - 0.5)
    except SingularMatrixError:
        return float("-inf")


def sandwich_char(alpha, beta, z, z1) -> SandwichChar:
    a = _checked(alpha)
    b = _checked(beta)
    z = _vec(z, a.shape[0])
    z1 = _vec(z1, a.shape[0])
    k = kappa(a)
    total = symmetrize(a + b)
    total_inv = _checked_inverse(total, "alpha + beta")
    sign, logdet = np.linalg.slogdet(total)
    c = float(np.exp(-0.5 * logdet - 0.5 * (z @ total_inv @ z)))
    k_mat = k @ total_inv
    a121 = symmetrize(a - k @ total_inv @ k)
    value = c * np.exp(1j * (z1 @ k_mat @ z) - 0.5 * (z1 @ a121 @ z1))
    return SandwichChar(
        value=complex(value),
        c=c,
        K=k_mat,
        alpha121=a121,
        alpha121_margin=_margin(a121),
    )


def sandwich_cov(alpha_t, beta_t) -> CovarianceMatrix:
    """Covariance of the normalized ``rho_{alpha_t}^{1/2} rho_{beta_t} rho_{alpha_t}^{1/2}``."""
    a = _checked(alpha_t)
    b = _checked(beta_t)
    k = kappa(a)
    total_inv = _checked_inverse(symmetrize(a + b), "alpha_t + beta_t")
    return validate_covariance(symmetrize(a - k @ total_inv @ k))

