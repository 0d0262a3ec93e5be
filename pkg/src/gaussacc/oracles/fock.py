"""Single-mode truncated Fock-space oracle.

Conventions: ``q = (a + a^dag)/sqrt(2)``, ``p = (a - a^dag)/(i sqrt(2))``,
``W(w) = exp(i (w_1 q + w_2 p))`` and ``D(z) = W(-Delta^{-1} z)``, which
shifts ``(q, p)`` by exactly ``z``. Unitaries are exponentiated in a padded
space and cropped to the cutoff so the low-number block is accurate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ..errors import InvalidMatrixError, TruncationError
from ..symplectic import as_array, validate_covariance

DEFAULT_CUTOFF = 60
MIN_CUTOFF = 8
MOMENT_TOL = 1e-3


@dataclass(frozen=True, eq=False)
class FockOperator:
    dim: int
    entries: np.ndarray

    def trace(self) -> complex:
        return complex(np.trace(self.entries))


def _pad(cutoff: int) -> int:
    return 2 * cutoff + 20


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def quadratures(dim: int) -> tuple[np.ndarray, np.ndarray]:
    a = annihilation(dim)
    ad = a.conj().T
    return (a + ad) / np.sqrt(2.0), (a - ad) / (1j * np.sqrt(2.0))


def _crop(m: np.ndarray, cutoff: int) -> np.ndarray:
    return np.ascontiguousarray(m[:cutoff, :cutoff])


def _displacement_big(z, big: int) -> np.ndarray:
    x, y = np.asarray(z, dtype=float).reshape(2)
    zeta = (x + 1j * y) / np.sqrt(2.0)
    a = annihilation(big)
    return expm(zeta * a.conj().T - np.conj(zeta) * a)


def displacement(z, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Cropped matrix of ``D(z) = exp(zeta a^dag - conj(zeta) a)``, ``zeta = (x + iy)/sqrt(2)``."""
    return _crop(_displacement_big(z, _pad(cutoff)), cutoff)


def weyl(w, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Cropped matrix of ``W(w)``; uses ``W(w) = D(-Delta w)``."""
    w1, w2 = np.asarray(w, dtype=float).reshape(2)
    return displacement((-w2, w1), cutoff)


def _principal_axes(cov: np.ndarray) -> tuple[float, float, float]:
    """Return ``(nu, r, theta)`` with ``cov = R(theta) diag(nu e^{2r}, nu e^{-2r}) R(theta)^T``."""
    nu = float(np.sqrt(np.linalg.det(cov)))
    w, v = np.linalg.eigh(cov)
    r = 0.5 * np.log(w[1] / nu)
    theta = float(np.arctan2(v[1, 1], v[0, 1]))
    return nu, float(r), theta


def _moments(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    q, p = quadratures(rho.shape[0])
    ops = (q, p)
    mean = np.array([np.trace(rho @ o).real for o in ops])
    cov = np.empty((2, 2))
    for i, oi in enumerate(ops):
        for j, oj in enumerate(ops):
            cov[i, j] = np.trace(rho @ (oi @ oj)).real - mean[i] * mean[j]
    return mean, 0.5 * (cov + cov.T)


def fock_state(mean, cov, cutoff: int = DEFAULT_CUTOFF, *, validate: bool = True) -> FockOperator:
    """Density matrix of the one-mode Gaussian state with given moments.

    Built as rotation * squeeze * thermal * squeeze^dag * rotation^dag and then
    displaced. With ``validate`` the first and second moments of the truncated
    matrix are compared with the inputs.

    Raises:
        TruncationError: moments off by more than 1e-3 (cutoff too small).
    """
    cutoff = int(cutoff)
    if cutoff < MIN_CUTOFF:
        raise ValueError(f"cutoff must be at least {MIN_CUTOFF}")
    c = validate_covariance(cov).mat
    if c.shape != (2, 2):
        raise InvalidMatrixError("Fock oracle is single-mode only")
    m = np.asarray(mean, dtype=float).reshape(2)

    big = _pad(cutoff)
    nu, r, theta = _principal_axes(c)
    t = (nu - 0.5) / (nu + 0.5)
    weights = (1.0 - t) * t ** np.arange(big)
    rho = np.diag(weights).astype(complex)

    a = annihilation(big)
    ad = a.conj().T
    # exp(r/2 (a^2 - a^dag^2)) contracts q by e^{-r}; the sign is flipped to stretch it
    sq = expm(-0.5 * r * (a @ a - ad @ ad))
    rot = expm(1j * theta * (ad @ a))
    u = _displacement_big(m, big) @ rot @ sq
    rho = u @ rho @ u.conj().T
    rho = _crop(0.5 * (rho + rho.conj().T), cutoff)

    if validate:
        got_mean, got_cov = _moments(rho)
        err = max(np.max(np.abs(got_mean - m)), np.max(np.abs(got_cov - c)))
        if err > MOMENT_TOL:
            raise TruncationError(
                f"moment mismatch {err:.2e} at cutoff {cutoff}; increase the cutoff"
            )
    return FockOperator(dim=cutoff, entries=rho)


def moments(op: FockOperator) -> tuple[np.ndarray, np.ndarray]:
    """Mean vector and covariance matrix of a (truncated) density matrix."""
    return _moments(op.entries)


def fock_char_fn(mean, cov, w, cutoff: int = DEFAULT_CUTOFF) -> complex:
    rho = fock_state(mean, cov, cutoff).entries
    return complex(np.trace(rho @ weyl(w, cutoff)))


def _sqrt_psd(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def fock_outcome_prob(alpha, beta, z, cutoff: int = DEFAULT_CUTOFF) -> float:
    """``Tr rho_alpha D(z) rho_beta D(z)^*`` by matrix trace.

    This is the outcome density of the Gaussian observable with respect to
    ``d^2z / (2 pi)``.
    """
    rho_a = fock_state(np.zeros(2), alpha, cutoff).entries
    rho_bz = fock_state(z, beta, cutoff).entries
    return float(np.trace(rho_a @ rho_bz).real)


def fock_sqsq(alpha, z1, z2, cutoff: int = DEFAULT_CUTOFF) -> complex:
    """``Tr W(z1) sqrt(rho_alpha) W(-z2) sqrt(rho_alpha)``."""
    root = _sqrt_psd(fock_state(np.zeros(2), alpha, cutoff).entries)
    w1 = weyl(z1, cutoff)
    w2 = weyl(-np.asarray(z2, dtype=float), cutoff)
    return complex(np.trace(w1 @ root @ w2 @ root))


def fock_sqrt_char(alpha, w, cutoff: int = DEFAULT_CUTOFF) -> complex:
    """``Tr sqrt(rho_alpha) W(w)``."""
    root = _sqrt_psd(fock_state(np.zeros(2), alpha, cutoff).entries)
    return complex(np.trace(root @ weyl(w, cutoff)))


def fock_sandwich_char(alpha, beta, z, z1, cutoff: int = DEFAULT_CUTOFF) -> complex:
    """``Tr (sqrt(rho_alpha) rho_{beta,z} sqrt(rho_alpha)) W(z1)``."""
    root = _sqrt_psd(fock_state(np.zeros(2), alpha, cutoff).entries)
    rho_bz = fock_state(z, beta, cutoff).entries
    return complex(np.trace(root @ rho_bz @ root @ weyl(z1, cutoff)))


def as_one_mode(cov) -> np.ndarray:
    c = as_array(cov)
    if c.shape != (2, 2):
        raise InvalidMatrixError("Fock oracle is single-mode only")
    return c
