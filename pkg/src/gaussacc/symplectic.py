r"""Symplectic linear algebra on :math:`Z = \mathbb{R}^{2s}`.

Coordinates are ordered ``(x_1, y_1, ..., x_s, y_s)`` and the symplectic
form is block-diagonal with blocks ``[[0, 1], [-1, 0]]``. Covariances use
the convention in which the vacuum is ``I/2`` (hbar = 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    ConventionError,
    InvalidMatrixError,
    SingularMatrixError,
    UncertaintyViolation,
)

SYMMETRY_RTOL = 1e-10
VALIDITY_TOL = 1e-9
SINGULAR_TOL = 1e-12
PURITY_TOL = 1e-8


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SymplecticSpace:
    s: int
    delta: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * self.s


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Validated quantum covariance matrix.

    Build instances with :func:`validate_covariance`; ``validity_margin`` is
    the smallest symplectic eigenvalue minus 1/2.
    """

    mat: np.ndarray
    validity_margin: float

    @property
    def modes(self) -> int:
        return self.mat.shape[0] // 2

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    mat: np.ndarray

    @property
    def modes(self) -> int:
        return self.mat.shape[0] // 2

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)


def as_array(m) -> np.ndarray:
    """Return the raw float matrix behind ``m`` (array-like or wrapper type)."""
    if isinstance(m, (CovarianceMatrix, ComplexStructure)):
        return m.mat
    return np.asarray(m, dtype=float)


@lru_cache(maxsize=None)
def _delta(s: int) -> np.ndarray:
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return _frozen(np.kron(np.eye(s), block))


def standard_form(s: int) -> SymplecticSpace:
    """Symplectic space of ``s`` modes with its standard form."""
    if int(s) != s or s < 1:
        raise ValueError(f"mode count must be a positive integer, got {s!r}")
    s = int(s)
    return SymplecticSpace(s=s, delta=_delta(s))


def delta_matrix(dim: int) -> np.ndarray:
    """Standard form for a phase space of (even) dimension ``dim``."""
    if dim % 2:
        raise InvalidMatrixError(f"phase-space dimension must be even, got {dim}")
    return _delta(dim // 2)


def symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def _check_square_even(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidMatrixError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0 or m.shape[0] % 2:
        raise InvalidMatrixError(f"matrix dimension must be even and positive, got {m.shape[0]}")
    if not np.all(np.isfinite(m)):
        raise InvalidMatrixError("matrix has non-finite entries")


def _check_symmetric(m: np.ndarray, rtol: float = SYMMETRY_RTOL) -> None:
    scale = max(np.max(np.abs(m)), np.finfo(float).tiny)
    if np.max(np.abs(m - m.T)) > rtol * scale:
        raise InvalidMatrixError("matrix is not symmetric")


def sym_sqrt(m, tol: float = 1e-12) -> np.ndarray:
    """Principal square root of a symmetric positive semidefinite matrix.

    Eigenvalues in ``[-tol * max(1, |M|), 0)`` are clamped to zero; anything
    more negative raises.
    """
    m = symmetrize(as_array(m))
    w, v = np.linalg.eigh(m)
    floor = -tol * max(1.0, float(np.max(np.abs(w))))
    if w[0] < floor:
        raise InvalidMatrixError(f"matrix is indefinite (min eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    return symmetrize((v * np.sqrt(w)) @ v.T)


def _pd_sqrt(alpha: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(symmetrize(alpha))
    if w[0] <= SINGULAR_TOL * max(1.0, w[-1]):
        raise SingularMatrixError(
            f"covariance is not positive definite (min eigenvalue {w[0]:.3e})"
        )
    return symmetrize((v * np.sqrt(w)) @ v.T)


def _skew_similarity(alpha: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(S, B)`` with ``S = alpha^{1/2}`` and skew ``B = S Delta^{-1} S``."""
    s_root = _pd_sqrt(alpha)
    delta_inv = -delta_matrix(alpha.shape[0])
    b = s_root @ delta_inv @ s_root
    return s_root, 0.5 * (b - b.T)


def symplectic_eigenvalues(alpha) -> np.ndarray:
    """Sorted symplectic eigenvalues (one per mode) of a PD matrix."""
    a = as_array(alpha)
    _check_square_even(a)
    _, b = _skew_similarity(a)
    # singular values of the skew B come in equal pairs; SVD avoids squaring B
    w = np.sort(np.linalg.svd(b, compute_uv=False))
    return 0.5 * (w[0::2] + w[1::2])


def validate_covariance(alpha, tol: float = VALIDITY_TOL) -> CovarianceMatrix:
    """Check shape, symmetry and the uncertainty relation.

    Raises:
        InvalidMatrixError: bad shape or asymmetric input.
        UncertaintyViolation: not PD, or some symplectic eigenvalue is below
            1/2 by more than ``tol``.
    """
    if isinstance(alpha, CovarianceMatrix):
        return alpha
    a = np.asarray(alpha, dtype=float)
    _check_square_even(a)
    _check_symmetric(a)
    a = symmetrize(a)
    try:
        nu = symplectic_eigenvalues(a)
    except SingularMatrixError as exc:
        raise UncertaintyViolation(
            f"covariance is not positive definite: {exc}", margin=-0.5
        ) from None
    margin = float(nu[0] - 0.5)
    if margin < -tol:
        raise UncertaintyViolation(
            f"uncertainty relation violated: min symplectic eigenvalue {nu[0]:.6g} < 1/2",
            margin=margin,
        )
    return CovarianceMatrix(mat=_frozen(a), validity_margin=margin)


def check_complex_structure(j, tol: float = VALIDITY_TOL) -> ComplexStructure:
    """Wrap ``j`` after checking ``J^2 = -I`` and ``Delta J`` symmetric PSD."""
    if isinstance(j, ComplexStructure):
        return j
    j = np.asarray(j, dtype=float)
    _check_square_even(j)
    n = j.shape[0]
    scale = max(1.0, float(np.max(np.abs(j))) ** 2)
    if np.max(np.abs(j @ j + np.eye(n))) > tol * scale:
        raise InvalidMatrixError("J^2 != -I")
    dj = delta_matrix(n) @ j
    if np.max(np.abs(dj - dj.T)) > tol * scale:
        raise ConventionError("Delta J is not symmetric")
    if np.linalg.eigvalsh(symmetrize(dj))[0] < -tol * scale:
        raise ConventionError("Delta J is not positive semidefinite")
    return ComplexStructure(mat=_frozen(j))


def polar_parts(alpha) -> tuple[np.ndarray, np.ndarray]:
    r"""Return ``(|A|, J_alpha)`` for ``A = Delta^{-1} alpha``.

    The polar decomposition is taken in the Euclidean space with scalar
    product ``alpha``; it is conjugated to the ordinary polar decomposition
    of the skew matrix ``B = S Delta^{-1} S`` with ``S = alpha^{1/2}``.
    """
    a = as_array(alpha)
    _check_square_even(a)
    s_root, b = _skew_similarity(a)
    u, w, vt = np.linalg.svd(b)
    if w[-1] < SINGULAR_TOL:
        raise SingularMatrixError("symplectic eigenvalue below 1e-12; polar part undefined")
    # B is normal, so |B| = V diag(w) V^T and the orthogonal factor is U V^T
    abs_b = symmetrize((vt.T * w) @ vt)
    orth = u @ vt
    s_inv = np.linalg.inv(s_root)
    return s_inv @ abs_b @ s_root, s_inv @ orth @ s_root


def complex_structure(alpha) -> ComplexStructure:
    """Complex structure ``J_alpha``: orthogonal polar factor of ``Delta^{-1} alpha``.

    A result failing Delta-positivity is a hard :class:`ConventionError`.
    """
    _, j = polar_parts(alpha)
    return check_complex_structure(j)


def vacuum_covariance(j) -> CovarianceMatrix:
    """Covariance ``Delta J / 2`` of the J-vacuum."""
    j = check_complex_structure(j)
    dj = delta_matrix(j.mat.shape[0]) @ j.mat
    return validate_covariance(symmetrize(0.5 * dj))


def is_pure(alpha) -> bool:
    nu = symplectic_eigenvalues(alpha)
    return bool(np.max(np.abs(nu - 0.5)) <= PURITY_TOL)


def squeezed_vacuum(alpha) -> np.ndarray:
    """Shorthand for the symmetric matrix ``Delta J_alpha / 2``."""
    return vacuum_covariance(complex_structure(alpha)).mat
