"""Accessible information of Gaussian ensembles of bosonic states."""

__version__ = "0.1.0"

from .duality import (
    AccInfoReport,
    accessible_info,
    accessible_info_of_dual,
    dual_observable,
    full_report,
    gauge_invariant_info,
    heterodyne_lower_bound,
    optimal_observable,
    threshold_check,
)
from .ensemble import GaussianEnsemble, GaussianObservable, gaussian_mi, lemma1_max_info
from .symplectic import (
    complex_structure,
    symplectic_eigenvalues,
    validate_covariance,
)

__all__ = [
    "AccInfoReport",
    "GaussianEnsemble",
    "GaussianObservable",
    "accessible_info",
    "accessible_info_of_dual",
    "complex_structure",
    "dual_observable",
    "full_report",
    "gauge_invariant_info",
    "gaussian_mi",
    "heterodyne_lower_bound",
    "lemma1_max_info",
    "optimal_observable",
    "symplectic_eigenvalues",
    "threshold_check",
    "validate_covariance",
]
