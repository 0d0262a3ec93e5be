import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussacc.ensemble import (
    GaussianEnsemble,
    GaussianObservable,
    average_state,
    gaussian_mi,
    heterodyne_observable,
    lemma1_max_info,
    logdet_pd,
    outcome_density,
    outcome_model,
)
from gaussacc.duality import gauge_invariant_info
from gaussacc.errors import InvalidMatrixError, SingularMatrixError, ThresholdViolation, UncertaintyViolation
from gaussacc.gaussian_ops import GaussianState
from gaussacc.instances import random_covariance, random_pd
from gaussacc.single_mode import sm_lemma_info
from gaussacc.symplectic import complex_structure, is_pure, vacuum_covariance


def test_ensemble_validation():
    with pytest.raises(SingularMatrixError):
        GaussianEnsemble(np.diag([1.0, 0.0]), np.eye(2))
    with pytest.raises(UncertaintyViolation):
        GaussianEnsemble(np.eye(2), np.diag([1.0, 0.1]))
    with pytest.raises(InvalidMatrixError):
        GaussianEnsemble(np.eye(4), np.eye(2))
    with pytest.raises(InvalidMatrixError):
        GaussianEnsemble(np.array([[1.0, 0.5], [0.0, 1.0]]), np.eye(2))


def test_observable_validation():
    with pytest.raises(SingularMatrixError):
        GaussianObservable(np.zeros((2, 2)), np.eye(2))
    with pytest.raises(InvalidMatrixError):
        GaussianObservable(np.eye(4), np.eye(2))


def test_average_state_examples():
    s = average_state(GaussianEnsemble(np.eye(2), 0.5 * np.eye(2)))
    assert np.allclose(s.cov.mat, 1.5 * np.eye(2))
    assert np.array_equal(s.mean, np.zeros(2))
    s = average_state(GaussianEnsemble(np.diag([2.0, 1.0]), np.diag([0.5, 0.7])))
    assert np.allclose(s.cov.mat, np.diag([2.5, 1.7]))
    g = np.zeros((4, 4))
    g[:2, :2] = [[1.0, 0.3], [0.3, 2.0]]
    g[2:, 2:] = np.diag([0.4, 0.6])
    s = average_state(GaussianEnsemble(g, np.eye(4)))
    assert np.all(s.cov.mat[:2, 2:] == 0) and np.all(s.cov.mat[2:, :2] == 0)


def test_heterodyne_observable_examples():
    obs = heterodyne_observable(np.eye(2))
    assert np.array_equal(obs.K, np.eye(2))
    assert np.allclose(obs.beta_m.mat, 0.5 * np.eye(2))
    b1, b2 = 2.0, 0.6
    obs = heterodyne_observable(np.diag([b1, b2]))
    assert np.allclose(obs.beta_m.mat, 0.5 * np.diag([math.sqrt(b1 / b2), math.sqrt(b2 / b1)]), atol=1e-13)


def test_heterodyne_observable_is_pure():
    rng = np.random.default_rng(5)
    for s in (1, 2, 3):
        assert is_pure(heterodyne_observable(random_covariance(s, rng)).beta_m)


def test_outcome_density_examples():
    alpha = np.array([[1.2, 0.1], [0.1, 0.9]])
    bm = 0.5 * np.eye(2)
    obs = GaussianObservable.unscaled(bm)
    d = outcome_density(GaussianState.centered(alpha), obs)
    assert np.allclose(d.cov, alpha + bm)
    assert np.array_equal(d.mean, np.zeros(2))
    z = np.array([0.4, -1.0])
    assert np.allclose(outcome_density(GaussianState(z, alpha), obs).mean, z)
    d2 = outcome_density(GaussianState.centered(alpha), GaussianObservable(2 * np.eye(2), bm))
    assert np.allclose(d2.cov, 0.25 * (alpha + bm))


def test_outcome_density_normalization():
    d = outcome_density(GaussianState.centered(np.eye(2)), GaussianObservable.unscaled(np.eye(2)))
    xs = np.linspace(-12, 12, 241)
    h = xs[1] - xs[0]
    total = sum(d.pdf([x, y]) for x in xs for y in xs) * h * h
    assert total == pytest.approx(1.0, abs=1e-8)
    assert d.trace_density([0.0, 0.0]) == pytest.approx(2 * np.pi * d.pdf([0.0, 0.0]))


def test_outcome_model_cov_is_pd():
    rng = np.random.default_rng(2)
    e = GaussianEnsemble(random_pd(4, rng), random_covariance(2, rng))
    obs = heterodyne_observable(e.beta)
    m = outcome_model(e, obs)
    assert np.allclose(m.noise_cov, m.noise_cov.T)
    assert np.linalg.eigvalsh(m.noise_cov)[0] > 0
    assert np.array_equal(m.mean_map, np.eye(4))


def test_gaussian_mi_examples():
    assert gaussian_mi(1.0, 1.0) == pytest.approx(0.5 * math.log(2), abs=1e-15)
    assert gaussian_mi(0.0, 1.0) == 0.0
    assert gaussian_mi(1e-12, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_gaussian_mi_rejects_bad_input():
    with pytest.raises(SingularMatrixError):
        gaussian_mi(-np.eye(2), np.eye(2))
    with pytest.raises(InvalidMatrixError):
        gaussian_mi(np.eye(2), np.eye(4))
    with pytest.raises(SingularMatrixError):
        logdet_pd(np.diag([1.0, -1.0]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_gaussian_mi_congruence_invariant(dim, seed):
    rng = np.random.default_rng(seed)
    p, c = random_pd(dim, rng), random_pd(dim, rng)
    t = rng.normal(size=(dim, dim)) + 2 * np.eye(dim)
    if abs(np.linalg.det(t)) < 1e-2 or np.linalg.cond(t) > 1e3:
        return
    assert abs(gaussian_mi(t @ p @ t.T, t @ c @ t.T) - gaussian_mi(p, c)) <= 1e-10


def test_lemma1_gauge_invariant():
    n, sigma = np.array([0.3, 1.2]), np.array([0.7, 2.0])
    alpha = np.diag(np.repeat(sigma + 0.5, 2))
    beta = np.diag(np.repeat(n + 0.5, 2))
    info, gamma = lemma1_max_info(alpha, beta)
    assert info == pytest.approx(gauge_invariant_info(n, sigma), abs=1e-12)
    assert np.allclose(gamma, np.diag(np.repeat(sigma, 2)))


def test_lemma1_diagonal_closed_form():
    a1, a2, b1, b2 = 1.5, 0.9, 2.0, 0.3
    info, _ = lemma1_max_info(np.diag([a1, a2]), np.diag([b1, b2]))
    want = 0.5 * math.log((b1 + a1) * (b2 + a2) / (math.sqrt(b1 * b2) + 0.5) ** 2)
    assert info == pytest.approx(want, abs=1e-12)
    assert info == pytest.approx(sm_lemma_info(a1, a2, b1, b2), abs=1e-10)


def test_lemma1_window_violation():
    # beta1/beta2 = 100 > 4 alpha1^2 = 1
    with pytest.raises(ThresholdViolation) as exc:
        lemma1_max_info(np.diag([0.5, 2.0]), np.diag([5.0, 0.05]))
    assert exc.value.margin < 0


def test_lemma1_self_consistency():
    rng = np.random.default_rng(8)
    checked = 0
    for i in range(200):
        s = 1 + i % 3
        beta = random_covariance(s, rng)
        vac = vacuum_covariance(complex_structure(beta)).mat
        alpha = vac + random_pd(2 * s, rng, scale=rng.uniform(0.2, 2.0))
        info, gamma = lemma1_max_info(alpha, beta)
        assert abs(gaussian_mi(gamma, beta + vac) - info) <= 1e-10
        checked += 1
    assert checked == 200
