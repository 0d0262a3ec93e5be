import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaussacc.errors import InvalidMatrixError, SingularMatrixError, UncertaintyViolation
from gaussacc.instances import random_covariance, random_symplectic
from gaussacc.symplectic import (
    CovarianceMatrix,
    check_complex_structure,
    complex_structure,
    is_pure,
    polar_parts,
    standard_form,
    sym_sqrt,
    symplectic_eigenvalues,
    vacuum_covariance,
    validate_covariance,
)

D1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def test_standard_form_one_mode():
    sp = standard_form(1)
    assert np.array_equal(sp.delta, D1)
    assert sp.dim == 2


def test_standard_form_two_modes():
    d = standard_form(2).delta
    expected = np.zeros((4, 4))
    expected[:2, :2] = D1
    expected[2:, 2:] = D1
    assert np.array_equal(d, expected)


def test_standard_form_squares_to_minus_identity():
    d = standard_form(3).delta
    assert np.array_equal(d @ d, -np.eye(6))
    assert np.array_equal(d.T, -d)


@pytest.mark.parametrize("s", [0, -1, 1.5])
def test_standard_form_rejects_bad_mode_count(s):
    with pytest.raises(ValueError):
        standard_form(s)


def test_standard_form_is_read_only():
    with pytest.raises(ValueError):
        standard_form(1).delta[0, 0] = 5.0


def test_sym_sqrt_examples():
    assert np.allclose(sym_sqrt(np.eye(3)), np.eye(3), atol=1e-15)
    assert np.allclose(sym_sqrt(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)


def test_sym_sqrt_random_spd():
    rng = np.random.default_rng(0)
    for dim in (2, 4, 6):
        a = rng.normal(size=(dim, dim))
        m = a @ a.T + 0.1 * np.eye(dim)
        r = sym_sqrt(m)
        assert np.allclose(r, r.T)
        assert np.linalg.eigvalsh(r)[0] >= 0
        assert np.linalg.norm(r @ r - m) <= 1e-10 * np.linalg.norm(m)


def test_sym_sqrt_clamps_tiny_negative():
    r = sym_sqrt(np.diag([1.0, -1e-14]))
    assert np.allclose(r, np.diag([1.0, 0.0]))


def test_sym_sqrt_rejects_indefinite():
    with pytest.raises(InvalidMatrixError):
        sym_sqrt(np.diag([1.0, -1e-3]))


def test_symplectic_eigenvalues_examples():
    assert np.allclose(symplectic_eigenvalues(0.5 * np.eye(2)), [0.5], atol=1e-15)
    # 2x2: nu = sqrt(det)
    assert np.allclose(symplectic_eigenvalues(np.diag([2.0, 0.5])), [1.0], atol=1e-14)
    assert np.allclose(symplectic_eigenvalues(np.diag([1.0, 1.0, 3.0, 3.0])), [1.0, 3.0], atol=1e-14)


def test_symplectic_eigenvalues_sorted_and_rejects_singular():
    nu = symplectic_eigenvalues(np.diag([5.0, 5.0, 1.0, 1.0, 2.0, 2.0]))
    assert np.allclose(nu, [1.0, 2.0, 5.0])
    with pytest.raises(SingularMatrixError):
        symplectic_eigenvalues(np.diag([1.0, 0.0]))


def test_validate_covariance_examples():
    v = validate_covariance(0.5 * np.eye(2))
    assert isinstance(v, CovarianceMatrix)
    assert abs(v.validity_margin) < 1e-15
    with pytest.raises(UncertaintyViolation) as exc:
        validate_covariance(np.diag([1.0, 0.1]))
    assert exc.value.margin == pytest.approx(np.sqrt(0.1) - 0.5)
    assert validate_covariance(np.diag([2.0, 0.5])).validity_margin == pytest.approx(0.5)


def test_validate_covariance_tolerance_edge():
    validate_covariance(np.diag([0.5, 0.5 - 1e-10]))
    with pytest.raises(UncertaintyViolation):
        validate_covariance(np.diag([0.5, 0.5 - 1e-8]))


@pytest.mark.parametrize(
    "m",
    [np.eye(3), np.ones((2, 3)), np.array([[1.0, 0.2], [0.0, 1.0]]), np.array([[np.nan, 0], [0, 1.0]])],
)
def test_validate_covariance_rejects_malformed(m):
    with pytest.raises(InvalidMatrixError):
        validate_covariance(m)


def test_validate_covariance_rejects_non_pd():
    with pytest.raises(UncertaintyViolation):
        validate_covariance(np.diag([1.0, -1.0]))


def test_covariance_matrix_is_immutable():
    v = validate_covariance(np.eye(2))
    with pytest.raises(ValueError):
        v.mat[0, 0] = 2.0
    assert validate_covariance(v) is v


def test_complex_structure_diagonal():
    b1, b2 = 2.0, 0.3
    j = complex_structure(np.diag([b1, b2])).mat
    expected = np.array([[0.0, -np.sqrt(b2 / b1)], [np.sqrt(b1 / b2), 0.0]])
    assert np.allclose(j, expected, atol=1e-13)


def test_complex_structure_vacuum_is_standard():
    j = complex_structure(0.5 * np.eye(2)).mat
    assert np.allclose(j, [[0.0, -1.0], [1.0, 0.0]], atol=1e-14)


def test_complex_structure_rejects_bad_inputs():
    with pytest.raises(InvalidMatrixError):
        check_complex_structure(np.eye(2))
    from gaussacc.errors import ConventionError

    with pytest.raises(ConventionError):
        # J^2 = -I but Delta J is negative definite: the opposite sign convention
        check_complex_structure(np.array([[0.0, 1.0], [-1.0, 0.0]]))


def test_vacuum_covariance_examples():
    std = check_complex_structure(np.array([[0.0, -1.0], [1.0, 0.0]]))
    assert np.allclose(vacuum_covariance(std).mat, 0.5 * np.eye(2))
    b1, b2 = 3.0, 0.4
    vac = vacuum_covariance(complex_structure(np.diag([b1, b2]))).mat
    assert np.allclose(vac, 0.5 * np.diag([np.sqrt(b1 / b2), np.sqrt(b2 / b1)]), atol=1e-13)


def test_is_pure_examples():
    assert is_pure(0.5 * np.eye(2))
    assert not is_pure(np.eye(2))


@st.composite
def covariances(draw):
    s = draw(st.integers(1, 3))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_covariance(s, np.random.default_rng(seed))


@settings(max_examples=60, deadline=None)
@given(covariances())
def test_complex_structure_properties(alpha):
    j = complex_structure(alpha).mat
    n = alpha.shape[0]
    d = standard_form(n // 2).delta
    assert np.max(np.abs(j @ j + np.eye(n))) <= 1e-9
    dj = d @ j
    assert np.linalg.eigvalsh(0.5 * (dj + dj.T))[0] >= -1e-9


@settings(max_examples=60, deadline=None)
@given(covariances())
def test_polar_reconstruction(alpha):
    abs_a, j = polar_parts(alpha)
    d = standard_form(alpha.shape[0] // 2).delta
    a = -d @ alpha
    assert np.linalg.norm(abs_a @ j - a) <= 1e-10 * np.linalg.norm(a)


@settings(max_examples=60, deadline=None)
@given(covariances())
def test_vacuum_of_any_structure_is_pure(alpha):
    vac = vacuum_covariance(complex_structure(alpha))
    assert np.max(np.abs(symplectic_eigenvalues(vac) - 0.5)) <= 1e-9


@pytest.mark.parametrize("s", [1, 2])
def test_symplectic_eigenvalues_congruence_invariant(s):
    rng = np.random.default_rng(10 + s)
    for _ in range(25):
        alpha = random_covariance(s, rng)
        t = random_symplectic(s, rng, scale=0.5)
        d = standard_form(s).delta
        assert np.allclose(t @ d @ t.T, d, atol=1e-10)
        nu1 = symplectic_eigenvalues(alpha)
        nu2 = symplectic_eigenvalues(t @ alpha @ t.T)
        assert np.max(np.abs(nu1 - nu2)) <= 1e-9


def test_vacuum_of_pure_state_is_idempotent():
    rng = np.random.default_rng(3)
    for s in (1, 2, 3):
        alpha = random_covariance(s, rng, nu_range=(0.5, 0.5))
        assert is_pure(alpha)
        back = vacuum_covariance(complex_structure(alpha)).mat
        assert np.max(np.abs(back - alpha)) <= 1e-9
