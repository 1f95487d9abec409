import math

import numpy as np
import pytest

import faceset.numerics as numerics
from faceset import (
    GaussianSummary,
    frechet_distance,
    frechet_distance_details,
    gaussian_summary,
    sqrtm_psd,
    sqrtm_psd_details,
    sym_eigen,
)
from faceset.errors import (
    DimensionMismatch,
    InsufficientSamples,
    InvalidInput,
    NotPSD,
    NotSymmetric,
)

from helpers import make_set, two_pass_summary, welford_summary, diagonal_frechet


# ---------------------------------------------------------------------------
# gaussian_summary


def test_two_point_unbiased_variance():
    s = gaussian_summary(make_set([[0.0], [2.0]]))
    np.testing.assert_array_equal(s.mean, [1.0])
    np.testing.assert_array_equal(s.covariance, [[2.0]])
    assert s.sample_count == 2


def test_identical_rows_zero_spread():
    v = np.array([0.3, -1.2, 4.5])
    s = gaussian_summary(make_set(np.tile(v, (6, 1))))
    np.testing.assert_array_equal(s.mean, v)
    np.testing.assert_array_equal(s.covariance, np.zeros((3, 3)))


def test_seeded_sample_matches_streaming_oracle():
    rng = np.random.default_rng(7)
    rows = rng.multivariate_normal([1.0, -2.0, 0.5], np.diag([1.0, 2.0, 0.5]), size=200)
    s = gaussian_summary(make_set(rows))
    mean_o, cov_o = welford_summary(rows)
    np.testing.assert_allclose(s.mean, mean_o, rtol=0, atol=1e-10)
    np.testing.assert_allclose(s.covariance, cov_o, rtol=0, atol=1e-10)


@pytest.mark.parametrize("n", [10, 250, 1000])
def test_matches_two_pass_oracle_tightly(n):
    rng = np.random.default_rng(n)
    rows = rng.normal(size=(n, 4)) * 3.0 + 1.0
    s = gaussian_summary(make_set(rows))
    mean_o, cov_o = two_pass_summary(rows)
    np.testing.assert_allclose(s.mean, mean_o, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(s.covariance, cov_o, rtol=1e-12, atol=1e-14)


def test_invalid_rows_excluded_from_summary():
    rows = np.array([[1.0], [3.0], [0.0]])
    s = gaussian_summary(make_set(rows, face_found=[True, True, False]))
    np.testing.assert_array_equal(s.mean, [2.0])
    assert s.sample_count == 2


def test_fewer_than_two_valid_rows_rejected():
    with pytest.raises(InsufficientSamples):
        gaussian_summary(make_set([[1.0], [0.0]], face_found=[True, False]))


def test_covariance_is_exactly_symmetric_and_psd():
    rng = np.random.default_rng(21)
    s = gaussian_summary(make_set(rng.normal(size=(50, 12))))
    assert np.array_equal(s.covariance, s.covariance.T)
    s.validate()  # PSD within tolerance


def test_summary_invariants_enforced_on_construction():
    with pytest.raises(NotSymmetric):
        GaussianSummary(np.zeros(2), np.array([[1.0, 0.5], [0.0, 1.0]]), 5)
    with pytest.raises(InsufficientSamples):
        GaussianSummary(np.zeros(1), np.eye(1), 1)
    with pytest.raises(InvalidInput):
        GaussianSummary(np.array([np.inf]), np.eye(1), 3)


# ---------------------------------------------------------------------------
# sym_eigen


def test_identity_eigenvalues():
    eig = sym_eigen(np.eye(3))
    np.testing.assert_allclose(eig.eigenvalues, [1.0, 1.0, 1.0], atol=1e-14)


def test_diagonal_matrix_axis_aligned():
    eig = sym_eigen(np.diag([4.0, 9.0]))
    np.testing.assert_allclose(eig.eigenvalues, [4.0, 9.0], atol=1e-14)
    np.testing.assert_allclose(np.abs(eig.eigenvectors), np.eye(2), atol=1e-14)


def test_seeded_symmetric_reconstruction_residual():
    rng = np.random.default_rng(88)
    a = rng.normal(size=(8, 8))
    m = (a + a.T) / 2
    eig = sym_eigen(m)
    residual = np.linalg.norm(eig.reconstruct() - m)
    assert residual <= 1e-8 * max(1.0, np.linalg.norm(m))
    ortho = np.linalg.norm(eig.eigenvectors.T @ eig.eigenvectors - np.eye(8))
    assert ortho <= 1e-10 * 8
    assert np.all(np.diff(eig.eigenvalues) >= 0)


def test_eigendecomposition_is_deterministic():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(6, 6))
    m = a + a.T
    e1 = sym_eigen(m)
    e2 = sym_eigen(m.copy())
    assert np.array_equal(e1.eigenvalues, e2.eigenvalues)
    assert np.array_equal(e1.eigenvectors, e2.eigenvectors)


def test_one_by_one_matrix():
    eig = sym_eigen(np.array([[7.0]]))
    np.testing.assert_array_equal(eig.eigenvalues, [7.0])


def test_asymmetric_matrix_rejected():
    with pytest.raises(NotSymmetric):
        sym_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_nonfinite_matrix_rejected():
    with pytest.raises(InvalidInput):
        sym_eigen(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_nonsquare_rejected():
    with pytest.raises(InvalidInput):
        sym_eigen(np.ones((2, 3)))


# ---------------------------------------------------------------------------
# sqrtm_psd


def test_sqrt_of_identity():
    np.testing.assert_allclose(sqrtm_psd(np.eye(4)), np.eye(4), atol=1e-14)


def test_sqrt_of_diagonal():
    np.testing.assert_allclose(
        sqrtm_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14
    )


def test_seeded_spd_multiply_back():
    rng = np.random.default_rng(16)
    a = rng.normal(size=(16, 16))
    m = a @ a.T + np.eye(16)
    s = sqrtm_psd(m)
    assert np.array_equal(s, s.T)
    assert np.linalg.norm(s @ s - m) <= 1e-8 * np.linalg.norm(m)


def test_tiny_negative_eigenvalues_clamped_and_counted():
    rng = np.random.default_rng(5)
    q = np.linalg.qr(rng.normal(size=(3, 3)))[0]
    m = q @ np.diag([1.0, 0.5, -1e-10]) @ q.T
    m = (m + m.T) / 2
    s, clamped = sqrtm_psd_details(m)
    assert clamped == 1
    assert np.linalg.norm(s @ s - m) < 1e-6


def test_definitely_negative_eigenvalue_rejected():
    with pytest.raises(NotPSD):
        sqrtm_psd(np.diag([1.0, -1.0]))


# ---------------------------------------------------------------------------
# frechet_distance


def _summary(mean, cov, n=100):
    return GaussianSummary(np.asarray(mean, float), np.asarray(cov, float), n)


def test_identical_summaries_distance_zero():
    rng = np.random.default_rng(42)
    a = rng.normal(size=(30, 6))
    s = gaussian_summary(make_set(a))
    assert frechet_distance(s, s) <= 1e-6


def test_one_dimensional_mean_shift():
    a = _summary([0.0], [[1.0]])
    b = _summary([3.0], [[1.0]])
    assert frechet_distance(a, b) == pytest.approx(9.0, abs=1e-9)


def test_two_dimensional_diagonal_case():
    a = _summary([0.0, 0.0], np.diag([1.0, 4.0]))
    b = _summary([1.0, 1.0], np.diag([4.0, 1.0]))
    assert frechet_distance(a, b) == pytest.approx(4.0, abs=1e-9)


def test_matches_diagonal_closed_form():
    rng = np.random.default_rng(99)
    for _ in range(25):
        d = int(rng.integers(1, 12))
        mu1, mu2 = rng.normal(size=(2, d))
        v1, v2 = rng.uniform(0.1, 5.0, size=(2, d))
        got = frechet_distance(_summary(mu1, np.diag(v1)), _summary(mu2, np.diag(v2)))
        want = diagonal_frechet(mu1, mu2, v1, v2)
        assert got == pytest.approx(want, rel=1e-8, abs=1e-12)


def test_symmetric_in_arguments():
    rng = np.random.default_rng(1)
    for _ in range(10):
        d = int(rng.integers(2, 20))
        a = gaussian_summary(make_set(rng.normal(size=(d + 10, d))))
        b = gaussian_summary(make_set(rng.normal(size=(d + 15, d)) + 1.0))
        ab = frechet_distance(a, b)
        ba = frechet_distance(b, a)
        assert abs(ab - ba) <= 1e-6 * (1.0 + ab)


def test_dimension_mismatch_rejected():
    with pytest.raises(DimensionMismatch):
        frechet_distance(_summary([0.0], [[1.0]]), _summary([0.0, 0.0], np.eye(2)))


def test_result_is_clamped_non_negative():
    s = _summary([0.0, 0.0], np.eye(2))
    assert frechet_distance(s, s) >= 0.0


def test_regularization_retry_path(monkeypatch):
    real_once = numerics._frechet_once
    calls = {"n": 0}

    def flaky(mean_term, c1, c2):
        calls["n"] += 1
        if calls["n"] == 1:
            raise NotPSD("forced for test")
        return real_once(mean_term, c1, c2)

    monkeypatch.setattr(numerics, "_frechet_once", flaky)
    a = _summary([0.0], [[1.0]])
    b = _summary([1.0], [[1.0]])
    detail = frechet_distance_details(a, b)
    assert detail.regularized is True
    # both covariances got the same eps*I bump, so the sqrt(s1*s2) term
    # still cancels against them and only the mean term remains
    assert detail.value == pytest.approx(1.0, abs=1e-9)
