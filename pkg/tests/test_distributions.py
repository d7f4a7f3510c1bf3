import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.linalg import eigvalsh as scipy_eigvalsh

from partialid import (
    ParameterError,
    beta_cdf,
    gamma_cdf,
    gamma_quantile,
    psd_repair,
    sample_beta,
    sample_dirichlet,
    sample_mvnormal,
    sample_normal,
    sample_truncated_normal,
    substream,
)
from partialid.scenarios import INTERVAL_REGRESSION_RAW_COV


class TestSampleBeta:
    def test_uniform_case_mean(self):
        draws = sample_beta(1.0, 1.0, substream(1, 0), size=100_000)
        assert abs(draws.mean() - 0.5) < 0.01

    def test_skewed_mean_matches_analytic_moment(self):
        # Beta(a, b) mean is a / (a + b)
        draws = sample_beta(1.0, 20.0, substream(1, 1), size=100_000)
        assert abs(draws.mean() - 1.0 / 21.0) < 0.005

    def test_nonpositive_shape_rejected(self):
        with pytest.raises(ParameterError):
            sample_beta(0.0, 1.0, substream(1, 2))
        with pytest.raises(ParameterError):
            sample_beta(2.0, -1.0, substream(1, 2))

    def test_scalar_draw_is_float(self):
        x = sample_beta(2.0, 3.0, substream(1, 3))
        assert isinstance(x, float)
        assert 0.0 < x < 1.0

    def test_deterministic(self):
        a = sample_beta(2.0, 3.0, substream(5, 0), size=100)
        b = sample_beta(2.0, 3.0, substream(5, 0), size=100)
        assert np.array_equal(a, b)


class TestSampleDirichlet:
    def test_single_component_degenerate(self):
        assert np.array_equal(sample_dirichlet([1.0], substream(2, 0)), [1.0])

    def test_symmetric_means(self):
        rng = substream(2, 1)
        draws = np.array([sample_dirichlet([1.0, 1.0, 1.0], rng) for _ in range(30_000)])
        assert np.all(np.abs(draws.mean(axis=0) - 1.0 / 3.0) < 0.01)

    def test_asymmetric_first_component_mean(self):
        # Dirichlet mean of component i is alpha_i / sum(alpha)
        rng = substream(2, 2)
        draws = np.array([sample_dirichlet([2.0, 3.0, 1.0], rng)[0] for _ in range(30_000)])
        assert abs(draws.mean() - 2.0 / 6.0) < 0.01

    def test_invalid_alpha_rejected(self):
        with pytest.raises(ParameterError):
            sample_dirichlet([], substream(2, 3))
        with pytest.raises(ParameterError):
            sample_dirichlet([1.0, 0.0], substream(2, 3))

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(min_value=0.05, max_value=50.0), min_size=1, max_size=8),
           st.integers(min_value=0, max_value=1000))
    def test_simplex_invariant(self, alpha, idx):
        w = sample_dirichlet(alpha, substream(99, idx))
        assert np.all(w >= 0.0)
        assert abs(w.sum() - 1.0) <= 1e-12


class TestSampleMvnormal:
    def test_standard_pair_moments(self):
        draws = sample_mvnormal([0.0, 0.0], np.eye(2), substream(3, 0), size=100_000)
        emp = np.cov(draws.T, bias=True)
        assert np.all(np.abs(emp - np.eye(2)) < 0.02)

    def test_correlated_pair_cross_moment(self):
        cov = np.array([[2.0, 0.9], [0.9, 2.0]])
        draws = sample_mvnormal([0.0, 0.0], cov, substream(3, 1), size=100_000)
        emp = np.cov(draws.T, bias=True)
        assert abs(emp[0, 1] - 0.9) < 0.03

    def test_non_psd_covariance_rejected(self):
        with pytest.raises(ParameterError):
            sample_mvnormal(np.zeros(4), INTERVAL_REGRESSION_RAW_COV, substream(3, 2))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ParameterError):
            sample_mvnormal([0.0, 0.0, 0.0], np.eye(2), substream(3, 3))

    def test_asymmetric_covariance_rejected(self):
        cov = np.array([[1.0, 0.2], [0.3, 1.0]])
        with pytest.raises(ParameterError):
            sample_mvnormal([0.0, 0.0], cov, substream(3, 4))


class TestPsdRepair:
    def test_identity_untouched(self):
        out = psd_repair(np.eye(3), eigen_floor=1e-6)
        assert not out.clipped
        assert np.array_equal(out.matrix, np.eye(3))

    def test_stated_base_covariance_is_repaired(self):
        # the raw 4x4 has negative eigenvalues; the repair must floor them
        raw_eigs = scipy_eigvalsh(INTERVAL_REGRESSION_RAW_COV)
        assert raw_eigs.min() < 0
        out = psd_repair(INTERVAL_REGRESSION_RAW_COV, eigen_floor=1e-6)
        assert out.clipped
        repaired_eigs = scipy_eigvalsh(out.matrix)
        assert abs(repaired_eigs.min() - 1e-6) < 1e-12
        assert np.array_equal(out.matrix, out.matrix.T)

    def test_psd_input_passes_through(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            a = rng.normal(size=(4, 4))
            m = a @ a.T + 0.1 * np.eye(4)  # eigenvalues well above the floor
            out = psd_repair(m, eigen_floor=1e-6)
            assert not out.clipped
            assert np.all(np.abs(out.matrix - m) < 1e-10)

    def test_repair_floor_invariant(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            a = rng.normal(size=(5, 5))
            m = (a + a.T) / 2.0
            out = psd_repair(m, eigen_floor=1e-6)
            assert scipy_eigvalsh(out.matrix).min() >= 1e-6 - 1e-12

    def test_asymmetric_rejected(self):
        m = np.array([[1.0, 0.5], [0.4, 1.0]])
        with pytest.raises(ParameterError):
            psd_repair(m)


class TestBetaCdf:
    def test_uniform_cdf(self):
        assert beta_cdf(0.5, 1.0, 1.0) == pytest.approx(0.5, abs=1e-12)

    def test_symmetric_midpoint(self):
        assert beta_cdf(0.5, 2.0, 2.0) == pytest.approx(0.5, abs=1e-12)

    def test_matches_quadrature_of_density(self):
        a, b = 2.0, 5.0
        from scipy.special import beta as beta_fn

        density = lambda t: t ** (a - 1) * (1 - t) ** (b - 1) / beta_fn(a, b)
        oracle, err = integrate.quad(density, 0.0, 0.3, epsabs=1e-12)
        assert err < 1e-10
        assert abs(beta_cdf(0.3, a, b) - oracle) < 1e-8

    def test_monotone_in_x(self):
        rng = np.random.default_rng(2)
        for _ in range(10_000):
            x1, x2 = np.sort(rng.random(2))
            a, b = rng.uniform(0.1, 10.0, size=2)
            assert beta_cdf(x1, a, b) <= beta_cdf(x2, a, b)

    def test_absolute_accuracy_against_mpmath(self):
        # arbitrary-precision oracle for the 1e-10 accuracy contract on (0, 1)
        mpmath = pytest.importorskip("mpmath")
        mpmath.mp.dps = 40
        rng = np.random.default_rng(8)
        for _ in range(200):
            x = rng.uniform(0.01, 0.99)
            a, b = rng.uniform(0.2, 20.0, size=2)
            oracle = float(mpmath.betainc(a, b, 0, x, regularized=True))
            assert abs(beta_cdf(x, a, b) - oracle) < 1e-10

    def test_domain_errors(self):
        with pytest.raises(ParameterError):
            beta_cdf(-0.1, 1.0, 1.0)
        with pytest.raises(ParameterError):
            beta_cdf(1.1, 1.0, 1.0)
        with pytest.raises(ParameterError):
            beta_cdf(0.5, 0.0, 1.0)


class TestGammaQuantile:
    def test_exponential_case(self):
        p = 1.0 - np.exp(-1.0)
        assert gamma_quantile(p, 1.0, 1.0) == pytest.approx(1.0, abs=1e-6)

    def test_matches_bisection_on_cdf(self):
        # independent route: bisect the CDF directly
        shape, rate, p = 2.0, 1.0, 0.5
        lo, hi = 0.0, 100.0
        for _ in range(200):
            mid = (lo + hi) / 2.0
            if gamma_cdf(mid, shape, rate) < p:
                lo = mid
            else:
                hi = mid
        assert abs(gamma_quantile(p, shape, rate) - (lo + hi) / 2.0) < 1e-8

    def test_quantile_of_cdf_is_identity(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(0.01, 20.0, size=1000)
        shape = rng.uniform(0.5, 30.0, size=1000)
        rate = rng.uniform(0.1, 10.0, size=1000)
        checked = 0
        for xi, si, ri in zip(x, shape, rate):
            p = gamma_cdf(xi, si, ri)
            # near 0 or 1 the CDF value no longer carries enough bits to recover x
            if 1e-9 < p < 1.0 - 1e-9:
                assert abs(gamma_quantile(p, si, ri) - xi) < 1e-6 * max(1.0, xi)
                checked += 1
        assert checked > 400

    def test_cdf_of_quantile_is_identity(self):
        rng = np.random.default_rng(4)
        p = rng.uniform(0.001, 0.999, size=1000)
        shape = rng.uniform(0.5, 30.0, size=1000)
        rate = rng.uniform(0.1, 10.0, size=1000)
        for pi, si, ri in zip(p, shape, rate):
            assert abs(gamma_cdf(gamma_quantile(pi, si, ri), si, ri) - pi) < 1e-9

    def test_domain_errors(self):
        with pytest.raises(ParameterError):
            gamma_quantile(0.0, 1.0, 1.0)
        with pytest.raises(ParameterError):
            gamma_quantile(1.0, 1.0, 1.0)
        with pytest.raises(ParameterError):
            gamma_quantile(0.5, -1.0, 1.0)

    def test_cdf_accuracy_against_mpmath(self):
        mpmath = pytest.importorskip("mpmath")
        mpmath.mp.dps = 40
        rng = np.random.default_rng(9)
        for _ in range(200):
            shape = rng.uniform(0.2, 20.0)
            rate = rng.uniform(0.1, 5.0)
            x = rng.uniform(0.01, 30.0)
            oracle = float(mpmath.gammainc(shape, 0, rate * x, regularized=True))
            assert abs(gamma_cdf(x, shape, rate) - oracle) < 1e-10


class TestTruncatedNormal:
    def test_all_draws_in_support(self):
        draws = sample_truncated_normal(1.0, 4.0, -1.0, 2.0, substream(4, 0), size=100_000)
        assert draws.min() >= -1.0
        assert draws.max() <= 2.0

    def test_symmetric_interval_mean(self):
        draws = sample_truncated_normal(2.5, 2.0, 0.0, 5.0, substream(4, 1), size=100_000)
        se = draws.std() / np.sqrt(draws.size)
        assert abs(draws.mean() - 2.5) < 3 * se

    def test_mean_matches_quadrature(self):
        mu, s2, lo, hi = 0.0, 2.0, 0.0, 5.0
        sigma = np.sqrt(s2)
        density = lambda t: np.exp(-((t - mu) ** 2) / (2 * s2)) / (sigma * np.sqrt(2 * np.pi))
        mass, _ = integrate.quad(density, lo, hi)
        mean_oracle = integrate.quad(lambda t: t * density(t), lo, hi)[0] / mass
        draws = sample_truncated_normal(mu, s2, lo, hi, substream(4, 2), size=100_000)
        assert abs(draws.mean() - mean_oracle) < 0.02

    def test_invalid_interval_rejected(self):
        with pytest.raises(ParameterError):
            sample_truncated_normal(0.0, 1.0, 2.0, 2.0, substream(4, 3))


def test_sample_normal_moments():
    draws = sample_normal(3.0, 0.25, substream(6, 0), size=100_000)
    assert abs(draws.mean() - 3.0) < 0.01
    assert abs(draws.var() - 0.25) < 0.01


def test_sample_normal_bad_variance():
    with pytest.raises(ParameterError):
        sample_normal(0.0, 0.0, substream(6, 1))


def test_operations_are_deterministic():
    pairs = [
        lambda r: sample_beta(2.0, 5.0, r, size=10),
        lambda r: sample_dirichlet([1.0, 2.0, 3.0], r),
        lambda r: sample_mvnormal([0.0, 0.0], np.eye(2), r, size=5),
        lambda r: sample_truncated_normal(0.0, 1.0, -1.0, 1.0, r, size=10),
        lambda r: sample_normal(0.0, 1.0, r, size=10),
    ]
    for i, op in enumerate(pairs):
        a = op(substream(8, i))
        b = op(substream(8, i))
        assert np.array_equal(np.asarray(a), np.asarray(b))
