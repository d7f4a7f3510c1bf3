import numpy as np
import pytest

from partialid import (
    BinaryCounts,
    DiscreteMeasure,
    IntervalSet,
    ParameterError,
    analytic_capacity_toy,
    analytic_coverage_binary,
    analytic_coverage_toy,
    binary_posterior_params,
    count_binary,
    draw_set,
    draw_set_batch,
    generate_data,
    load_dataset,
    make_config,
)
from partialid.scenarios import (
    ROLE_DATA,
    attempt_stream,
    censoring_bounds,
    default_grid,
    instrument_ratio_bounds,
    reverse_regression_bounds,
)


class TestMakeConfig:
    def test_unknown_scenario(self):
        with pytest.raises(ParameterError):
            make_config("nosuch")

    def test_toy_takes_no_sample_size(self):
        with pytest.raises(ParameterError):
            make_config("toy_analytic", n=50)
        assert make_config("toy_analytic").n == 0

    def test_data_scenarios_default_to_n_1000(self):
        for sid in ("interval_censored", "errors_in_variables",
                    "interval_regression", "binary_missing"):
            assert make_config(sid).n == 1000

    def test_interval_censored_hyperparameters(self):
        cfg = make_config("interval_censored")
        assert cfg.hyper["n0"] == (10.0, 20.0)
        assert cfg.hyper["base_mean"] == (0.0, 10.0)
        assert cfg.hyper["base_var"] == (1.0, 1.0)
        assert cfg.true_set == IntervalSet(0.0, 5.0)
        assert cfg.grid[0] == -3.0 and cfg.grid[-1] == 12.0

    def test_errors_in_variables_hyperparameters(self):
        cfg = make_config("errors_in_variables")
        assert cfg.hyper["n0"] == 20.0
        assert np.array_equal(cfg.hyper["base_cov"], [[2.0, 0.9], [0.9, 2.0]])
        assert cfg.true_set == IntervalSet(0.5, 2.0)

    def test_interval_regression_base_covariance_repaired(self):
        cfg = make_config("interval_regression")
        assert cfg.hyper["base_cov_clipped"] is True
        eigs = np.linalg.eigvalsh(cfg.hyper["base_cov"])
        assert eigs.min() >= 1e-6 - 1e-12
        assert cfg.true_set == IntervalSet(2.0, 6.0)

    def test_binary_hyperparameters(self):
        cfg = make_config("binary_missing")
        assert np.array_equal(cfg.hyper["alpha"], [2.0, 3.0, 1.0])
        assert cfg.true_set == IntervalSet(0.4, 0.9)

    def test_grid_defaults(self):
        assert default_grid("toy_analytic")[-1] == 2.5
        assert default_grid("binary_missing").size == 21
        assert default_grid("interval_regression")[0] == -1.0
        cfg = make_config("binary_missing", grid=np.linspace(0, 1, 101))
        assert cfg.grid.size == 101


class TestGenerateData:
    def test_toy_has_no_dgp(self):
        with pytest.raises(ParameterError):
            generate_data(make_config("toy_analytic"), attempt_stream(0, ROLE_DATA, 0))

    def test_interval_censored_upper_mean(self):
        cfg = make_config("interval_censored", n=10_000)
        data = generate_data(cfg, attempt_stream(1, ROLE_DATA, 0))
        assert data.columns == ("y1", "y2")
        se = np.sqrt(0.1 / 10_000)
        assert abs(data.column("y2").mean() - 5.0) < 3 * se

    def test_errors_in_variables_cross_covariance(self):
        # Cov(Y, Z) = Var(latent) = 1 under the generating process
        cfg = make_config("errors_in_variables", n=10_000)
        data = generate_data(cfg, attempt_stream(1, ROLE_DATA, 0))
        assert data.columns == ("y", "z")
        emp = np.cov(data.values.T, bias=True)[0, 1]
        assert abs(emp - 1.0) < 0.05

    def test_interval_regression_moments(self):
        cfg = make_config("interval_regression", n=10_000)
        data = generate_data(cfg, attempt_stream(1, ROLE_DATA, 0))
        assert data.columns == ("y1", "y2", "x", "z")
        ezx = np.mean(data.column("z") * data.column("x"))
        assert abs(ezx - 1.0 / 3.0) < 0.02
        ratio = np.mean(data.column("y1") * data.column("z")) / ezx
        assert abs(ratio - 2.0) < 0.1

    def test_binary_missing_rate(self):
        cfg = make_config("binary_missing", n=10_000)
        data = generate_data(cfg, attempt_stream(1, ROLE_DATA, 0))
        assert data.columns == ("yd", "d")
        missing = np.mean(data.column("d") == 0.0)
        assert abs(missing - 0.5) < 0.02

    def test_csv_round_trip(self, tmp_path):
        cfg = make_config("interval_regression", n=50)
        data = generate_data(cfg, attempt_stream(2, ROLE_DATA, 0))
        path = tmp_path / "data.csv"
        data.to_csv(path)
        back = load_dataset(path, "interval_regression")
        assert back.columns == data.columns
        np.testing.assert_allclose(back.values, data.values, rtol=1e-11)

    def test_csv_wrong_columns_rejected(self, tmp_path):
        cfg = make_config("binary_missing", n=10)
        data = generate_data(cfg, attempt_stream(2, ROLE_DATA, 0))
        path = tmp_path / "data.csv"
        data.to_csv(path)
        with pytest.raises(ParameterError):
            load_dataset(path, "interval_censored")


class TestCountBinary:
    def make(self, rows):
        from partialid.scenarios import Dataset

        return Dataset("binary_missing", ("yd", "d"), np.array(rows, dtype=float))

    def test_small_example(self):
        counts = count_binary(self.make([(1, 1), (0, 1), (0, 0)]))
        assert counts == BinaryCounts(1, 1, 1)

    def test_all_observed_ones(self):
        counts = count_binary(self.make([(1, 1)] * 7))
        assert counts == BinaryCounts(7, 0, 0)

    def test_matches_independent_scan(self):
        cfg = make_config("binary_missing", n=10_000)
        data = generate_data(cfg, attempt_stream(3, ROLE_DATA, 0))
        counts = count_binary(data)
        n1 = n0 = m = 0
        for yd, d in data.values:
            if d == 0:
                m += 1
            elif yd == 1:
                n1 += 1
            else:
                n0 += 1
        assert counts == BinaryCounts(n1, n0, m)
        assert counts.n1 + counts.n0_obs + counts.m == data.n

    def test_malformed_row_rejected(self):
        with pytest.raises(ParameterError):
            count_binary(self.make([(1, 1), (1, 0)]))  # observed value without flag
        with pytest.raises(ParameterError):
            count_binary(self.make([(0.5, 1)]))


class TestBinaryPosteriorParams:
    def test_stated_update(self):
        out = binary_posterior_params([2.0, 3.0, 1.0], BinaryCounts(10, 5, 5))
        assert np.array_equal(out, [12.0, 8.0, 6.0])

    def test_no_data_is_identity(self):
        out = binary_posterior_params([2.0, 3.0, 1.0], BinaryCounts(0, 0, 0))
        assert np.array_equal(out, [2.0, 3.0, 1.0])

    def test_total_mass(self):
        counts = BinaryCounts(40, 11, 49)
        out = binary_posterior_params([2.0, 3.0, 1.0], counts)
        assert out.sum() == 6.0 + 100.0

    def test_bad_alpha(self):
        with pytest.raises(ParameterError):
            binary_posterior_params([2.0, -3.0, 1.0], BinaryCounts(0, 0, 0))


class TestBoundsFunctionals:
    def test_censoring_bounds_order(self):
        m1 = DiscreteMeasure([0.0, 2.0], [0.5, 0.5])
        m2 = DiscreteMeasure([5.0], [1.0])
        assert censoring_bounds(m1, m2) == IntervalSet(1.0, 5.0)
        assert censoring_bounds(m2, m1) is None

    def test_reverse_regression_degenerate_correlated_atoms(self):
        m = DiscreteMeasure([[1.0, 1.0], [-1.0, -1.0]], [0.5, 0.5])
        assert reverse_regression_bounds(m) == IntervalSet(1.0, 1.0)

    def test_reverse_regression_sign_guard(self):
        m = DiscreteMeasure([[1.0, -1.0], [-1.0, 1.0]], [0.5, 0.5])
        assert reverse_regression_bounds(m) is None

    def test_instrument_ratio_guard(self):
        # E[zx] < 0 must be skipped
        m = DiscreteMeasure([[1.0, 2.0, 1.0, -1.0], [1.0, 2.0, 1.0, -1.0]], [0.5, 0.5])
        assert instrument_ratio_bounds(m) is None

    def test_instrument_ratio_values(self):
        m = DiscreteMeasure([[1.0, 2.0, 1.0, 1.0]], [1.0])
        assert instrument_ratio_bounds(m) == IntervalSet(1.0, 2.0)

    def test_instrument_ratio_inversion_guard(self):
        m = DiscreteMeasure([[2.0, 1.0, 1.0, 1.0]], [1.0])
        assert instrument_ratio_bounds(m) is None


class TestDrawSet:
    def test_toy_supports(self):
        cfg = make_config("toy_analytic")
        for idx in range(2000):
            iv = draw_set(cfg, "prior", attempt_stream(4, 7, idx))
            assert 0.0 <= iv.lo <= 1.0
            assert 1.0 <= iv.hi <= 2.0

    def test_toy_posterior_rejected(self):
        with pytest.raises(ParameterError):
            draw_set(make_config("toy_analytic"), "posterior", attempt_stream(4, 7, 0))

    def test_posterior_requires_dataset(self):
        with pytest.raises(ParameterError):
            draw_set(make_config("binary_missing"), "posterior", attempt_stream(4, 7, 0))

    def test_dataset_scenario_must_match(self):
        cfg_b = make_config("binary_missing", n=20)
        cfg_c = make_config("interval_censored", n=20)
        data = generate_data(cfg_c, attempt_stream(4, ROLE_DATA, 0))
        with pytest.raises(ParameterError):
            draw_set(cfg_b, "posterior", attempt_stream(4, 7, 0), data)

    def test_binary_prior_endpoint_means(self):
        # aggregated Dirichlet cells: E lo = a1/sum, E hi = (a1 + a3)/sum
        cfg = make_config("binary_missing")
        lo, hi = [], []
        for idx in range(100_000):
            iv = draw_set(cfg, "prior", attempt_stream(5, 7, idx))
            lo.append(iv.lo)
            hi.append(iv.hi)
        assert abs(np.mean(lo) - 2.0 / 6.0) < 0.005
        assert abs(np.mean(hi) - 3.0 / 6.0) < 0.005

    def test_bad_mode(self):
        with pytest.raises(ParameterError):
            draw_set(make_config("binary_missing"), "sideways", attempt_stream(4, 7, 0))


class TestDrawSetBatch:
    def test_skip_accounting_identity(self):
        cfg = make_config("errors_in_variables", n=200)
        batch = draw_set_batch(cfg, "prior", 300, master_seed=11)
        assert len(batch) == 300
        last = batch.attempt_indices[-1]
        assert last + 1 == len(batch) + batch.skipped

    def test_worker_invariance(self):
        cfg = make_config("toy_analytic")
        seq = draw_set_batch(cfg, "prior", 60, master_seed=12, workers=1)
        par = draw_set_batch(cfg, "prior", 60, master_seed=12, workers=2)
        assert np.array_equal(seq.lo, par.lo)
        assert np.array_equal(seq.hi, par.hi)
        assert seq.skipped == par.skipped

    def test_posterior_batch_concentrates(self):
        cfg = make_config("interval_censored", n=400)
        data = generate_data(cfg, attempt_stream(13, ROLE_DATA, 0))
        batch = draw_set_batch(cfg, "posterior", 200, master_seed=13, dataset=data)
        assert abs(np.mean(batch.lo)) < 0.3
        assert abs(np.mean(batch.hi) - 5.0) < 0.6


class TestToyOracles:
    def test_coverage_values(self):
        assert analytic_coverage_toy(0.5) == 0.5
        assert analytic_coverage_toy(1.0) == 1.0
        assert analytic_coverage_toy(2.5) == 0.0
        assert analytic_coverage_toy(-0.5) == 0.0

    def test_coverage_vectorized(self):
        grid = np.array([-1.0, 0.25, 1.0, 1.75, 2.0, 3.0])
        np.testing.assert_allclose(
            analytic_coverage_toy(grid), [0.0, 0.25, 1.0, 0.25, 0.0, 0.0]
        )

    def test_capacity_values(self):
        # derived from independence of the two uniform endpoints
        assert analytic_capacity_toy(IntervalSet(0.2, 0.3)) == pytest.approx(0.3)
        assert analytic_capacity_toy(IntervalSet(1.5, 1.8)) == pytest.approx(0.5)
        assert analytic_capacity_toy(IntervalSet(0.9, 1.1)) == 1.0

    def test_capacity_monte_carlo_cross_check(self):
        cfg = make_config("toy_analytic")
        batch = draw_set_batch(cfg, "prior", 10_000, master_seed=6)
        from partialid import estimate_capacity

        for probe in (IntervalSet(0.2, 0.3), IntervalSet(1.5, 1.8), IntervalSet(0.9, 1.1)):
            mc = estimate_capacity(batch, probe)
            assert abs(mc - analytic_capacity_toy(probe)) < 0.02


class TestBinaryPointEstimate:
    def test_matches_closed_form_posterior_means(self):
        # the mean endpoints over Dirichlet draws estimate the exact posterior
        # means (a1 + n1)/(abar + n) and (a1 + a3 + n1 + m)/(abar + n)
        from partialid import point_estimate_set

        cfg = make_config("binary_missing", n=1000)
        data = generate_data(cfg, attempt_stream(8, ROLE_DATA, 0))
        counts = count_binary(data)
        astar = binary_posterior_params(cfg.hyper["alpha"], counts)
        total = astar.sum()
        lo_exact = astar[0] / total
        hi_exact = (astar[0] + astar[2]) / total
        batch = draw_set_batch(cfg, "posterior", 4000, master_seed=8, dataset=data)
        pe = point_estimate_set(batch)
        se_lo = batch.lo.std() / np.sqrt(len(batch))
        se_hi = batch.hi.std() / np.sqrt(len(batch))
        assert abs(pe.lo - lo_exact) < 3 * se_lo
        assert abs(pe.hi - hi_exact) < 3 * se_hi


class TestBinaryCoverageOracle:
    def test_boundary_values(self):
        assert analytic_coverage_binary(0.0, (2.0, 3.0, 1.0)) == 0.0
        assert analytic_coverage_binary(1.0, (2.0, 3.0, 1.0)) == 0.0

    def test_against_monte_carlo(self):
        # oracle cross-check with numpy's own Dirichlet sampler
        alpha = np.array([2.0, 3.0, 1.0])
        gen = np.random.default_rng(14)
        cells = gen.dirichlet(alpha, size=1_000_000)
        lo = cells[:, 0]
        hi = cells[:, 0] + cells[:, 2]
        mc = np.mean((lo <= 0.4) & (0.4 <= hi))
        assert abs(analytic_coverage_binary(0.4, alpha) - mc) < 0.003

    def test_domain_errors(self):
        with pytest.raises(ParameterError):
            analytic_coverage_binary(1.5, (2.0, 3.0, 1.0))
        with pytest.raises(ParameterError):
            analytic_coverage_binary(0.5, (2.0, 3.0))
