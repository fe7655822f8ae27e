import math

import numpy as np
import pytest
from scipy.stats import chisquare

from oselab.instances import (
    _raw_gaussian_columns,
    frobenius_concentration_check,
    projection_norm_study,
    projection_norm_trial,
    sample_basis_coordinates,
    sample_basis_subspace,
    sample_random_subspace,
)
from oselab.linalg import orthonormality_defect
from oselab.seeding import derive_seed


class TestRandomSubspace:
    def test_full_dimension_gives_orthogonal_matrix(self):
        inst = sample_random_subspace(25, 25, seed=1)
        assert orthonormality_defect(inst.basis.matrix) <= 1e-10

    def test_deterministic(self):
        a = sample_random_subspace(40, 5, seed=7)
        b = sample_random_subspace(40, 5, seed=7)
        assert np.array_equal(a.basis.matrix, b.basis.matrix)

    def test_first_column_is_first_draw_normalized(self):
        raw = _raw_gaussian_columns(30, 4, seed=11)
        inst = sample_random_subspace(30, 4, seed=11)
        assert np.allclose(inst.basis.matrix[:, 0], raw[:, 0] / np.linalg.norm(raw[:, 0]), atol=1e-12)

    def test_single_column_coordinates_center_on_zero(self):
        # d=1 gives a uniform unit vector: each coordinate has mean 0
        n, draws = 25, 10_000
        acc = np.zeros(n)
        for i in range(draws):
            acc += sample_random_subspace(n, 1, seed=derive_seed(3, i)).basis.matrix[:, 0]
        means = acc / draws
        bound = 4.0 / math.sqrt(draws * n)
        assert np.all(np.abs(means) < bound)

    def test_invalid_dims(self):
        with pytest.raises(ValueError):
            sample_random_subspace(5, 6, seed=0)


class TestBasisSubspace:
    def test_exactly_one_one_per_column(self):
        inst = sample_basis_subspace(500, 2, seed=5)
        u = inst.basis.matrix
        assert np.all(np.sum(u == 1.0, axis=0) == 1)
        assert np.all(np.sum(u != 0.0, axis=0) == 1)

    def test_coordinates_distinct_and_recorded(self):
        inst = sample_basis_subspace(1000, 3, seed=9)
        assert len(set(inst.coordinates)) == 3
        for j, c in enumerate(inst.coordinates):
            assert inst.basis.matrix[c, j] == 1.0

    def test_regime_enforced_with_override(self):
        with pytest.raises(ValueError):
            sample_basis_subspace(100, 2, seed=0)
        with pytest.warns(UserWarning):
            sample_basis_subspace(100, 2, seed=0, allow_small_n=True)

    def test_impossible_tuple(self):
        with pytest.raises(ValueError):
            sample_basis_subspace(3, 4, seed=0, allow_small_n=True)

    def test_single_coordinate_uniformity_chi_square(self):
        n, draws = 200, 100_000
        counts = np.zeros(n)
        for i in range(draws):
            coords = sample_basis_coordinates(n, 1, derive_seed(13, i))
            counts[coords[0]] += 1
        result = chisquare(counts)
        assert result.pvalue > 0.001

    def test_duplicate_probability_in_regime(self):
        # duplicate chance of the i.i.d. tuple is ~ d(d-1)/(2n) <= 1/100 at n = 100 d^2
        d = 5
        n = 100 * d * d
        exact = 1.0 - np.prod([1 - i / n for i in range(d)])
        assert exact <= 1 / 100
        rng = np.random.default_rng(0)
        dups = sum(
            len(np.unique(rng.integers(0, n, size=d))) < d for _ in range(20_000)
        )
        rate = dups / 20_000
        se = math.sqrt(exact * (1 - exact) / 20_000)
        assert abs(rate - exact) < 4 * se + 1e-12


class TestProjectionNormTrial:
    def test_identity_diagonal_mean(self):
        n, m, trials = 200, 50, 100_000
        study = projection_norm_study(n, m, np.ones(n), trials, seed=21)
        se = study.sample_std / math.sqrt(trials)
        assert abs(study.empirical_mean - m / n) < 4 * se

    def test_full_projection_is_one(self):
        for seed in range(5):
            t = projection_norm_trial(30, 30, np.ones(30), seed)
            assert t.observed == pytest.approx(1.0, abs=1e-12)

    def test_scaled_diagonal_mean(self):
        n, m, trials = 150, 40, 50_000
        study = projection_norm_study(n, m, np.full(n, 2.0), trials, seed=22)
        se = study.sample_std / math.sqrt(trials)
        assert abs(study.empirical_mean - 4.0 * m / n) < 4 * se

    def test_predicted_center_between_extremes(self, rng):
        n, m = 60, 20
        dd = rng.uniform(0.5, 3.0, size=n)
        t = projection_norm_trial(n, m, dd, seed=4)
        lo = float(np.min(dd**2)) * m / n
        hi = float(np.max(dd**2)) * m / n
        assert lo <= t.predicted_center <= hi
        assert t.observed >= 0.0

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            projection_norm_trial(10, 4, np.ones(9), seed=0)
        with pytest.raises(ValueError):
            projection_norm_trial(10, 0, np.ones(10), seed=0)


class TestFrobeniusConcentration:
    def test_mean_matches_linearity_oracle(self):
        n, d, m, trials = 400, 5, 100, 400
        out = frobenius_concentration_check(n, d, m, trials, seed=31)
        # each of the d-1 columns contributes m/n in expectation
        assert out.expected_mean == pytest.approx((d - 1) * m / n)
        spread = out.expected_mean / math.sqrt(trials) * 6
        assert abs(out.empirical_mean - out.expected_mean) < spread

    def test_single_column_statistic_is_zero(self):
        out = frobenius_concentration_check(300, 1, 50, 20, seed=1)
        assert out.empirical_mean == 0.0

    def test_tail_thins_at_eps_half(self):
        out = frobenius_concentration_check(1000, 6, 200, 300, seed=5)
        assert out.tail_fractions[0.5] < 0.05

    def test_tail_decay_monotone_in_m(self):
        fractions = []
        for m in (50, 100, 200, 400):
            out = frobenius_concentration_check(1000, 6, m, 300, seed=77, eps_grid=(0.25,))
            fractions.append(out.tail_fractions[0.25])
        inversions = sum(b > a + 0.02 for a, b in zip(fractions, fractions[1:]))
        assert inversions <= 1
