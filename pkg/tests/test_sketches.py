import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oselab.linalg import condition_number, singular_values
from oselab.sketches import (
    SketchMatrix,
    SketchSpec,
    apply_sketch,
    identity_sketch,
    sample_gaussian_sketch,
    sample_sparse_sketch,
    sketch_columns,
)


class TestSpecValidation:
    def test_m_bounds(self):
        with pytest.raises(ValueError):
            SketchSpec(10, 11, "gaussian")
        with pytest.raises(ValueError):
            SketchSpec(10, 0, "gaussian")

    def test_sparse_needs_s(self):
        with pytest.raises(ValueError):
            SketchSpec(10, 5, "sparse")
        with pytest.raises(ValueError):
            SketchSpec(10, 5, "sparse", s=6)

    def test_dense_rejects_s(self):
        with pytest.raises(ValueError):
            SketchSpec(10, 5, "gaussian", s=1)

    def test_identity_square(self):
        with pytest.raises(ValueError):
            SketchSpec(10, 5, "identity")

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            SketchSpec(10, 5, "hadamard")


class TestGaussian:
    def test_deterministic_given_seed(self):
        spec = SketchSpec(60, 20, "gaussian", seed=5)
        assert np.array_equal(sample_gaussian_sketch(spec).dense, sample_gaussian_sketch(spec).dense)

    def test_fresh_seed_changes_matrix(self):
        a = sample_gaussian_sketch(SketchSpec(60, 20, "gaussian", seed=5)).dense
        b = sample_gaussian_sketch(SketchSpec(60, 20, "gaussian", seed=6)).dense
        assert not np.array_equal(a, b)

    def test_entry_mean_within_clt_bound(self):
        m, n = 200, 1000
        sk = sample_gaussian_sketch(SketchSpec(n, m, "gaussian", seed=11))
        # entries are N(0, 1/m): the mean of m*n of them has std 1/sqrt(m*n*m)
        bound = 4.0 / math.sqrt(m * n * m)
        assert abs(sk.dense.mean()) < bound

    def test_column_norms_average_to_one(self):
        sk = sample_gaussian_sketch(SketchSpec(1000, 200, "gaussian", seed=3))
        norms_sq = np.sum(sk.dense**2, axis=0)
        assert abs(norms_sq.mean() - 1.0) < 0.05


class TestSparse:
    def test_s1_single_signed_unit_entry(self):
        sk = sample_sparse_sketch(SketchSpec(50, 10, "sparse", 1, seed=2))
        dense = sk.toarray()
        assert np.all(np.count_nonzero(dense, axis=0) == 1)
        nonzero = dense[dense != 0]
        assert np.all(np.isin(nonzero, [1.0, -1.0]))

    def test_unit_column_norms(self):
        for s in (1, 2, 3, 7):
            sk = sample_sparse_sketch(SketchSpec(40, 12, "sparse", s, seed=s))
            norms = np.linalg.norm(sk.toarray(), axis=0)
            assert np.allclose(norms, 1.0, rtol=1e-14)

    def test_s_equals_m_occupies_all_rows(self):
        sk = sample_sparse_sketch(SketchSpec(30, 6, "sparse", 6, seed=1))
        for j in range(30):
            assert sorted(sk.rows[:, j].tolist()) == list(range(6))

    def test_rows_distinct_per_column(self):
        for s, m in [(2, 5), (4, 9), (8, 8), (3, 64)]:
            sk = sample_sparse_sketch(SketchSpec(200, m, "sparse", s, seed=m * s))
            for j in range(200):
                assert len(set(sk.rows[:, j].tolist())) == s

    def test_deterministic_and_seed_sensitive(self):
        spec = SketchSpec(100, 20, "sparse", 2, seed=9)
        a, b = sample_sparse_sketch(spec), sample_sparse_sketch(spec)
        assert np.array_equal(a.rows, b.rows) and np.array_equal(a.vals, b.vals)
        c = sample_sparse_sketch(SketchSpec(100, 20, "sparse", 2, seed=10))
        assert not (np.array_equal(a.rows, c.rows) and np.array_equal(a.vals, c.vals))

    def test_lazy_columns_match_full_generation(self):
        spec = SketchSpec(300, 25, "sparse", 4, seed=77)
        full = sample_sparse_sketch(spec)
        cols = np.array([0, 299, 31, 7, 123, 31])
        rows, vals = sketch_columns(spec, cols)
        assert np.array_equal(rows, full.rows[:, cols])
        assert np.array_equal(vals, full.vals[:, cols])

    @given(st.integers(1, 8), st.integers(0, 2**32))
    def test_row_distinctness_property(self, s, seed):
        m = s + (seed % 5)
        sk = sample_sparse_sketch(SketchSpec(max(20, m), m, "sparse", s, seed=seed))
        assert all(len(set(sk.rows[:, j].tolist())) == s for j in range(sk.spec.n))

    def test_row_marginals_are_uniform(self):
        # each row of [0, m) should be hit by roughly n*s/m columns
        spec = SketchSpec(40000, 8, "sparse", 2, seed=123)
        sk = sample_sparse_sketch(spec)
        counts = np.bincount(sk.rows.ravel(), minlength=8)
        expected = 40000 * 2 / 8
        assert np.all(np.abs(counts - expected) < 5 * math.sqrt(expected))


class TestIdentity:
    def test_apply_noop(self, rng):
        a = rng.standard_normal((6, 3))
        assert np.array_equal(apply_sketch(identity_sketch(6), a), a)

    def test_kappa_one_on_orthonormal(self):
        u = np.eye(5)[:, :3]
        spec = singular_values(apply_sketch(identity_sketch(5), u))
        assert condition_number(spec) == 1.0

    def test_n_equals_one(self):
        assert np.array_equal(identity_sketch(1).toarray(), np.array([[1.0]]))


class TestApply:
    def test_sparse_s1_on_basis_vector(self):
        spec = SketchSpec(10, 4, "sparse", 1, seed=0)
        sk = sample_sparse_sketch(spec)
        e3 = np.zeros(10)
        e3[3] = 1.0
        out = apply_sketch(sk, e3)
        assert out.shape == (4,)
        assert np.count_nonzero(out) == 1
        assert np.abs(out).max() == 1.0
        # it must be exactly column 3 of the sketch
        assert np.array_equal(out, sk.toarray()[:, 3])

    def test_sparse_nnz_on_basis_vectors(self):
        sk = sample_sparse_sketch(SketchSpec(20, 12, "sparse", 5, seed=4))
        for j in (0, 7, 19):
            e = np.zeros(20)
            e[j] = 1.0
            assert np.count_nonzero(apply_sketch(sk, e)) == 5

    def test_dense_product_matches_triple_loop_oracle(self, rng):
        m, n, k = 10, 20, 4
        sk = sample_gaussian_sketch(SketchSpec(n, m, "gaussian", seed=8))
        a = rng.standard_normal((n, k))
        out = apply_sketch(sk, a)
        oracle = np.zeros((m, k))
        pi = sk.dense
        for i in range(m):
            for j in range(k):
                acc = 0.0
                for l in range(n):
                    acc += pi[i, l] * a[l, j]
                oracle[i, j] = acc
        assert np.allclose(out, oracle, atol=1e-12)

    def test_sparse_apply_matches_densified_product(self, rng):
        sk = sample_sparse_sketch(SketchSpec(30, 9, "sparse", 3, seed=21))
        a = rng.standard_normal((30, 5))
        assert np.allclose(apply_sketch(sk, a), sk.toarray() @ a, atol=1e-12)

    def test_dimension_mismatch(self):
        sk = sample_gaussian_sketch(SketchSpec(10, 5, "gaussian", seed=1))
        with pytest.raises(ValueError):
            apply_sketch(sk, np.ones((11, 2)))
