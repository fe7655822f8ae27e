import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oselab.collisions import (
    DegenerateColumnError,
    collision_count_by_pairs,
    collision_stats,
    extract_disjoint_pairs,
    extract_groups,
    inner_product_lemma_check,
    max_coordinate_profile,
    signed_class_fractions,
    stress_vector_norm,
)
from oselab.seeding import derive_seed
from oselab.sketches import SketchSpec, sample_sparse_sketch


def profiles_from_classes(class_ids):
    """Fabricate profiles living in the given signed classes (class id = 2r + neg)."""
    m = max(class_ids) // 2 + 2
    su = np.zeros((m, len(class_ids)))
    for i, cls in enumerate(class_ids):
        su[cls // 2, i] = 1.0 if cls % 2 == 0 else -1.0
    return max_coordinate_profile(su)


class TestMaxCoordinateProfile:
    def test_hand_case(self):
        su = np.array([[0.0], [-3.0], [1.0]])
        (p,) = max_coordinate_profile(su)
        assert p.r == 1 and p.z == -3.0
        assert np.array_equal(p.v, [0.0, 1.0])

    def test_signed_basis_column(self):
        su = np.column_stack([np.eye(4)[:, 2], -np.eye(4)[:, 1]])
        a, b = max_coordinate_profile(su)
        assert (a.r, a.z) == (2, 1.0) and np.allclose(a.v, 0)
        assert (b.r, b.z) == (1, -1.0) and np.allclose(b.v, 0)

    def test_tie_breaks_to_lowest_row(self):
        su = np.array([[0.5], [-0.5], [0.5]])
        (p,) = max_coordinate_profile(su)
        assert p.r == 0 and p.z == 0.5

    def test_zero_column_rejected(self):
        with pytest.raises(DegenerateColumnError):
            max_coordinate_profile(np.zeros((3, 1)))

    def test_sparse_max_entry_lower_bound(self):
        # |z| >= ||column|| / sqrt(s) for every s-sparse unit column
        for s in (1, 2, 4):
            sk = sample_sparse_sketch(SketchSpec(100, 10, "sparse", s, seed=s))
            profiles = max_coordinate_profile(sk.toarray())
            for p in profiles:
                assert abs(p.z) >= 1.0 / math.sqrt(s) - 1e-12


class TestCollisionStats:
    def test_single_class(self):
        d = 6
        profiles = profiles_from_classes([4] * d)
        stats = collision_stats(profiles, np.full(10, 0.1))
        assert stats.C == d * (d - 1) // 2

    def test_class_size_hand_case(self):
        profiles = profiles_from_classes([0, 0, 0, 3, 3, 5])
        stats = collision_stats(profiles, np.full(8, 1 / 8))
        assert sorted(np.asarray(stats.class_sizes)[stats.class_sizes > 0].tolist()) == [1, 2, 3]
        assert stats.C == 4  # 3 + 1 + 0

    def test_pair_enumeration_identity(self, rng):
        for _ in range(50):
            d = int(rng.integers(2, 30))
            class_ids = rng.integers(0, 10, size=d).tolist()
            profiles = profiles_from_classes(class_ids)
            stats = collision_stats(profiles, np.full(12, 1 / 12))
            assert stats.C == collision_count_by_pairs(profiles)

    def test_expected_c_uniform_p(self):
        d, m = 20, 50
        p = np.full(2 * m, 1.0 / (2 * m))
        profiles = profiles_from_classes([0] * d)
        stats = collision_stats(profiles, p)
        assert stats.expected_C == pytest.approx(d * (d - 1) / (4 * m))

    def test_monte_carlo_mean_matches_expectation(self, rng):
        # iid class assignments from uniform p over 2m classes
        d, m, runs = 20, 50, 4000
        p = np.full(2 * m, 1.0 / (2 * m))
        cs = np.empty(runs)
        for i in range(runs):
            ids = rng.integers(0, 2 * m, size=d)
            sizes = np.bincount(ids, minlength=2 * m)
            cs[i] = (sizes * (sizes - 1) // 2).sum()
        expected = d * (d - 1) / (4 * m)
        se = cs.std(ddof=1) / math.sqrt(runs)
        assert abs(cs.mean() - expected) < 4 * se

    def test_fractions_from_sketch_sum_to_one(self):
        sk = sample_sparse_sketch(SketchSpec(400, 10, "sparse", 2, seed=3))
        p = signed_class_fractions(sk)
        assert p.shape == (20,)
        assert p.sum() == pytest.approx(1.0)
        # against profile-based counting on the densified sketch
        profiles = max_coordinate_profile(sk.toarray())
        counts = np.zeros(20)
        for pr in profiles:
            counts[2 * pr.r + (pr.z < 0)] += 1
        assert np.allclose(p, counts / 400)


class TestExtraction:
    def test_pairs_hand_case(self):
        profiles = profiles_from_classes([0, 0, 0, 2, 2])
        stats = collision_stats(profiles, np.full(4, 0.25))
        pairs = extract_disjoint_pairs(stats)
        assert len(pairs) == 2
        flat = [i for pair in pairs for i in pair]
        assert len(set(flat)) == len(flat)

    def test_singletons_give_nothing(self):
        profiles = profiles_from_classes([0, 2, 4, 6])
        stats = collision_stats(profiles, np.full(8, 1 / 8))
        assert extract_disjoint_pairs(stats) == []

    def test_one_class_floor_half(self):
        for d in (2, 5, 9):
            stats = collision_stats(profiles_from_classes([1] * d), np.full(4, 0.25))
            assert len(extract_disjoint_pairs(stats)) == d // 2

    @given(st.lists(st.integers(0, 9), min_size=2, max_size=40))
    def test_pair_count_bounds(self, class_ids):
        profiles = profiles_from_classes(class_ids)
        stats = collision_stats(profiles, np.full(20, 0.05))
        pairs = extract_disjoint_pairs(stats)
        sizes = np.asarray(stats.class_sizes)
        lower = math.ceil(sum((s - 1) / 2 for s in sizes if s >= 2))
        assert len(pairs) >= lower
        assert len(pairs) >= math.sqrt(stats.C) / 2
        for a, b in pairs:
            assert profiles[a].class_key == profiles[b].class_key

    def test_groups_hand_cases(self):
        stats = collision_stats(profiles_from_classes([0] * 5), np.full(4, 0.25))
        assert len(extract_groups(stats, 2)) == 2
        stats2 = collision_stats(profiles_from_classes([0] * 3 + [2] * 4), np.full(4, 0.25))
        gs = extract_groups(stats2, 4)
        assert len(gs) == 1
        assert len(gs.groups[0].members) == 4

    def test_group_size_validation(self):
        stats = collision_stats(profiles_from_classes([0, 0]), np.full(4, 0.25))
        with pytest.raises(ValueError):
            extract_groups(stats, 1)

    def test_group_count_lower_bound_uniform_throws(self):
        # d balls into m=d bins, group size t=2; with alpha = 2 t gamma = 0.5
        # the count should reach d^(1-alpha)/2 in at least 99 of 100 runs
        d = 10_000
        t, alpha = 2, 0.5
        bound = d ** (1 - alpha) / 2
        hits = 0
        for run in range(100):
            rng = np.random.default_rng(derive_seed(55, run))
            ids = rng.integers(0, d, size=d)
            sizes = np.bincount(ids, minlength=d)
            count = int((sizes // t).sum())
            hits += count >= bound
        assert hits >= 99


class TestStressVector:
    def test_same_sign_collision_doubles(self):
        su = np.column_stack([np.eye(3)[:, 1], np.eye(3)[:, 1]])
        out = stress_vector_norm(su, (0, 1))
        assert out.direct == pytest.approx(2.0, abs=1e-12)

    def test_opposite_signs_cancel(self):
        su = np.column_stack([np.eye(3)[:, 1], -np.eye(3)[:, 1]])
        out = stress_vector_norm(su, (0, 1))
        assert out.direct == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal_columns_give_one(self):
        for t in (2, 3, 5):
            su = np.eye(6)[:, :t]
            out = stress_vector_norm(su, tuple(range(t)))
            assert out.direct == pytest.approx(1.0, abs=1e-12)

    def test_direct_matches_expansion(self, rng):
        for _ in range(30):
            m, d = int(rng.integers(2, 12)), int(rng.integers(2, 8))
            su = rng.standard_normal((m, d))
            t = int(rng.integers(2, d + 1))
            members = rng.choice(d, size=t, replace=False)
            out = stress_vector_norm(su, tuple(int(x) for x in members))
            assert out.direct == pytest.approx(out.expanded, rel=1e-10, abs=1e-10)

    def test_small_group_rejected(self):
        with pytest.raises(ValueError):
            stress_vector_norm(np.eye(3), (0,))


class TestInnerProductLemma:
    def test_point_mass(self):
        e1 = np.eye(3)[:, 0]
        report = inner_product_lemma_check([(e1, e1)] * 100)
        assert report.mean == pytest.approx(1.0)
        assert not report.flagged

    def test_random_sign_vector(self, rng):
        e1 = np.eye(2)[:, 0]
        pairs = [(e1 * s1, e1 * s2) for s1, s2 in rng.choice([-1.0, 1.0], size=(4000, 2))]
        report = inner_product_lemma_check(pairs, delta_grid=(0.25, 0.5, 1.0 - 1e-9))
        assert abs(report.mean) < 5 / math.sqrt(4000)
        # Pr(X <= -delta) = 1/2 <= 1/(1+delta) for delta <= 1
        for frac, bound in zip(report.tail_fractions, report.tail_bounds):
            assert frac <= 0.55
            assert bound >= 0.5
        assert not report.flagged

    def test_tight_fixture_hits_bound(self, rng):
        delta = 0.25
        p_neg = 1.0 / (1.0 + delta)
        e1 = np.eye(2)[:, 0]
        draws = rng.random(20_000) < p_neg
        pairs = [(e1, -delta * e1 if hit else e1) for hit in draws]
        report = inner_product_lemma_check(pairs, delta_grid=(delta,))
        assert not report.flagged
        se = math.sqrt(p_neg * (1 - p_neg) / len(pairs))
        assert abs(report.tail_fractions[0] - p_neg) < 4 * se
        assert abs(report.mean) < 4 * report.stderr

    def test_norm_validation(self):
        big = np.array([1.0, 1e-5])
        with pytest.raises(ValueError):
            inner_product_lemma_check([(big, big)])
