import numpy as np
import pytest

from specforge import (
    CellCapExceeded,
    ClassLabel,
    ClusterParams,
    Dataset,
    TaskKind,
    TreeParams,
    ValueInterval,
    contains,
    evaluate,
    extract_specification,
    gen_cluster,
    gen_grid,
    gen_human_throughput,
    gen_tree,
    DatasetStats,
)


class TestGenGrid:
    def test_beta_one_single_global_spec(self, spiral_folds):
        gen, _ = spiral_folds
        specs = gen_grid(gen, 1)
        assert len(specs) == 1
        majority = int(np.argmax(np.bincount(gen.labels)))
        assert specs[0].output == ClassLabel(majority)
        np.testing.assert_array_equal(specs[0].input.lower, gen.features.min(axis=0))
        np.testing.assert_array_equal(specs[0].input.upper, gen.features.max(axis=0))

    def test_beta_ten_spiral(self, spiral_folds):
        gen, _ = spiral_folds
        specs = gen_grid(gen, 10)
        assert 1 <= len(specs) <= 100
        assert all(isinstance(s.output, ClassLabel) for s in specs)

    def test_cell_cap_fails_fast_reporting_count(self):
        rng = np.random.default_rng(0)
        gen = Dataset(rng.normal(size=(30, 78)), rng.integers(0, 9, 30), TaskKind.CLASSIFICATION)
        with pytest.raises(CellCapExceeded) as err:
            gen_grid(gen, 10)
        assert str(10**78) in str(err.value)
        assert "10^78" in str(err.value)

    def test_constant_feature_collapses_to_slab(self):
        gen = Dataset([[0.0, 7.0], [1.0, 7.0], [2.0, 7.0]], [0, 1, 0], TaskKind.CLASSIFICATION)
        specs = gen_grid(gen, 2)
        assert len(specs) == 2  # 2 x 1 cells, both occupied
        for s in specs:
            assert s.input.lower[1] == s.input.upper[1] == 7.0

    def test_matches_direct_extraction_per_cell(self, spiral_folds):
        # every emitted spec must equal extract_specification on its own box
        gen, _ = spiral_folds
        for spec in gen_grid(gen, 7):
            again = extract_specification(spec.input, gen)
            assert again is not None and again.output == spec.output

    def test_every_generation_point_covered(self, spiral_folds):
        gen, _ = spiral_folds
        specs = gen_grid(gen, 10)
        lowers = np.stack([s.input.lower for s in specs])
        uppers = np.stack([s.input.upper for s in specs])
        for x in gen.features:
            assert np.any(np.all((lowers <= x) & (x <= uppers), axis=1))

    def test_tiling_interior_points_in_exactly_one_cell(self, spiral_folds):
        gen, _ = spiral_folds
        x_min, x_max = gen.features.min(axis=0), gen.features.max(axis=0)
        for beta in (1, 2, 10):
            specs = gen_grid(gen, beta)
            lowers = np.stack([s.input.lower for s in specs])
            uppers = np.stack([s.input.upper for s in specs])
            rng = np.random.default_rng(beta)
            pts = rng.uniform(x_min, x_max, size=(300, 2))
            for p in pts:
                hits = int(np.sum(np.all((lowers <= p) & (p <= uppers), axis=1)))
                assert hits <= 1  # occupied cells only, interiors disjoint

    def test_deterministic(self, spiral_folds):
        gen, _ = spiral_folds
        a = gen_grid(gen, 10)
        b = gen_grid(gen, 10)
        assert [(tuple(s.input.lower), tuple(s.input.upper), s.output) for s in a] == [
            (tuple(s.input.lower), tuple(s.input.upper), s.output) for s in b
        ]


class TestGenCluster:
    def test_spiral_smoke(self, spiral_folds):
        gen, _ = spiral_folds
        specs = gen_cluster(gen, ClusterParams(k=30, seed=50))
        assert 1 <= len(specs) <= 30
        assert all(isinstance(s.output, ClassLabel) for s in specs)

    def test_single_point_cluster_is_point_box(self):
        gen = Dataset([[0.0], [10.0], [10.1]], [5.0, 1.0, 1.2], TaskKind.REGRESSION)
        specs = gen_cluster(gen, ClusterParams(k=2, seed=0))
        point_specs = [s for s in specs if np.all(s.input.lower == s.input.upper)]
        assert point_specs
        spec = next(s for s in point_specs if s.input.lower[0] == 0.0)
        assert spec.output == ValueInterval(5.0, 5.0)

    def test_extraction_uses_all_points_in_box(self):
        # two clusters whose boxes overlap at x=2: the shared point counts for both
        gen = Dataset([[0.0], [1.0], [2.0], [3.0], [4.0]], [0, 0, 1, 1, 1], TaskKind.CLASSIFICATION)
        specs = gen_cluster(gen, ClusterParams(k=2, seed=1))
        for spec in specs:
            inside = [i for i in range(5) if contains(spec.input, gen.features[i])]
            expected = extract_specification(spec.input, gen)
            assert spec.output == expected.output
            counts = np.bincount(gen.labels[inside], minlength=2)
            assert spec.output == ClassLabel(int(np.argmax(counts)))

    def test_deterministic(self, spiral_folds):
        gen, _ = spiral_folds
        a = gen_cluster(gen, ClusterParams(k=10, seed=4))
        b = gen_cluster(gen, ClusterParams(k=10, seed=4))
        assert [s.provenance for s in a] == [s.provenance for s in b]
        assert [s.output for s in a] == [s.output for s in b]


class TestGenTree:
    def test_single_leaf_covers_everything(self):
        gen = Dataset([[1.0, 1.0], [2.0, 2.0]], [1, 1], TaskKind.CLASSIFICATION)
        specs = gen_tree(gen)
        assert len(specs) == 1
        assert np.all(np.isneginf(specs[0].input.lower))
        assert np.all(np.isposinf(specs[0].input.upper))
        assert specs[0].output == ClassLabel(1)

    def test_two_leaves_split_at_midpoint(self):
        gen = Dataset([[1.0], [2.0], [9.0], [10.0]], [0, 0, 1, 1], TaskKind.CLASSIFICATION)
        specs = gen_tree(gen)
        assert len(specs) == 2
        left, right = specs
        assert np.isneginf(left.input.lower[0]) and left.input.upper[0] == 5.5
        assert right.input.lower[0] == 5.5 and np.isposinf(right.input.upper[0])
        assert left.output == ClassLabel(0) and right.output == ClassLabel(1)

    def test_full_recall_on_held_out_spiral(self, spiral_folds, spiral_stats):
        gen, ev = spiral_folds
        report = evaluate(gen_tree(gen), ev, 0.1, spiral_stats)
        assert report.fn == 0
        assert report.recall == 1.0

    def test_no_false_negatives_for_any_classification_data(self):
        rng = np.random.default_rng(3)
        for trial in range(10):
            n = int(rng.integers(5, 60))
            gen = Dataset(rng.normal(size=(n, 2)), rng.integers(0, 3, n), TaskKind.CLASSIFICATION)
            specs = gen_tree(gen)
            stats = DatasetStats.from_datasets(gen)
            probe = Dataset(rng.uniform(-10, 10, size=(100, 2)), rng.integers(0, 3, 100), TaskKind.CLASSIFICATION)
            report = evaluate(specs, probe, 0.1, stats)
            assert report.fn == 0

    def test_regression_tree_specs(self):
        rng = np.random.default_rng(6)
        X = rng.uniform(size=(50, 1))
        gen = Dataset(X, X[:, 0] * 2.0, TaskKind.REGRESSION)
        specs = gen_tree(gen, TreeParams(max_depth=3))
        assert all(isinstance(s.output, ValueInterval) for s in specs)

    def test_deterministic(self, spiral_folds):
        gen, _ = spiral_folds
        a = gen_tree(gen)
        b = gen_tree(gen)
        assert [(tuple(s.input.lower), tuple(s.input.upper), s.output) for s in a] == [
            (tuple(s.input.lower), tuple(s.input.upper), s.output) for s in b
        ]


class TestGenHumanThroughput:
    def test_reference_rows(self):
        specs = gen_human_throughput(10)
        by_tuple = {tuple(s.input.lower.astype(int)): s.output.label for s in specs}
        assert by_tuple[(0, 2, 4, 6)] == 8
        assert by_tuple[(9, 7, 5, 3)] == 1
        assert by_tuple[(0, 0, 0, 0)] == 0
        assert by_tuple[(9, 9, 9, 9)] == 9
        # further published rows of the same rule family
        assert by_tuple[(0, 1, 2, 3)] == 4
        assert by_tuple[(0, 1, 2, 4)] == 5
        assert by_tuple[(0, 1, 2, 5)] == 6
        assert by_tuple[(0, 1, 2, 6)] == 7
        assert by_tuple[(2, 4, 5, 7)] == 8
        assert by_tuple[(5, 4, 1, 0)] == 0
        assert by_tuple[(5, 4, 2, 0)] == 0
        assert by_tuple[(5, 4, 2, 1)] == 0
        assert by_tuple[(9, 8, 7, 6)] == 5

    def test_only_monotone_or_stable_tuples(self):
        specs = gen_human_throughput(4)
        for s in specs:
            t = tuple(s.input.lower.astype(int))
            stable = len(set(t)) == 1
            inc = t[0] < t[1] < t[2] < t[3]
            dec = t[0] > t[1] > t[2] > t[3]
            assert stable or inc or dec

    def test_stable_count_and_bounds(self):
        specs = gen_human_throughput(10)
        stable = [s for s in specs if s.provenance.startswith("stable")]
        assert len(stable) == 10
        for s in specs:
            np.testing.assert_array_equal(s.input.upper, s.input.lower + 1.0)
            assert 0 <= s.output.label <= 9

    def test_predictions_clamped(self):
        specs = gen_human_throughput(10)
        by_tuple = {tuple(s.input.lower.astype(int)): s.output.label for s in specs}
        assert by_tuple[(3, 5, 7, 9)] == 9  # continuation 11 clamps to the top bin
        assert by_tuple[(6, 4, 2, 0)] == 0  # continuation -2 clamps to 0

    def test_bins_validated(self):
        with pytest.raises(ValueError):
            gen_human_throughput(1)
