"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the criterion lines.
"""

import csv
import json
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from specforge import (
    CellCapExceeded,
    ClassLabel,
    ClusterParams,
    Dataset,
    DatasetStats,
    Hyperrectangle,
    Layer,
    Network,
    SpecSet,
    Specification,
    TaskKind,
    ValueInterval,
    classify_point,
    evaluate,
    filter_unbounded,
    forward,
    gen_cluster,
    gen_grid,
    gen_human_throughput,
    gen_tree,
    ibp_bounds,
    satisfies_output,
    save_specset,
    split,
    synth_spiral,
)
from specforge.cli import main as cli_main

REPO = Path(__file__).resolve().parent.parent
SPIRAL_SEED = 50


@contextmanager
def criterion(number, description):
    try:
        yield
    except BaseException:
        print(f"criterion {number:2d} FAIL: {description}")
        raise
    print(f"criterion {number:2d} PASS: {description}")


def test_c01_spiral_reproduction():
    with criterion(1, "spiral pipeline: tree recall 100.00%, F1 bars for all generators, < 5 s"):
        t0 = time.perf_counter()
        data = synth_spiral(300, 3, 0.2, seed=SPIRAL_SEED)
        assert data.n == 900
        gen, ev = split(data, 0.9, seed=SPIRAL_SEED)
        assert (gen.n, ev.n) == (810, 90)
        stats = DatasetStats.from_datasets(gen, ev)

        tree_report = evaluate(gen_tree(gen), ev, 0.1, stats)
        assert f"{100 * tree_report.recall:.2f}" == "100.00"
        assert tree_report.fn == 0
        assert tree_report.f1 >= 0.95

        grid_report = evaluate(gen_grid(gen, 10), ev, 0.1, stats)
        assert grid_report.f1 >= 0.90

        cluster_report = evaluate(gen_cluster(gen, ClusterParams(k=30, seed=SPIRAL_SEED)), ev, 0.1, stats)
        assert cluster_report.f1 >= 0.80

        elapsed = time.perf_counter() - t0
        assert elapsed < 5.0, f"took {elapsed:.2f}s"


def _naive_oracle(specset, data):
    verdicts = []
    for x, y in zip(data.features, data.labels):
        covering = [
            i
            for i, s in enumerate(specset)
            if all(s.input.lower[j] <= x[j] <= s.input.upper[j] for j in range(len(x)))
        ]
        if not covering:
            verdicts.append("FN")
            continue
        ok = True
        for i in covering:
            out = specset[i].output
            if isinstance(out, ClassLabel):
                ok = ok and y == out.label
            else:
                ok = ok and out.lo <= y <= out.hi
        verdicts.append("TP" if ok else "FP")
    return verdicts


def test_c02_metric_oracle_equivalence():
    with criterion(2, "evaluation engine matches naive double-loop oracle on 200 random instances, < 10 s"):
        t0 = time.perf_counter()
        rng = np.random.default_rng(2024)
        for trial in range(200):
            dim = int(rng.integers(1, 4))
            n = int(rng.integers(1, 201))
            task = TaskKind.CLASSIFICATION if trial % 2 == 0 else TaskKind.REGRESSION
            if task is TaskKind.CLASSIFICATION:
                labels = rng.integers(0, 4, n)
            else:
                labels = rng.uniform(-1, 1, n)
            data = Dataset(rng.uniform(size=(n, dim)), labels, task)
            specs = []
            for _ in range(int(rng.integers(0, 51))):
                lo = rng.uniform(-0.2, 0.9, size=dim)
                hi = lo + rng.uniform(0.0, 0.7, size=dim)  # width 0 included: point boxes overlap too
                if task is TaskKind.CLASSIFICATION:
                    out = ClassLabel(int(rng.integers(0, 4)))
                else:
                    a = float(rng.uniform(-1.2, 1.0))
                    out = ValueInterval(a, a + float(rng.uniform(0, 1.0)))
                specs.append(Specification(Hyperrectangle(lo, hi), out))
            specset = SpecSet(tuple(specs), task, dim)
            report = evaluate(specset, data, 0.999, DatasetStats(np.zeros(dim), np.ones(dim), -2.0, 2.0), keep_per_point=True)
            got = [v.verdict.value for v in report.per_point]
            assert got == _naive_oracle(specset, data), f"divergence in trial {trial}"
        elapsed = time.perf_counter() - t0
        assert elapsed < 10.0, f"took {elapsed:.2f}s"


def test_c03_overlap_corner_case_rule():
    with criterion(3, "overlapping specs: TP only when the point matches every covering output"):
        box_a = Hyperrectangle([0.0], [2.0])
        box_b = Hyperrectangle([1.0], [3.0])
        disagree = SpecSet(
            (Specification(box_a, ClassLabel(1)), Specification(box_b, ClassLabel(2))),
            TaskKind.CLASSIFICATION,
            1,
        )
        v = classify_point(disagree, [1.5], 1)
        assert v.verdict.value == "FP" and v.covering == (0, 1)

        agree = SpecSet(
            (Specification(box_a, ClassLabel(1)), Specification(box_b, ClassLabel(1))),
            TaskKind.CLASSIFICATION,
            1,
        )
        assert classify_point(agree, [1.5], 1).verdict.value == "TP"


def test_c04_output_range_filter():
    with criterion(4, "alpha filter: width 9 of range 100 survives, width 50 removed, idempotent"):
        stats = DatasetStats([0.0], [1.0], 0.0, 100.0)
        narrow = Specification(Hyperrectangle([0.0], [1.0]), ValueInterval(40.0, 49.0), "narrow")
        wide = Specification(Hyperrectangle([0.0], [1.0]), ValueInterval(0.0, 50.0), "wide")
        specset = SpecSet((narrow, wide), TaskKind.REGRESSION, 1)
        once = filter_unbounded(specset, 0.1, stats)
        assert [s.provenance for s in once] == ["narrow"]
        twice = filter_unbounded(once, 0.1, stats)
        assert [s.provenance for s in twice] == ["narrow"]

        class_specs = SpecSet(
            tuple(Specification(Hyperrectangle([float(i)], [i + 1.0]), ClassLabel(i)) for i in range(5)),
            TaskKind.CLASSIFICATION,
            1,
        )
        assert len(filter_unbounded(class_specs, 0.1, DatasetStats([0.0], [5.0]))) == 5


def test_c05_tree_coverage_property():
    with criterion(5, "tree leaf boxes cover 10,000 samples in and beyond the data range (0 FN)"):
        data = synth_spiral(300, 3, 0.2, seed=SPIRAL_SEED)
        gen, _ = split(data, 0.9, seed=SPIRAL_SEED)
        specs = gen_tree(gen)
        rng = np.random.default_rng(5)
        span = gen.features.max() - gen.features.min()
        probe_pts = rng.uniform(gen.features.min() - span, gen.features.max() + span, size=(10_000, 2))
        probe = Dataset(probe_pts, rng.integers(0, 3, 10_000), TaskKind.CLASSIFICATION)
        report = evaluate(specs, probe, 0.1, DatasetStats.from_datasets(gen))
        assert report.fn == 0


def test_c06_grid_tiling_property():
    with criterion(6, "grid cells tile the bounding box for beta in {1, 2, 10}"):
        data = synth_spiral(100, 3, 0.2, seed=SPIRAL_SEED)
        x_min = data.features.min(axis=0)
        x_max = data.features.max(axis=0)
        rng = np.random.default_rng(6)
        for beta in (1, 2, 10):
            # independent reconstruction of the full tiling from its definition
            edges = []
            for j in range(2):
                t = (x_max[j] - x_min[j]) / beta
                e = x_min[j] + t * np.arange(beta + 1)
                e[-1] = x_max[j]
                edges.append(e)
            cells = [
                Hyperrectangle([edges[0][p], edges[1][q]], [edges[0][p + 1], edges[1][q + 1]])
                for p in range(beta)
                for q in range(beta)
            ]
            assert len(cells) == beta**2

            # union equals the bounding box: strictly interior points hit exactly one cell
            for _ in range(300):
                p = rng.uniform(x_min, x_max)
                if np.any(np.isin(p, np.concatenate(edges))):
                    continue
                hits = sum(1 for c in cells if c.contains(p))
                assert hits == 1, f"interior point in {hits} cells at beta={beta}"

            # points on one interior edge land in exactly 2 cells; corners in 4 (2 per dimension)
            if beta >= 2:
                mid_y = 0.5 * (edges[1][0] + edges[1][1])
                edge_point = np.array([edges[0][1], mid_y])
                assert sum(1 for c in cells if c.contains(edge_point)) == 2
                corner = np.array([edges[0][1], edges[1][1]])
                assert sum(1 for c in cells if c.contains(corner)) == 4

            # the generator emits exactly the occupied subset of this tiling
            specs = gen_grid(Dataset(data.features, data.labels, data.task), beta)
            cell_keys = {(tuple(c.lower), tuple(c.upper)) for c in cells}
            for s in specs:
                assert (tuple(s.input.lower), tuple(s.input.upper)) in cell_keys


def test_c07_ibp_soundness():
    with criterion(7, "IBP: 100 nets x 10 boxes x 1,000 samples stay in bounds; point boxes exact, < 60 s"):
        t0 = time.perf_counter()
        rng = np.random.default_rng(7)
        for _ in range(100):
            n_in = int(rng.integers(1, 6))
            widths = [n_in]
            for _ in range(int(rng.integers(1, 4))):
                widths.append(int(rng.integers(1, 17)))
            layers = []
            for i in range(1, len(widths)):
                layers.append(
                    Layer(
                        rng.normal(size=(widths[i], widths[i - 1])),
                        rng.normal(size=widths[i]),
                        relu=i < len(widths) - 1,
                    )
                )
            net = Network(tuple(layers))
            for _ in range(10):
                lo = rng.normal(size=n_in)
                hi = lo + rng.uniform(0, 2, size=n_in)
                bounds = ibp_bounds(net, Hyperrectangle(lo, hi))
                samples = rng.uniform(lo, hi, size=(1_000, n_in))
                outs = forward(net, samples)
                assert np.all(outs >= bounds.lower[None, :])
                assert np.all(outs <= bounds.upper[None, :])

                x = rng.uniform(lo, hi)
                point_bounds = ibp_bounds(net, Hyperrectangle(x, x))
                out = forward(net, x)
                scale = np.maximum(np.abs(out), 1e-30)
                assert np.all(np.abs(point_bounds.lower - out) / scale <= 1e-9)
                assert np.all(np.abs(point_bounds.upper - out) / scale <= 1e-9)
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"took {elapsed:.2f}s"


def test_c08_counterexample_pipeline(tmp_path):
    with criterion(8, "negation net vs identity-consistent specs: Violated, every counterexample re-fails"):
        specs = SpecSet(
            tuple(
                Specification(Hyperrectangle([float(a)], [a + 1.0]), ValueInterval(float(a), a + 1.0), f"band {a}")
                for a in range(4)
            ),
            TaskKind.REGRESSION,
            1,
        )
        specs_path = tmp_path / "identity_specs.json"
        save_specset(specs, specs_path)
        net_path = REPO / "demos" / "networks" / "negation_1d.json"
        report_path = tmp_path / "report.json"
        cex_path = tmp_path / "cex.csv"
        code = cli_main(
            ["verify", str(net_path), str(specs_path), "--budget", "500", "--seed", "8",
             "--out", str(report_path), "--cex", str(cex_path)]
        )
        assert code == 0
        doc = json.loads(report_path.read_text())
        assert doc["violated"] >= 1

        from specforge import load_network

        net = load_network(net_path)
        rows = list(csv.DictReader(cex_path.open()))
        assert rows
        for row in rows:
            out = forward(net, np.array([float(row["x0"])]))
            expected = ValueInterval(float(row["expected_lo"]), float(row["expected_hi"]))
            assert not satisfies_output(expected, out[0])


def test_c09_human_baseline_reference_rows():
    with criterion(9, "trend baseline maps (0,2,4,6)->8, (9,7,5,3)->1, (0,0,0,0)->0, (9,9,9,9)->9"):
        specs = gen_human_throughput(10)
        by_tuple = {tuple(s.input.lower.astype(int)): s.output.label for s in specs}
        assert by_tuple[(0, 2, 4, 6)] == 8
        assert by_tuple[(9, 7, 5, 3)] == 1
        assert by_tuple[(0, 0, 0, 0)] == 0
        assert by_tuple[(9, 9, 9, 9)] == 9


def test_c10_high_dimension_guard():
    with criterion(10, "grid beta=10 on 78 features fails fast with the cell-cap error, < 1 s"):
        rng = np.random.default_rng(10)
        gen = Dataset(rng.normal(size=(50, 78)), rng.integers(0, 9, 50), TaskKind.CLASSIFICATION)
        t0 = time.perf_counter()
        with pytest.raises(CellCapExceeded) as err:
            gen_grid(gen, 10)
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0, f"took {elapsed:.2f}s"
        assert str(10**78) in str(err.value)
