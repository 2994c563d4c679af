"""Specification generators: fixed grid, cluster boxes, tree leaf boxes, trend baseline.

Every generator partitions or covers the input space with hyperrectangles and
derives each box's output constraint from the generation points it contains.
All are deterministic under their seeds, and units are emitted in a fixed
canonical order (cell index, cluster id, depth-first leaf), so output files
are reproducible.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .cluster import ClusterParams, kmeans
from .dataset import Dataset, TaskKind
from .speccore import ClassLabel, Hyperrectangle, SpecSet, Specification, extract_specification
from .tree import TreeParams, train_tree

__all__ = [
    "DEFAULT_CELL_CAP",
    "CellCapExceeded",
    "gen_grid",
    "gen_cluster",
    "gen_tree",
    "gen_human_throughput",
]

DEFAULT_CELL_CAP = 10_000_000


class CellCapExceeded(RuntimeError):
    """Raised before enumerating a grid whose cell count would be infeasible."""

    def __init__(self, n_cells: int, cap: int, beta: int, dim: int):
        self.n_cells = n_cells
        self.cap = cap
        super().__init__(
            f"grid generation needs {beta}^{dim} = {n_cells} cells, above the cap of {cap}; "
            "use fewer features, a smaller beta, or another generator"
        )


def _grid_edges(x_min: np.ndarray, x_max: np.ndarray, beta: int) -> list[np.ndarray]:
    """Cell edge coordinates per dimension; constant features collapse to one slab."""
    edges = []
    for j in range(x_min.size):
        if x_max[j] > x_min[j]:
            t = (x_max[j] - x_min[j]) / beta
            e = x_min[j] + t * np.arange(beta + 1)
            e[-1] = x_max[j]  # exact top edge so the max point stays inside the last cell
        else:
            e = np.array([x_min[j], x_max[j]])
        edges.append(e)
    return edges


def _cells_for_point(x: np.ndarray, edges: list[np.ndarray], x_min, x_max, beta: int):
    """All cell index tuples whose closed box contains x (boundary points hit several)."""
    per_dim = []
    for j, e in enumerate(edges):
        n_cells = e.size - 1
        if n_cells == 1:
            per_dim.append([0])
            continue
        t = (x_max[j] - x_min[j]) / beta
        base = int((x[j] - x_min[j]) // t)
        cand = [p for p in (base - 1, base, base + 1) if 0 <= p < n_cells and e[p] <= x[j] <= e[p + 1]]
        per_dim.append(cand)
    return itertools.product(*per_dim)


def gen_grid(gen: Dataset, beta: int, task: TaskKind | None = None, cell_cap: int = DEFAULT_CELL_CAP) -> SpecSet:
    """Tile the data bounding box into beta cells per dimension, one spec per occupied cell.

    Cell edges step by (x_max - x_min) / beta, so the cells tile the bounding
    box exactly; points on interior edges fall into both touching cells.
    Raises CellCapExceeded without enumerating anything when beta**dim blows
    past cell_cap, which is how high-dimensional inputs fail fast.
    """
    task = task or gen.task
    if beta < 1:
        raise ValueError("beta must be >= 1")
    if cell_cap < 1:
        raise ValueError("cell_cap must be >= 1")
    x_min = gen.features.min(axis=0)
    x_max = gen.features.max(axis=0)
    n_cells = math.prod(beta if x_max[j] > x_min[j] else 1 for j in range(gen.dim))
    if n_cells > cell_cap:
        raise CellCapExceeded(n_cells, cell_cap, beta, gen.dim)

    edges = _grid_edges(x_min, x_max, beta)
    occupied: set[tuple[int, ...]] = set()
    for x in gen.features:
        occupied.update(_cells_for_point(x, edges, x_min, x_max, beta))

    specs = []
    for key in sorted(occupied):
        box = Hyperrectangle(
            [edges[j][p] for j, p in enumerate(key)], [edges[j][p + 1] for j, p in enumerate(key)]
        )
        spec = extract_specification(box, gen, task, provenance=f"cell {key}")
        if spec is not None:
            specs.append(spec)
    metadata = {"generator": "grid", "params": {"beta": beta, "cell_cap": cell_cap}}
    return SpecSet(tuple(specs), task, gen.dim, metadata)


def gen_cluster(gen: Dataset, params: ClusterParams, task: TaskKind | None = None) -> SpecSet:
    """One spec per k-means cluster, boxed by the cluster members' extremes.

    The box is the componentwise [min, max] over the cluster's points, but the
    output constraint is extracted from every generation point the box
    contains; overlapping cluster boxes therefore share points.
    """
    task = task or gen.task
    assign, _ = kmeans(gen.features, params)
    specs = []
    for j in range(params.k):
        members = gen.features[assign == j]
        if members.shape[0] == 0:
            continue
        box = Hyperrectangle(members.min(axis=0), members.max(axis=0))
        spec = extract_specification(box, gen, task, provenance=f"cluster {j}")
        if spec is not None:
            specs.append(spec)
    metadata = {
        "generator": "cluster",
        "params": {"k": params.k, "max_iters": params.max_iters, "seed": params.seed, "init": params.init},
    }
    return SpecSet(tuple(specs), task, gen.dim, metadata)


def gen_tree(gen: Dataset, params: TreeParams = TreeParams(), task: TaskKind | None = None) -> SpecSet:
    """One spec per decision-tree leaf box, visited depth first.

    Each leaf box accumulates the split thresholds along its root-to-leaf
    path; sides never constrained stay infinite, so the leaf boxes jointly
    cover all of feature space and no evaluation point can go uncovered.
    """
    task = task or gen.task
    tree = train_tree(gen, params)
    specs = []
    for i, (_, lo, hi) in enumerate(tree.leaf_regions()):
        spec = extract_specification(Hyperrectangle(lo, hi), gen, task, provenance=f"leaf {i}")
        if spec is not None:
            specs.append(spec)
    metadata = {
        "generator": "tree",
        "params": {
            "max_depth": params.max_depth,
            "min_samples_leaf": params.min_samples_leaf,
            "min_samples_split": params.min_samples_split,
            "seed": params.seed,
        },
    }
    return SpecSet(tuple(specs), task, gen.dim, metadata)


def _trend_prediction(tup: tuple[int, ...], bins: int) -> int | None:
    """Expected next bin for a stable or strictly monotonic 4-tuple, else None."""
    x0, x1, x2, x3 = tup
    if x0 == x1 == x2 == x3:
        return x0
    increasing = x0 < x1 < x2 < x3
    decreasing = x0 > x1 > x2 > x3
    if not (increasing or decreasing):
        return None
    # Least squares over (0, x0)..(3, x3) evaluated at step 4:
    # slope = sum((i - 1.5) * x_i) / 5, prediction = mean + 2.5 * slope.
    slope = (-1.5 * x0 - 0.5 * x1 + 0.5 * x2 + 1.5 * x3) / 5.0
    pred = (x0 + x1 + x2 + x3) / 4.0 + 2.5 * slope
    return int(np.clip(int(np.rint(pred)), 0, bins - 1))


def gen_human_throughput(bins: int = 10) -> SpecSet:
    """Hand-style trend rules over 4-step windows of binned throughput.

    Enumerates all bins**4 input tuples of bin indices. Strictly monotonic
    tuples get the least-squares continuation of the trend as their label;
    all-equal tuples keep their level. Every other tuple is skipped. Each
    spec's box is the unit-width cell of its tuple in binned feature space.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    specs = []
    for tup in itertools.product(range(bins), repeat=4):
        label = _trend_prediction(tup, bins)
        if label is None:
            continue
        if tup[0] == tup[3]:
            kind = "stable"
        else:
            kind = "increase" if tup[0] < tup[3] else "decrease"
        lo = np.array(tup, dtype=np.float64)
        specs.append(
            Specification(Hyperrectangle(lo, lo + 1.0), ClassLabel(label), f"{kind} {tup}")
        )
    metadata = {"generator": "human", "params": {"bins": bins, "window": 4}}
    return SpecSet(tuple(specs), TaskKind.CLASSIFICATION, 4, metadata)
