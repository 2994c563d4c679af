"""Greedy axis-aligned decision trees whose leaves induce box partitions.

Splits are scanned exhaustively: every feature, every midpoint between
consecutive distinct sorted values. Classification picks the split with the
largest Gini impurity decrease, regression the largest weighted variance
decrease. The left branch always takes points with feature <= threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .dataset import Dataset, TaskKind

__all__ = ["TreeParams", "TreeNode", "DecisionTree", "train_tree"]


@dataclass(frozen=True)
class TreeParams:
    """Stopping and split controls; max_depth=None grows until leaves are pure."""

    max_depth: int | None = None
    min_samples_leaf: int = 1
    min_samples_split: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if self.min_samples_split < max(2, self.min_samples_leaf + 1):
            raise ValueError("min_samples_split must be >= 2 and exceed min_samples_leaf")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be None or >= 0")


@dataclass
class TreeNode:
    """Internal node (feature, threshold, children) or leaf (training row ids)."""

    feature: int = -1
    threshold: float = float("nan")
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    indices: np.ndarray | None = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


@dataclass(frozen=True)
class DecisionTree:
    root: TreeNode
    n_features: int
    task: TaskKind
    params: TreeParams

    def leaves(self) -> Iterator[TreeNode]:
        for node, _, _ in self.leaf_regions():
            yield node

    def leaf_regions(self) -> Iterator[tuple[TreeNode, np.ndarray, np.ndarray]]:
        """Depth-first (left before right) leaves with their path-accumulated boxes.

        Unconstrained sides stay at -inf/+inf, so the leaf boxes jointly
        cover all of feature space.
        """
        start_lo = np.full(self.n_features, -np.inf)
        start_hi = np.full(self.n_features, np.inf)
        stack = [(self.root, start_lo, start_hi)]
        while stack:
            node, lo, hi = stack.pop()
            if node.is_leaf:
                yield node, lo, hi
                continue
            hi_left = hi.copy()
            hi_left[node.feature] = min(hi_left[node.feature], node.threshold)
            lo_right = lo.copy()
            lo_right[node.feature] = max(lo_right[node.feature], node.threshold)
            stack.append((node.right, lo_right, hi))
            stack.append((node.left, lo, hi_left))

    @property
    def n_leaves(self) -> int:
        return sum(1 for _ in self.leaves())


def _gini_children(sorted_labels: np.ndarray, positions: np.ndarray, n_classes: int) -> np.ndarray:
    """Weighted child Gini impurity for splits after each candidate position."""
    n = sorted_labels.size
    one_hot = np.zeros((n, n_classes))
    one_hot[np.arange(n), sorted_labels] = 1.0
    cum = np.cumsum(one_hot, axis=0)
    left = cum[positions]
    right = cum[-1] - left
    n_left = (positions + 1).astype(np.float64)[:, None]
    n_right = n - n_left
    gini_left = 1.0 - np.sum((left / n_left) ** 2, axis=1)
    gini_right = 1.0 - np.sum((right / n_right) ** 2, axis=1)
    return (n_left.ravel() * gini_left + n_right.ravel() * gini_right) / n


def _variance_children(sorted_labels: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Weighted child variance for splits after each candidate position."""
    n = sorted_labels.size
    cs = np.cumsum(sorted_labels)
    css = np.cumsum(sorted_labels**2)
    n_left = (positions + 1).astype(np.float64)
    n_right = n - n_left
    var_left = np.maximum(css[positions] / n_left - (cs[positions] / n_left) ** 2, 0.0)
    var_right = np.maximum(
        (css[-1] - css[positions]) / n_right - ((cs[-1] - cs[positions]) / n_right) ** 2, 0.0
    )
    return (n_left * var_left + n_right * var_right) / n


def train_tree(gen: Dataset, params: TreeParams = TreeParams()) -> DecisionTree:
    """Grow a tree on the generation fold; this is the sole user of label structure.

    A node becomes a leaf when it is pure, hits max_depth, falls below
    min_samples_split, or admits no threshold respecting min_samples_leaf.
    Ties between equally good splits go to the lowest feature index, then the
    lowest threshold, so training is deterministic.
    """
    X = gen.features
    y = gen.labels
    classify = gen.task is TaskKind.CLASSIFICATION
    n_classes = gen.num_classes if classify else 0
    min_leaf = params.min_samples_leaf

    def is_pure(idx: np.ndarray) -> bool:
        col = y[idx]
        return bool(np.all(col == col[0]))

    def best_split(idx: np.ndarray) -> tuple[int, float] | None:
        n = idx.size
        best_child = np.inf
        best: tuple[int, float] | None = None
        for f in range(X.shape[1]):
            col = X[idx, f]
            order = np.argsort(col, kind="stable")
            sv = col[order]
            sy = y[idx][order]
            pos = np.nonzero(sv[:-1] < sv[1:])[0]
            pos = pos[(pos + 1 >= min_leaf) & (n - pos - 1 >= min_leaf)]
            if pos.size == 0:
                continue
            child = _gini_children(sy, pos, n_classes) if classify else _variance_children(sy, pos)
            i = int(np.argmin(child))
            if child[i] < best_child:
                threshold = 0.5 * (sv[pos[i]] + sv[pos[i] + 1])
                if sv[pos[i]] < threshold <= sv[pos[i] + 1]:  # guard against midpoint collapse at 1-ulp gaps
                    best_child = child[i]
                    best = (f, float(threshold))
        return best

    root = TreeNode()
    # Iterative depth-first growth; (row ids, depth, node to fill in place).
    stack: list[tuple[np.ndarray, int, TreeNode]] = [(np.arange(gen.n), 0, root)]
    while stack:
        idx, depth, node = stack.pop()
        at_depth_limit = params.max_depth is not None and depth >= params.max_depth
        if idx.size < params.min_samples_split or at_depth_limit or is_pure(idx):
            node.indices = idx
            continue
        chosen = best_split(idx)
        if chosen is None:
            node.indices = idx
            continue
        f, t = chosen
        mask = X[idx, f] <= t
        node.feature, node.threshold = f, t
        node.left, node.right = TreeNode(), TreeNode()
        stack.append((idx[~mask], depth + 1, node.right))
        stack.append((idx[mask], depth + 1, node.left))

    return DecisionTree(root, gen.dim, gen.task, params)
