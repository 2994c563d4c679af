"""Scoring of specification sets against held-out data.

Every evaluation point receives exactly one verdict. A point covered by no
spec box is a false negative. A covered point is a true positive only when
its label satisfies the output constraint of EVERY covering spec, so
overlapping specs must agree; any disagreement makes it a false positive.
True negatives are intentionally not defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dataset import Dataset, DatasetStats, TaskKind
from .speccore import SpecSet, filter_unbounded, satisfies_output

__all__ = ["Verdict", "PointVerdict", "EvalReport", "classify_point", "evaluate", "format_report"]

_CHUNK = 512  # rows scored per vectorized block


class Verdict(Enum):
    TP = "TP"
    FP = "FP"
    FN = "FN"


@dataclass(frozen=True)
class PointVerdict:
    verdict: Verdict
    covering: tuple[int, ...]  # indices of specs whose box contains the point


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    specs_filtered: int
    per_point: tuple[PointVerdict, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "specs_filtered": self.specs_filtered,
        }


def _metrics(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def classify_point(specset: SpecSet, x, y) -> PointVerdict:
    """Verdict for one point: FN if uncovered, TP iff consistent with all covering specs."""
    p = np.asarray(x, dtype=np.float64)
    if p.shape != (specset.feature_dim,):
        raise ValueError(f"point of shape {p.shape} against {specset.feature_dim}-D specs")
    covering = tuple(i for i, s in enumerate(specset) if s.input.contains(p))
    if not covering:
        return PointVerdict(Verdict.FN, ())
    ok = all(satisfies_output(specset[i].output, y) for i in covering)
    return PointVerdict(Verdict.TP if ok else Verdict.FP, covering)


def evaluate(
    specset: SpecSet,
    eval_data: Dataset,
    alpha: float,
    stats: DatasetStats,
    keep_per_point: bool = False,
) -> EvalReport:
    """Score a spec set on an evaluation fold.

    Applies the output-range filter first (stats must cover the full dataset,
    generation and evaluation folds together), then classifies every point.
    The sweep is vectorized but produces exactly the verdicts of the naive
    per-point, per-spec double loop.
    """
    if specset.task is not eval_data.task:
        raise ValueError(f"spec set is {specset.task.value}, dataset is {eval_data.task.value}")
    if specset.feature_dim != eval_data.dim:
        raise ValueError(
            f"spec set has feature_dim {specset.feature_dim}, dataset has {eval_data.dim} features"
        )
    kept = filter_unbounded(specset, alpha, stats)
    specs_filtered = len(specset) - len(kept)

    n = eval_data.n
    if len(kept) == 0:
        per_point = tuple(PointVerdict(Verdict.FN, ()) for _ in range(n)) if keep_per_point else None
        precision, recall, f1 = _metrics(0, 0, n)
        return EvalReport(0, 0, n, precision, recall, f1, specs_filtered, per_point)

    lowers = np.stack([s.input.lower for s in kept])
    uppers = np.stack([s.input.upper for s in kept])
    classification = specset.task is TaskKind.CLASSIFICATION
    if classification:
        out_labels = np.array([s.output.label for s in kept])
    else:
        out_lo = np.array([s.output.lo for s in kept])
        out_hi = np.array([s.output.hi for s in kept])

    tp = fp = fn = 0
    verdicts: list[PointVerdict] = []
    for start in range(0, n, _CHUNK):
        X = eval_data.features[start : start + _CHUNK]
        y = eval_data.labels[start : start + _CHUNK]
        inside = np.all((X[:, None, :] >= lowers) & (X[:, None, :] <= uppers), axis=2)
        covered = inside.any(axis=1)
        if classification:
            agrees = out_labels[None, :] == y[:, None]
        else:
            agrees = (out_lo[None, :] <= y[:, None]) & (y[:, None] <= out_hi[None, :])
        consistent = np.all(~inside | agrees, axis=1)
        is_tp = covered & consistent
        is_fp = covered & ~consistent
        tp += int(is_tp.sum())
        fp += int(is_fp.sum())
        fn += int((~covered).sum())
        if keep_per_point:
            for row in range(X.shape[0]):
                cov = tuple(int(j) for j in np.nonzero(inside[row])[0])
                v = Verdict.FN if not cov else (Verdict.TP if consistent[row] else Verdict.FP)
                verdicts.append(PointVerdict(v, cov))

    precision, recall, f1 = _metrics(tp, fp, fn)
    return EvalReport(tp, fp, fn, precision, recall, f1, specs_filtered, tuple(verdicts) if keep_per_point else None)


def format_report(report: EvalReport) -> str:
    """Aligned one-row table; percentages use two decimals (round-half-even)."""
    cells = [
        ("#TP", f"{report.tp:,}"),
        ("#FP", f"{report.fp:,}"),
        ("#FN", f"{report.fn:,}"),
        ("Precision (%)", f"{100.0 * report.precision:.2f}"),
        ("Recall (%)", f"{100.0 * report.recall:.2f}"),
        ("F1 (%)", f"{100.0 * report.f1:.2f}"),
    ]
    widths = [max(len(h), len(v)) for h, v in cells]
    header = "  ".join(h.rjust(w) for (h, _), w in zip(cells, widths))
    row = "  ".join(v.rjust(w) for (_, v), w in zip(cells, widths))
    return header + "\n" + row
