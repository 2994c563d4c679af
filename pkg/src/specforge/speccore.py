"""Core specification model: boxes, output constraints, extraction, filtering, files.

A specification pairs a closed hyperrectangle over the inputs with an output
constraint (a single class label, or a real interval). Sides of the box may
be infinite; containment is closed on every finite side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .dataset import Dataset, DatasetStats, TaskKind

__all__ = [
    "Hyperrectangle",
    "ClassLabel",
    "ValueInterval",
    "OutputConstraint",
    "Specification",
    "SpecSet",
    "contains",
    "satisfies_output",
    "extract_specification",
    "filter_unbounded",
    "save_specset",
    "load_specset",
]


@dataclass(frozen=True)
class Hyperrectangle:
    """Axis-aligned closed box; -inf/+inf encode unconstrained sides."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lower, dtype=np.float64)
        hi = np.array(self.upper, dtype=np.float64)
        if lo.ndim != 1 or lo.shape != hi.shape or lo.size < 1:
            raise ValueError(f"bounds must be equal-length 1-D vectors, got {lo.shape} and {hi.shape}")
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise ValueError("box bounds must not be NaN")
        if np.any(lo > hi):
            j = int(np.argwhere(lo > hi)[0][0])
            raise ValueError(f"lower bound exceeds upper bound in dimension {j}: {lo[j]} > {hi[j]}")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.lower.size

    @classmethod
    def unbounded(cls, dim: int) -> "Hyperrectangle":
        return cls(np.full(dim, -np.inf), np.full(dim, np.inf))

    def contains(self, point) -> bool:
        p = np.asarray(point, dtype=np.float64)
        if p.shape != (self.dim,):
            raise ValueError(f"point of dimension {p.shape} against a {self.dim}-D box")
        return bool(np.all((self.lower <= p) & (p <= self.upper)))

    def contains_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized closed containment over the rows of an (N, k) matrix."""
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ValueError(f"points of shape {pts.shape} against a {self.dim}-D box")
        return np.all((self.lower <= pts) & (pts <= self.upper), axis=1)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper)))


def contains(box: Hyperrectangle, point) -> bool:
    """True iff the point lies inside the closed box (infinite sides always pass)."""
    return box.contains(point)


@dataclass(frozen=True)
class ClassLabel:
    """Output constraint pinning a single class id."""

    label: int

    def __post_init__(self):
        if int(self.label) != self.label or self.label < 0:
            raise ValueError(f"class label must be a non-negative integer, got {self.label!r}")
        object.__setattr__(self, "label", int(self.label))


@dataclass(frozen=True)
class ValueInterval:
    """Output constraint bounding a real output to a closed finite interval."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise ValueError("interval endpoints must be finite")
        if lo > hi:
            raise ValueError(f"interval lower end {lo} exceeds upper end {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo


OutputConstraint = ClassLabel | ValueInterval


def satisfies_output(constraint: OutputConstraint, label) -> bool:
    """Closed-interval / exact-label check of a ground-truth label."""
    if isinstance(constraint, ClassLabel):
        return float(label) == float(constraint.label)
    if isinstance(constraint, ValueInterval):
        return bool(constraint.lo <= float(label) <= constraint.hi)
    raise TypeError(f"not an output constraint: {constraint!r}")


@dataclass(frozen=True)
class Specification:
    input: Hyperrectangle
    output: OutputConstraint
    provenance: str = ""


@dataclass(frozen=True)
class SpecSet:
    """Ordered collection of specifications with shared dimension and task."""

    specs: tuple[Specification, ...]
    task: TaskKind
    feature_dim: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "specs", tuple(self.specs))
        if self.feature_dim < 1:
            raise ValueError("feature_dim must be >= 1")
        want = ClassLabel if self.task is TaskKind.CLASSIFICATION else ValueInterval
        for i, spec in enumerate(self.specs):
            if spec.input.dim != self.feature_dim:
                raise ValueError(f"spec {i} has dimension {spec.input.dim}, set is {self.feature_dim}-D")
            if not isinstance(spec.output, want):
                raise ValueError(
                    f"spec {i} output {type(spec.output).__name__} does not match task {self.task.value}"
                )

    def __len__(self) -> int:
        return len(self.specs)

    def __iter__(self):
        return iter(self.specs)

    def __getitem__(self, i) -> Specification:
        return self.specs[i]


def _constraint_from_labels(labels: np.ndarray, task: TaskKind) -> OutputConstraint:
    if task is TaskKind.CLASSIFICATION:
        counts = np.bincount(labels.astype(np.int64))
        return ClassLabel(int(np.argmax(counts)))  # argmax ties resolve to the smallest id
    mean = float(labels.mean())
    std = float(labels.std())  # population std: a single point yields a zero-width interval
    return ValueInterval(mean - std, mean + std)


def extract_specification(
    box: Hyperrectangle, gen: Dataset, task: TaskKind | None = None, provenance: str = ""
) -> Specification | None:
    """Turn a box into a specification from the generation points it contains.

    Classification uses the most common contained label; regression uses
    [mean - std, mean + std] of the contained labels. Boxes containing no
    generation point yield None.
    """
    task = task or gen.task
    if box.dim != gen.dim:
        raise ValueError(f"box dimension {box.dim} does not match dataset dimension {gen.dim}")
    mask = box.contains_many(gen.features)
    if not mask.any():
        return None
    return Specification(box, _constraint_from_labels(gen.labels[mask], task), provenance)


def filter_unbounded(specset: SpecSet, alpha: float, stats: DatasetStats) -> SpecSet:
    """Drop regression specs whose output interval spans more than alpha of the label range.

    Classification specs always pin a single label and are kept unchanged
    (enforced defensively by the SpecSet type). Survivor order is preserved
    and the operation is idempotent.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if specset.task is TaskKind.CLASSIFICATION:
        kept = [s for s in specset if isinstance(s.output, ClassLabel)]
    else:
        if stats.y_min is None or stats.y_max is None:
            raise ValueError("regression filtering needs label-range stats over the full dataset")
        budget = alpha * (stats.y_max - stats.y_min)
        kept = [s for s in specset if s.output.width <= budget]
    return replace(specset, specs=tuple(kept))


def _bound_to_json(v: float) -> float | None:
    return None if np.isinf(v) else float(v)


def save_specset(specset: SpecSet, path) -> None:
    """Write a spec set as JSON; null bounds encode -inf (lower) / +inf (upper)."""
    meta = dict(specset.metadata)
    doc = {
        "task": specset.task.value,
        "feature_dim": specset.feature_dim,
        "generator": meta.pop("generator", "unknown"),
        "params": meta.pop("params", meta),
        "specs": [
            {
                "lower": [_bound_to_json(v) for v in s.input.lower],
                "upper": [_bound_to_json(v) for v in s.input.upper],
                "output": (
                    {"class": s.output.label}
                    if isinstance(s.output, ClassLabel)
                    else {"lo": s.output.lo, "hi": s.output.hi}
                ),
                "provenance": s.provenance,
            }
            for s in specset
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_specset(path) -> SpecSet:
    """Read a spec-set file back; validates bounds, dimensions, and output variants."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"spec file not found: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: malformed spec file: {e}") from None

    for key in ("task", "feature_dim", "specs"):
        if key not in doc:
            raise ValueError(f"{path}: missing required field {key!r}")
    try:
        task = TaskKind(doc["task"])
    except ValueError:
        raise ValueError(f"{path}: unknown task {doc['task']!r}") from None
    dim = int(doc["feature_dim"])

    specs = []
    for i, entry in enumerate(doc["specs"]):
        lower = entry.get("lower")
        upper = entry.get("upper")
        if not isinstance(lower, list) or not isinstance(upper, list) or len(lower) != dim or len(upper) != dim:
            raise ValueError(f"{path}: spec {i} bounds must be length-{dim} lists")
        lo = np.array([-np.inf if v is None else float(v) for v in lower])
        hi = np.array([np.inf if v is None else float(v) for v in upper])
        try:
            box = Hyperrectangle(lo, hi)
        except ValueError as e:
            raise ValueError(f"{path}: spec {i}: {e}") from None
        out = entry.get("output")
        if not isinstance(out, dict):
            raise ValueError(f"{path}: spec {i} has no output constraint")
        if set(out) == {"class"}:
            constraint: OutputConstraint = ClassLabel(int(out["class"]))
        elif set(out) == {"lo", "hi"}:
            constraint = ValueInterval(float(out["lo"]), float(out["hi"]))
        else:
            raise ValueError(f"{path}: spec {i} output must be {{class}} or {{lo, hi}}, got {sorted(out)}")
        specs.append(Specification(box, constraint, str(entry.get("provenance", ""))))

    metadata = {"generator": doc.get("generator", "unknown"), "params": doc.get("params", {})}
    try:
        return SpecSet(tuple(specs), task, dim, metadata)
    except ValueError as e:
        raise ValueError(f"{path}: {e}") from None
