"""Check networks against specifications with interval bound propagation.

Interval propagation is sound but incomplete, so the outcome is three-way:
Verified (bounds prove the constraint), Violated (a concrete counterexample
was found), or Unknown (bounds too loose and falsification found nothing).
Falsification draws first on evaluation points inside the box, then on
uniform samples; every counterexample is labeled with its source.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dataset import Dataset, DatasetStats
from .network import Network, forward
from .speccore import ClassLabel, Hyperrectangle, OutputConstraint, SpecSet, Specification, ValueInterval

__all__ = [
    "IntervalVector",
    "VerifyStatus",
    "Counterexample",
    "VerifyResult",
    "VerificationSummary",
    "ibp_bounds",
    "clamp_box",
    "verify_spec",
    "verify_all",
]


@dataclass(frozen=True)
class IntervalVector:
    """Componentwise finite lower/upper bounds on a vector."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lower, dtype=np.float64)
        hi = np.array(self.upper, dtype=np.float64)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("bounds must be 1-D vectors of equal length")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("interval bounds must be finite")
        if np.any(lo > hi):
            raise ValueError("lower bound exceeds upper bound")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)


def _propagate(net: Network, lo: np.ndarray, hi: np.ndarray, widen: bool) -> tuple[np.ndarray, np.ndarray]:
    """Interval affine transforms with ReLU clamping.

    With widen=True every affine step is padded outward by a rigorous bound
    on its own floating-point rounding error (the standard n*u/(1-n*u)
    summation bound over the row magnitudes), so the result is sound not just
    in exact arithmetic but for float-computed forward passes as well.
    """
    u = np.finfo(np.float64).eps / 2
    for layer in net.layers:
        w_pos = np.maximum(layer.weights, 0.0)
        w_neg = np.minimum(layer.weights, 0.0)
        new_lo = w_pos @ lo + w_neg @ hi + layer.bias
        new_hi = w_pos @ hi + w_neg @ lo + layer.bias
        if widen:
            m = 2 * layer.weights.shape[1] + 4  # term count per output row, with margin
            gamma = m * u / (1.0 - m * u)
            err = gamma * (np.abs(layer.weights) @ np.maximum(np.abs(lo), np.abs(hi)) + np.abs(layer.bias))
            new_lo = np.nextafter(new_lo - err, -np.inf)
            new_hi = np.nextafter(new_hi + err, np.inf)
        if layer.relu:
            new_lo = np.maximum(new_lo, 0.0)
            new_hi = np.maximum(new_hi, 0.0)
        lo, hi = new_lo, new_hi
    return lo, hi


def ibp_bounds(net: Network, box: Hyperrectangle) -> IntervalVector:
    """Sound output bounds over a finite input box.

    Each affine layer maps bounds through its positive and negative weight
    parts separately; ReLU clamps both bounds at zero. The bounds carry an
    outward rounding-error pad, so every x in the box, run through forward()
    in ordinary float arithmetic, lands inside the result. Degenerate boxes
    (lower == upper) reproduce the forward output up to that pad.
    """
    if box.dim != net.input_dim:
        raise ValueError(f"box dimension {box.dim} for a network with {net.input_dim} inputs")
    if not box.is_finite():
        raise ValueError("interval propagation needs a finite box; clamp infinite sides first")
    lo, hi = _propagate(net, box.lower.copy(), box.upper.copy(), widen=True)
    return IntervalVector(lo, hi)


def clamp_box(box: Hyperrectangle, stats: DatasetStats | None, margin: float = 0.1) -> tuple[Hyperrectangle, bool]:
    """Replace infinite box sides with the data range padded by `margin` of its span.

    Mined specs only say anything meaningful near observed data, so bounding
    the unconstrained sides there is what makes interval propagation possible.
    Returns the (possibly new) box and whether clamping happened.
    """
    if box.is_finite():
        return box, False
    if stats is None:
        raise ValueError("spec box has infinite sides and no dataset stats are available to clamp them")
    if stats.x_min.size != box.dim:
        raise ValueError(f"stats cover {stats.x_min.size} features, box has {box.dim}")
    pad = margin * (stats.x_max - stats.x_min)
    lo = np.where(np.isneginf(box.lower), stats.x_min - pad, box.lower)
    hi = np.where(np.isposinf(box.upper), stats.x_max + pad, box.upper)
    # A finite side can sit outside the padded data range; keep the box legal.
    return Hyperrectangle(np.minimum(lo, hi), np.maximum(lo, hi)), True


class VerifyStatus(Enum):
    VERIFIED = "verified"
    VIOLATED = "violated"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Counterexample:
    x: np.ndarray
    output: np.ndarray
    expected: OutputConstraint
    source: str  # "dataset" or "sampled"
    spec_index: int
    provenance: str


@dataclass(frozen=True)
class VerifyResult:
    status: VerifyStatus
    spec_index: int
    provenance: str
    bounds: IntervalVector
    clamped: bool
    counterexamples: tuple[Counterexample, ...] = ()


def _violations(outputs: np.ndarray, constraint: OutputConstraint) -> np.ndarray:
    """Boolean mask of batch outputs that fail the constraint."""
    if isinstance(constraint, ClassLabel):
        return np.argmax(outputs, axis=1) != constraint.label
    return (outputs[:, 0] < constraint.lo) | (outputs[:, 0] > constraint.hi)


def _bounds_prove(bounds: IntervalVector, constraint: OutputConstraint) -> bool:
    if isinstance(constraint, ClassLabel):
        c = constraint.label
        others = np.delete(bounds.upper, c)
        if others.size == 0:
            return True  # single-logit network: argmax is always class 0
        return bool(bounds.lower[c] > others.max())
    return bool(bounds.lower[0] >= constraint.lo and bounds.upper[0] <= constraint.hi)


def verify_spec(
    net: Network,
    spec: Specification,
    stats: DatasetStats | None = None,
    budget: int = 10_000,
    seed: int = 0,
    eval_data: Dataset | None = None,
    spec_index: int = 0,
    max_recorded: int = 100,
) -> VerifyResult:
    """Prove, refute, or give up on one specification.

    Infinite box sides are clamped to the data range (see clamp_box) before
    propagation; the result records whether that happened. Falsification
    checks dataset points inside the original box first and samples the
    clamped box only if none of them violate. At most max_recorded
    counterexamples are kept per spec.
    """
    if net.input_dim != spec.input.dim:
        raise ValueError(f"network takes {net.input_dim} inputs, spec box is {spec.input.dim}-D")
    if isinstance(spec.output, ValueInterval) and net.output_dim != 1:
        raise ValueError(f"interval output constraints need a 1-output network, got {net.output_dim}")
    if isinstance(spec.output, ClassLabel) and spec.output.label >= net.output_dim:
        raise ValueError(f"class {spec.output.label} out of range for {net.output_dim} network outputs")
    if budget < 0:
        raise ValueError("budget must be >= 0")

    cbox, clamped = clamp_box(spec.input, stats)
    bounds = ibp_bounds(net, cbox)
    # Prove with the un-padded propagation: specs whose interval exactly equals
    # the reachable hull still verify, at the price of roundoff-scale fuzz.
    raw = IntervalVector(*_propagate(net, cbox.lower.copy(), cbox.upper.copy(), widen=False))
    if _bounds_prove(raw, spec.output):
        return VerifyResult(VerifyStatus.VERIFIED, spec_index, spec.provenance, bounds, clamped)

    def collect(points: np.ndarray, source: str) -> list[Counterexample]:
        outputs = forward(net, points)
        bad = np.nonzero(_violations(outputs, spec.output))[0]
        return [
            Counterexample(points[i].copy(), outputs[i].copy(), spec.output, source, spec_index, spec.provenance)
            for i in bad[:max_recorded]
        ]

    cex: list[Counterexample] = []
    if eval_data is not None:
        if eval_data.dim != spec.input.dim:
            raise ValueError(f"falsification data has {eval_data.dim} features, spec box is {spec.input.dim}-D")
        inside = spec.input.contains_many(eval_data.features)
        if inside.any():
            cex = collect(eval_data.features[inside], "dataset")
    if not cex and budget > 0:
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(spec_index,)))
        samples = rng.uniform(cbox.lower, cbox.upper, size=(budget, cbox.dim))
        cex = collect(samples, "sampled")

    if cex:
        return VerifyResult(VerifyStatus.VIOLATED, spec_index, spec.provenance, bounds, clamped, tuple(cex))
    return VerifyResult(VerifyStatus.UNKNOWN, spec_index, spec.provenance, bounds, clamped)


@dataclass(frozen=True)
class VerificationSummary:
    results: tuple[VerifyResult, ...]

    def _count(self, status: VerifyStatus) -> int:
        return sum(1 for r in self.results if r.status is status)

    @property
    def verified(self) -> int:
        return self._count(VerifyStatus.VERIFIED)

    @property
    def violated(self) -> int:
        return self._count(VerifyStatus.VIOLATED)

    @property
    def unknown(self) -> int:
        return self._count(VerifyStatus.UNKNOWN)

    @property
    def counterexamples(self) -> tuple[Counterexample, ...]:
        return tuple(c for r in self.results for c in r.counterexamples)


def verify_all(
    net: Network,
    specset: SpecSet,
    stats: DatasetStats | None = None,
    budget: int = 10_000,
    seed: int = 0,
    eval_data: Dataset | None = None,
) -> VerificationSummary:
    """verify_spec over a whole set; per-spec seeding keeps results order-independent."""
    if net.input_dim != specset.feature_dim:
        raise ValueError(f"network takes {net.input_dim} inputs, specs are {specset.feature_dim}-D")
    results = [
        verify_spec(net, spec, stats, budget, seed, eval_data, spec_index=i)
        for i, spec in enumerate(specset)
    ]
    return VerificationSummary(tuple(results))
