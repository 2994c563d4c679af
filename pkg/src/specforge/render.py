"""Render a 2-D dataset and its spec boxes as an SVG figure: rectangles over dots."""

from __future__ import annotations

import numpy as np

from .dataset import Dataset, TaskKind
from .speccore import ClassLabel, SpecSet

__all__ = ["render_specs"]

_PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]


def _class_color(c: int) -> str:
    return _PALETTE[int(c) % len(_PALETTE)]


def _ramp_color(fraction: float) -> str:
    """Blue at 0 to red at 1, for regression labels."""
    f = min(max(float(fraction), 0.0), 1.0)
    r = int(round(31 + f * (214 - 31)))
    g = int(round(119 - f * (119 - 39)))
    b = int(round(180 - f * (180 - 40)))
    return f"#{r:02x}{g:02x}{b:02x}"


def render_specs(
    specset: SpecSet,
    data: Dataset,
    path,
    width: int = 720,
    height: int = 720,
    margin: int = 50,
    point_radius: float = 2.5,
) -> None:
    """Write an SVG with spec boxes as outlined rectangles and data points as dots.

    Only 2-D feature spaces can be drawn. Infinite box sides are clamped to
    the plot frame, which pads the data bounding box by 5 percent.
    """
    if data.dim != 2 or specset.feature_dim != 2:
        raise ValueError(f"rendering needs 2-D data, got {data.dim}-D data and {specset.feature_dim}-D specs")

    x_min, y_min = data.features.min(axis=0)
    x_max, y_max = data.features.max(axis=0)
    pad_x = 0.05 * (x_max - x_min) or 1.0
    pad_y = 0.05 * (y_max - y_min) or 1.0
    lo = np.array([x_min - pad_x, y_min - pad_y])
    hi = np.array([x_max + pad_x, y_max + pad_y])

    inner_w = width - 2 * margin
    inner_h = height - 2 * margin

    def to_px(pt):
        fx = (pt[0] - lo[0]) / (hi[0] - lo[0])
        fy = (pt[1] - lo[1]) / (hi[1] - lo[1])
        return margin + fx * inner_w, height - margin - fy * inner_h  # y grows downward in SVG

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{inner_w}" height="{inner_h}" '
        'fill="none" stroke="#444444" stroke-width="1"/>',
    ]

    if data.task is TaskKind.REGRESSION:
        label_lo = float(data.labels.min())
        label_span = float(data.labels.max()) - label_lo or 1.0

    for spec in specset:
        box_lo = np.maximum(spec.input.lower, lo)
        box_hi = np.minimum(spec.input.upper, hi)
        left, bottom = to_px(box_lo)
        right, top = to_px(box_hi)
        if isinstance(spec.output, ClassLabel):
            color = _class_color(spec.output.label)
        else:
            mid = 0.5 * (spec.output.lo + spec.output.hi)
            color = _ramp_color((mid - label_lo) / label_span)
        parts.append(
            f'<rect x="{left:.2f}" y="{top:.2f}" width="{right - left:.2f}" height="{bottom - top:.2f}" '
            f'fill="{color}" fill-opacity="0.08" stroke="{color}" stroke-width="1"/>'
        )

    for point, label in zip(data.features, data.labels):
        if data.task is TaskKind.CLASSIFICATION:
            color = _class_color(int(label))
        else:
            color = _ramp_color((float(label) - label_lo) / label_span)
        px, py = to_px(point)
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="{point_radius}" fill="{color}"/>')

    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
