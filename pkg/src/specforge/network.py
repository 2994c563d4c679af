"""Feedforward ReLU networks loaded from JSON weight files; inference only.

The file format is {"layers": [{"weights": [[..]], "bias": [..], "relu": bool}]}
with row-major weights: weights[i][j] multiplies input j into output i.
Training is out of scope; networks arrive as files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["Layer", "Network", "forward", "load_network", "save_network"]


@dataclass(frozen=True)
class Layer:
    weights: np.ndarray  # (m, n)
    bias: np.ndarray  # (m,)
    relu: bool

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        b = np.array(self.bias, dtype=np.float64)
        if w.ndim != 2:
            raise ValueError(f"weights must be a matrix, got shape {w.shape}")
        if b.shape != (w.shape[0],):
            raise ValueError(f"bias of shape {b.shape} does not match {w.shape[0]} output units")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
            raise ValueError("weights and biases must be finite")
        w.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)
        object.__setattr__(self, "relu", bool(self.relu))


@dataclass(frozen=True)
class Network:
    layers: tuple[Layer, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise ValueError("network needs at least one layer")
        for i in range(1, len(layers)):
            n_in = layers[i].weights.shape[1]
            n_out = layers[i - 1].weights.shape[0]
            if n_in != n_out:
                raise ValueError(f"layer {i} expects {n_in} inputs but layer {i - 1} outputs {n_out}")
        if layers[-1].relu:
            raise ValueError("final layer must not apply ReLU")
        object.__setattr__(self, "layers", layers)

    @property
    def input_dim(self) -> int:
        return self.layers[0].weights.shape[1]

    @property
    def output_dim(self) -> int:
        return self.layers[-1].weights.shape[0]


def forward(net: Network, x) -> np.ndarray:
    """Run the network on one input vector or a batch of row vectors."""
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    z = arr[None, :] if single else arr
    if z.ndim != 2 or z.shape[1] != net.input_dim:
        raise ValueError(f"input of shape {arr.shape} for a network with {net.input_dim} inputs")
    for layer in net.layers:
        z = z @ layer.weights.T + layer.bias
        if layer.relu:
            z = np.maximum(z, 0.0)
    return z[0] if single else z


def load_network(path) -> Network:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"network file not found: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: malformed network file: {e}") from None
    if not isinstance(doc, dict) or "layers" not in doc or not isinstance(doc["layers"], list):
        raise ValueError(f"{path}: network file must contain a 'layers' list")
    layers = []
    for i, entry in enumerate(doc["layers"]):
        try:
            layers.append(Layer(entry["weights"], entry["bias"], entry.get("relu", False)))
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"{path}: layer {i}: {e}") from None
    try:
        return Network(tuple(layers))
    except ValueError as e:
        raise ValueError(f"{path}: {e}") from None


def save_network(net: Network, path) -> None:
    doc = {
        "layers": [
            {"weights": layer.weights.tolist(), "bias": layer.bias.tolist(), "relu": layer.relu}
            for layer in net.layers
        ]
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
