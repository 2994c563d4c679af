"""Checking networks against mined specs: proofs, refutations, counterexamples.

Part 1 uses two one-weight networks against bands the identity map satisfies:
interval propagation proves every band for the identity network and sampling
refutes every band for the negation network.

Part 2 loads the checked-in 4-10-5-1 throughput forecaster and checks it
against tree specs mined from the same synthetic trace it was fitted to.
Bands here are mean +/- std over each leaf, so any leaf where the model
strays further than the local spread produces counterexamples; the rising
windows among them are the classic anomaly: history trending up, prediction
sagging below the expected band.
"""

from pathlib import Path

import numpy as np

from specforge import (
    DatasetStats,
    Hyperrectangle,
    SpecSet,
    Specification,
    TaskKind,
    TreeParams,
    ValueInterval,
    filter_unbounded,
    forward,
    gen_tree,
    load_network,
    split,
    synth_throughput_series,
    verify_all,
    window_timeseries,
)

HERE = Path(__file__).parent

# --- Part 1: two tiny networks, one family of bands -------------------------
bands = SpecSet(
    tuple(
        Specification(Hyperrectangle([float(a)], [a + 1.0]), ValueInterval(float(a), a + 1.0), f"band {a}")
        for a in range(5)
    ),
    TaskKind.REGRESSION,
    1,
)

for name in ("identity_1d", "negation_1d"):
    net = load_network(HERE / "networks" / f"{name}.json")
    summary = verify_all(net, bands, budget=1000, seed=0)
    print(f"{name}: verified={summary.verified} violated={summary.violated} unknown={summary.unknown}")
    for cex in summary.counterexamples[:2]:
        print(f"    {cex.provenance}: x={cex.x[0]:.3f} -> {cex.output[0]:.3f}, "
              f"expected [{cex.expected.lo:.1f}, {cex.expected.hi:.1f}] ({cex.source})")
print()

# --- Part 2: the throughput forecaster vs mined specs ------------------------
series = synth_throughput_series(length=1500, seed=3, peak=100.0)
data = window_timeseries(series, window=4)
gen, ev = split(data, gen_fraction=0.9, seed=3)
stats = DatasetStats.from_datasets(gen, ev)

specs = gen_tree(gen, TreeParams(min_samples_leaf=20, min_samples_split=40))
kept = filter_unbounded(specs, alpha=0.1, stats=stats)
print(f"mined {len(specs)} tree specs, {len(kept)} kept by the output-range filter")

net = load_network(HERE / "networks" / "throughput_4_10_5_1.json")
pred = forward(net, ev.features)[:, 0]
print(f"forecaster MAE on held-out windows: {np.mean(np.abs(pred - ev.labels)):.2f} (scale 0..100)")

bounds_only = verify_all(net, kept, stats, budget=0)
print(f"bounds alone: verified={bounds_only.verified} violated={bounds_only.violated} "
      f"unknown={bounds_only.unknown} (interval bounds are too loose to decide)")

summary = verify_all(net, kept, stats, budget=2000, seed=0, eval_data=ev)
print(f"with falsification: verified={summary.verified} violated={summary.violated} "
      f"unknown={summary.unknown}")

rising = [
    c for c in summary.counterexamples
    if c.source == "dataset" and c.x[0] < c.x[1] < c.x[2] < c.x[3] and c.output[0] < c.expected.lo
]
print(f"\nrising-history anomalies among dataset counterexamples: {len(rising)}")
for cex in rising[:3]:
    hist = " -> ".join(f"{v:.1f}" for v in cex.x)
    print(f"    history {hist} rising, model predicts {cex.output[0]:.1f}, "
          f"expected at least {cex.expected.lo:.1f} (spec {cex.provenance})")
