"""specforge: mine hyperrectangle input-output specifications from data,
score them with corner-case-aware precision/recall, and check feedforward
ReLU networks against them via interval bound propagation."""

from .dataset import (
    Dataset,
    DatasetStats,
    TaskKind,
    bin_labels,
    load_csv,
    save_csv,
    split,
    synth_spiral,
    synth_throughput_series,
    window_timeseries,
)
from .speccore import (
    ClassLabel,
    Hyperrectangle,
    OutputConstraint,
    Specification,
    SpecSet,
    ValueInterval,
    contains,
    extract_specification,
    filter_unbounded,
    load_specset,
    satisfies_output,
    save_specset,
)
from .tree import DecisionTree, TreeNode, TreeParams, train_tree
from .cluster import ClusterParams, kmeans
from .generators import (
    DEFAULT_CELL_CAP,
    CellCapExceeded,
    gen_cluster,
    gen_grid,
    gen_human_throughput,
    gen_tree,
)
from .evaluation import EvalReport, PointVerdict, Verdict, classify_point, evaluate, format_report
from .network import Layer, Network, forward, load_network, save_network
from .verifier import (
    Counterexample,
    IntervalVector,
    VerificationSummary,
    VerifyResult,
    VerifyStatus,
    clamp_box,
    ibp_bounds,
    verify_all,
    verify_spec,
)
from .render import render_specs

__version__ = "0.1.0"

__all__ = [
    "TaskKind",
    "Dataset",
    "DatasetStats",
    "load_csv",
    "save_csv",
    "split",
    "synth_spiral",
    "synth_throughput_series",
    "window_timeseries",
    "bin_labels",
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
    "TreeParams",
    "TreeNode",
    "DecisionTree",
    "train_tree",
    "ClusterParams",
    "kmeans",
    "DEFAULT_CELL_CAP",
    "CellCapExceeded",
    "gen_grid",
    "gen_cluster",
    "gen_tree",
    "gen_human_throughput",
    "Verdict",
    "PointVerdict",
    "EvalReport",
    "classify_point",
    "evaluate",
    "format_report",
    "Layer",
    "Network",
    "forward",
    "load_network",
    "save_network",
    "IntervalVector",
    "VerifyStatus",
    "VerifyResult",
    "Counterexample",
    "VerificationSummary",
    "ibp_bounds",
    "clamp_box",
    "verify_spec",
    "verify_all",
    "render_specs",
    "__version__",
]
