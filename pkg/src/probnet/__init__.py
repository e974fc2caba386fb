"""Network measures for graphs with uncertain links."""

from .edge_model import (
    DecayParams,
    DiscreteGraph,
    ProbabilisticGraph,
    build_aggregate_graph,
    build_probabilistic_graph,
    build_slice_graph,
    edge_probability,
    graph_log_probability,
    message_activation,
)
from .graph_metrics import avg_shortest_path, betweenness, clustering_coefficient, rank
from .prob_clustering import expected_combinations, expected_triangles, prob_clustering_coefficient
from .probable_paths import (
    PathTree,
    TransmissionPrior,
    ml_path_tree,
    mlh_bcr,
    mlh_betweenness,
    mlh_path_tree,
    transmission_prior,
)
from .sampling import (
    EstimateReport,
    SampleConfig,
    brute_force_expectation,
    expected_avg_shortest_path,
    expected_bcr,
    expected_cc,
    sample_graph,
)
from .temporal_log import Transaction, TransactionLog, ingest, read_log, up_to, window

__version__ = "0.1.0"

__all__ = [
    "DecayParams",
    "DiscreteGraph",
    "EstimateReport",
    "PathTree",
    "ProbabilisticGraph",
    "SampleConfig",
    "Transaction",
    "TransactionLog",
    "TransmissionPrior",
    "avg_shortest_path",
    "betweenness",
    "brute_force_expectation",
    "build_aggregate_graph",
    "build_probabilistic_graph",
    "build_slice_graph",
    "clustering_coefficient",
    "edge_probability",
    "expected_avg_shortest_path",
    "expected_bcr",
    "expected_cc",
    "expected_combinations",
    "expected_triangles",
    "graph_log_probability",
    "ingest",
    "message_activation",
    "ml_path_tree",
    "mlh_bcr",
    "mlh_betweenness",
    "mlh_path_tree",
    "prob_clustering_coefficient",
    "rank",
    "read_log",
    "sample_graph",
    "transmission_prior",
    "up_to",
    "window",
]
