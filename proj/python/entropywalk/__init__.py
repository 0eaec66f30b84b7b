"""Size-constrained overlapping community detection via entropy-filtered random walks."""

from ._core import (
    ConfigError,
    ConvergenceError,
    CountMinSketch,
    Graph,
    InputError,
    MutationError,
    avg_clustering,
    barabasi_albert,
    circles,
    detect,
    eigenvector_centrality,
    entropy_ratio,
    load_graph,
    minhash_signature,
    ring_of_cliques,
    save_graph,
    walk_centrality,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "CountMinSketch",
    "Graph",
    "InputError",
    "MutationError",
    "avg_clustering",
    "barabasi_albert",
    "circles",
    "detect",
    "eigenvector_centrality",
    "entropy_ratio",
    "load_graph",
    "minhash_signature",
    "ring_of_cliques",
    "save_graph",
    "walk_centrality",
]
