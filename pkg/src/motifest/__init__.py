"""Temporal motif counting on timestamped multigraphs.

Estimates (and, for verification, exactly counts) occurrences of a small
directed pattern with a total edge-time order and a delta window, using
weighted spanning-tree sampling over overlapping 2*delta windows.
"""

from .counting import (ViolationKind, compute_n_phi, derive_count, list_count,
                       validate, validate_and_derive)
from .estimate import EstimateConfig, EstimateReport, advise_samples, estimate
from .graph import EdgeListParseError, TemporalEdge, TemporalGraph, load_graph
from .motif import (DependencyTriple, Motif, MotifError, SpanningTree,
                    build_rooted_tree, constraint_looseness,
                    enumerate_rooted_spanning_trees, parse_motif,
                    select_spanning_tree)
from .oracle import (brute_force_count, brute_force_partial_matches,
                     enumerate_partial_matches, exact_count)
from .preprocess import (WeightTable, WindowPartition, WindowView,
                         partition_windows, preprocess, preprocess_subgraph)
from .sampling import (PartialMatch, SampleStream, sample_partial_match,
                       sample_window)

__version__ = "0.1.0"

__all__ = [
    "EdgeListParseError", "TemporalEdge", "TemporalGraph", "load_graph",
    "Motif", "MotifError", "DependencyTriple", "SpanningTree", "parse_motif",
    "build_rooted_tree", "enumerate_rooted_spanning_trees",
    "constraint_looseness", "select_spanning_tree",
    "WindowPartition", "WindowView", "WeightTable", "partition_windows",
    "preprocess", "preprocess_subgraph",
    "PartialMatch", "SampleStream", "sample_window", "sample_partial_match",
    "ViolationKind", "validate", "compute_n_phi", "list_count",
    "derive_count", "validate_and_derive",
    "EstimateConfig", "EstimateReport", "estimate", "advise_samples",
    "exact_count", "brute_force_count", "brute_force_partial_matches",
    "enumerate_partial_matches",
    "__version__",
]
