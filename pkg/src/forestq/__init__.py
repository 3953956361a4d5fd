"""Estimation of forest-matrix entries on directed graphs.

The forest matrix of a digraph is (I + L)^-1 with L its out-degree
Laplacian; entry (i, j) is the probability that a uniform random spanning
converging forest roots node i at node j.  This package samples such
forests in expected linear time, estimates entries from the samples,
maintains sampled forest lists across edge insertions and deletions
without resampling, and ships exact oracles to verify all of it on small
graphs.
"""

from .dynamic import (
    PruneConfig,
    UpdateEvent,
    apply_stream,
    delete_update,
    insert_update,
    parse_update_stream,
    prune,
)
from .estimators import (
    EntryEstimate,
    EstimatorParams,
    forest_distance,
    required_samples,
    sfq_query,
    sfqplus_query,
)
from .forest import Forest, ForestCycleError, ForestList
from .graph import Digraph, LoadResult, load_edge_list, random_digraph
from .oracle import (
    CrossCheckReport,
    ForestSet,
    cross_check,
    enumerate_forests,
    exact_entries,
    exact_forest_matrix,
)
from .sampling import ForestRng, sample_forest, sample_forest_list

__all__ = [
    "CrossCheckReport",
    "Digraph",
    "EntryEstimate",
    "EstimatorParams",
    "Forest",
    "ForestCycleError",
    "ForestList",
    "ForestRng",
    "ForestSet",
    "LoadResult",
    "PruneConfig",
    "UpdateEvent",
    "apply_stream",
    "cross_check",
    "delete_update",
    "enumerate_forests",
    "exact_entries",
    "exact_forest_matrix",
    "forest_distance",
    "insert_update",
    "load_edge_list",
    "parse_update_stream",
    "prune",
    "random_digraph",
    "required_samples",
    "sample_forest",
    "sample_forest_list",
    "sfq_query",
    "sfqplus_query",
]

__version__ = "0.1.0"
