"""Topology-preserving 2D projection of high-dimensional point sets.

The pipeline: compute an exact or approximate Euclidean MST, read off the
merge hierarchy of connected components, simplify it by component size, and
produce a 2D layout whose own MST weights replicate the input's (optionally
magnifying chosen components). A CLI and a small HTTP service wrap the same
functions for batch and interactive use.
"""

__version__ = "0.1.0"

from .data import PointSet, load_csv, load_fvecs, save_csv, euclidean_distance
from .mst import SpanningTree, WeightedEdge, exact_emst, mst_of_graph
from .vamana import VamanaParams, VamanaGraph, build_vamana, greedy_search, robust_prune, amst
from .filtration import (
    MergeTree,
    SimplifiedTree,
    PersistenceDiagram,
    build_merge_tree,
    persistence_diagram,
    simplify,
    components_point_map,
    default_eta,
)
from .layout import ScalingParams, Layout2D, convex_hull, topomap_project
from .metrics import (
    rwe,
    normalize_diagram,
    bottleneck_distance,
    wasserstein_distance,
    normalized_wasserstein,
)
from .treemap import TreemapRect, treemap_layout

__all__ = [
    "PointSet", "load_csv", "load_fvecs", "save_csv", "euclidean_distance",
    "SpanningTree", "WeightedEdge", "exact_emst", "mst_of_graph",
    "VamanaParams", "VamanaGraph", "build_vamana", "greedy_search", "robust_prune", "amst",
    "MergeTree", "SimplifiedTree", "PersistenceDiagram",
    "build_merge_tree", "persistence_diagram", "simplify", "components_point_map", "default_eta",
    "ScalingParams", "Layout2D", "convex_hull", "topomap_project",
    "rwe", "normalize_diagram", "bottleneck_distance", "wasserstein_distance",
    "normalized_wasserstein",
    "TreemapRect", "treemap_layout",
]
