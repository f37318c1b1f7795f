"""
Geodesics module.

Steiner-graph distances and diameter estimates.
"""

from src.geodesics.graph import SteinerGraph, build_steiner_graph
from src.geodesics.diameter import (
    DiameterEstimate,
    DiameterMode,
    diameter,
    distances_from,
    farthest_point_sources,
    graph_distances,
)

__all__ = [
    "SteinerGraph",
    "build_steiner_graph",
    "DiameterEstimate",
    "DiameterMode",
    "diameter",
    "distances_from",
    "farthest_point_sources",
    "graph_distances",
]
