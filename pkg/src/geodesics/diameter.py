"""
Diameter Estimation.

Graph shortest paths over the Steiner graph over-approximate intrinsic
distances, so every value here is an upper estimate of the smooth diameter.
"""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field
from scipy.sparse.csgraph import dijkstra

from src.config import get_settings
from src.errors import TooLargeError
from src.geodesics.graph import SteinerGraph, build_steiner_graph
from src.mesh.schema import TriangleMesh
from src.utils.logging import get_logger

logger = get_logger(__name__)

SOURCE_CHUNK = 64


class DiameterMode(str, Enum):
    """How source vertices are chosen."""

    ALL_PAIRS = "all_pairs_exact_graph"
    DOUBLE_SWEEP = "double_sweep_heuristic"


class DiameterEstimate(BaseModel):
    """Graph diameter with its provenance."""

    value: float = Field(gt=0, description="Largest graph distance found")
    steiner_level: int = Field(ge=0)
    attained_pair: tuple[int, int]
    mode: DiameterMode
    sequence: list[float] = Field(description="Values at Steiner levels 0..steiner_level")
    sources: int = Field(description="Number of source vertices searched")

    def scaled(self, factor: float) -> "DiameterEstimate":
        return self.model_copy(
            update={"value": self.value * factor, "sequence": [v * factor for v in self.sequence]}
        )


def graph_distances(graph: SteinerGraph, sources: np.ndarray) -> np.ndarray:
    """(len(sources), V) graph distances from ``sources`` to every mesh vertex."""
    sources = np.atleast_1d(np.asarray(sources, dtype=np.int64))
    rows = []
    for start in range(0, len(sources), SOURCE_CHUNK):
        chunk = sources[start : start + SOURCE_CHUNK]
        dist = dijkstra(graph.adjacency, directed=False, indices=chunk)
        rows.append(np.atleast_2d(dist)[:, : graph.vertex_count])
    return np.vstack(rows)


def distances_from(
    mesh: TriangleMesh, source: int, steiner_level: Optional[int] = None
) -> np.ndarray:
    """
    Graph distances from one vertex to every vertex.

    Args:
        mesh: Valid mesh
        source: Source vertex index
        steiner_level: Level k places 2**k − 1 equally spaced nodes on every edge,
            not k nodes, so the node set of each level contains that of the
            level below (default from settings)

    Returns:
        (V,) nonnegative distances, 0 at ``source``.
    """
    if not 0 <= source < mesh.vertex_count:
        raise IndexError(f"source {source} out of range for {mesh.vertex_count} vertices")
    level = get_settings().steiner_level if steiner_level is None else steiner_level
    graph = build_steiner_graph(mesh, level)
    return graph_distances(graph, np.array([source]))[0]


def farthest_point_sources(graph: SteinerGraph, count: int) -> np.ndarray:
    """
    Farthest-point sample of ``count`` vertices.

    Starts from the vertex farthest from vertex 0, then repeatedly adds the
    vertex farthest from all sources chosen so far.
    """
    count = min(count, graph.vertex_count)
    first = int(np.argmax(graph_distances(graph, np.array([0]))[0]))
    chosen = [first]
    nearest = graph_distances(graph, np.array([first]))[0]
    while len(chosen) < count:
        nxt = int(np.argmax(nearest))
        if nearest[nxt] <= 0:
            break
        chosen.append(nxt)
        nearest = np.minimum(nearest, graph_distances(graph, np.array([nxt]))[0])
    return np.array(chosen, dtype=np.int64)


def _sweep(graph: SteinerGraph, sources: np.ndarray) -> tuple[float, tuple[int, int]]:
    best = -1.0
    pair = (0, 0)
    for start in range(0, len(sources), SOURCE_CHUNK):
        chunk = sources[start : start + SOURCE_CHUNK]
        dist = graph_distances(graph, chunk)
        row, col = np.unravel_index(int(np.argmax(dist)), dist.shape)
        if dist[row, col] > best:
            best = float(dist[row, col])
            pair = (int(chunk[row]), int(col))
    return best, pair


def resolve_mode(mesh: TriangleMesh, mode: Optional[DiameterMode | str]) -> DiameterMode:
    if mode is None or mode == "auto":
        cap = get_settings().all_pairs_max_vertices
        return DiameterMode.ALL_PAIRS if mesh.vertex_count <= cap else DiameterMode.DOUBLE_SWEEP
    return DiameterMode(mode)


def diameter(
    mesh: TriangleMesh,
    steiner_level: Optional[int] = None,
    mode: Optional[DiameterMode | str] = None,
) -> DiameterEstimate:
    """
    Estimate the diameter of ``mesh``.

    The same source set is searched at every level 0..steiner_level, and the
    node sets are nested, so ``sequence`` never increases.

    Args:
        mesh: Valid mesh
        steiner_level: Final Steiner level (default from settings)
        mode: ``all_pairs_exact_graph``, ``double_sweep_heuristic`` or None
            for automatic choice by vertex count

    Returns:
        DiameterEstimate whose ``value`` is the last entry of ``sequence``.

    Raises:
        TooLargeError: all_pairs requested above the vertex cap.
    """
    settings = get_settings()
    level = settings.steiner_level if steiner_level is None else steiner_level
    resolved = resolve_mode(mesh, mode)

    if resolved == DiameterMode.ALL_PAIRS:
        cap = settings.all_pairs_max_vertices
        if mesh.vertex_count > cap:
            raise TooLargeError(
                f"all-pairs diameter limited to {cap} vertices, got {mesh.vertex_count}",
                module="geodesics",
            )

    graphs = {k: build_steiner_graph(mesh, k) for k in range(level + 1)}
    if resolved == DiameterMode.ALL_PAIRS:
        sources = np.arange(mesh.vertex_count, dtype=np.int64)
    else:
        sources = farthest_point_sources(graphs[level], settings.double_sweep_sources)

    sequence: list[float] = []
    pair = (0, 0)
    for k in range(level + 1):
        value, pair = _sweep(graphs[k], sources)
        sequence.append(value)

    estimate = DiameterEstimate(
        value=sequence[-1],
        steiner_level=level,
        attained_pair=pair,
        mode=resolved,
        sequence=sequence,
        sources=len(sources),
    )
    logger.info(
        "diameter_estimated",
        mode=resolved.value,
        steiner_level=level,
        value=estimate.value,
        sources=estimate.sources,
    )
    return estimate


__all__ = [
    "DiameterMode",
    "DiameterEstimate",
    "graph_distances",
    "distances_from",
    "farthest_point_sources",
    "resolve_mode",
    "diameter",
]
