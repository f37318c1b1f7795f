"""
Steiner Graph.

Shortest-path graph over mesh vertices plus evenly spaced nodes on every
edge. Any two nodes on the boundary of a common triangle are joined by an arc
whose weight is their straight-line distance in that triangle's intrinsic
layout.

Level k puts 2**k − 1 nodes on each edge, so the node set of level k contains
that of level k − 1 and graph distances never increase with the level.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import sparse

from src.mesh.geometry import face_layouts
from src.mesh.schema import TriangleMesh

MAX_STEINER_LEVEL = 3


def nodes_per_edge(level: int) -> int:
    """Steiner nodes per edge at ``level``: 2**level − 1, so levels nest."""
    return 2**level - 1


class SteinerGraph(BaseModel):
    """Undirected arc list and CSR adjacency of a Steiner graph."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    level: int = Field(ge=0, le=MAX_STEINER_LEVEL)
    vertex_count: int
    node_count: int
    node_edge: np.ndarray = Field(description="(N,) host edge per node, −1 for vertices")
    node_t: np.ndarray = Field(description="(N,) fraction along the host edge from its lower end")
    arc_tail: np.ndarray
    arc_head: np.ndarray
    arc_length: np.ndarray
    adjacency: sparse.csr_matrix = Field(description="Upper-triangular arc lengths")

    def interpolate(self, mesh: TriangleMesh, vertex_values: np.ndarray) -> np.ndarray:
        """Extend per-vertex values to all nodes by linear interpolation along edges."""
        values = np.empty(self.node_count)
        values[: self.vertex_count] = vertex_values
        steiner = self.node_edge[self.vertex_count :]
        t = self.node_t[self.vertex_count :]
        lo = vertex_values[mesh.edges[steiner, 0]]
        hi = vertex_values[mesh.edges[steiner, 1]]
        values[self.vertex_count :] = (1.0 - t) * lo + t * hi
        return values

    def weighted(self, node_values: np.ndarray) -> sparse.csr_matrix:
        """Arc lengths scaled by the trapezoidal average of ``node_values`` at the arc ends."""
        weights = self.arc_length * 0.5 * (node_values[self.arc_tail] + node_values[self.arc_head])
        return sparse.csr_matrix(
            (weights, (self.arc_tail, self.arc_head)), shape=(self.node_count, self.node_count)
        )

    def arc_lengths_between(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Lengths of the arcs (a[i], b[i]); every pair must be an arc."""
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        return np.asarray(self.adjacency[lo, hi]).ravel()


def build_steiner_graph(mesh: TriangleMesh, level: int) -> SteinerGraph:
    """
    Build the Steiner graph of ``mesh`` at ``level``.

    Args:
        mesh: Valid mesh
        level: Steiner level in [0, 3]

    Returns:
        SteinerGraph with deduplicated arcs (shortest weight kept).
    """
    if not 0 <= level <= MAX_STEINER_LEVEL:
        raise ValueError(f"steiner_level must be in [0, {MAX_STEINER_LEVEL}], got {level}")

    V, E = mesh.vertex_count, mesh.edge_count
    s = nodes_per_edge(level)
    N = V + s * E
    ts = np.arange(1, s + 1) / (s + 1)

    layout = face_layouts(mesh)
    face_edges = mesh.face_edge_indices()
    f = mesh.faces

    node_ids = [f[:, 0], f[:, 1], f[:, 2]]
    node_xy = [layout[:, 0], layout[:, 1], layout[:, 2]]

    # Local edge opposite corner c runs between corners (c+1)%3 and (c+2)%3
    for c in range(3):
        a, b = (c + 1) % 3, (c + 2) % 3
        edge = face_edges[:, c]
        forward = (f[:, a] < f[:, b])[:, None]
        start = np.where(forward, layout[:, a], layout[:, b])
        end = np.where(forward, layout[:, b], layout[:, a])
        for m, t in enumerate(ts):
            node_ids.append(V + edge * s + m)
            node_xy.append(start + t * (end - start))

    ids = np.stack(node_ids, axis=1)
    xy = np.stack(node_xy, axis=1)

    iu, ju = np.triu_indices(ids.shape[1], k=1)
    lengths = np.linalg.norm(xy[:, iu] - xy[:, ju], axis=2).ravel()
    u = ids[:, iu].ravel()
    w = ids[:, ju].ravel()
    tail = np.minimum(u, w)
    head = np.maximum(u, w)

    # Shared edges contribute the same arc twice; keep the shorter copy
    keys = tail.astype(np.int64) * N + head
    order = np.lexsort((lengths, keys))
    keys, tail, head, lengths = keys[order], tail[order], head[order], lengths[order]
    first = np.ones(len(keys), dtype=bool)
    first[1:] = keys[1:] != keys[:-1]
    tail, head, lengths = tail[first], head[first], lengths[first]

    node_edge = np.full(N, -1, dtype=np.int64)
    node_t = np.zeros(N)
    if s:
        node_edge[V:] = np.repeat(np.arange(E), s)
        node_t[V:] = np.tile(ts, E)

    adjacency = sparse.csr_matrix((lengths, (tail, head)), shape=(N, N))
    return SteinerGraph(
        level=level,
        vertex_count=V,
        node_count=N,
        node_edge=node_edge,
        node_t=node_t,
        arc_tail=tail,
        arc_head=head,
        arc_length=lengths,
        adjacency=adjacency,
    )


__all__ = ["SteinerGraph", "build_steiner_graph", "nodes_per_edge", "MAX_STEINER_LEVEL"]
