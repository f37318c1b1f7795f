"""
Mesh Validation.

Gatekeeper for every downstream computation: checks that a mesh is a closed,
consistently oriented, connected, non-degenerate 2-manifold and reports its
invariants.
"""

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from src.errors import (
    DegenerateTriangleError,
    DisconnectedError,
    InconsistentGeometryError,
    NonManifoldEdgeError,
    NotClosedError,
    NotOrientableError,
)
from src.mesh.geometry import corner_angles, face_lengths, heron_areas
from src.mesh.schema import MeshInvariants, TriangleMesh

POSITION_LENGTH_RTOL = 1e-12


def _check_faces(mesh: TriangleMesh) -> None:
    f = mesh.faces
    if f.ndim != 2 or f.shape[1] != 3 or len(f) == 0:
        raise DegenerateTriangleError("faces must be a non-empty (F, 3) array")
    if f.min() < 0 or f.max() >= mesh.vertex_count:
        raise DegenerateTriangleError("face references a vertex index out of range")
    repeated = (f[:, 0] == f[:, 1]) | (f[:, 1] == f[:, 2]) | (f[:, 2] == f[:, 0])
    if repeated.any():
        face = int(np.flatnonzero(repeated)[0])
        raise DegenerateTriangleError(
            f"face {face} {tuple(int(v) for v in f[face])} repeats a vertex", face=face
        )


def _check_edges(mesh: TriangleMesh) -> None:
    """Each undirected edge in exactly two faces, once in each direction."""
    f = mesh.faces
    directed = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
    undirected = np.sort(directed, axis=1)

    edges, counts = np.unique(undirected, axis=0, return_counts=True)
    if (counts == 1).any():
        u, v = edges[np.flatnonzero(counts == 1)[0]]
        raise NotClosedError(f"boundary edge ({u}, {v}) belongs to one face", edge=(int(u), int(v)))
    if (counts > 2).any():
        u, v = edges[np.flatnonzero(counts > 2)[0]]
        raise NonManifoldEdgeError(
            f"edge ({u}, {v}) belongs to more than two faces", edge=(int(u), int(v))
        )

    half_edges, half_counts = np.unique(directed, axis=0, return_counts=True)
    if (half_counts > 1).any():
        u, v = half_edges[np.flatnonzero(half_counts > 1)[0]]
        raise NotOrientableError(
            f"edge ({u}, {v}) is traversed in the same direction by both faces",
            edge=(int(u), int(v)),
        )


def _check_connected(mesh: TriangleMesh) -> None:
    V = mesh.vertex_count
    u, v = mesh.edges[:, 0], mesh.edges[:, 1]
    adjacency = sparse.coo_matrix((np.ones(len(u)), (u, v)), shape=(V, V))
    n_components, labels = connected_components(adjacency, directed=False)
    if n_components > 1:
        counts = np.bincount(labels)
        vertex = int(np.flatnonzero(labels != np.argmax(counts))[0])
        raise DisconnectedError(
            f"mesh has {n_components} components; vertex {vertex} is not in the largest",
            vertex=vertex,
        )


def _check_lengths(mesh: TriangleMesh) -> None:
    lengths = mesh.edge_lengths
    if lengths.shape != (mesh.edge_count,):
        raise InconsistentGeometryError(
            f"expected {mesh.edge_count} edge lengths, got {lengths.shape}"
        )
    if not np.all(lengths > 0):
        e = int(np.flatnonzero(~(lengths > 0))[0])
        raise DegenerateTriangleError(
            f"edge {tuple(int(x) for x in mesh.edges[e])} has non-positive length"
        )

    L = face_lengths(mesh)
    longest = L.max(axis=1)
    if not np.all(longest < L.sum(axis=1) - longest):
        face = int(np.flatnonzero(~(longest < L.sum(axis=1) - longest))[0])
        raise DegenerateTriangleError(
            f"face {face} {tuple(int(v) for v in mesh.faces[face])} violates the strict "
            "triangle inequality",
            face=face,
        )

    if mesh.positions is not None:
        p = mesh.positions
        if p.shape != (mesh.vertex_count, 3):
            raise InconsistentGeometryError(f"positions have shape {p.shape}")
        euclidean = np.linalg.norm(p[mesh.edges[:, 0]] - p[mesh.edges[:, 1]], axis=1)
        if not np.allclose(lengths, euclidean, rtol=POSITION_LENGTH_RTOL, atol=0.0):
            e = int(np.argmax(np.abs(lengths - euclidean) / euclidean))
            raise InconsistentGeometryError(
                f"edge {tuple(int(x) for x in mesh.edges[e])} length disagrees with positions"
            )


def validate(mesh: TriangleMesh) -> MeshInvariants:
    """
    Check every TriangleMesh invariant and report topology.

    Args:
        mesh: Mesh to check

    Returns:
        MeshInvariants with χ, genus, area, counts and the minimum angle.

    Raises:
        NotClosedError, NotOrientableError, DisconnectedError,
        DegenerateTriangleError, InconsistentGeometryError: naming the
        offending simplex.
    """
    _check_faces(mesh)
    _check_edges(mesh)
    _check_lengths(mesh)
    _check_connected(mesh)

    V, E, F = mesh.vertex_count, mesh.edge_count, mesh.face_count
    chi = V - E + F
    if chi % 2:
        raise NotOrientableError(f"odd Euler characteristic {chi}")

    areas = heron_areas(face_lengths(mesh))
    if not np.all(areas > 0):
        face = int(np.flatnonzero(~(areas > 0))[0])
        raise DegenerateTriangleError(f"face {face} has zero area", face=face)

    return MeshInvariants(
        euler_characteristic=chi,
        genus=(2 - chi) // 2,
        total_area=float(areas.sum()),
        vertex_count=V,
        edge_count=E,
        face_count=F,
        min_angle=float(corner_angles(mesh).min()),
    )


__all__ = ["validate"]
