"""
Mesh Refinement.

1→4 midpoint subdivision with optional reprojection of the new vertices onto
the exact surface named by a SurfaceSpec.
"""

from typing import Optional

import numpy as np

from src.mesh.schema import SurfaceFamily, SurfaceSpec, TriangleMesh, unique_edges
from src.utils.logging import get_logger

logger = get_logger(__name__)


# ============================================================================
# EXACT SURFACES
# ============================================================================

def _project_sphere(points: np.ndarray, spec: SurfaceSpec) -> np.ndarray:
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def _project_ellipsoid(points: np.ndarray, spec: SurfaceSpec) -> np.ndarray:
    axes = np.array([spec.a, spec.b, spec.c])
    norm = np.linalg.norm(points / axes, axis=1, keepdims=True)
    return points / norm


def _project_perturbed_sphere(points: np.ndarray, spec: SurfaceSpec) -> np.ndarray:
    unit = points / np.linalg.norm(points, axis=1, keepdims=True)
    theta = np.arccos(np.clip(unit[:, 2], -1.0, 1.0))
    radius = 1.0 + spec.amplitude * np.cos(spec.frequency * theta)
    return unit * radius[:, None]


def _project_torus(points: np.ndarray, spec: SurfaceSpec) -> np.ndarray:
    phi = np.arctan2(points[:, 1], points[:, 0])
    centre = spec.major_radius * np.stack([np.cos(phi), np.sin(phi), np.zeros_like(phi)], axis=1)
    offset = points - centre
    offset /= np.linalg.norm(offset, axis=1, keepdims=True)
    return centre + spec.minor_radius * offset


_PROJECTORS = {
    SurfaceFamily.UNIT_SPHERE_ICOSA: _project_sphere,
    SurfaceFamily.ELLIPSOID: _project_ellipsoid,
    SurfaceFamily.PERTURBED_SPHERE: _project_perturbed_sphere,
    SurfaceFamily.TORUS_OF_REVOLUTION: _project_torus,
}


def project_to_surface(points: np.ndarray, spec: SurfaceSpec) -> np.ndarray:
    """
    Map points (in scaled coordinates) onto the exact surface of ``spec``.

    Args:
        points: (N, 3) coordinates near the surface
        spec: Embedded surface specification

    Returns:
        (N, 3) projected coordinates.
    """
    projector = _PROJECTORS[spec.family]
    return spec.scale * projector(np.asarray(points, dtype=np.float64) / spec.scale, spec)


# ============================================================================
# SUBDIVISION
# ============================================================================

def _subdivide_faces(mesh: TriangleMesh) -> tuple[np.ndarray, np.ndarray]:
    """New (4F, 3) faces plus the (F, 3) midpoint indices (m12, m20, m01)."""
    V = mesh.vertex_count
    f = mesh.faces
    mids = V + mesh.face_edge_indices()
    m12, m20, m01 = mids[:, 0], mids[:, 1], mids[:, 2]
    faces = np.concatenate(
        [
            np.stack([f[:, 0], m01, m20], axis=1),
            np.stack([f[:, 1], m12, m01], axis=1),
            np.stack([f[:, 2], m20, m12], axis=1),
            np.stack([m01, m12, m20], axis=1),
        ]
    )
    return faces, mids


def _intrinsic_child_lengths(mesh: TriangleMesh, faces: np.ndarray, mids: np.ndarray) -> np.ndarray:
    """Edge lengths of the subdivided intrinsic mesh, aligned with unique_edges(faces)."""
    V = mesh.vertex_count
    E = mesh.edge_count
    half = 0.5 * mesh.edge_lengths

    # Halves of every parent edge
    parent = np.arange(E)
    u = np.concatenate([mesh.edges[:, 0], mesh.edges[:, 1]])
    w = np.concatenate([V + parent, V + parent])
    lengths = np.concatenate([half, half])

    # Midlines are half the parallel parent side
    L = mesh.edge_lengths[mesh.face_edge_indices()]
    m12, m20, m01 = mids[:, 0], mids[:, 1], mids[:, 2]
    u = np.concatenate([u, m01, m12, m20])
    w = np.concatenate([w, m12, m20, m01])
    lengths = np.concatenate([lengths, 0.5 * L[:, 1], 0.5 * L[:, 2], 0.5 * L[:, 0]])

    total = V + E
    new_edges = unique_edges(faces)
    keys = new_edges[:, 0] * total + new_edges[:, 1]
    query = np.minimum(u, w) * total + np.maximum(u, w)
    out = np.empty(len(new_edges))
    out[np.searchsorted(keys, query)] = lengths
    return out


def refine(mesh: TriangleMesh, spec: Optional[SurfaceSpec] = None) -> TriangleMesh:
    """
    Split every face into four through its edge midpoints.

    Args:
        mesh: Valid mesh
        spec: Optional surface; when it names an embedded family the new
            vertices are reprojected onto the exact surface

    Returns:
        Refined mesh with recomputed edge lengths; χ is preserved.
    """
    faces, mids = _subdivide_faces(mesh)
    tag = f"{mesh.tag}/refined" if mesh.tag else "refined"

    if mesh.positions is not None:
        midpoints = 0.5 * (
            mesh.positions[mesh.edges[:, 0]] + mesh.positions[mesh.edges[:, 1]]
        )
        if spec is not None and spec.family.is_embedded:
            midpoints = project_to_surface(midpoints, spec)
        positions = np.concatenate([mesh.positions, midpoints])
        refined = TriangleMesh.from_positions(faces, positions, tag=tag)
    else:
        lengths = _intrinsic_child_lengths(mesh, faces, mids)
        refined = TriangleMesh.from_lengths(
            mesh.vertex_count + mesh.edge_count, faces, lengths, tag=tag
        )

    logger.debug(
        "mesh_refined",
        vertices=refined.vertex_count,
        edges=refined.edge_count,
        faces=refined.face_count,
    )
    return refined


__all__ = ["refine", "project_to_surface"]
