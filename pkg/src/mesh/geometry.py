"""
Edge-Length Geometry.

Per-face quantities computed purely from edge lengths (law of cosines,
Heron's formula), so embedded and intrinsic meshes are treated alike.
Corner c of a face is opposite the edge between corners (c+1) % 3 and (c+2) % 3.
"""

import numpy as np

from src.errors import DegenerateTriangleError
from src.mesh.schema import TriangleMesh


def face_lengths(mesh: TriangleMesh) -> np.ndarray:
    """(F, 3) edge lengths, column c opposite corner c."""
    return mesh.edge_lengths[mesh.face_edge_indices()]


def heron_areas(lengths: np.ndarray) -> np.ndarray:
    """
    Triangle areas from side lengths.

    Uses Kahan's ordering of Heron's formula, which stays accurate for
    needle-shaped triangles. Violations of the triangle inequality give NaN.

    Args:
        lengths: (F, 3) side lengths

    Returns:
        (F,) areas.
    """
    s = -np.sort(-lengths, axis=1)
    a, b, c = s[:, 0], s[:, 1], s[:, 2]
    with np.errstate(invalid="ignore"):
        product = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
        return 0.25 * np.sqrt(product)


def face_areas(mesh: TriangleMesh, strict: bool = True) -> np.ndarray:
    """
    (F,) face areas.

    Raises:
        DegenerateTriangleError: If ``strict`` and a face has zero or undefined area.
    """
    areas = heron_areas(face_lengths(mesh))
    if strict:
        bad = np.flatnonzero(~(areas > 0))
        if bad.size:
            f = int(bad[0])
            raise DegenerateTriangleError(
                f"face {f} {tuple(int(v) for v in mesh.faces[f])} has zero area", face=f
            )
    return areas


def corner_angles(mesh: TriangleMesh) -> np.ndarray:
    """(F, 3) interior angles in radians, column c at corner c."""
    L = face_lengths(mesh)
    a, b, c = L[:, 0], L[:, 1], L[:, 2]
    cos0 = (b * b + c * c - a * a) / (2.0 * b * c)
    cos1 = (c * c + a * a - b * b) / (2.0 * c * a)
    cos2 = (a * a + b * b - c * c) / (2.0 * a * b)
    cosines = np.clip(np.stack([cos0, cos1, cos2], axis=1), -1.0, 1.0)
    return np.arccos(cosines)


def corner_cotangents(mesh: TriangleMesh) -> np.ndarray:
    """
    (F, 3) cotangents of the corner angles.

    cot θ = (b² + c² − a²) / (4·Area), with a the side opposite the corner.
    """
    L = face_lengths(mesh)
    areas = face_areas(mesh)
    sq = L * L
    total = sq.sum(axis=1, keepdims=True)
    return (total - 2.0 * sq) / (4.0 * areas[:, None])


def face_layouts(mesh: TriangleMesh) -> np.ndarray:
    """
    (F, 3, 2) planar coordinates of each face's corners.

    Corner 0 at the origin, corner 1 on the positive x-axis, corner 2 in the
    upper half plane; distances reproduce the edge lengths exactly up to rounding.
    """
    L = face_lengths(mesh)
    l12, l20, l01 = L[:, 0], L[:, 1], L[:, 2]
    x = (l01 * l01 + l20 * l20 - l12 * l12) / (2.0 * l01)
    y = np.sqrt(np.maximum(l20 * l20 - x * x, 0.0))
    layout = np.zeros((mesh.face_count, 3, 2))
    layout[:, 1, 0] = l01
    layout[:, 2, 0] = x
    layout[:, 2, 1] = y
    return layout


def total_area(mesh: TriangleMesh) -> float:
    return float(face_areas(mesh).sum())


__all__ = [
    "face_lengths",
    "heron_areas",
    "face_areas",
    "corner_angles",
    "corner_cotangents",
    "face_layouts",
    "total_area",
]
