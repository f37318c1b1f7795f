"""
Test-Surface Generation.

Factory for the surface zoo: icosahedral spheres, ellipsoids and perturbed
spheres, tori of revolution, and intrinsic flat tori.
"""

import math

import numpy as np

from src.errors import ResolutionTooLowError
from src.mesh.refine import project_to_surface, refine
from src.mesh.schema import SurfaceFamily, SurfaceSpec, TriangleMesh
from src.utils.logging import get_logger

logger = get_logger(__name__)


# Golden-ratio icosahedron, counterclockwise seen from outside
_PHI = (1.0 + math.sqrt(5.0)) / 2.0

ICOSAHEDRON_VERTICES = np.array(
    [
        [-1.0, _PHI, 0.0],
        [1.0, _PHI, 0.0],
        [-1.0, -_PHI, 0.0],
        [1.0, -_PHI, 0.0],
        [0.0, -1.0, _PHI],
        [0.0, 1.0, _PHI],
        [0.0, -1.0, -_PHI],
        [0.0, 1.0, -_PHI],
        [_PHI, 0.0, -1.0],
        [_PHI, 0.0, 1.0],
        [-_PHI, 0.0, -1.0],
        [-_PHI, 0.0, 1.0],
    ]
) / math.sqrt(1.0 + _PHI * _PHI)

ICOSAHEDRON_FACES = np.array(
    [
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ]
)

BASE_TORUS_CELLS = 8
MIN_TORUS_CELLS = 3


def _describe(spec: SurfaceSpec) -> str:
    params = ",".join(f"{k}={v:g}" for k, v in spec.parameters().items())
    return f"{spec.family.value}({params})"


def _initial_icosahedron(spec: SurfaceSpec) -> np.ndarray:
    """Icosahedron vertices mapped onto the family's surface (unscaled)."""
    unit = ICOSAHEDRON_VERTICES
    if spec.family is SurfaceFamily.ELLIPSOID:
        return unit * np.array([spec.a, spec.b, spec.c])
    if spec.family is SurfaceFamily.PERTURBED_SPHERE:
        return project_to_surface(unit, spec.model_copy(update={"scale": 1.0}))
    return unit.copy()


def _icosahedral(spec: SurfaceSpec) -> TriangleMesh:
    positions = spec.scale * _initial_icosahedron(spec)
    mesh = TriangleMesh.from_positions(ICOSAHEDRON_FACES, positions, tag=_describe(spec))
    for _ in range(spec.resolution):
        mesh = refine(mesh, spec)
    return mesh.model_copy(update={"tag": _describe(spec)})


def _periodic_grid(n_u: int, n_v: int) -> np.ndarray:
    """Faces of an n_u × n_v periodic grid, each cell split along (i,j)–(i+1,j+1)."""
    i, j = np.meshgrid(np.arange(n_u), np.arange(n_v), indexing="ij")
    i, j = i.ravel(), j.ravel()
    v00 = i * n_v + j
    v10 = ((i + 1) % n_u) * n_v + j
    v11 = ((i + 1) % n_u) * n_v + (j + 1) % n_v
    v01 = i * n_v + (j + 1) % n_v
    return np.concatenate(
        [np.stack([v00, v10, v11], axis=1), np.stack([v00, v11, v01], axis=1)]
    )


def _grid_cells(spec: SurfaceSpec) -> int:
    n = spec.grid if spec.grid is not None else BASE_TORUS_CELLS * 2**spec.resolution
    if n < MIN_TORUS_CELLS:
        raise ResolutionTooLowError(
            f"{spec.family.value} needs at least {MIN_TORUS_CELLS} cells per direction "
            f"(got {n}, giving {n * n} vertices)"
        )
    return n


def _flat_torus(spec: SurfaceSpec) -> TriangleMesh:
    n = _grid_cells(spec)
    faces = _periodic_grid(n, n)
    du = spec.scale * spec.a / n
    dv = spec.scale * spec.b / n
    diagonal = math.hypot(du, dv)

    # Corner pairs of the first triangle per cell: (v00,v10), (v10,v11), (v00,v11)
    cells = faces[: n * n]
    v00, v10, v11 = cells[:, 0], cells[:, 1], cells[:, 2]
    v01 = faces[n * n :, 2]
    lengths: dict[tuple[int, int], float] = {}
    for a, b, value in ((v00, v10, du), (v00, v01, dv), (v00, v11, diagonal)):
        for p, q in zip(np.minimum(a, b).tolist(), np.maximum(a, b).tolist()):
            lengths[(p, q)] = value
    return TriangleMesh.from_lengths(n * n, faces, lengths, tag=_describe(spec))


def _torus_of_revolution(spec: SurfaceSpec) -> TriangleMesh:
    n_minor = _grid_cells(spec)
    n_major = max(n_minor, math.ceil(n_minor * spec.major_radius / spec.minor_radius))
    phi = 2.0 * np.pi * np.arange(n_major) / n_major
    theta = 2.0 * np.pi * np.arange(n_minor) / n_minor
    P, T = np.meshgrid(phi, theta, indexing="ij")
    ring = spec.major_radius + spec.minor_radius * np.cos(T)
    positions = np.stack(
        [ring * np.cos(P), ring * np.sin(P), spec.minor_radius * np.sin(T)], axis=-1
    ).reshape(-1, 3)
    faces = _periodic_grid(n_major, n_minor)
    return TriangleMesh.from_positions(faces, spec.scale * positions, tag=_describe(spec))


def generate(spec: SurfaceSpec) -> TriangleMesh:
    """
    Build the mesh described by ``spec``.

    Args:
        spec: Surface specification

    Returns:
        Closed triangle mesh; embedded families carry positions, the flat
        torus carries edge lengths only.

    Raises:
        InvalidSpecError: Parameter out of range.
        ResolutionTooLowError: The grid would not form a simplicial surface.
    """
    spec.check()

    if spec.family.is_icosahedral:
        mesh = _icosahedral(spec)
    elif spec.family is SurfaceFamily.FLAT_TORUS:
        mesh = _flat_torus(spec)
    else:
        mesh = _torus_of_revolution(spec)

    if mesh.vertex_count < 4:
        raise ResolutionTooLowError(f"{_describe(spec)} has only {mesh.vertex_count} vertices")

    logger.info(
        "mesh_generated",
        family=spec.family.value,
        vertices=mesh.vertex_count,
        edges=mesh.edge_count,
        faces=mesh.face_count,
    )
    return mesh


__all__ = ["generate", "ICOSAHEDRON_VERTICES", "ICOSAHEDRON_FACES"]
