"""
Mesh module.

Generation, refinement, validation and file I/O for closed triangulated surfaces.
"""

from src.mesh.schema import (
    FAMILY_ALIASES,
    MeshInvariants,
    SurfaceFamily,
    SurfaceSpec,
    TriangleMesh,
)
from src.mesh.generate import generate
from src.mesh.refine import project_to_surface, refine
from src.mesh.validate import validate
from src.mesh.io import (
    load_intrinsic,
    load_mesh,
    load_obj,
    save_intrinsic,
    save_mesh,
    save_obj,
)

__all__ = [
    "FAMILY_ALIASES",
    "MeshInvariants",
    "SurfaceFamily",
    "SurfaceSpec",
    "TriangleMesh",
    "generate",
    "refine",
    "project_to_surface",
    "validate",
    "load_obj",
    "save_obj",
    "load_intrinsic",
    "save_intrinsic",
    "load_mesh",
    "save_mesh",
]
