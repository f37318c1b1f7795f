"""
Run Configuration.

Everything one verification run depends on. Defaults come from the
environment-backed settings, so ``SBV_*`` variables change them globally.
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field

from src.config import get_settings
from src.geodesics.diameter import DiameterMode
from src.geodesics.graph import MAX_STEINER_LEVEL
from src.mesh.schema import FAMILY_ALIASES, SurfaceFamily, SurfaceSpec
from src.spectrum.solver import RESTART_SEED


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


# Sweep parameter names accepted on the command line
SWEEP_PARAMETERS = {
    "a": "a",
    "b": "b",
    "c": "c",
    "R": "major_radius",
    "r": "minor_radius",
    "amplitude": "amplitude",
    "frequency": "frequency",
    "scale": "scale",
    "resolution": "resolution",
    "grid": "grid",
}

# Torus tube radius given as a fraction of the major radius
RATIO_PARAMETER = "r/R"


def resolve_family(name: str) -> SurfaceFamily:
    """Map a command-line family spelling to a SurfaceFamily."""
    if name in FAMILY_ALIASES:
        return FAMILY_ALIASES[name]
    return SurfaceFamily(name.replace("-", "_"))


def spec_with(spec: SurfaceSpec, parameter: str, value: float) -> SurfaceSpec:
    """Copy of ``spec`` with one sweep parameter replaced."""
    if parameter == RATIO_PARAMETER:
        return spec.model_copy(update={"minor_radius": value * spec.major_radius})
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(
            f"unknown sweep parameter '{parameter}'; "
            f"choose from {', '.join([*SWEEP_PARAMETERS, RATIO_PARAMETER])}"
        )
    field = SWEEP_PARAMETERS[parameter]
    if field in ("resolution", "frequency", "grid"):
        value = int(value)
    return spec.model_copy(update={field: value})


class RunConfig(BaseModel):
    """Configuration of one verification run."""

    surface: SurfaceSpec = Field(
        default_factory=lambda: SurfaceSpec(family=SurfaceFamily.UNIT_SPHERE_ICOSA)
    )
    mesh_path: Optional[str] = Field(
        default=None, description="Verify a mesh file instead of generating one"
    )
    mu_grid: int = Field(default_factory=lambda: get_settings().mu_grid, ge=16)
    steiner_level: int = Field(
        default_factory=lambda: get_settings().steiner_level, ge=0, le=MAX_STEINER_LEVEL
    )
    diameter_mode: Optional[DiameterMode] = None
    eigen_tol: float = Field(default_factory=lambda: get_settings().eigen_tol, gt=0)
    output_path: Optional[str] = None
    format: ReportFormat = ReportFormat.JSON
    seed: int = RESTART_SEED
    proofcheck: bool = False
    oracle: bool = False
    export_eigenfunction: bool = False
    dump_matrices: Optional[str] = None


__all__ = [
    "ReportFormat",
    "RunConfig",
    "SWEEP_PARAMETERS",
    "RATIO_PARAMETER",
    "resolve_family",
    "spec_with",
]
