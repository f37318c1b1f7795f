"""
Discrete Differential Geometry Operators.

Cotangent stiffness, lumped barycentric mass and angle-defect Gauss curvature,
all assembled from edge lengths.
"""

import math
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import sparse
from scipy.io import mmwrite

from src.mesh.geometry import corner_angles, corner_cotangents, face_areas
from src.mesh.schema import MeshInvariants, TriangleMesh

GAUSS_BONNET_TOL_PER_VERTEX = 1e-8


class SparseSymOperator(BaseModel):
    """Symmetric sparse matrix in CSR form."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dimension: int
    matrix: sparse.csr_matrix

    def quadratic_form(self, x: np.ndarray) -> float:
        return float(x @ (self.matrix @ x))

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.matrix.sum(axis=1)).ravel()

    def asymmetry(self) -> float:
        """Largest absolute entry of A − Aᵀ."""
        diff = self.matrix - self.matrix.T
        return float(abs(diff).max()) if diff.nnz else 0.0


class MassVector(BaseModel):
    """Per-vertex lumped area."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray = Field(description="(V,) vertex areas")

    @property
    def total(self) -> float:
        return float(self.values.sum())

    def as_matrix(self) -> sparse.dia_matrix:
        return sparse.diags(self.values)


class CurvatureField(BaseModel):
    """Angle-defect Gauss curvature per vertex."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kappa: np.ndarray = Field(description="(V,) κᵢ = δᵢ / Mᵢ")
    defect: np.ndarray = Field(description="(V,) δᵢ = 2π − Σ incident angles")
    areas: MassVector

    @property
    def vertex_count(self) -> int:
        return int(len(self.kappa))

    @property
    def kappa_min(self) -> float:
        return float(self.kappa.min())

    @property
    def kappa_max(self) -> float:
        return float(self.kappa.max())

    @property
    def total_defect(self) -> float:
        return float(self.defect.sum())


class GaussBonnetAudit(BaseModel):
    """Comparison of the total angle defect with 2πχ."""

    total_defect: float
    expected: float = Field(description="2πχ")
    difference: float
    tolerance: float
    passed: bool


def stiffness(mesh: TriangleMesh) -> SparseSymOperator:
    """
    Cotangent stiffness matrix (discrete −Δ).

    Off-diagonal S_ij = −(cot α_ij + cot β_ij)/2 over the angles opposite edge
    ij; the diagonal is minus the off-diagonal row sum. Obtuse corners give
    negative weights, which are kept.

    Raises:
        DegenerateTriangleError: A face has zero area.
    """
    V = mesh.vertex_count
    f = mesh.faces
    half_cot = 0.5 * corner_cotangents(mesh)

    # Corner c is opposite the edge between corners (c+1)%3 and (c+2)%3
    I = np.concatenate([f[:, 1], f[:, 2], f[:, 0]])
    J = np.concatenate([f[:, 2], f[:, 0], f[:, 1]])
    W = np.concatenate([half_cot[:, 0], half_cot[:, 1], half_cot[:, 2]])

    off = sparse.coo_matrix((-W, (I, J)), shape=(V, V))
    off = (off + off.T).tocsr()
    diagonal = -np.asarray(off.sum(axis=1)).ravel()
    matrix = (off + sparse.diags(diagonal)).tocsr()
    matrix.sum_duplicates()
    return SparseSymOperator(dimension=V, matrix=matrix)


def mass(mesh: TriangleMesh) -> MassVector:
    """
    Barycentric lumped mass: a third of each incident triangle's area.

    Raises:
        DegenerateTriangleError: A face has zero area.
    """
    third = face_areas(mesh) / 3.0
    values = np.bincount(
        mesh.faces.ravel(), weights=np.repeat(third, 3), minlength=mesh.vertex_count
    )
    values.setflags(write=False)
    return MassVector(values=values)


def curvature(mesh: TriangleMesh, areas: MassVector | None = None) -> CurvatureField:
    """
    Angle-defect curvature κᵢ = δᵢ / Mᵢ.

    Args:
        mesh: Valid mesh
        areas: Lumped mass to divide by (computed when omitted)

    Returns:
        CurvatureField; κᵢMᵢ equals δᵢ by construction.
    """
    if areas is None:
        areas = mass(mesh)
    angle_sums = np.bincount(
        mesh.faces.ravel(), weights=corner_angles(mesh).ravel(), minlength=mesh.vertex_count
    )
    defect = 2.0 * math.pi - angle_sums
    kappa = defect / areas.values
    defect.setflags(write=False)
    kappa.setflags(write=False)
    return CurvatureField(kappa=kappa, defect=defect, areas=areas)


def gauss_bonnet_audit(field: CurvatureField, invariants: MeshInvariants) -> GaussBonnetAudit:
    """
    Check Σδᵢ = 2πχ.

    Passes iff |Σδᵢ − 2πχ| ≤ 1e-8·max(1, V).
    """
    total = field.total_defect
    expected = 2.0 * math.pi * invariants.euler_characteristic
    tolerance = GAUSS_BONNET_TOL_PER_VERTEX * max(1, invariants.vertex_count)
    difference = total - expected
    return GaussBonnetAudit(
        total_defect=total,
        expected=expected,
        difference=difference,
        tolerance=tolerance,
        passed=abs(difference) <= tolerance,
    )


def dump_matrix_market(operator: SparseSymOperator, path: Path, comment: str = "") -> Path:
    """Write ``operator`` in MatrixMarket coordinate format."""
    path = Path(path)
    mmwrite(str(path), operator.matrix, comment=comment, symmetry="symmetric")
    return path


__all__ = [
    "SparseSymOperator",
    "MassVector",
    "CurvatureField",
    "GaussBonnetAudit",
    "stiffness",
    "mass",
    "curvature",
    "gauss_bonnet_audit",
    "dump_matrix_market",
]
