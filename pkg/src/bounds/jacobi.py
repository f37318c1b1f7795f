"""
Jacobi Operator Relations.

For a CMC surface in the unit 3-sphere with mean curvature H and second
fundamental form A, the Jacobi operator is −Δ − |A|² − 2 and the Gauss
equation gives 2κ = 2 + 4H² − |A|², so its first eigenvalue is
λ₁ᴶ = λ₁ − 4 − 4H². This module evaluates that relation and the classical
upper bounds λ₁ᴶ ≤ −2 (minimal case) and λ₁ᴶ ≤ −4(1+H²) for non-umbilical
surfaces, with equality −2(1+H²) for umbilical spheres.
"""

import math
from typing import Optional

from pydantic import BaseModel, Field, computed_field

from src.errors import InconsistentInputsError
from src.mesh.schema import SurfaceFamily, SurfaceSpec

DEFAULT_TOL = 1e-12
FLAT_TORUS_SPHERE_TOL = 1e-9


class JacobiReport(BaseModel):
    """First Jacobi eigenvalue and the checks it must satisfy."""

    H_cmc: float = Field(description="Mean curvature of the immersion in S³")
    A_norm_sq: float = Field(ge=0, description="|A|², constant over the surface")
    lambda1: float
    kappa_from_gauss: float = Field(description="(2 + 4H² − |A|²)/2")
    lambda1_jacobi: float = Field(description="λ₁ − 4 − 4H²")
    umbilical: bool
    simons_ok: bool = Field(description="H = 0 implies λ₁ᴶ ≤ −2")
    alias_ok: bool
    tolerance: float
    embedding: Optional[str] = None

    @computed_field
    @property
    def ok(self) -> bool:
        return self.simons_ok and self.alias_ok


class CmcEmbedding(BaseModel):
    """Closed-form CMC data for a zoo surface isometric to a surface in S³."""

    name: str
    H_cmc: float
    A_norm_sq: float
    umbilical: bool


def jacobi_report(
    lambda1: float,
    H_cmc: float,
    A_norm_sq: float,
    umbilical: bool,
    tol: float = DEFAULT_TOL,
    embedding: Optional[str] = None,
) -> JacobiReport:
    """
    Evaluate the Jacobi relations for given CMC data.

    Args:
        lambda1: First eigenvalue of −Δ + 2κ
        H_cmc: Mean curvature
        A_norm_sq: Squared norm of the second fundamental form
        umbilical: Whether the surface is totally umbilical
        tol: Allowance on each inequality and on the umbilical equality
        embedding: Optional label of the closed-form source

    Raises:
        InconsistentInputsError: Negative |A|².
    """
    if A_norm_sq < 0:
        raise InconsistentInputsError(f"|A|^2 must be nonnegative, got {A_norm_sq}")

    h2 = H_cmc * H_cmc
    lambda1_jacobi = lambda1 - 4.0 - 4.0 * h2

    simons_ok = lambda1_jacobi <= -2.0 + tol if H_cmc == 0 else True
    if umbilical:
        alias_ok = abs(lambda1_jacobi + 2.0 * (1.0 + h2)) <= tol
    else:
        alias_ok = lambda1_jacobi <= -4.0 * (1.0 + h2) + tol

    return JacobiReport(
        H_cmc=H_cmc,
        A_norm_sq=A_norm_sq,
        lambda1=lambda1,
        kappa_from_gauss=(2.0 + 4.0 * h2 - A_norm_sq) / 2.0,
        lambda1_jacobi=lambda1_jacobi,
        umbilical=umbilical,
        simons_ok=simons_ok,
        alias_ok=alias_ok,
        tolerance=tol,
        embedding=embedding,
    )


def _round_radius(spec: SurfaceSpec) -> Optional[float]:
    family = spec.family
    if family is SurfaceFamily.UNIT_SPHERE_ICOSA:
        return spec.scale
    if family is SurfaceFamily.PERTURBED_SPHERE and spec.amplitude == 0:
        return spec.scale
    if family is SurfaceFamily.ELLIPSOID and spec.a == spec.b == spec.c:
        return spec.scale * spec.a
    return None


def cmc_embedding(spec: SurfaceSpec) -> Optional[CmcEmbedding]:
    """
    CMC data of a surface in the unit 3-sphere isometric to ``spec``, if known.

    A round sphere of radius s ≤ 1 is an umbilical sphere with H² = 1/s² − 1.
    A flat torus with sides 2πr₁, 2πr₂ and r₁² + r₂² = 1 is the product torus
    S¹(r₁)×S¹(r₂); r₁ = r₂ is the Clifford torus.
    """
    radius = _round_radius(spec)
    if radius is not None:
        if radius > 1.0:
            return None
        h2 = 1.0 / radius**2 - 1.0
        return CmcEmbedding(
            name="umbilical_sphere", H_cmc=math.sqrt(h2), A_norm_sq=2.0 * h2, umbilical=True
        )

    if spec.family is SurfaceFamily.FLAT_TORUS:
        r1 = spec.a * spec.scale / (2.0 * math.pi)
        r2 = spec.b * spec.scale / (2.0 * math.pi)
        if abs(r1 * r1 + r2 * r2 - 1.0) > FLAT_TORUS_SPHERE_TOL:
            return None
        ratio = r2 / r1
        name = "clifford_torus" if math.isclose(r1, r2, rel_tol=1e-12) else "product_torus"
        return CmcEmbedding(
            name=name,
            H_cmc=(ratio - 1.0 / ratio) / 2.0,
            A_norm_sq=ratio**2 + 1.0 / ratio**2,
            umbilical=False,
        )
    return None


__all__ = ["JacobiReport", "CmcEmbedding", "jacobi_report", "cmc_embedding"]
