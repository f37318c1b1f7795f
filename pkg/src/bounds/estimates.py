"""
Eigenvalue Bound Estimates.

Evaluates the μ-family of upper bounds

    λ₁ ≤ max((2μ−1)/μ · κ) + (4−μ)/(μ(4−2μ)) · π²/D²,    0 < μ < 2,

its universal case μ = 1/2 (7π²/(3D²)), the constant-test-function area bound
4πχ/Area, and turns them into pass/fail verdicts for a computed λ₁.
"""

import math
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, Field, computed_field
from scipy.optimize import minimize_scalar

from src.config import Settings, get_settings
from src.ddg.operators import CurvatureField
from src.errors import InconsistentInputsError, MuOutOfRangeError
from src.geodesics.diameter import DiameterEstimate
from src.mesh.schema import TriangleMesh
from src.spectrum.solver import POTENTIAL_SCALE, SpectrumResult
from src.utils.logging import get_logger

logger = get_logger(__name__)

UNIVERSAL_MU = 0.5
CONSTANT_QUOTIENT_TOL = 1e-10
# Curvature this close to zero is rounding on a flat mesh
FLAT_KAPPA_TOL = 1e-9
NEGATIVE_REGIME_NOTE = (
    "negative curvature present: bounds with mu > 1/2 may be negative; "
    "this regime is untested at scale"
)

CurvatureInput = Union[CurvatureField, np.ndarray, float]


# ============================================================================
# MODELS
# ============================================================================

class RhsEstimate(BaseModel):
    """Right-hand side of the bound at one μ."""

    mu: float
    curvature_term: float = Field(description="max over vertices of ((2μ−1)/μ)·κᵢ")
    diameter_term: float = Field(description="((4−μ)/(μ(4−2μ)))·π²/D²")
    rhs: float
    argmax_vertex: int = Field(description="Vertex attaining the curvature term")


class MuOptimum(BaseModel):
    """Smallest right-hand side found over μ."""

    best_mu: float
    best_rhs: float
    at_boundary: bool = Field(description="True when the minimizer is a grid endpoint")
    grid_size: int
    refined: bool = Field(description="Golden-section refinement improved the grid minimum")


class BoundReport(BaseModel):
    """Bound evaluation and verdicts for one mesh."""

    mu: float = UNIVERSAL_MU
    curvature_term: float
    diameter_term: float
    rhs: float
    lambda1: float
    margin: float = Field(description="rhs − lambda1 at μ = 1/2")
    universal_rhs: float
    area_bound: float
    area_margin: float
    best_mu: float
    best_rhs: float
    best_margin: float
    best_mu_at_boundary: bool
    diameter_used: DiameterEstimate

    euler_characteristic: int
    area: float
    remark1_exact_gap: float = Field(description="(2Σδ)/(ΣM) − λ₁")

    eq1_tol: float
    eq2_tol: float
    remark1_tol: float
    eq1_ok: bool
    eq2_ok: bool
    remark1_ok: bool
    remark1_exact_ok: bool

    negative_bound_mu: Optional[float] = Field(
        default=None, description="Smallest grid μ > 1/2 with a negative right-hand side"
    )
    notes: list[str] = Field(default_factory=list)

    @computed_field
    @property
    def ok(self) -> bool:
        return self.eq1_ok and self.eq2_ok and self.remark1_ok


# ============================================================================
# ESTIMATES
# ============================================================================

def _kappa(field: CurvatureInput) -> np.ndarray:
    if isinstance(field, CurvatureField):
        return np.asarray(field.kappa)
    return np.atleast_1d(np.asarray(field, dtype=float))


def _check_mu(mu: float) -> None:
    if not 0.0 < mu < 2.0:
        raise MuOutOfRangeError(f"mu must lie in (0, 2), got {mu}")


def _check_diameter(D: float) -> None:
    if not D > 0 or not math.isfinite(D):
        raise InconsistentInputsError(f"diameter must be positive and finite, got {D}")


def diameter_coefficient(mu: float) -> float:
    """(4−μ)/(μ(4−2μ))."""
    return (4.0 - mu) / (mu * (4.0 - 2.0 * mu))


def rhs_estimate(mu: float, field: CurvatureInput, D: float) -> RhsEstimate:
    """
    Right-hand side of the bound at ``mu``.

    The signed coefficient sits inside the max, so μ < 1/2 selects min κ and
    μ > 1/2 selects max κ.

    Args:
        mu: Parameter in (0, 2)
        field: Curvature field, or raw κ values
        D: Diameter

    Raises:
        MuOutOfRangeError: mu outside (0, 2).
    """
    _check_mu(mu)
    _check_diameter(D)
    kappa = _kappa(field)
    weighted = ((2.0 * mu - 1.0) / mu) * kappa
    argmax = int(np.argmax(weighted))
    curvature_term = float(weighted[argmax])
    diameter_term = diameter_coefficient(mu) * math.pi**2 / D**2
    return RhsEstimate(
        mu=mu,
        curvature_term=curvature_term,
        diameter_term=diameter_term,
        rhs=curvature_term + diameter_term,
        argmax_vertex=argmax,
    )


def universal_bound(D: float) -> float:
    """7π²/(3D²)."""
    _check_diameter(D)
    return 7.0 * math.pi**2 / (3.0 * D**2)


def area_bound(euler_characteristic: int, area: float) -> float:
    """4πχ/Area, the Rayleigh quotient of the constant function."""
    if area <= 0:
        raise InconsistentInputsError(f"area must be positive, got {area}")
    return 4.0 * math.pi * euler_characteristic / area


def mu_values(grid: int, mu_min: float) -> np.ndarray:
    """
    Candidate μ values: ``grid`` geometric points on [mu_min, 1], ``grid``
    uniform points on [mu_min, 2 − mu_min], plus 1/2.
    """
    mu_max = 2.0 - mu_min
    geometric = np.geomspace(mu_min, 1.0, grid)
    uniform = np.linspace(mu_min, mu_max, grid)
    return np.unique(np.concatenate([geometric, uniform, [UNIVERSAL_MU]]))


def optimize_mu(
    field: CurvatureInput,
    D: float,
    grid: Optional[int] = None,
    mu_min: Optional[float] = None,
) -> MuOptimum:
    """
    Minimize the right-hand side over μ.

    Grid search followed by golden-section refinement inside the bracket of
    the grid minimum's neighbours. A minimizer at a grid endpoint is reported
    as such rather than extrapolated.

    Args:
        field: Curvature field, or raw κ values
        D: Diameter
        grid: Points per grid family, at least 16 (default from settings)
        mu_min: Lower μ endpoint (default from settings)

    Returns:
        MuOptimum; best_rhs never exceeds the value at μ = 1/2.
    """
    settings = get_settings()
    grid = settings.mu_grid if grid is None else grid
    mu_min = settings.mu_min if mu_min is None else mu_min
    if grid < 16:
        raise ValueError(f"mu grid must have at least 16 points, got {grid}")
    _check_mu(mu_min)

    kappa = _kappa(field)

    def objective(mu: float) -> float:
        return rhs_estimate(mu, kappa, D).rhs

    mus = mu_values(grid, mu_min)
    values = np.array([objective(mu) for mu in mus])
    i = int(np.argmin(values))
    best_mu, best_rhs = float(mus[i]), float(values[i])
    at_boundary = i in (0, len(mus) - 1)

    refined = False
    if not at_boundary:
        lo, hi = float(mus[i - 1]), float(mus[i + 1])
        try:
            result = minimize_scalar(objective, bracket=(lo, best_mu, hi), method="golden")
        except ValueError:
            result = None
        if (
            result is not None
            and lo <= result.x <= hi
            and float(result.fun) < best_rhs
        ):
            best_mu, best_rhs = float(result.x), float(result.fun)
            refined = True

    return MuOptimum(
        best_mu=best_mu,
        best_rhs=best_rhs,
        at_boundary=at_boundary,
        grid_size=len(mus),
        refined=refined,
    )


def negative_bound_mu(field: CurvatureInput, D: float, grid: int, mu_min: float) -> Optional[float]:
    """Smallest grid μ in (1/2, 2) whose right-hand side is negative, if any."""
    for mu in mu_values(grid, mu_min):
        if mu > UNIVERSAL_MU and rhs_estimate(float(mu), field, D).rhs < 0:
            return float(mu)
    return None


# ============================================================================
# VERIFICATION
# ============================================================================

def verify(
    mesh: TriangleMesh,
    field: CurvatureField,
    spectrum_result: SpectrumResult,
    diameter_estimate: DiameterEstimate,
    settings: Optional[Settings] = None,
) -> BoundReport:
    """
    Check a computed λ₁ against every bound.

    Each flag allows tol = abs_tol + rel_tol·|rhs| for its own right-hand side.

    Args:
        mesh: Mesh the inputs were computed on
        field: Curvature field of ``mesh``
        spectrum_result: Lowest eigenpair of ``mesh``
        diameter_estimate: Diameter of ``mesh``
        settings: Tolerances and μ grid (default: cached settings)

    Raises:
        InconsistentInputsError: Inputs come from meshes of different size.
    """
    settings = settings or get_settings()
    V = mesh.vertex_count
    if field.vertex_count != V or len(spectrum_result.q) != V:
        raise InconsistentInputsError(
            f"mesh has {V} vertices, curvature {field.vertex_count}, "
            f"eigenfunction {len(spectrum_result.q)}"
        )
    if max(diameter_estimate.attained_pair) >= V:
        raise InconsistentInputsError(
            f"diameter pair {diameter_estimate.attained_pair} out of range for {V} vertices"
        )

    D = diameter_estimate.value
    lambda1 = spectrum_result.lambda1
    chi = V - mesh.edge_count + mesh.face_count
    area = field.areas.total

    half = rhs_estimate(UNIVERSAL_MU, field, D)
    universal = universal_bound(D)
    area_rhs = area_bound(chi, area)
    optimum = optimize_mu(field, D, settings.mu_grid, settings.mu_min)
    constant_quotient = POTENTIAL_SCALE * field.total_defect / area
    exact_gap = constant_quotient - lambda1

    eq1_tol = settings.verification_tolerance(optimum.best_rhs)
    eq2_tol = settings.verification_tolerance(universal)
    remark1_tol = settings.verification_tolerance(area_rhs)

    notes: list[str] = []
    negative_mu = None
    if field.kappa_min < -FLAT_KAPPA_TOL:
        negative_mu = negative_bound_mu(field, D, settings.mu_grid, settings.mu_min)
        notes.append(NEGATIVE_REGIME_NOTE)
    if optimum.at_boundary:
        notes.append(f"mu minimizer at grid endpoint {optimum.best_mu:.6g}")

    report = BoundReport(
        curvature_term=half.curvature_term,
        diameter_term=half.diameter_term,
        rhs=half.rhs,
        lambda1=lambda1,
        margin=half.rhs - lambda1,
        universal_rhs=universal,
        area_bound=area_rhs,
        area_margin=area_rhs - lambda1,
        best_mu=optimum.best_mu,
        best_rhs=optimum.best_rhs,
        best_margin=optimum.best_rhs - lambda1,
        best_mu_at_boundary=optimum.at_boundary,
        diameter_used=diameter_estimate,
        euler_characteristic=chi,
        area=area,
        remark1_exact_gap=exact_gap,
        eq1_tol=eq1_tol,
        eq2_tol=eq2_tol,
        remark1_tol=remark1_tol,
        eq1_ok=lambda1 <= optimum.best_rhs + eq1_tol,
        eq2_ok=lambda1 <= universal + eq2_tol,
        remark1_ok=lambda1 <= area_rhs + remark1_tol,
        remark1_exact_ok=exact_gap >= -CONSTANT_QUOTIENT_TOL,
        negative_bound_mu=negative_mu,
        notes=notes,
    )

    log = logger.info if report.ok else logger.warning
    log(
        "bounds_verified",
        lambda1=lambda1,
        universal_rhs=universal,
        best_rhs=optimum.best_rhs,
        best_mu=optimum.best_mu,
        area_bound=area_rhs,
        eq1_ok=report.eq1_ok,
        eq2_ok=report.eq2_ok,
        remark1_ok=report.remark1_ok,
    )
    return report


__all__ = [
    "RhsEstimate",
    "MuOptimum",
    "BoundReport",
    "diameter_coefficient",
    "rhs_estimate",
    "universal_bound",
    "area_bound",
    "mu_values",
    "optimize_mu",
    "negative_bound_mu",
    "verify",
]
