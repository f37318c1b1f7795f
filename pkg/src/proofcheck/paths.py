"""
Weighted Path Diagnostics.

Builds the curve minimizing ∫ v ds with v = q^μ between two vertices on the
Steiner graph, and evaluates along it the one-dimensional inequality

    (μλ₁ − max((2μ−1)κ)) ∫ψ² ds ≤ (4−μ)/(4−2μ) ∫(ψ′)² ds

with the first Dirichlet mode ψ(s) = sin(πs/l).
"""

import math
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator
from scipy.integrate import trapezoid
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.csgraph import dijkstra

from src.config import Settings, get_settings
from src.ddg.operators import CurvatureField
from src.errors import MuOutOfRangeError, NonpositiveEigenfunctionError, PathTooShortError
from src.geodesics.diameter import DiameterEstimate
from src.geodesics.graph import build_steiner_graph, nodes_per_edge
from src.mesh.schema import TriangleMesh
from src.spectrum.solver import SpectrumResult
from src.utils.logging import get_logger

logger = get_logger(__name__)

MIN_INEQUALITY_NODES = 4
MIN_EIGEN_NODES = 8
EIGEN_CHECK_NODES = 64
EIGEN_CHECK_REL_TOL = 0.02
DEFAULT_MUS = (0.5, 1.0, 1.5)


# ============================================================================
# MODELS
# ============================================================================

class PathSample(BaseModel):
    """Polyline on the Steiner graph, parametrized by arclength."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    nodes: np.ndarray = Field(description="Graph node ids; ids ≥ V are Steiner nodes")
    arclength: np.ndarray = Field(description="Cumulative arclength, starting at 0")
    length: float = Field(gt=0)
    v_values: np.ndarray = Field(description="v = q^μ at each node")
    endpoints: tuple[int, int]
    cost: float = Field(default=0.0, description="∫ v ds by the trapezoidal rule")
    mu: Optional[float] = None
    steiner_level: int = 0

    @model_validator(mode="after")
    def _check_parametrization(self) -> "PathSample":
        s = self.arclength
        if len(s) != len(self.nodes) or len(self.v_values) != len(self.nodes):
            raise ValueError("nodes, arclength and v_values must have equal length")
        if len(s) < 2 or s[0] != 0.0 or np.any(np.diff(s) <= 0):
            raise ValueError("arclength must start at 0 and increase strictly")
        if not math.isclose(self.length, float(s[-1]), rel_tol=1e-12):
            raise ValueError("length must equal the final arclength")
        if np.any(self.v_values <= 0):
            raise ValueError("v_values must be strictly positive")
        return self

    @property
    def node_count(self) -> int:
        return int(len(self.nodes))

    @classmethod
    def from_arclength(
        cls, arclength: Sequence[float], endpoints: tuple[int, int] = (0, 1)
    ) -> "PathSample":
        """Bare path with unit weight, for evaluating the 1-D diagnostics alone."""
        s = np.asarray(arclength, dtype=float)
        return cls(
            nodes=np.arange(len(s)),
            arclength=s,
            length=float(s[-1]),
            v_values=np.ones(len(s)),
            endpoints=endpoints,
            cost=float(s[-1]),
        )


class PathDiagnostic(BaseModel):
    """Both sides of the path inequality along one path."""

    mu: float
    lambda1: float
    length: float
    nodes: int
    psi_norm_sq: float = Field(description="∫ψ² ds")
    dpsi_norm_sq: float = Field(description="∫(ψ′)² ds")
    rayleigh: float = Field(description="∫(ψ′)²/∫ψ², close to π²/l²")
    lhs: float
    rhs: float
    slack: float = Field(description="rhs − lhs")
    diameter_slack: Optional[float] = Field(
        default=None, description="Same inequality with l replaced by the diameter"
    )
    asserted: bool
    ok: bool


class EndpointCheck(BaseModel):
    """Weighted path and diagnostics at one μ."""

    mu: float
    endpoints: tuple[int, int]
    path_length: float
    path_cost: float
    path_nodes: int
    eigen_check: Optional[float] = None
    eigen_reference: float = Field(description="π²/l²")
    eigen_check_ok: Optional[bool] = None
    inequality: PathDiagnostic


class ProofcheckReport(BaseModel):
    """Proofcheck results for the diameter-attaining endpoint pair."""

    asserted: bool
    checks: list[EndpointCheck] = Field(default_factory=list)
    error: Optional[str] = None

    @computed_field
    @property
    def ok(self) -> bool:
        # unasserted runs keep per-check ok/slack as data only
        if not self.asserted:
            return True
        if self.error is not None:
            return False
        return all(
            check.inequality.ok and check.eigen_check_ok is not False for check in self.checks
        )


# ============================================================================
# PATHS
# ============================================================================

def node_values(
    mesh: TriangleMesh, steiner_level: int, vertex_values: np.ndarray, nodes: np.ndarray
) -> np.ndarray:
    """Values at graph nodes, linear along edges between the vertex values."""
    V = mesh.vertex_count
    nodes = np.asarray(nodes, dtype=np.int64)
    out = np.empty(len(nodes))
    vertex = nodes < V
    out[vertex] = vertex_values[nodes[vertex]]
    s = nodes_per_edge(steiner_level)
    if s and np.any(~vertex):
        offset = nodes[~vertex] - V
        edge, m = offset // s, offset % s
        t = (m + 1) / (s + 1)
        lo = vertex_values[mesh.edges[edge, 0]]
        hi = vertex_values[mesh.edges[edge, 1]]
        out[~vertex] = (1.0 - t) * lo + t * hi
    return out


def _trapezoid_cost(segments: np.ndarray, v: np.ndarray) -> float:
    return float(np.sum(segments * 0.5 * (v[:-1] + v[1:])))


def weighted_path(
    mesh: TriangleMesh,
    q: np.ndarray | SpectrumResult,
    mu: float,
    a: int,
    b: int,
    steiner_level: Optional[int] = None,
) -> PathSample:
    """
    Path from ``a`` to ``b`` minimizing ∫ q^μ ds on the Steiner graph.

    Arc weight is arc length times the mean of v at its ends; the returned
    arclength is measured in the original metric.

    Args:
        mesh: Valid mesh
        q: Eigenfunction, or the spectrum result carrying it
        mu: Exponent in (0, 2)
        a: Start vertex
        b: End vertex, distinct from ``a``
        steiner_level: Steiner level (default from settings)

    Raises:
        NonpositiveEigenfunctionError: q is not strictly positive.
        MuOutOfRangeError: mu outside (0, 2).
    """
    if isinstance(q, SpectrumResult):
        q = q.q
    q = np.asarray(q, dtype=float)
    if not 0.0 < mu < 2.0:
        raise MuOutOfRangeError(f"mu must lie in (0, 2), got {mu}", module="proofcheck")
    if a == b:
        raise ValueError("path endpoints must differ")
    if np.any(q <= 0):
        raise NonpositiveEigenfunctionError(
            f"eigenfunction has {int(np.sum(q <= 0))} nonpositive vertex values"
        )

    level = get_settings().steiner_level if steiner_level is None else steiner_level
    graph = build_steiner_graph(mesh, level)
    v = graph.interpolate(mesh, q) ** mu
    dist, predecessors = dijkstra(
        graph.weighted(v), directed=False, indices=a, return_predecessors=True
    )
    if not np.isfinite(dist[b]):
        raise ValueError(f"vertex {b} unreachable from {a}")

    path = [b]
    while path[-1] != a:
        path.append(int(predecessors[path[-1]]))
    nodes = np.array(path[::-1], dtype=np.int64)

    segments = graph.arc_lengths_between(nodes[:-1], nodes[1:])
    arclength = np.concatenate([[0.0], np.cumsum(segments)])
    return PathSample(
        nodes=nodes,
        arclength=arclength,
        length=float(arclength[-1]),
        v_values=v[nodes],
        endpoints=(a, b),
        cost=float(dist[b]),
        mu=mu,
        steiner_level=level,
    )


def path_cost(mesh: TriangleMesh, path: PathSample, q: np.ndarray, mu: float) -> float:
    """∫ q^μ ds along ``path`` with the same trapezoidal arc weights."""
    v = node_values(mesh, path.steiner_level, np.asarray(q, dtype=float), path.nodes) ** mu
    return _trapezoid_cost(np.diff(path.arclength), v)


def shortest_path(
    mesh: TriangleMesh, a: int, b: int, steiner_level: Optional[int] = None
) -> PathSample:
    """Unweighted graph geodesic from ``a`` to ``b``."""
    return weighted_path(mesh, np.ones(mesh.vertex_count), 1.0, a, b, steiner_level)


# ============================================================================
# ONE-DIMENSIONAL CHECKS
# ============================================================================

def _sine_mode(path: PathSample) -> tuple[float, float]:
    s = path.arclength
    psi = np.sin(math.pi * s / path.length)
    psi_sq = float(trapezoid(psi * psi, s))
    dpsi_sq = float(np.sum(np.diff(psi) ** 2 / np.diff(s)))
    return psi_sq, dpsi_sq


def _curvature_coefficient(mu: float, lambda1: float, field: CurvatureField | np.ndarray) -> float:
    kappa = field.kappa if isinstance(field, CurvatureField) else np.atleast_1d(field)
    return mu * lambda1 - float(np.max((2.0 * mu - 1.0) * kappa))


def path_inequality(
    path: PathSample,
    lambda1: float,
    field: CurvatureField | np.ndarray,
    mu: float,
    D: Optional[float] = None,
    asserted: Optional[bool] = None,
    settings: Optional[Settings] = None,
) -> PathDiagnostic:
    """
    Evaluate both sides of the path inequality with ψ = sin(πs/l).

    ∫ψ² uses the trapezoidal rule, ∫(ψ′)² forward differences.

    Args:
        path: Path sample
        lambda1: First eigenvalue
        field: Curvature field (or raw κ values)
        mu: Exponent in (0, 2)
        D: Optional diameter; adds ``diameter_slack``
        asserted: Whether failure counts; default is V ≥ the assertion threshold
        settings: Threshold and slack allowance (default: cached settings)

    Raises:
        PathTooShortError: Fewer than 4 nodes.
    """
    settings = settings or get_settings()
    if path.node_count < MIN_INEQUALITY_NODES:
        raise PathTooShortError(
            f"path inequality needs at least {MIN_INEQUALITY_NODES} nodes, got {path.node_count}"
        )
    if not 0.0 < mu < 2.0:
        raise MuOutOfRangeError(f"mu must lie in (0, 2), got {mu}", module="proofcheck")

    psi_sq, dpsi_sq = _sine_mode(path)
    coefficient = _curvature_coefficient(mu, lambda1, field)
    ratio = (4.0 - mu) / (4.0 - 2.0 * mu)
    lhs = coefficient * psi_sq
    rhs = ratio * dpsi_sq
    slack = rhs - lhs

    diameter_slack = None
    if D is not None:
        diameter_slack = ratio * math.pi**2 / D**2 - coefficient

    if asserted is None:
        if isinstance(field, CurvatureField):
            vertex_count = field.vertex_count
        else:
            vertex_count = len(np.atleast_1d(field))
        asserted = vertex_count >= settings.proofcheck_assert_vertices

    return PathDiagnostic(
        mu=mu,
        lambda1=lambda1,
        length=path.length,
        nodes=path.node_count,
        psi_norm_sq=psi_sq,
        dpsi_norm_sq=dpsi_sq,
        rayleigh=dpsi_sq / psi_sq,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        diameter_slack=diameter_slack,
        asserted=asserted,
        ok=slack >= -settings.proofcheck_slack_fraction * abs(rhs),
    )


def path_eigen_check(path: PathSample) -> float:
    """
    Smallest eigenvalue of −d²/ds² on the path with Dirichlet ends.

    Linear elements on the arclength nodes with lumped mass, reduced to a
    symmetric tridiagonal matrix.

    Raises:
        PathTooShortError: Fewer than 8 nodes.
    """
    if path.node_count < MIN_EIGEN_NODES:
        raise PathTooShortError(
            f"path eigenvalue check needs at least {MIN_EIGEN_NODES} nodes, got {path.node_count}"
        )
    h = np.diff(path.arclength)
    inv = 1.0 / h
    stiffness_diag = inv[:-1] + inv[1:]
    stiffness_off = -inv[1:-1]
    lumped = 0.5 * (h[:-1] + h[1:])
    scale = 1.0 / np.sqrt(lumped)
    diag = stiffness_diag * scale * scale
    off = stiffness_off * scale[:-1] * scale[1:]
    values = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, 0))
    return float(values[0])


# ============================================================================
# ENDPOINT PAIR
# ============================================================================

def check_endpoint_pair(
    mesh: TriangleMesh,
    field: CurvatureField,
    spectrum_result: SpectrumResult,
    diameter_estimate: DiameterEstimate,
    mus: Sequence[float] = DEFAULT_MUS,
    steiner_level: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> ProofcheckReport:
    """
    Run the path diagnostics for the diameter-attaining vertex pair.

    Diagnostics are asserted on meshes with at least the configured number of
    vertices; below that they are recorded only. Failures to build a path
    (nonpositive eigenfunction, short path) are recorded in ``error``.
    """
    settings = settings or get_settings()
    level = diameter_estimate.steiner_level if steiner_level is None else steiner_level
    asserted = mesh.vertex_count >= settings.proofcheck_assert_vertices
    a, b = diameter_estimate.attained_pair
    report = ProofcheckReport(asserted=asserted)

    try:
        for mu in mus:
            path = weighted_path(mesh, spectrum_result.q, mu, a, b, level)
            diagnostic = path_inequality(
                path,
                spectrum_result.lambda1,
                field,
                mu,
                D=diameter_estimate.value,
                asserted=asserted,
                settings=settings,
            )
            reference = math.pi**2 / path.length**2
            eigen = None
            eigen_ok = None
            if path.node_count >= MIN_EIGEN_NODES:
                eigen = path_eigen_check(path)
                if path.node_count >= EIGEN_CHECK_NODES:
                    eigen_ok = abs(eigen - reference) <= EIGEN_CHECK_REL_TOL * reference
            report.checks.append(
                EndpointCheck(
                    mu=mu,
                    endpoints=(a, b),
                    path_length=path.length,
                    path_cost=path.cost,
                    path_nodes=path.node_count,
                    eigen_check=eigen,
                    eigen_reference=reference,
                    eigen_check_ok=eigen_ok,
                    inequality=diagnostic,
                )
            )
    except (NonpositiveEigenfunctionError, PathTooShortError) as e:
        report.error = str(e)
        logger.warning("proofcheck_skipped", reason=str(e), asserted=asserted)

    logger.info("proofcheck_completed", asserted=asserted, checks=len(report.checks), ok=report.ok)
    return report


__all__ = [
    "PathSample",
    "PathDiagnostic",
    "EndpointCheck",
    "ProofcheckReport",
    "node_values",
    "weighted_path",
    "path_cost",
    "shortest_path",
    "path_inequality",
    "path_eigen_check",
    "check_endpoint_pair",
]
