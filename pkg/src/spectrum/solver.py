"""
Schrödinger Spectrum Solver.

Assembles the discrete operator −Δ+2κ as the generalized pair (H, M) with
H = S + 2·diag(δ) and lumped M, and computes its lowest eigenpair by shifted
inverse iteration. A dense solver serves as a brute-force oracle on small
meshes.
"""

from typing import Optional

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field
from scipy import sparse
from scipy.sparse.linalg import factorized

from src.config import get_settings
from src.ddg.operators import CurvatureField, MassVector, SparseSymOperator
from src.errors import DimensionMismatchError, NoConvergenceError, TooLargeError
from src.utils.logging import get_logger

logger = get_logger(__name__)

POTENTIAL_SCALE = 2.0
RESTART_SEED = 20170101


class SchrodingerSystem(BaseModel):
    """Generalized eigenproblem H q = λ M q for −Δ + 2κ."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    H: SparseSymOperator
    M: MassVector
    field: CurvatureField
    potential_scale: float = Field(default=POTENTIAL_SCALE)

    @property
    def dimension(self) -> int:
        return self.H.dimension

    @property
    def potential_min(self) -> float:
        """min_i 2κᵢ, a lower bound for λ₁."""
        return self.potential_scale * self.field.kappa_min

    @property
    def constant_rayleigh_quotient(self) -> float:
        """(2Σδᵢ)/(ΣMᵢ), the Rayleigh quotient of the constant vector."""
        return self.potential_scale * self.field.total_defect / self.M.total

    def default_shift(self) -> float:
        """σ = min(2κ) − max(1, |min(2κ)|), strictly below the spectrum."""
        low = self.potential_min
        return low - max(1.0, abs(low))

    def rayleigh_quotient(self, x: np.ndarray) -> float:
        return float(x @ (self.H.matrix @ x)) / float(x @ (self.M.values * x))

    def residual(self, q: np.ndarray, lam: float) -> float:
        """‖Hq − λMq‖ in the M⁻¹ norm over ‖q‖ in the M norm."""
        m = self.M.values
        r = self.H.matrix @ q - lam * m * q
        return float(np.sqrt(np.sum(r * r / m)) / np.sqrt(np.sum(m * q * q)))

    def relative_residual(self, q: np.ndarray, lam: float) -> float:
        """‖Hq − λMq‖ over ‖Mq‖, both Euclidean."""
        mq = self.M.values * q
        return float(np.linalg.norm(self.H.matrix @ q - lam * mq) / np.linalg.norm(mq))


class SpectrumResult(BaseModel):
    """Lowest eigenpair with solver diagnostics."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lambda1: float
    q: np.ndarray = Field(description="M-normalized eigenvector, Σ qᵢMᵢ > 0")
    residual: float = Field(description="M-weighted residual used as the stopping test")
    relative_residual: float = Field(default=0.0, description="‖Hq − λMq‖/‖Mq‖")
    iterations: int
    positivity_defect: float = Field(description="Fraction of vertices with qᵢ < 0")
    shift: float
    restarted: bool = False
    converged: bool = True

    def summary(self, include_eigenfunction: bool = False) -> dict:
        data = {
            "lambda1": self.lambda1,
            "residual": self.residual,
            "relative_residual": self.relative_residual,
            "iterations": self.iterations,
            "positivity_defect": self.positivity_defect,
            "shift": self.shift,
            "restarted": self.restarted,
            "converged": self.converged,
            "q_min": float(self.q.min()),
            "q_max": float(self.q.max()),
        }
        if include_eigenfunction:
            data["q"] = self.q.tolist()
        return data


def assemble(S: SparseSymOperator, M: MassVector, field: CurvatureField) -> SchrodingerSystem:
    """
    Build H = S + 2·diag(δ).

    Since κᵢMᵢ = δᵢ, the potential term is the mass-weighted 2κ.

    Raises:
        DimensionMismatchError: Inputs come from meshes of different size.
    """
    n = S.dimension
    if len(M.values) != n or field.vertex_count != n:
        raise DimensionMismatchError(
            f"stiffness has dimension {n}, mass {len(M.values)}, curvature {field.vertex_count}"
        )
    H = (S.matrix + sparse.diags(POTENTIAL_SCALE * field.defect)).tocsr()
    return SchrodingerSystem(H=SparseSymOperator(dimension=n, matrix=H), M=M, field=field)


def _normalize(x: np.ndarray, m: np.ndarray) -> np.ndarray:
    return x / np.sqrt(np.sum(m * x * x))


def lowest_eigenpair(
    system: SchrodingerSystem,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    shift: Optional[float] = None,
    seed: int = RESTART_SEED,
) -> SpectrumResult:
    """
    Smallest eigenpair of (H, M) by shifted inverse iteration.

    H − σM is positive definite for σ below min(2κ), so each step is a solve
    with one sparse factorization. The start vector is constant; if the
    residual stagnates the iteration restarts once from a fixed-seed random
    vector.

    Args:
        system: Assembled Schrödinger system
        tol: Residual tolerance (default from settings)
        max_iter: Iteration cap (default from settings)
        shift: Override for σ (must lie below the spectrum)
        seed: Seed of the restart vector

    Returns:
        SpectrumResult with M-normalized q, sign fixed so Σ qᵢMᵢ > 0.

    Raises:
        NoConvergenceError: Residual above ``tol`` after ``max_iter`` steps;
            the partial result is attached as ``.result``.
    """
    settings = get_settings()
    tol = settings.eigen_tol if tol is None else tol
    max_iter = settings.eigen_max_iter if max_iter is None else max_iter
    if tol <= 0:
        raise ValueError("tol must be positive")
    window = settings.stagnation_window

    sigma = system.default_shift() if shift is None else shift
    m = system.M.values
    H = system.H.matrix
    solve = factorized((H - sparse.diags(sigma * m)).tocsc())

    x = _normalize(np.ones(system.dimension), m)
    history: list[float] = []
    restarted = False
    lam = float(x @ (H @ x))
    residual = system.residual(x, lam)
    iterations = 0

    for iterations in range(1, max_iter + 1):
        x = _normalize(solve(m * x), m)
        lam = float(x @ (H @ x))
        residual = system.residual(x, lam)
        history.append(residual)
        if residual <= tol:
            break
        if (
            not restarted
            and len(history) > window
            and residual > 0.999 * history[-1 - window]
        ):
            rng = np.random.default_rng(seed)
            x = _normalize(rng.standard_normal(system.dimension), m)
            restarted = True
            history.clear()
            logger.warning("eigensolver_restart", iteration=iterations, residual=residual)

    if float(np.sum(m * x)) < 0:
        x = -x
    x.setflags(write=False)
    defect = float(np.mean(x < 0))

    result = SpectrumResult(
        lambda1=lam,
        q=x,
        residual=residual,
        relative_residual=system.relative_residual(x, lam),
        iterations=iterations,
        positivity_defect=defect,
        shift=sigma,
        restarted=restarted,
        converged=residual <= tol,
    )

    if not result.converged:
        logger.error(
            "eigensolver_no_convergence", iterations=iterations, residual=residual, tol=tol
        )
        raise NoConvergenceError(
            f"residual {residual:.3e} above tolerance {tol:.1e} after {iterations} iterations",
            result=result,
        )
    if defect > settings.positivity_warning_fraction:
        logger.warning(
            "eigenfunction_sign_change",
            positivity_defect=defect,
            threshold=settings.positivity_warning_fraction,
        )

    logger.info(
        "eigenpair_computed",
        lambda1=lam,
        residual=residual,
        iterations=iterations,
        shift=sigma,
        restarted=restarted,
    )
    return result


def dense_oracle(system: SchrodingerSystem, max_dimension: Optional[int] = None) -> np.ndarray:
    """
    All eigenvalues of (H, M), ascending, from a dense solve.

    The pair is reduced to the symmetric standard form M^(−1/2) H M^(−1/2).

    Raises:
        TooLargeError: Dimension above the cap (default 2000).
    """
    cap = get_settings().dense_max_dimension if max_dimension is None else max_dimension
    n = system.dimension
    if n > cap:
        raise TooLargeError(f"dense oracle limited to {cap} vertices, got {n}", module="spectrum")
    scale = 1.0 / np.sqrt(system.M.values)
    A = system.H.matrix.toarray() * scale[:, None] * scale[None, :]
    A = 0.5 * (A + A.T)
    return scipy.linalg.eigh(A, eigvals_only=True)


def eigenvalue_clusters(values: np.ndarray, tol: float = 1e-8) -> list[tuple[float, int]]:
    """Group sorted eigenvalues closer than ``tol`` (relative) into (value, multiplicity)."""
    clusters: list[tuple[float, int]] = []
    for value in values:
        if clusters and abs(value - clusters[-1][0]) <= tol * max(1.0, abs(value)):
            head, count = clusters[-1]
            clusters[-1] = (head, count + 1)
        else:
            clusters.append((float(value), 1))
    return clusters


__all__ = [
    "SchrodingerSystem",
    "SpectrumResult",
    "assemble",
    "lowest_eigenpair",
    "dense_oracle",
    "eigenvalue_clusters",
]
