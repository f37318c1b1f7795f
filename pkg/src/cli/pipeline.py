"""
Verification Pipeline.

Runs generate → validate → ddg → spectrum → geodesics → bounds (→ jacobi,
proofcheck) for one surface, and drives parameter sweeps and refinement
studies over many surfaces.
"""

import math
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from src.bounds.estimates import verify
from src.bounds.jacobi import cmc_embedding, jacobi_report
from src.cli.config import ReportFormat, RunConfig, spec_with
from src.cli.report import (
    DdgSection,
    MeshSection,
    SpectrumSection,
    TimingSection,
    VerificationReport,
    rows_to_csv,
    write_text,
)
from src.config import get_settings
from src.ddg.operators import (
    curvature,
    dump_matrix_market,
    gauss_bonnet_audit,
    mass,
    stiffness,
)
from src.errors import TooLargeError, VerificationError
from src.geodesics.diameter import diameter
from src.mesh.generate import generate
from src.mesh.io import load_mesh
from src.mesh.schema import SurfaceFamily, SurfaceSpec
from src.mesh.validate import validate
from src.proofcheck.paths import check_endpoint_pair
from src.spectrum.solver import assemble, dense_oracle, lowest_eigenpair
from src.utils.logging import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 2


class VerifyOutcome(BaseModel):
    exit_code: int
    report: VerificationReport
    path: Optional[Path] = None


class TableOutcome(BaseModel):
    exit_code: int
    rows: list[dict[str, Any]]
    path: Optional[Path] = None


# ============================================================================
# SINGLE RUN
# ============================================================================

@contextmanager
def _stage(timing: TimingSection, name: str) -> Iterator[None]:
    start = time.perf_counter()
    try:
        yield
    finally:
        timing.stages[name] = time.perf_counter() - start


def evaluate(config: RunConfig) -> VerificationReport:
    """
    Run the full pipeline and return the report.

    Raises:
        VerificationError: Any module failure; nothing is caught here.
    """
    settings = get_settings()
    report = VerificationReport(config=config.model_dump(mode="json"))
    timing = report.timing
    warnings = report.warnings

    with _stage(timing, "mesh"):
        if config.mesh_path is not None:
            mesh = load_mesh(Path(config.mesh_path))
            source, parameters = config.mesh_path, {}
        else:
            mesh = generate(config.surface)
            source, parameters = config.surface.family.value, config.surface.parameters()
        invariants = validate(mesh)
    report.mesh = MeshSection(
        source=source,
        tag=mesh.tag,
        parameters=parameters,
        **invariants.model_dump(),
    )
    if mesh.vertex_count < settings.coarse_mesh_vertices:
        warnings.append("coarse-mesh")

    with _stage(timing, "ddg"):
        S = stiffness(mesh)
        M = mass(mesh)
        field = curvature(mesh, M)
        audit = gauss_bonnet_audit(field, invariants)
    report.ddg = DdgSection(
        total_mass=M.total,
        kappa_min=field.kappa_min,
        kappa_max=field.kappa_max,
        gauss_bonnet=audit,
        stiffness_asymmetry=S.asymmetry(),
        stiffness_max_row_sum=float(np.max(np.abs(S.row_sums()))),
    )
    if not audit.passed:
        warnings.append("gauss-bonnet")

    with _stage(timing, "spectrum"):
        system = assemble(S, M, field)
        result = lowest_eigenpair(system, tol=config.eigen_tol, seed=config.seed)
        oracle_lambda1 = None
        if config.oracle:
            try:
                oracle_lambda1 = float(dense_oracle(system)[0])
            except TooLargeError as e:
                warnings.append("oracle-skipped")
                logger.info("oracle_skipped", reason=str(e))
    if config.dump_matrices:
        out = Path(config.dump_matrices)
        out.mkdir(parents=True, exist_ok=True)
        dump_matrix_market(S, out / "stiffness.mtx", comment="cotangent stiffness")
        dump_matrix_market(system.H, out / "schrodinger.mtx", comment="stiffness + 2 diag(defect)")

    summary = result.summary(include_eigenfunction=config.export_eigenfunction)
    report.spectrum = SpectrumSection(
        **summary,
        constant_rayleigh_quotient=system.constant_rayleigh_quotient,
        oracle_lambda1=oracle_lambda1,
        oracle_rel_diff=(
            None
            if oracle_lambda1 is None
            else abs(result.lambda1 - oracle_lambda1) / max(1.0, abs(oracle_lambda1))
        ),
    )
    if result.positivity_defect > 0:
        warnings.append("eigenfunction-sign-change")
    if result.restarted:
        warnings.append("eigensolver-restarted")

    with _stage(timing, "geodesics"):
        estimate = diameter(mesh, config.steiner_level, config.diameter_mode)
    report.diameter = estimate

    with _stage(timing, "bounds"):
        bounds = verify(
            mesh, field, result, estimate, settings.model_copy(update={"mu_grid": config.mu_grid})
        )
    report.bounds = bounds
    warnings.extend(f"bounds: {note}" for note in bounds.notes)

    if config.mesh_path is None:
        embedding = cmc_embedding(config.surface)
        if embedding is not None:
            h2 = embedding.H_cmc**2
            report.jacobi = jacobi_report(
                result.lambda1,
                embedding.H_cmc,
                embedding.A_norm_sq,
                embedding.umbilical,
                tol=settings.verification_tolerance(4.0 * (1.0 + h2)),
                embedding=embedding.name,
            )

    if config.proofcheck:
        with _stage(timing, "proofcheck"):
            report.proofcheck = check_endpoint_pair(
                mesh, field, result, estimate, steiner_level=config.steiner_level, settings=settings
            )

    report.ok = (
        bounds.ok
        and bounds.remark1_exact_ok
        and audit.passed
        and (report.jacobi is None or report.jacobi.ok)
        and (report.proofcheck is None or report.proofcheck.ok)
    )
    return report


def render_report(report: VerificationReport, fmt: ReportFormat) -> str:
    if fmt is ReportFormat.CSV:
        return rows_to_csv([report.to_row()])
    return report.to_json()


def run_verify(config: RunConfig) -> VerifyOutcome:
    """
    Verify one surface and write its report.

    Exit code 0 when every enabled check passes, 2 when a bound or audit check
    fails, 1 on an operational error (the error is recorded in the report).
    """
    try:
        report = evaluate(config)
        exit_code = EXIT_OK if report.ok else EXIT_FAILED
    except VerificationError as e:
        logger.error("verification_failed", module=e.module, code=e.code, message=e.message)
        report = VerificationReport(config=config.model_dump(mode="json"), error=str(e))
        exit_code = EXIT_ERROR

    path = write_text(render_report(report, config.format), config.output_path)
    logger.info("verify_completed", exit_code=exit_code, ok=report.ok, path=str(path))
    return VerifyOutcome(exit_code=exit_code, report=report, path=path)


# ============================================================================
# TABLES
# ============================================================================

def _row_for(config: RunConfig) -> dict[str, Any]:
    try:
        return evaluate(config).to_row()
    except VerificationError as e:
        logger.warning("row_failed", error=str(e))
        row: dict[str, Any] = {"source": config.surface.family.value}
        row.update(config.surface.parameters())
        row.update(ok=False, error=str(e))
        return row


def _map_rows(configs: Sequence[RunConfig]) -> list[dict[str, Any]]:
    workers = get_settings().thread_count(len(configs))
    if workers <= 1:
        return [_row_for(c) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_row_for, configs))


def _table_exit_code(rows: Sequence[dict[str, Any]]) -> int:
    if any(row.get("error") for row in rows):
        return EXIT_ERROR
    if not all(row.get("ok") for row in rows):
        return EXIT_FAILED
    return EXIT_OK


def run_sweep(config: RunConfig, parameter: str, values: Sequence[float]) -> TableOutcome:
    """
    Verify one family member per parameter value.

    Failing members become rows with an ``error`` column; the sweep continues.

    Raises:
        ValueError: Empty value list or unknown parameter.
    """
    if not values:
        raise ValueError("sweep needs at least one parameter value")
    configs = [
        config.model_copy(update={"surface": spec_with(config.surface, parameter, v)})
        for v in values
    ]
    rows = _map_rows(configs)
    for row, value in zip(rows, values):
        row["sweep_value"] = value
    path = write_text(rows_to_csv(rows), config.output_path)
    exit_code = _table_exit_code(rows)
    logger.info("sweep_completed", parameter=parameter, rows=len(rows), exit_code=exit_code)
    return TableOutcome(exit_code=exit_code, rows=rows, path=path)


def analytic_reference(spec: SurfaceSpec) -> Optional[dict[str, float]]:
    """Smooth κ, λ₁ and D where they are known in closed form."""
    s = spec.scale
    if spec.family is SurfaceFamily.UNIT_SPHERE_ICOSA:
        return {"kappa": 1.0 / s**2, "lambda1": 2.0 / s**2, "D": math.pi * s}
    if spec.family is SurfaceFamily.FLAT_TORUS:
        return {"kappa": 0.0, "lambda1": 0.0, "D": math.hypot(spec.a, spec.b) / 2.0 * s}
    return None


def _converge_row(config: RunConfig) -> dict[str, Any]:
    row: dict[str, Any] = {"level": config.surface.resolution}
    try:
        mesh = generate(config.surface)
        invariants = validate(mesh)
        M = mass(mesh)
        field = curvature(mesh, M)
        result = lowest_eigenpair(
            assemble(stiffness(mesh), M, field), tol=config.eigen_tol, seed=config.seed
        )
        estimate = diameter(mesh, config.steiner_level, config.diameter_mode)
        tuned = get_settings().model_copy(update={"mu_grid": config.mu_grid})
        bounds = verify(mesh, field, result, estimate, tuned)
    except VerificationError as e:
        logger.warning("level_failed", level=row["level"], error=str(e))
        row.update(ok=False, error=str(e))
        return row

    row.update(
        V=invariants.vertex_count,
        lambda1=result.lambda1,
        D=estimate.value,
        kappa_min=field.kappa_min,
        kappa_max=field.kappa_max,
        margin=bounds.margin,
    )
    reference = analytic_reference(config.surface)
    if reference is not None:
        row.update(
            lambda1_error=abs(result.lambda1 - reference["lambda1"]),
            D_error=abs(estimate.value - reference["D"]),
            kappa_error=float(np.max(np.abs(field.kappa - reference["kappa"]))),
        )
    row.update(ok=bounds.ok, error="")
    return row


def run_converge(config: RunConfig, levels: Sequence[int]) -> TableOutcome:
    """
    Refinement study: one row per resolution level.

    Rows carry λ₁, D, κ extremes and the μ = 1/2 margin, plus errors against
    the smooth values for the sphere and the flat torus.
    """
    if not levels:
        raise ValueError("convergence study needs at least one level")
    surfaces = [
        config.surface.model_copy(update={"resolution": level, "grid": None}) for level in levels
    ]
    configs = [config.model_copy(update={"surface": surface}) for surface in surfaces]
    workers = get_settings().thread_count(len(configs))
    if workers <= 1:
        rows = [_converge_row(c) for c in configs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_converge_row, configs))

    path = write_text(rows_to_csv(rows), config.output_path)
    exit_code = _table_exit_code(rows)
    logger.info("converge_completed", levels=list(levels), exit_code=exit_code)
    return TableOutcome(exit_code=exit_code, rows=rows, path=path)


__all__ = [
    "EXIT_OK",
    "EXIT_ERROR",
    "EXIT_FAILED",
    "VerifyOutcome",
    "TableOutcome",
    "evaluate",
    "render_report",
    "run_verify",
    "run_sweep",
    "run_converge",
    "analytic_reference",
]
