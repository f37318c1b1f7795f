"""
Report Models and Writers.

The JSON report is a versioned pydantic model; sweep and convergence tables
are written as CSV with 17 significant digits and no locale.
"""

import csv
import io
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Optional

from pydantic import BaseModel, Field

from src.bounds.estimates import BoundReport
from src.bounds.jacobi import JacobiReport
from src.ddg.operators import GaussBonnetAudit
from src.geodesics.diameter import DiameterEstimate
from src.proofcheck.paths import ProofcheckReport

SCHEMA_VERSION = 1


class MeshSection(BaseModel):
    source: str = Field(description="Family name or mesh file path")
    tag: str
    parameters: dict[str, float] = Field(default_factory=dict)
    vertex_count: int
    edge_count: int
    face_count: int
    euler_characteristic: int
    genus: int
    total_area: float
    min_angle: float


class DdgSection(BaseModel):
    total_mass: float
    kappa_min: float
    kappa_max: float
    gauss_bonnet: GaussBonnetAudit
    stiffness_asymmetry: float
    stiffness_max_row_sum: float = Field(description="max |Σⱼ Sᵢⱼ|, zero up to rounding")


class SpectrumSection(BaseModel):
    lambda1: float
    residual: float
    relative_residual: float
    iterations: int
    positivity_defect: float
    shift: float
    restarted: bool
    converged: bool
    q_min: float
    q_max: float
    constant_rayleigh_quotient: float
    oracle_lambda1: Optional[float] = None
    oracle_rel_diff: Optional[float] = None
    q: Optional[list[float]] = None


class TimingSection(BaseModel):
    """
    Wall-clock timestamp and per-stage durations.

    The only part of a report that changes between identical runs; compare
    reports for determinism with this section excluded.
    """

    timestamp: str = Field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )
    stages: dict[str, float] = Field(default_factory=dict)


class VerificationReport(BaseModel):
    """Top-level JSON report of one verification run."""

    schema_version: int = SCHEMA_VERSION
    config: dict[str, Any]
    mesh: Optional[MeshSection] = None
    ddg: Optional[DdgSection] = None
    spectrum: Optional[SpectrumSection] = None
    diameter: Optional[DiameterEstimate] = None
    bounds: Optional[BoundReport] = None
    jacobi: Optional[JacobiReport] = None
    proofcheck: Optional[ProofcheckReport] = None
    warnings: list[str] = Field(default_factory=list)
    ok: bool = False
    error: Optional[str] = None
    timing: TimingSection = Field(default_factory=TimingSection)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"

    def to_row(self) -> dict[str, Any]:
        """Flatten the headline quantities into one table row."""
        row: dict[str, Any] = {}
        if self.mesh is not None:
            row["source"] = self.mesh.source
            row.update(self.mesh.parameters)
            row["V"] = self.mesh.vertex_count
            row["chi"] = self.mesh.euler_characteristic
            row["area"] = self.mesh.total_area
        if self.ddg is not None:
            row["kappa_min"] = self.ddg.kappa_min
            row["kappa_max"] = self.ddg.kappa_max
        if self.spectrum is not None:
            row["lambda1"] = self.spectrum.lambda1
            row["residual"] = self.spectrum.residual
            row["relative_residual"] = self.spectrum.relative_residual
        if self.diameter is not None:
            row["D"] = self.diameter.value
            row["diameter_mode"] = self.diameter.mode.value
        if self.bounds is not None:
            b = self.bounds
            row.update(
                rhs_half=b.rhs,
                universal_rhs=b.universal_rhs,
                best_mu=b.best_mu,
                best_rhs=b.best_rhs,
                area_bound=b.area_bound,
                margin=b.margin,
                best_margin=b.best_margin,
                area_margin=b.area_margin,
                eq1_ok=b.eq1_ok,
                eq2_ok=b.eq2_ok,
                remark1_ok=b.remark1_ok,
            )
        row["ok"] = self.ok
        row["error"] = self.error or ""
        return row


def format_value(value: Any) -> str:
    """CSV cell text: floats at 17 significant digits, lowercase booleans."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def rows_to_csv(rows: Iterable[dict[str, Any]]) -> str:
    """Render rows to CSV; columns are the union of keys in first-seen order."""
    rows = list(rows)
    columns: list[str] = []
    for row in rows:
        columns.extend(key for key in row if key not in columns)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(column)) for column in columns])
    return buffer.getvalue()


def write_text(text: str, path: Optional[str | Path]) -> Optional[Path]:
    """Write ``text`` to ``path``, creating parent directories; None means no file."""
    if path is None:
        return None
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


__all__ = [
    "SCHEMA_VERSION",
    "MeshSection",
    "DdgSection",
    "SpectrumSection",
    "TimingSection",
    "VerificationReport",
    "format_value",
    "rows_to_csv",
    "write_text",
]
