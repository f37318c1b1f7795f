"""
Integration tests for parameter sweeps and refinement convergence tables.
"""

import csv

import numpy as np
import pytest

from src.cli.config import RunConfig
from src.cli.main import main
from src.cli.pipeline import EXIT_ERROR, EXIT_OK, run_converge, run_sweep
from src.mesh.schema import SurfaceFamily, SurfaceSpec


def _config(family: SurfaceFamily, steiner_level: int = 2, **params) -> RunConfig:
    return RunConfig(surface=SurfaceSpec(family=family, **params), steiner_level=steiner_level)


class TestSweep:
    """Tests for run_sweep."""

    def test_ellipsoid_axis(self, tmp_path):
        """Test the c sweep: one passing row per value, written as CSV."""
        out = tmp_path / "sweep.csv"
        config = _config(SurfaceFamily.ELLIPSOID, resolution=3).model_copy(
            update={"output_path": str(out)}
        )
        outcome = run_sweep(config, "c", [1.0, 1.25, 1.5, 2.0])

        assert outcome.exit_code == EXIT_OK
        with out.open() as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 4
        assert [float(row["c"]) for row in rows] == [1.0, 1.25, 1.5, 2.0]
        assert [float(row["sweep_value"]) for row in rows] == [1.0, 1.25, 1.5, 2.0]
        assert all(row["eq2_ok"] == "true" for row in rows)
        assert all(row["error"] == "" for row in rows)

    def test_torus_ratio(self):
        """Test tori of revolution over r/R."""
        config = _config(SurfaceFamily.TORUS_OF_REVOLUTION, major_radius=2.0, resolution=0)
        outcome = run_sweep(config, "r/R", [0.2, 0.3, 0.4])
        assert [row["r"] for row in outcome.rows] == pytest.approx([0.4, 0.6, 0.8])
        for row in outcome.rows:
            assert row["chi"] == 0
            assert row["kappa_min"] < 0 < row["kappa_max"]
            assert row["eq1_ok"] and row["eq2_ok"]

    def test_scale(self):
        """Test that the margin column scales as 1/c²."""
        config = _config(SurfaceFamily.UNIT_SPHERE_ICOSA, resolution=2, steiner_level=1)
        rows = run_sweep(config, "scale", [0.5, 1.0, 2.0]).rows
        base = rows[1]["margin"]
        assert rows[0]["margin"] == pytest.approx(base / 0.25, rel=1e-6)
        assert rows[2]["margin"] == pytest.approx(base / 4.0, rel=1e-6)

    def test_failed_member_recorded(self):
        """Test that an invalid member becomes an error row and the sweep continues."""
        config = _config(SurfaceFamily.ELLIPSOID, resolution=1, steiner_level=0)
        outcome = run_sweep(config, "c", [1.0, -1.0])
        assert outcome.exit_code == EXIT_ERROR
        assert outcome.rows[0]["error"] == ""
        assert outcome.rows[1]["error"].startswith("mesh: invalid-spec:")
        assert outcome.rows[1]["ok"] is False

    def test_rejects_bad_input(self):
        """Test an empty value list and an unknown parameter."""
        config = _config(SurfaceFamily.ELLIPSOID)
        with pytest.raises(ValueError):
            run_sweep(config, "c", [])
        with pytest.raises(ValueError):
            run_sweep(config, "radius", [1.0])

    def test_command_line(self, tmp_path):
        """Test the sweep subcommand end to end."""
        out = tmp_path / "flat.csv"
        code = main(
            [
                "sweep", "--surface", "flat-torus", "--grid", "8", "--steiner-level", "1",
                "--param", "b", "--values", "1,1.5", "--out", str(out),
            ]
        )
        assert code == EXIT_OK
        assert len(out.read_text().splitlines()) == 3


class TestConverge:
    """Tests for run_converge."""

    def test_sphere_levels(self, tmp_path):
        """Test errors against the smooth sphere over refinement levels."""
        out = tmp_path / "converge.csv"
        config = _config(SurfaceFamily.UNIT_SPHERE_ICOSA, steiner_level=1).model_copy(
            update={"output_path": str(out)}
        )
        outcome = run_converge(config, [1, 2, 3])
        rows = outcome.rows

        assert [row["level"] for row in rows] == [1, 2, 3]
        assert [row["V"] for row in rows] == [42, 162, 642]
        errors = [row["lambda1_error"] for row in rows]
        assert all(b < a for a, b in zip(errors, errors[1:]))
        assert rows[-1]["lambda1_error"] < 0.05
        with out.open() as f:
            header = next(csv.reader(f))
        assert {"level", "lambda1", "D", "margin", "lambda1_error", "D_error"} <= set(header)

    def test_flat_torus_levels(self):
        """Test that every flat torus level has λ₁ = 0 and κ = 0."""
        config = _config(SurfaceFamily.FLAT_TORUS, steiner_level=1)
        outcome = run_converge(config, [0, 1])
        assert outcome.exit_code == EXIT_OK
        assert [row["V"] for row in outcome.rows] == [64, 256]
        for row in outcome.rows:
            assert row["lambda1_error"] <= 1e-8
            assert row["kappa_error"] <= 1e-9

    def test_family_without_reference(self):
        """Test that error columns are omitted when no closed form is known."""
        config = _config(SurfaceFamily.ELLIPSOID, steiner_level=0, c=1.5)
        row = run_converge(config, [1]).rows[0]
        assert "lambda1_error" not in row
        assert row["error"] == ""

    def test_rejects_empty_levels(self):
        """Test an empty level range."""
        with pytest.raises(ValueError):
            run_converge(_config(SurfaceFamily.UNIT_SPHERE_ICOSA), [])


@pytest.mark.slow
class TestAcceptanceTables:
    """Full-resolution sweeps and refinement studies."""

    def test_sphere_convergence(self):
        """Test monotone decrease of the λ₁, D and κ errors over levels 2..5."""
        config = _config(SurfaceFamily.UNIT_SPHERE_ICOSA)
        rows = run_converge(config, [2, 3, 4, 5]).rows
        for column in ("lambda1_error", "D_error", "kappa_error"):
            values = [row[column] for row in rows]
            assert all(b < a for a, b in zip(values, values[1:])), column

    @pytest.mark.parametrize(
        "family, parameter, values, params",
        [
            (SurfaceFamily.ELLIPSOID, "c", np.linspace(1.0, 2.0, 5).tolist(), {}),
            (SurfaceFamily.TORUS_OF_REVOLUTION, "r/R", [0.2, 0.3, 0.4], {"resolution": 1}),
            (SurfaceFamily.PERTURBED_SPHERE, "amplitude", [0.0, 0.1, 0.2, 0.3], {}),
        ],
    )
    def test_full_sweep(self, family, parameter, values, params):
        """Test that both curvature bounds hold on every member."""
        config = _config(family, **{"resolution": 3, **params})
        outcome = run_sweep(config, parameter, values)
        for row in outcome.rows:
            assert row["error"] == ""
            assert row["eq1_ok"] and row["eq2_ok"]
