"""
Unit tests for run configuration, report writers and argument parsing.
"""

import csv
import io
import json
import math

import pytest

from src.cli.config import RunConfig, resolve_family, spec_with
from src.cli.main import _level_range, build_parser, config_from_args, main
from src.cli.pipeline import analytic_reference
from src.cli.report import VerificationReport, format_value, rows_to_csv, write_text
from src.errors import InvalidSpecError
from src.mesh.schema import SurfaceFamily, SurfaceSpec


class TestRunConfig:
    """Tests for run configuration and sweep parameters."""

    def test_defaults_from_settings(self, override_settings):
        """Test that SBV_ variables change the run defaults."""
        override_settings(mu_grid=96, steiner_level=1)
        config = RunConfig()
        assert config.mu_grid == 96
        assert config.steiner_level == 1
        assert config.surface.family is SurfaceFamily.UNIT_SPHERE_ICOSA

    def test_surface_checked_at_run_time(self):
        """Test that an invalid surface is accepted here and reported by the run."""
        config = RunConfig(surface=SurfaceSpec(family=SurfaceFamily.ELLIPSOID, a=-1.0))
        with pytest.raises(InvalidSpecError):
            config.surface.check()

    @pytest.mark.parametrize(
        "name, family",
        [
            ("sphere", SurfaceFamily.UNIT_SPHERE_ICOSA),
            ("flat-torus", SurfaceFamily.FLAT_TORUS),
            ("torus", SurfaceFamily.TORUS_OF_REVOLUTION),
            ("perturbed_sphere", SurfaceFamily.PERTURBED_SPHERE),
        ],
    )
    def test_resolve_family(self, name, family):
        """Test command-line family spellings."""
        assert resolve_family(name) is family

    def test_spec_with(self):
        """Test sweep parameter substitution."""
        spec = SurfaceSpec(family=SurfaceFamily.TORUS_OF_REVOLUTION, major_radius=2.0)
        assert spec_with(spec, "r/R", 0.25).minor_radius == pytest.approx(0.5)
        assert spec_with(spec, "R", 3.0).major_radius == 3.0
        assert spec_with(spec, "grid", 12.0).grid == 12
        assert isinstance(spec_with(spec, "resolution", 2.0).resolution, int)
        with pytest.raises(ValueError):
            spec_with(spec, "radius", 1.0)

    def test_analytic_reference(self):
        """Test closed-form values for the sphere and the flat torus."""
        sphere = analytic_reference(SurfaceSpec(family=SurfaceFamily.UNIT_SPHERE_ICOSA, scale=2))
        assert sphere == {"kappa": 0.25, "lambda1": 0.5, "D": 2.0 * math.pi}
        flat = analytic_reference(SurfaceSpec(family=SurfaceFamily.FLAT_TORUS, a=3.0, b=4.0))
        assert flat["D"] == pytest.approx(2.5)
        assert analytic_reference(SurfaceSpec(family=SurfaceFamily.ELLIPSOID)) is None


class TestReport:
    """Tests for report serialization."""

    def test_format_value(self):
        """Test 17 significant digits and lowercase booleans."""
        assert format_value(0.1) == "0.10000000000000001"
        assert format_value(True) == "true"
        assert format_value(None) == ""
        assert format_value(3) == "3"

    def test_rows_to_csv_union_of_columns(self):
        """Test that columns are the union of row keys in first-seen order."""
        text = rows_to_csv([{"a": 1.5, "ok": True}, {"a": 2.0, "error": "x"}])
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["a", "ok", "error"]
        assert rows[1] == ["1.5", "true", ""]
        assert rows[2] == ["2", "", "x"]

    def test_write_text(self, tmp_path):
        """Test parent directory creation and the no-file case."""
        path = write_text("hello\n", tmp_path / "deep" / "out.txt")
        assert path.read_text() == "hello\n"
        assert write_text("ignored", None) is None

    def test_empty_report(self):
        """Test an error-only report."""
        report = VerificationReport(config={}, error="mesh: invalid-spec: bad")
        data = json.loads(report.to_json())
        assert data["schema_version"] == 1
        assert data["ok"] is False
        assert report.to_row() == {"ok": False, "error": "mesh: invalid-spec: bad"}


class TestArguments:
    """Tests for the command-line parser."""

    def test_level_range(self):
        """Test LO..HI parsing."""
        assert _level_range("2..5") == [2, 3, 4, 5]
        assert _level_range("3") == [3]

    def test_verify_arguments(self):
        """Test that verify options reach the run configuration."""
        args = build_parser().parse_args(
            [
                "verify", "--surface", "flat-torus", "--a", "2", "--b", "1", "--grid", "12",
                "--steiner-level", "1", "--proofcheck", "--format", "csv", "--seed", "5",
            ]
        )
        config = config_from_args(args)
        assert config.surface.family is SurfaceFamily.FLAT_TORUS
        assert config.surface.a == 2.0
        assert config.surface.grid == 12
        assert config.steiner_level == 1
        assert config.proofcheck
        assert config.format.value == "csv"
        assert config.seed == 5

    def test_sweep_requires_param(self):
        """Test that sweep without --param exits."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["sweep", "--values", "1,2"])

    def test_jacobi_command(self, capsys):
        """Test the direct Jacobi evaluation."""
        code = main(["jacobi", "--lambda1", "0", "--H", "0", "--A2", "2"])
        data = json.loads(capsys.readouterr().out)
        assert code == 0
        assert data["lambda1_jacobi"] == -4.0
        assert data["ok"] is True

    def test_jacobi_failure_exit(self, capsys):
        """Test exit code 2 when a Jacobi relation fails."""
        assert main(["jacobi", "--lambda1", "1", "--H", "0", "--A2", "2"]) == 2
        capsys.readouterr()

    def test_generate_command(self, tmp_path):
        """Test writing a zoo surface."""
        out = tmp_path / "sphere.obj"
        argv = ["generate", "--surface", "sphere", "--resolution", "1", "--out", str(out)]
        assert main(argv) == 0
        assert out.read_text().count("\nv ") == 42

    def test_invalid_surface_exit(self, tmp_path):
        """Test exit code 1 on an invalid spec."""
        out = str(tmp_path / "e.obj")
        code = main(["generate", "--surface", "ellipsoid", "--c", "-1", "--out", out])
        assert code == 1
