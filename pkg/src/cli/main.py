#!/usr/bin/env python3
"""
Stability Bound Verifier command line.

Usage:
    sbv generate --surface sphere --resolution 3 --out sphere.obj
    sbv verify --surface sphere --resolution 4 --out report.json
    sbv verify --surface flat-torus --a 1 --b 1 --proofcheck
    sbv sweep --surface ellipsoid --param c --values 1,1.25,1.5,2 --out sweep.csv
    sbv converge --surface sphere --levels 2..5 --out converge.csv
    sbv jacobi --lambda1 0 --H 0 --A2 2
"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from src.bounds.jacobi import jacobi_report
from src.cli.config import (
    RATIO_PARAMETER,
    SWEEP_PARAMETERS,
    ReportFormat,
    RunConfig,
    resolve_family,
)
from src.cli.pipeline import (
    EXIT_ERROR,
    EXIT_FAILED,
    EXIT_OK,
    render_report,
    run_converge,
    run_sweep,
    run_verify,
)
from src.cli.report import rows_to_csv
from src.config import get_settings
from src.errors import VerificationError
from src.geodesics.diameter import DiameterMode
from src.mesh.generate import generate
from src.mesh.io import save_mesh
from src.mesh.schema import FAMILY_ALIASES, SurfaceSpec
from src.mesh.validate import validate
from src.utils.logging import configure_logging


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _level_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            return [int(lo)]
        start, stop = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}")
    if stop < start:
        raise argparse.ArgumentTypeError(f"empty level range {text!r}")
    return list(range(start, stop + 1))


def _add_surface_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("surface")
    group.add_argument(
        "--surface",
        default="sphere",
        help=f"Surface family ({', '.join(FAMILY_ALIASES)})",
    )
    group.add_argument("--resolution", type=int, default=3, help="Refinement level")
    group.add_argument("--scale", type=float, default=1.0, help="Global length scale")
    group.add_argument("--a", type=float, default=1.0, help="Ellipsoid x semi-axis / torus side")
    group.add_argument("--b", type=float, default=1.0, help="Ellipsoid y semi-axis / torus side")
    group.add_argument("--c", type=float, default=1.0, help="Ellipsoid z semi-axis")
    group.add_argument("--R", dest="major_radius", type=float, default=2.0, help="Torus R")
    group.add_argument("--r", dest="minor_radius", type=float, default=0.5, help="Torus r")
    group.add_argument("--amplitude", type=float, default=0.1, help="Perturbation amplitude")
    group.add_argument("--frequency", type=int, default=3, help="Perturbation frequency")
    group.add_argument("--grid", type=int, default=None, help="Cells per torus direction")


def _add_run_arguments(parser: argparse.ArgumentParser) -> None:
    settings = get_settings()
    parser.add_argument("--mesh", default=None, help="Verify a mesh file (.obj or .intr)")
    parser.add_argument("--steiner-level", type=int, default=settings.steiner_level)
    parser.add_argument(
        "--diameter-mode",
        choices=[m.value for m in DiameterMode],
        default=None,
        help="Default: all pairs up to the vertex cap, double sweep above",
    )
    parser.add_argument("--mu-grid", type=int, default=settings.mu_grid)
    parser.add_argument("--eigen-tol", type=float, default=settings.eigen_tol)
    parser.add_argument("--seed", type=int, default=None, help="Seed of the solver restart")
    parser.add_argument("--out", default=None, help="Output file (default: stdout)")
    parser.add_argument(
        "--format", choices=[f.value for f in ReportFormat], default=ReportFormat.JSON.value
    )
    parser.add_argument("--proofcheck", action="store_true", help="Run the path diagnostics")
    parser.add_argument("--oracle", action="store_true", help="Compare with the dense solver")
    parser.add_argument("--export-eigenfunction", action="store_true")
    parser.add_argument("--dump-matrices", default=None, metavar="DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbv",
        description="Numerical checks of first-eigenvalue bounds for -Laplacian + 2K",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Write a zoo surface to a mesh file")
    _add_surface_arguments(gen)
    gen.add_argument("--out", required=True, help="Output path (.obj or .intr)")

    ver = sub.add_parser("verify", help="Run the full verification pipeline")
    _add_surface_arguments(ver)
    _add_run_arguments(ver)

    sweep = sub.add_parser("sweep", help="Verify a family over parameter values")
    _add_surface_arguments(sweep)
    _add_run_arguments(sweep)
    sweep.add_argument(
        "--param",
        required=True,
        help=f"Parameter to vary ({', '.join([*SWEEP_PARAMETERS, RATIO_PARAMETER])})",
    )
    sweep.add_argument("--values", required=True, type=_float_list)

    conv = sub.add_parser("converge", help="Refinement convergence study")
    _add_surface_arguments(conv)
    _add_run_arguments(conv)
    conv.add_argument("--levels", required=True, type=_level_range, help="LO..HI")

    jac = sub.add_parser("jacobi", help="Evaluate the Jacobi relations directly")
    jac.add_argument("--lambda1", type=float, required=True)
    jac.add_argument("--H", dest="H_cmc", type=float, required=True)
    jac.add_argument("--A2", dest="A_norm_sq", type=float, required=True)
    jac.add_argument("--umbilical", action="store_true")
    jac.add_argument("--tol", type=float, default=1e-12)

    return parser


def spec_from_args(args: argparse.Namespace) -> SurfaceSpec:
    return SurfaceSpec(
        family=resolve_family(args.surface),
        resolution=args.resolution,
        scale=args.scale,
        a=args.a,
        b=args.b,
        c=args.c,
        major_radius=args.major_radius,
        minor_radius=args.minor_radius,
        amplitude=args.amplitude,
        frequency=args.frequency,
        grid=args.grid,
    )


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = dict(
        surface=spec_from_args(args),
        mesh_path=args.mesh,
        steiner_level=args.steiner_level,
        diameter_mode=args.diameter_mode,
        mu_grid=args.mu_grid,
        eigen_tol=args.eigen_tol,
        output_path=args.out,
        format=args.format,
        proofcheck=args.proofcheck,
        oracle=args.oracle,
        export_eigenfunction=args.export_eigenfunction,
        dump_matrices=args.dump_matrices,
    )
    if args.seed is not None:
        values["seed"] = args.seed
    return RunConfig(**values)


def _emit(text: str, path: Optional[Path]) -> None:
    """Print ``text`` when no output file was written."""
    if path is None:
        sys.stdout.write(text)
    else:
        print(f"Written to {path}", file=sys.stderr)


def _generate(args: argparse.Namespace) -> int:
    mesh = generate(spec_from_args(args).check())
    invariants = validate(mesh)
    path = save_mesh(mesh, Path(args.out))
    print(
        f"{mesh.tag}: V={invariants.vertex_count} E={invariants.edge_count} "
        f"F={invariants.face_count} chi={invariants.euler_characteristic} -> {path}",
        file=sys.stderr,
    )
    return EXIT_OK


def _jacobi(args: argparse.Namespace) -> int:
    report = jacobi_report(args.lambda1, args.H_cmc, args.A_norm_sq, args.umbilical, args.tol)
    sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    return EXIT_OK if report.ok else EXIT_FAILED


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging()

    try:
        if args.command == "generate":
            return _generate(args)
        if args.command == "jacobi":
            return _jacobi(args)

        config = config_from_args(args)
        if args.command == "verify":
            outcome = run_verify(config)
            _emit(render_report(outcome.report, config.format), outcome.path)
            if outcome.report.error:
                print(f"Error: {outcome.report.error}", file=sys.stderr)
            return outcome.exit_code

        if args.command == "sweep":
            table = run_sweep(config, args.param, args.values)
        else:
            table = run_converge(config, args.levels)
        _emit(rows_to_csv(table.rows), table.path)
        return table.exit_code

    except VerificationError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (ValidationError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
