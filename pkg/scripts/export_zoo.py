#!/usr/bin/env python3
"""
Export the test-surface zoo as mesh files.

Writes one file per zoo member, OBJ for embedded surfaces and the intrinsic
format for flat tori, and prints the invariants of each.

Usage:
    python scripts/export_zoo.py --out zoo/
    python scripts/export_zoo.py --out zoo/ --resolution 4
    python scripts/export_zoo.py --list
"""

import argparse
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.mesh.generate import generate
from src.mesh.io import save_mesh
from src.mesh.schema import SurfaceFamily, SurfaceSpec
from src.mesh.validate import validate


# Representative zoo members
ZOO = {
    "unit_sphere": SurfaceSpec(family=SurfaceFamily.UNIT_SPHERE_ICOSA),
    "ellipsoid_c1.5": SurfaceSpec(family=SurfaceFamily.ELLIPSOID, c=1.5),
    "ellipsoid_c2": SurfaceSpec(family=SurfaceFamily.ELLIPSOID, c=2.0),
    "torus_r0.25": SurfaceSpec(
        family=SurfaceFamily.TORUS_OF_REVOLUTION, major_radius=2.0, minor_radius=0.5
    ),
    "flat_torus_square": SurfaceSpec(family=SurfaceFamily.FLAT_TORUS),
    "flat_torus_clifford": SurfaceSpec(
        family=SurfaceFamily.FLAT_TORUS, a=4.442882938158366, b=4.442882938158366
    ),
    "perturbed_sphere": SurfaceSpec(family=SurfaceFamily.PERTURBED_SPHERE, amplitude=0.2),
}


def main():
    parser = argparse.ArgumentParser(description="Export the test-surface zoo")
    parser.add_argument("--out", "-o", type=str, help="Output directory")
    parser.add_argument("--resolution", "-r", type=int, default=3, help="Refinement level")
    parser.add_argument("--list", "-l", action="store_true", help="List zoo members")
    args = parser.parse_args()

    if args.list:
        print("Zoo members:")
        for name, spec in ZOO.items():
            params = ", ".join(f"{k}={v}" for k, v in spec.parameters().items())
            print(f"  - {name}: {spec.family.value} ({params})")
        return 0

    if not args.out:
        parser.error("--out is required unless --list is given")

    out = Path(args.out)
    for name, spec in ZOO.items():
        spec = spec.model_copy(update={"resolution": args.resolution})
        mesh = generate(spec)
        invariants = validate(mesh)
        suffix = ".obj" if mesh.positions is not None else ".intr"
        path = save_mesh(mesh, out / f"{name}{suffix}")
        print(
            f"{name:22s} V={invariants.vertex_count:6d} chi={invariants.euler_characteristic:2d} "
            f"area={invariants.total_area:.6f} -> {path}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
