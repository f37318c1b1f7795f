"""
Pytest configuration and shared fixtures.

This file is automatically loaded by pytest and provides
fixtures available to all test files.
"""

import os
import sys
from pathlib import Path
from types import SimpleNamespace

import pytest

# Add project root to path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

# Set test environment
os.environ["SBV_ENVIRONMENT"] = "testing"
os.environ["SBV_DEBUG"] = "true"
os.environ.setdefault("SBV_LOG_LEVEL", "WARNING")

FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture
def settings():
    """Provide test settings."""
    from src.config import Settings

    return Settings(environment="testing", debug=True)


@pytest.fixture
def override_settings(monkeypatch):
    """Set ``SBV_*`` variables and reload the cached settings."""
    from src.config import get_settings

    def _apply(**values):
        for key, value in values.items():
            monkeypatch.setenv(f"SBV_{key.upper()}", str(value))
        get_settings.cache_clear()
        return get_settings()

    yield _apply
    get_settings.cache_clear()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


def _spec(family: str, **params):
    from src.mesh.schema import SurfaceFamily, SurfaceSpec

    return SurfaceSpec(family=SurfaceFamily(family), **params)


@pytest.fixture(scope="session")
def make_spec():
    """Build a SurfaceSpec from a family value and parameters."""
    return _spec


@pytest.fixture(scope="session")
def analyze():
    """
    Run mesh → ddg → spectrum for a surface, cached per parameter set.

    Returns a namespace with spec, mesh, invariants, S, M, field, system, result.
    """
    from src.ddg.operators import curvature, mass, stiffness
    from src.mesh.generate import generate
    from src.mesh.validate import validate
    from src.spectrum.solver import assemble, lowest_eigenpair

    cache = {}

    def _run(family: str = "unit_sphere_icosa", **params):
        key = (family, tuple(sorted(params.items())))
        if key not in cache:
            spec = _spec(family, **params)
            mesh = generate(spec)
            invariants = validate(mesh)
            S = stiffness(mesh)
            M = mass(mesh)
            field = curvature(mesh, M)
            system = assemble(S, M, field)
            cache[key] = SimpleNamespace(
                spec=spec,
                mesh=mesh,
                invariants=invariants,
                S=S,
                M=M,
                field=field,
                system=system,
                result=lowest_eigenpair(system),
            )
        return cache[key]

    return _run


@pytest.fixture(scope="session")
def icosahedron():
    """Level-0 unit sphere: the regular icosahedron."""
    from src.mesh.generate import generate

    return generate(_spec("unit_sphere_icosa", resolution=0))


@pytest.fixture(scope="session")
def sphere3():
    from src.mesh.generate import generate

    return generate(_spec("unit_sphere_icosa", resolution=3))


@pytest.fixture(scope="session")
def flat_torus16():
    """Unit square flat torus on a 16×16 grid."""
    from src.mesh.generate import generate

    return generate(_spec("flat_torus", a=1.0, b=1.0, grid=16))


@pytest.fixture
def tetrahedron():
    """Regular tetrahedron with outward orientation."""
    import numpy as np

    from src.mesh.schema import TriangleMesh

    positions = np.array(
        [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
    )
    faces = np.array([[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]])
    return TriangleMesh.from_positions(faces, positions, tag="tetrahedron")
