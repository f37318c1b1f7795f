"""
Unit tests for weighted paths and the one-dimensional path diagnostics.
"""

import math

import numpy as np
import pytest

from src.errors import MuOutOfRangeError, NonpositiveEigenfunctionError, PathTooShortError
from src.geodesics.diameter import DiameterMode, diameter
from src.proofcheck.paths import (
    EndpointCheck,
    PathSample,
    ProofcheckReport,
    check_endpoint_pair,
    node_values,
    path_cost,
    path_eigen_check,
    path_inequality,
    shortest_path,
    weighted_path,
)


def _antipodes(mesh):
    return 0, int(np.argmin(mesh.positions @ mesh.positions[0]))


class TestPathSample:
    """Tests for the path model."""

    def test_from_arclength(self):
        """Test a bare path."""
        path = PathSample.from_arclength(np.linspace(0.0, 2.0, 5))
        assert path.node_count == 5
        assert path.length == 2.0
        assert path.cost == 2.0

    @pytest.mark.parametrize(
        "arclength",
        [[0.1, 0.5, 1.0], [0.0, 0.5, 0.5, 1.0], [0.0]],
    )
    def test_invalid_parametrization(self, arclength):
        """Test arclength that is not 0-based and strictly increasing."""
        with pytest.raises(ValueError):
            PathSample.from_arclength(arclength)


class TestOneDimensionalChecks:
    """Tests for the sine-mode inequality and the path eigenvalue."""

    @pytest.mark.parametrize("length", [1.0, 2.0, math.pi])
    def test_eigen_check(self, length):
        """Test the Dirichlet eigenvalue π²/l² on a uniform path."""
        path = PathSample.from_arclength(np.linspace(0.0, length, 128))
        assert path_eigen_check(path) == pytest.approx(math.pi**2 / length**2, rel=1e-3)

    def test_eigen_check_nonuniform(self):
        """Test that uneven node spacing still converges."""
        s = np.linspace(0.0, 1.0, 200) ** 1.5
        value = path_eigen_check(PathSample.from_arclength(s))
        assert value == pytest.approx(math.pi**2, rel=0.01)

    def test_sine_mode_rayleigh(self):
        """Test ∫ψ′²/∫ψ² ≈ π²/l²."""
        path = PathSample.from_arclength(np.linspace(0.0, 1.5, 64))
        diagnostic = path_inequality(path, 0.0, np.zeros(3), 0.5)
        assert diagnostic.rayleigh == pytest.approx(math.pi**2 / 1.5**2, rel=0.01)
        assert diagnostic.psi_norm_sq == pytest.approx(0.75, rel=0.01)

    def test_flat_inequality(self):
        """Test κ = 0, λ₁ = 0: the left side vanishes."""
        path = PathSample.from_arclength(np.linspace(0.0, 1.0, 32))
        for mu in (0.5, 1.0, 1.5):
            diagnostic = path_inequality(path, 0.0, np.zeros(4), mu, D=1.0)
            assert diagnostic.lhs == 0.0
            assert diagnostic.slack > 0
            assert diagnostic.diameter_slack > 0
            assert diagnostic.ok

    def test_violation_detected(self):
        """Test a λ₁ far above what the path length allows."""
        path = PathSample.from_arclength(np.linspace(0.0, 1.0, 32))
        diagnostic = path_inequality(path, 100.0, np.zeros(4), 1.0, asserted=True)
        assert diagnostic.slack < 0
        assert not diagnostic.ok
        assert diagnostic.asserted

    def test_too_short(self):
        """Test the node minimums."""
        with pytest.raises(PathTooShortError):
            path_inequality(PathSample.from_arclength([0.0, 0.5, 1.0]), 0.0, np.zeros(1), 0.5)
        with pytest.raises(PathTooShortError):
            path_eigen_check(PathSample.from_arclength(np.linspace(0.0, 1.0, 7)))

    def test_mu_range(self):
        """Test μ outside (0, 2)."""
        path = PathSample.from_arclength(np.linspace(0.0, 1.0, 8))
        with pytest.raises(MuOutOfRangeError):
            path_inequality(path, 0.0, np.zeros(1), 2.0)

    def test_assertion_threshold(self, settings):
        """Test that assertion defaults to the vertex count threshold."""
        path = PathSample.from_arclength(np.linspace(0.0, 1.0, 8))
        small = path_inequality(path, 0.0, np.zeros(10), 0.5, settings=settings)
        large = path_inequality(path, 0.0, np.zeros(1000), 0.5, settings=settings)
        assert not small.asserted
        assert large.asserted


class TestWeightedPath:
    """Tests for weighted shortest paths on the Steiner graph."""

    def test_constant_weight_is_geodesic(self, flat_torus16):
        """Test that constant q gives the unweighted shortest path length."""
        q = np.full(flat_torus16.vertex_count, 0.7)
        plain = shortest_path(flat_torus16, 0, 8 * 16 + 5, steiner_level=2)
        weighted = weighted_path(flat_torus16, q, 1.5, 0, 8 * 16 + 5, steiner_level=2)
        assert weighted.length == pytest.approx(plain.length, rel=1e-12)
        assert weighted.cost == pytest.approx(0.7**1.5 * plain.length, rel=1e-12)
        assert weighted.endpoints == (0, 8 * 16 + 5)
        assert weighted.nodes[0] == 0 and weighted.nodes[-1] == 8 * 16 + 5

    def test_sphere_antipodes(self, analyze):
        """Test the unweighted antipodal path length against π."""
        run = analyze(resolution=3)
        a, b = _antipodes(run.mesh)
        path = shortest_path(run.mesh, a, b, steiner_level=2)
        assert path.length == pytest.approx(math.pi, rel=0.03)

    def test_small_mu_approaches_geodesic(self, analyze):
        """Test that μ → 0 recovers the unweighted path length."""
        run = analyze(resolution=3)
        a, b = _antipodes(run.mesh)
        plain = shortest_path(run.mesh, a, b, steiner_level=2)
        weighted = weighted_path(run.mesh, run.result, 1e-3, a, b, steiner_level=2)
        assert weighted.length == pytest.approx(plain.length, rel=0.01)

    def test_optimality(self, analyze):
        """Test that the weighted path is no costlier than the geodesic."""
        run = analyze("ellipsoid", a=1.0, b=1.0, c=1.5, resolution=2)
        a, b = 0, 3
        q = run.result.q
        weighted = weighted_path(run.mesh, q, 1.5, a, b, steiner_level=1)
        plain = shortest_path(run.mesh, a, b, steiner_level=1)
        assert weighted.cost <= path_cost(run.mesh, plain, q, 1.5) + 1e-12
        assert path_cost(run.mesh, weighted, q, 1.5) == pytest.approx(weighted.cost, rel=1e-10)

    def test_reversal_symmetry(self, analyze):
        """Test that swapping endpoints keeps the cost."""
        run = analyze(resolution=2)
        forward = weighted_path(run.mesh, run.result, 1.0, 3, 40, steiner_level=1)
        backward = weighted_path(run.mesh, run.result, 1.0, 40, 3, steiner_level=1)
        assert forward.cost == pytest.approx(backward.cost, rel=1e-12)

    def test_node_values_interpolate(self, icosahedron):
        """Test values at Steiner nodes."""
        values = np.arange(12, dtype=float)
        u, v = icosahedron.edges[0]
        nodes = np.array([0, 12, 13, 14])
        out = node_values(icosahedron, 2, values, nodes)
        expected = [0.0] + [(1 - t) * values[u] + t * values[v] for t in (0.25, 0.5, 0.75)]
        np.testing.assert_allclose(out, expected)

    def test_nonpositive_eigenfunction(self, icosahedron):
        """Test a sign-changing q."""
        q = np.ones(12)
        q[4] = -0.1
        with pytest.raises(NonpositiveEigenfunctionError):
            weighted_path(icosahedron, q, 1.0, 0, 3)

    def test_endpoints_must_differ(self, icosahedron):
        """Test a degenerate request."""
        with pytest.raises(ValueError):
            weighted_path(icosahedron, np.ones(12), 1.0, 2, 2)


class TestEndpointPair:
    """Tests for the full proofcheck on the diameter pair."""

    def test_unit_sphere(self, analyze):
        """Test every μ on the level-3 sphere."""
        run = analyze(resolution=3)
        estimate = diameter(run.mesh, steiner_level=2, mode=DiameterMode.ALL_PAIRS)
        report = check_endpoint_pair(run.mesh, run.field, run.result, estimate)
        assert not report.asserted
        assert report.error is None
        assert [check.mu for check in report.checks] == [0.5, 1.0, 1.5]
        for check in report.checks:
            assert check.endpoints == estimate.attained_pair
            assert check.inequality.slack > 0
            assert check.inequality.diameter_slack > 0
            assert check.path_length >= 0.95 * estimate.value
        assert report.ok

    def test_error_recorded(self, analyze, icosahedron):
        """Test that a nonpositive eigenfunction is recorded, not raised."""
        run = analyze(resolution=0)
        estimate = diameter(icosahedron, steiner_level=0)
        negative = run.result.model_copy(update={"q": -run.result.q})
        report = check_endpoint_pair(icosahedron, run.field, negative, estimate)
        assert report.error is not None
        assert report.error.startswith("proofcheck: nonpositive-eigenfunction")
        assert report.ok

    @pytest.mark.parametrize("asserted", [False, True])
    def test_recorded_failure_does_not_fail_report(self, asserted):
        """Test that a failed check only fails the report when asserted."""
        path = PathSample.from_arclength(np.linspace(0.0, 1.0, 32))
        diagnostic = path_inequality(path, 100.0, np.zeros(10), 1.0, asserted=asserted)
        check = EndpointCheck(
            mu=1.0,
            endpoints=(0, 1),
            path_length=path.length,
            path_cost=path.cost,
            path_nodes=path.node_count,
            eigen_reference=math.pi**2,
            inequality=diagnostic,
        )
        report = ProofcheckReport(asserted=asserted, checks=[check])
        assert not diagnostic.ok
        assert diagnostic.slack < 0
        assert report.ok is not asserted
        assert report.model_dump()["checks"][0]["inequality"]["ok"] is False
