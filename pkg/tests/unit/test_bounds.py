"""
Unit tests for the eigenvalue bound estimates and the Jacobi relations.
"""

import math

import numpy as np
import pytest

from src.bounds.estimates import (
    area_bound,
    diameter_coefficient,
    mu_values,
    negative_bound_mu,
    optimize_mu,
    rhs_estimate,
    universal_bound,
    verify,
)
from src.bounds.jacobi import cmc_embedding, jacobi_report
from src.errors import InconsistentInputsError, MuOutOfRangeError
from src.geodesics.diameter import DiameterMode, diameter


def _brute_force(kappa_min, kappa_max, D, mu_min=1e-3, points=100_000):
    """Dense grid minimum of the right-hand side over [mu_min, 2 − mu_min]."""
    mu = np.linspace(mu_min, 2.0 - mu_min, points)
    coefficient = (2.0 * mu - 1.0) / mu
    curvature_term = np.maximum(coefficient * kappa_min, coefficient * kappa_max)
    values = curvature_term + (4.0 - mu) / (mu * (4.0 - 2.0 * mu)) * math.pi**2 / D**2
    i = int(np.argmin(values))
    return float(mu[i]), float(values[i])


class TestRhsEstimate:
    """Tests for the right-hand side at one μ."""

    def test_universal_case(self):
        """Test that μ = 1/2 removes curvature for any D."""
        rng = np.random.default_rng(11)
        kappa = rng.normal(size=50)
        for D in rng.uniform(0.1, 10.0, size=100):
            estimate = rhs_estimate(0.5, kappa, D)
            assert estimate.curvature_term == 0.0
            assert estimate.rhs == pytest.approx(7.0 * math.pi**2 / (3.0 * D**2), rel=1e-12)
            assert universal_bound(D) == pytest.approx(estimate.rhs, rel=1e-12)

    def test_unit_sphere_values(self):
        """Test κ ≡ 1, D = π at μ = 1 and μ = 1/2."""
        assert rhs_estimate(1.0, 1.0, math.pi).rhs == pytest.approx(2.5, rel=1e-12)
        assert rhs_estimate(0.5, 1.0, math.pi).rhs == pytest.approx(7.0 / 3.0, rel=1e-12)

    def test_argmax_switches_with_mu(self):
        """Test that μ < 1/2 selects min κ and μ > 1/2 selects max κ."""
        kappa = np.array([-1.0, 0.5, 2.0])
        low = rhs_estimate(0.25, kappa, 1.0)
        high = rhs_estimate(1.5, kappa, 1.0)
        assert low.argmax_vertex == 0
        assert low.curvature_term == pytest.approx(2.0)
        assert high.argmax_vertex == 2
        assert high.curvature_term == pytest.approx(4.0 / 1.5)

    def test_decreasing_in_diameter(self):
        """Test that a larger diameter lowers the bound."""
        values = [rhs_estimate(1.2, 0.3, D).rhs for D in (0.5, 1.0, 2.0, 4.0)]
        assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("mu", [0.0, 2.0, -0.5, 3.0])
    def test_mu_out_of_range(self, mu):
        """Test the open interval (0, 2)."""
        with pytest.raises(MuOutOfRangeError):
            rhs_estimate(mu, 1.0, 1.0)

    def test_nonpositive_diameter(self):
        """Test a zero diameter."""
        with pytest.raises(InconsistentInputsError):
            rhs_estimate(0.5, 1.0, 0.0)

    def test_diameter_coefficient(self):
        """Test (4−μ)/(μ(4−2μ)) at μ = 1/2."""
        assert diameter_coefficient(0.5) == pytest.approx(7.0 / 3.0)

    def test_area_bound(self):
        """Test 4πχ/Area for the unit sphere and a torus."""
        assert area_bound(2, 4.0 * math.pi) == pytest.approx(2.0)
        assert area_bound(0, 10.0) == 0.0
        with pytest.raises(InconsistentInputsError):
            area_bound(2, 0.0)


class TestOptimizeMu:
    """Tests for minimization over μ."""

    def test_grid_contains_half(self):
        """Test the candidate grid."""
        mus = mu_values(64, 1e-3)
        assert 0.5 in mus
        assert mus[0] == pytest.approx(1e-3)
        assert mus[-1] == pytest.approx(2.0 - 1e-3)
        assert np.all(np.diff(mus) > 0)

    def test_unit_sphere_boundary_minimizer(self):
        """Test κ ≡ 1, D = π, where the infimum 9/4 is approached as μ → 0."""
        optimum = optimize_mu(1.0, math.pi, grid=64, mu_min=1e-3)
        assert optimum.at_boundary
        assert optimum.best_mu == pytest.approx(1e-3)
        _, brute = _brute_force(1.0, 1.0, math.pi)
        assert optimum.best_rhs == pytest.approx(brute, abs=1e-3)
        assert optimum.best_rhs == pytest.approx(2.25, abs=1e-3)

        finer = optimize_mu(1.0, math.pi, grid=64, mu_min=1e-6)
        assert finer.best_rhs == pytest.approx(2.25, abs=1e-5)

    def test_flat_interior_minimizer(self):
        """Test κ ≡ 0, where the minimizer is μ = 4/(2 + √2)."""
        optimum = optimize_mu(np.zeros(10), 1.0, grid=64, mu_min=1e-3)
        brute_mu, brute_rhs = _brute_force(0.0, 0.0, 1.0)
        assert not optimum.at_boundary
        assert optimum.best_mu == pytest.approx(4.0 / (2.0 + math.sqrt(2.0)), abs=1e-3)
        assert optimum.best_mu == pytest.approx(brute_mu, abs=1e-3)
        assert optimum.best_rhs <= brute_rhs + 1e-9

    def test_never_worse_than_universal(self):
        """Test best_rhs ≤ rhs(1/2) for random curvature."""
        rng = np.random.default_rng(3)
        for _ in range(20):
            kappa = rng.normal(0.5, 1.0, size=30)
            D = float(rng.uniform(0.5, 5.0))
            optimum = optimize_mu(kappa, D, grid=32, mu_min=1e-3)
            assert optimum.best_rhs <= rhs_estimate(0.5, kappa, D).rhs + 1e-12

    def test_grid_too_small(self):
        """Test the minimum grid size."""
        with pytest.raises(ValueError):
            optimize_mu(1.0, 1.0, grid=8)

    def test_negative_regime(self):
        """Test detection of a negative right-hand side for negative curvature."""
        kappa = np.array([-5.0, -4.0])
        mu = negative_bound_mu(kappa, 10.0, grid=64, mu_min=1e-3)
        assert mu is not None
        assert 0.5 < mu < 2.0
        assert rhs_estimate(mu, kappa, 10.0).rhs < 0
        assert negative_bound_mu(np.ones(3), 1.0, grid=64, mu_min=1e-3) is None


class TestVerify:
    """Tests for the bound verdicts on meshes."""

    def test_unit_sphere(self, analyze):
        """Test all flags on the level-3 sphere."""
        run = analyze(resolution=3)
        estimate = diameter(run.mesh, steiner_level=2, mode=DiameterMode.ALL_PAIRS)
        report = verify(run.mesh, run.field, run.result, estimate)
        assert report.eq1_ok and report.eq2_ok and report.remark1_ok
        assert report.ok
        assert report.remark1_exact_ok
        assert report.euler_characteristic == 2
        assert report.area_bound == pytest.approx(2.0, rel=0.02)
        assert report.margin == pytest.approx(1.0 / 3.0, abs=0.15)
        assert report.best_rhs <= report.rhs + 1e-12
        assert report.negative_bound_mu is None

    def test_flat_torus(self, analyze):
        """Test the flat torus: zero area bound and λ₁ ≈ 0."""
        run = analyze("flat_torus", a=1.0, b=1.0, grid=16)
        estimate = diameter(run.mesh, steiner_level=2, mode=DiameterMode.ALL_PAIRS)
        report = verify(run.mesh, run.field, run.result, estimate)
        assert report.ok
        assert report.area_bound == 0.0
        assert report.universal_rhs == pytest.approx(14.0 * math.pi**2 / 3.0, rel=0.07)
        assert report.best_mu == pytest.approx(4.0 / (2.0 + math.sqrt(2.0)), abs=1e-3)

    def test_mismatched_inputs(self, analyze, icosahedron):
        """Test inputs from meshes of different size."""
        run = analyze(resolution=3)
        estimate = diameter(icosahedron, steiner_level=0)
        other = analyze(resolution=0)
        with pytest.raises(InconsistentInputsError):
            verify(run.mesh, run.field, other.result, estimate)
        with pytest.raises(InconsistentInputsError):
            verify(other.mesh, other.field, other.result, estimate.model_copy(
                update={"attained_pair": (0, 40)}
            ))


class TestJacobi:
    """Tests for the Jacobi operator relations."""

    def test_clifford_torus(self):
        """Test λ₁ = 0, H = 0, |A|² = 2."""
        report = jacobi_report(0.0, 0.0, 2.0, umbilical=False)
        assert report.lambda1_jacobi == -4.0
        assert report.kappa_from_gauss == 0.0
        assert report.simons_ok and report.alias_ok and report.ok

    def test_minimal_equator(self):
        """Test the totally geodesic sphere: λ₁ = 2, λ₁ᴶ = −2."""
        report = jacobi_report(2.0, 0.0, 0.0, umbilical=True)
        assert report.lambda1_jacobi == -2.0
        assert report.kappa_from_gauss == 1.0
        assert report.ok

    def test_umbilical_with_mean_curvature(self):
        """Test H = 1: λ₁ᴶ = −4."""
        report = jacobi_report(4.0, 1.0, 2.0, umbilical=True)
        assert report.lambda1_jacobi == -4.0
        assert report.alias_ok

    def test_violation_detected(self):
        """Test a λ₁ too large for a non-umbilical minimal surface."""
        report = jacobi_report(0.5, 0.0, 2.0, umbilical=False)
        assert not report.alias_ok
        assert not report.ok

    def test_negative_norm(self):
        """Test |A|² < 0."""
        with pytest.raises(InconsistentInputsError):
            jacobi_report(0.0, 0.0, -1.0, umbilical=False)

    def test_sphere_embeddings(self, make_spec):
        """Test umbilical spheres by radius."""
        unit = cmc_embedding(make_spec("unit_sphere_icosa"))
        assert unit.name == "umbilical_sphere"
        assert unit.H_cmc == 0.0
        assert unit.umbilical

        small = cmc_embedding(make_spec("unit_sphere_icosa", scale=0.5))
        assert small.H_cmc**2 == pytest.approx(3.0)
        assert small.A_norm_sq == pytest.approx(6.0)
        assert cmc_embedding(make_spec("unit_sphere_icosa", scale=2.0)) is None
        assert cmc_embedding(make_spec("ellipsoid", c=1.5)) is None

    def test_torus_embeddings(self, make_spec):
        """Test Clifford and product tori, which are flat."""
        side = math.pi * math.sqrt(2.0)
        clifford = cmc_embedding(make_spec("flat_torus", a=side, b=side))
        assert clifford.name == "clifford_torus"
        assert clifford.H_cmc == pytest.approx(0.0, abs=1e-12)
        assert clifford.A_norm_sq == pytest.approx(2.0)

        product = cmc_embedding(make_spec("flat_torus", a=2 * math.pi * 0.6, b=2 * math.pi * 0.8))
        assert product.name == "product_torus"
        report = jacobi_report(0.0, product.H_cmc, product.A_norm_sq, umbilical=False)
        assert report.kappa_from_gauss == pytest.approx(0.0, abs=1e-12)
        assert report.ok

        assert cmc_embedding(make_spec("flat_torus", a=1.0, b=1.0)) is None
