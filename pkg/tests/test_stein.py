"""
Tests for the bound evaluators and coupling identities.
"""

import math

import numpy as np
import pytest

from stein_embed.exceptions import DegenerateInputs, DimensionMismatch
from stein_embed.graphs import GraphModel, a_term_bound, b_term_bound, lambda_graph, sigma1_formula
from stein_embed.matlite import LowerMatrix, SymMatrix, supnorm
from stein_embed.stein import (
    AbcStats,
    DerivBounds,
    NonSmoothInputs,
    aprime_simplified,
    consistency_check,
    cov_perturbation_bound,
    nonsmooth_bound,
    nonsmooth_terms,
    pair_second_moment_check,
    second_moment_target,
    smooth_bound,
    smooth_bound_interval,
    standardized_lambda,
)


class TestValueTypes:
    """Tests for DerivBounds, AbcStats and NonSmoothInputs validation"""

    def test_negative_derivative_bound(self):
        """Test that negative or NaN suprema are refused"""
        with pytest.raises(ValueError):
            DerivBounds(h2=-1.0)
        with pytest.raises(ValueError):
            DerivBounds(h3=math.nan)

    def test_negative_statistic(self):
        """Test that A < 0 is refused"""
        with pytest.raises(ValueError):
            AbcStats(-0.1, 0.0, 0.0)

    def test_mc_needs_stderr(self):
        """Test that Monte Carlo statistics carry standard errors"""
        with pytest.raises(ValueError):
            AbcStats(1.0, 1.0, 0.0, provenance='mc')

    def test_shifted_floors_at_zero(self):
        """Test moving statistics by k standard errors"""
        stats = AbcStats(1.0, 2.0, 0.0, provenance='mc', stderr=(0.5, 0.1, 0.2))
        low = stats.shifted(-4.0)
        assert (low.A, low.B, low.C) == (0.0, pytest.approx(1.6), 0.0)
        assert low.is_exact

    def test_class_constant_range(self):
        """Test a >= 1 and gamma > 0"""
        with pytest.raises(ValueError):
            NonSmoothInputs(1.0, 1.0, 1.0, 2, a=0.5)
        with pytest.raises(ValueError):
            NonSmoothInputs(1.0, 1.0, 1.0, 2, gamma=0.0)
        assert NonSmoothInputs(1.0, 1.0, 1.0, 2, a=2.0 * math.sqrt(3.0)).a > 1.0


class TestSmoothBound:
    """Tests for smooth_bound and smooth_bound_interval"""

    def test_zero_statistics(self):
        """Test that A = B = C = 0 gives 0"""
        assert smooth_bound(AbcStats(0.0, 0.0, 0.0), DerivBounds(1.0, 1.0, 1.0), 3, 1.0) == 0.0

    def test_graph_closed_form_at_ten(self):
        """Test the dominating A, B values for n = 10 with h2 = h3 = 1"""
        stats = AbcStats(a_term_bound(10), b_term_bound(10), 0.0)
        value = smooth_bound(stats, DerivBounds(1.0, 1.0, 1.0), 3, 1.0)
        assert value == pytest.approx(1.261, abs=1e-12)

    def test_remainder_term(self):
        """Test the C term alone"""
        assert smooth_bound(AbcStats(0.0, 0.0, 1.0), DerivBounds(1.0, 0.0, 0.0), 3, 1.0) == 1.0
        # (h1 + ½·d·√signorm·h2)·C = (1 + ½·3·2·2)·1
        assert smooth_bound(AbcStats(0.0, 0.0, 1.0), DerivBounds(1.0, 2.0, 0.0), 3, 4.0) == 7.0

    def test_unknown_h1_with_vanishing_remainder(self):
        """Test that h1 = inf stays harmless when C = 0"""
        value = smooth_bound(AbcStats(1.0, 1.0, 0.0), DerivBounds(math.inf, 1.0, 1.0), 2, 1.0)
        assert value == pytest.approx(0.25 + 1.0 / 12.0)

    def test_monotone_in_statistics(self):
        """Test that growing A, B or C never shrinks the bound"""
        db = DerivBounds(1.0, 2.0, 3.0)
        base = smooth_bound(AbcStats(1.0, 1.0, 1.0), db, 2, 1.0)
        for stats in (AbcStats(2.0, 1.0, 1.0), AbcStats(1.0, 2.0, 1.0), AbcStats(1.0, 1.0, 2.0)):
            assert smooth_bound(stats, db, 2, 1.0) >= base

    def test_negative_signorm(self):
        """Test that a negative norm is refused"""
        with pytest.raises(ValueError):
            smooth_bound(AbcStats(0.0, 0.0, 0.0), DerivBounds(), 1, -1.0)

    def test_interval(self):
        """Test the propagated interval around Monte Carlo statistics"""
        db = DerivBounds(1.0, 1.0, 1.0)
        exact = AbcStats(1.0, 1.0, 0.0)
        assert smooth_bound_interval(exact, db, 2, 1.0) == (smooth_bound(exact, db, 2, 1.0),) * 2

        mc = AbcStats(1.0, 1.0, 0.5, provenance='mc', stderr=(0.1, 0.1, 0.1))
        low, high = smooth_bound_interval(mc, db, 2, 1.0)
        assert low < smooth_bound(mc, db, 2, 1.0) < high


class TestNonSmoothBound:
    """Tests for nonsmooth_bound"""

    def test_reference_value(self):
        """Test A′ = C′ = 0, B′ = 2/a gives 2 for any a"""
        for a in (1.0, 2.0, 2.0 * math.sqrt(3.0)):
            assert nonsmooth_bound(NonSmoothInputs(0.0, 2.0 / a, 0.0, 3, a=a)) == pytest.approx(2.0, rel=1e-12)

    def test_terms(self):
        """Test D′ and T′"""
        dp, tp = nonsmooth_terms(NonSmoothInputs(2.0, 0.0, 1.0, 3))
        assert dp == 4.0
        assert tp == pytest.approx(64.0)

    def test_gamma_scaling(self):
        """Test that doubling gamma multiplies the bound by 4"""
        one = nonsmooth_bound(NonSmoothInputs(0.3, 0.7, 0.1, 2))
        two = nonsmooth_bound(NonSmoothInputs(0.3, 0.7, 0.1, 2, gamma=2.0))
        assert two == pytest.approx(4.0 * one, rel=1e-12)

    def test_degenerate(self):
        """Test DegenerateInputs when A′ = B′ = C′ = 0"""
        with pytest.raises(DegenerateInputs):
            nonsmooth_bound(NonSmoothInputs(0.0, 0.0, 0.0, 2))


class TestPerturbation:
    """Tests for cov_perturbation_bound and aprime_simplified"""

    def test_equal_covariances(self):
        """Test a zero bound for identical matrices"""
        s = SymMatrix.diag(1.0, 2.0)
        assert cov_perturbation_bound(s, s, 5.0) == 0.0

    def test_diagonal_example(self):
        """Test ½·h2·Σ|σ − σ⁰| on a diagonal difference"""
        assert cov_perturbation_bound(SymMatrix.identity(2), np.zeros((2, 2)), 2.0) == 2.0

    def test_dimension_mismatch(self):
        """Test that matrices of different size are refused"""
        with pytest.raises(DimensionMismatch):
            cov_perturbation_bound(SymMatrix.identity(2), SymMatrix.identity(3), 1.0)

    def test_aprime_simplified(self):
        """Test d³‖Σ^{-1/2}‖²Σλ̂·sup"""
        assert aprime_simplified(2, 1.0, [1.0, 1.0], 1.0) == 16.0
        assert aprime_simplified(3, 2.0, [1.0], 0.0) == 0.0


class TestIdentities:
    """Tests for the structural identities of linear couplings"""

    def test_consistency_identity(self):
        """Test ΛΣ = ΣΛᵗ for Λ = I"""
        assert consistency_check(LowerMatrix.identity(2), SymMatrix([[2.0, 1.0], [1.0, 3.0]])) == 0.0

    def test_consistency_graph(self):
        """Test ΛΣ₁ = Σ₁Λᵗ for the graph coupling across a grid"""
        for n in (4, 10, 50):
            for p in (0.1, 0.5, 0.9):
                model = GraphModel(n, p)
                lam, sigma = lambda_graph(model), sigma1_formula(model)
                tolerance = 1e-12 * max(1.0, supnorm(sigma)) * supnorm(lam)
                assert consistency_check(lam, sigma) <= tolerance

    def test_consistency_detects_asymmetry(self):
        """Test a nonzero residual for an incompatible pair"""
        lam = LowerMatrix([[1.0, 0.0], [1.0, 1.0]])
        assert consistency_check(lam, SymMatrix.identity(2)) == 1.0

    def test_second_moment_target(self):
        """Test that both forms agree when ΛΣ is symmetric"""
        lam = LowerMatrix.diag(1.0, 2.0)
        sigma = SymMatrix.diag(3.0, 4.0)
        assert np.array_equal(second_moment_target(lam, sigma), np.diag([6.0, 16.0]))
        assert np.array_equal(second_moment_target(lam, sigma, exchangeable=False),
                              second_moment_target(lam, sigma))

    def test_standardized_lambda(self):
        """Test Σ^{-1/2}Λ⁻¹Σ^{1/2} for Σ = I"""
        mat, weights = standardized_lambda(LowerMatrix.diag(2.0, 4.0), SymMatrix.identity(2))
        assert np.allclose(mat, np.diag([0.5, 0.25]), atol=1e-14)
        assert np.allclose(weights, [0.5, 0.25], atol=1e-14)

    def test_pair_second_moment_static(self, static_pair):
        """Test zero z-scores for a pair that never moves"""
        lam = LowerMatrix(np.zeros((2, 2)))
        z, est = pair_second_moment_check(static_pair, lam, SymMatrix.identity(2), 1000, seed=1)
        assert np.array_equal(z, np.zeros((2, 2)))
        assert np.array_equal(np.asarray(est.stderr), np.zeros(4))
