"""
Tests for U-statistic kernels, their coupling and the covariance estimates.
"""

import numpy as np
import pytest

from stein_embed.exceptions import BudgetExceeded, FormatError, InvalidModel, MissingConditionalKernel
from stein_embed.matlite import SymMatrix, as_array, supnorm, sym_inv_sqrt, sym_sqrt
from stein_embed.mc import abc_from_pairs, discrepancy, estimate, get_test_function
from stein_embed.stein import DerivBounds, aprime_simplified, pair_second_moment_check, standardized_lambda
from stein_embed.ustats import (
    RADEMACHER,
    TERNARY,
    FiniteSupport,
    KernelModel,
    UStatPair,
    check_budget,
    compute_u,
    compute_u_batch,
    cond_identity_residual,
    cond_identity_terms,
    cond_mean_by_support,
    estimate_rho,
    estimate_sigma,
    finite_kernel,
    format_kernel_table,
    get_kernel,
    incremental_u,
    kernel_from_function,
    kernel_names,
    lambda_ustat,
    pair_step,
    parse_kernel_table,
    rank_one_limit,
    thm_bound,
    w_batch,
)
from stein_embed.ustats import io as kernel_io

BUILTINS = ('pm1-mean', 'sample-variance', 'ternary-variance', 'pm1-cubic')


def table_kernel():
    """Order-2 kernel on the ternary support built from a table"""
    return kernel_from_function(
        'table', TERNARY, 2,
        lambda g: g[..., 0] * g[..., 1] + (g[..., 0] + g[..., 1]) / 2.0,
    )


class TestKernels:
    """Tests for kernel models and their validation"""

    def test_builtin_names(self):
        """Test the registered kernels"""
        assert set(BUILTINS) <= set(kernel_names())

    def test_conditional_kernels_are_symmetric(self, rng):
        """Test every ψ_k is invariant under argument permutations"""
        for name in BUILTINS:
            assert get_kernel(name).check_symmetry(rng) == 0.0

    def test_fourth_moments(self):
        """Test ρ = Eψ⁴ for the built-in kernels"""
        assert get_kernel('pm1-mean').rho == 0.5
        assert get_kernel('sample-variance').rho == 60.0

    def test_rho_by_enumeration(self):
        """Test estimate_rho is exact for finite supports"""
        km = get_kernel('ternary-variance')
        est = estimate_rho(km, 100, seed=0)
        assert est.stderr == 0.0
        assert est.mean == pytest.approx(km.rho, rel=1e-12)

    def test_rho_by_monte_carlo(self):
        """Test Eψ⁴ = 60 for the sample-variance kernel"""
        est = estimate_rho(get_kernel('sample-variance'), 200_000, seed=13)
        assert abs(est.mean - 60.0) <= 4.0 * est.stderr

    def test_missing_conditional_kernel(self):
        """Test a kernel without ψ₁"""
        km = KernelModel('partial', 2, {2: lambda x: x[..., 0] * x[..., 1]}, RADEMACHER.sample)
        assert not km.has_all_conditionals()
        with pytest.raises(MissingConditionalKernel):
            km.psi_k(1)
        with pytest.raises(MissingConditionalKernel):
            cond_identity_terms(np.ones(4), km)

    def test_table_validation(self):
        """Test asymmetric, uncentered and degenerate tables are refused"""
        with pytest.raises(InvalidModel):
            finite_kernel('asym', RADEMACHER, [[0.0, 1.0], [-1.0, 0.0]])
        with pytest.raises(InvalidModel):
            finite_kernel('shifted', RADEMACHER, [[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(InvalidModel):
            finite_kernel('product', RADEMACHER, [[1.0, -1.0], [-1.0, 1.0]])

    def test_support_validation(self):
        """Test support values must increase and probabilities sum to 1"""
        with pytest.raises(InvalidModel):
            FiniteSupport(np.array([1.0, -1.0]), np.array([0.5, 0.5]))
        with pytest.raises(InvalidModel):
            FiniteSupport(np.array([-1.0, 1.0]), np.array([0.5, 0.6]))

    def test_unknown_kernel(self):
        """Test KeyError for an unregistered name"""
        with pytest.raises(KeyError):
            get_kernel('no-such-kernel')


class TestStatistics:
    """Tests for U and its incremental updates"""

    def test_pm1_mean_example(self):
        """Test U for the sample (1, 1, −1, 1)"""
        km = get_kernel('pm1-mean')
        x = np.array([1.0, 1.0, -1.0, 1.0])
        assert np.array_equal(compute_u(x, km).U, [1.0, 3.0])
        assert np.array_equal(compute_u(x, km, method='fast').U, [1.0, 3.0])

    def test_closed_forms_match_subsets(self, rng):
        """Test u_fast against summing over every subset"""
        for name in ('pm1-mean', 'sample-variance', 'pm1-cubic'):
            km = get_kernel(name)
            x = km.sample(rng, (20, 7))
            assert np.allclose(compute_u_batch(x, km, 'fast'), compute_u_batch(x, km, 'direct'), atol=1e-10)

    def test_scaling(self):
        """Test W_k = √n U_k / C(n, k)"""
        u = compute_u(np.array([1.0, 1.0, -1.0, 1.0]), get_kernel('pm1-mean'))
        assert np.allclose(u.W, [2.0 * 1.0 / 4.0, 2.0 * 3.0 / 6.0])

    def test_budget(self):
        """Test BudgetExceeded above the subset budget"""
        with pytest.raises(BudgetExceeded):
            check_budget(1000, 3, budget=100)
        with pytest.raises(InvalidModel):
            check_budget(2, 3)

    def test_incremental_example(self):
        """Test ΔU₂ = 3 when X₃ flips from −1 to 1"""
        km = get_kernel('pm1-mean')
        x = np.array([1.0, 1.0, -1.0, 1.0])
        u = incremental_u(compute_u(x, km), x, 2, 1.0, km)
        assert np.array_equal(u.U, [2.0, 6.0])

    def test_incremental_chain(self, rng):
        """Test incremental updates against full recomputation"""
        for name in ('ternary-variance', 'pm1-cubic', 'sample-variance'):
            km = get_kernel(name)
            x = km.sample(rng, (9,))
            u = compute_u(x, km)
            for _ in range(50):
                x_next, j = pair_step(x, km, rng)
                u = incremental_u(u, x, j, x_next[j], km)
                assert np.allclose(u.U, compute_u(x_next, km).U, atol=1e-9)
                x = x_next

    def test_lambda(self):
        """Test Λ = (1/n)·bidiag(k, −k)"""
        lam = as_array(lambda_ustat(10, 3))
        expected = np.array([[1.0, 0.0, 0.0], [-2.0, 2.0, 0.0], [0.0, -3.0, 3.0]]) / 10.0
        assert np.allclose(lam, expected, atol=1e-15)
        with pytest.raises(InvalidModel):
            lambda_ustat(2, 3)


class TestConditionalIdentity:
    """Tests for E[U′_k − U_k | X] = −(k/n)U_k + ((n−k+1)/n)U_{k−1}"""

    @pytest.mark.parametrize('n', [4, 10])
    def test_builtin_and_table_kernels(self, rng, n):
        """Test the relative residual on random samples"""
        for km in [get_kernel(name) for name in BUILTINS] + [table_kernel()]:
            for x in km.sample(rng, (100, n)):
                assert np.max(np.abs(cond_identity_residual(x, km, relative=True))) <= 1e-12, km.name

    @pytest.mark.slow
    def test_large_samples(self, rng):
        """Test the residual for n = 50 on 10³ samples per kernel"""
        for km in (get_kernel('sample-variance'), get_kernel('pm1-cubic'), table_kernel()):
            for x in km.sample(rng, (1000, 50)):
                assert np.max(np.abs(cond_identity_residual(x, km, relative=True))) <= 1e-12, km.name

    def test_first_order(self, rng):
        """Test E[U′₁ − U₁ | X] = −U₁/n"""
        km = get_kernel('sample-variance')
        x = km.sample(rng, (12,))
        left, _, _ = cond_identity_terms(x, km)
        assert left[0] == pytest.approx(-compute_u(x, km).U[0] / 12.0, rel=1e-12, abs=1e-14)

    def test_support_enumeration(self, rng):
        """Test the identity against redraw enumeration"""
        for km in (get_kernel('ternary-variance'), get_kernel('pm1-cubic'), table_kernel()):
            for x in km.sample(rng, (10, 7)):
                _, right, scale = cond_identity_terms(x, km)
                assert np.max(np.abs(cond_mean_by_support(x, km) - right) / scale) <= 1e-10

    def test_support_enumeration_needs_support(self):
        """Test the oracle refuses continuous laws"""
        with pytest.raises(ValueError):
            cond_mean_by_support(np.zeros(4), get_kernel('sample-variance'))


class TestBoundsAndCovariance:
    """Tests for thm_bound, estimate_sigma and the coupling statistics"""

    def test_thm_bound(self):
        """Test n^{-1/2}(4ρ^{1/2}d⁶h2 + ρ^{3/4}d⁷h3) at d = 2, ρ = 1/2, n = 100"""
        assert thm_bound(100, 2, 0.5, DerivBounds(h2=1.0, h3=1.0)) == pytest.approx(25.713, abs=1e-3)
        with pytest.raises(ValueError):
            thm_bound(100, 2, -1.0, DerivBounds())

    @pytest.mark.slow
    def test_discrepancy_within_thm_bound(self):
        """Test the ±1 kernel at n = 100 against N(0, Σ) stays below the d = 2 bound"""
        km = get_kernel('pm1-mean')
        n = 100
        h = get_test_function('cos11')
        db = h.bounds(2)
        root = sym_sqrt(SymMatrix(rank_one_limit(km)))
        est = discrepancy(h, UStatPair(km, n).w_sampler, root, 200_000, seed=29)
        bound = thm_bound(n, 2, km.rho, db)
        assert bound == pytest.approx(thm_bound(n, 2, 0.5, db))
        assert abs(est.mean) <= bound + 4.0 * est.stderr

    def test_exact_sigma_pm1_mean(self):
        """Test Σ = [[1/4, 1/2], [1/2, 1]] by enumeration"""
        sig = estimate_sigma(get_kernel('pm1-mean'), 8, 100, seed=0)
        assert sig.provenance == 'exact'
        assert np.allclose(as_array(sig.sigma), [[0.25, 0.5], [0.5, 1.0]], atol=1e-12)
        assert np.allclose(rank_one_limit(get_kernel('pm1-mean')), [[0.25, 0.5], [0.5, 1.0]])

    def test_sigma_sample_variance(self):
        """Test Σ = [[1/2, 1], [1, 12/5]] at n = 6 by Monte Carlo"""
        sig = estimate_sigma(get_kernel('sample-variance'), 6, 100_000, seed=19)
        assert sig.provenance == 'mc'
        target = np.array([[0.5, 1.0], [1.0, 2.4]])
        assert np.all(np.abs(as_array(sig.sigma) - target) <= 4.0 * sig.stderr)

    @pytest.mark.slow
    def test_rank_one_limit_large_n(self):
        """Test Var W₂ = 2n/(n−1) at n = 2000 against the limit k·l·Var ψ₁"""
        km = get_kernel('sample-variance')
        n = 2000
        est = estimate(lambda x: np.square(w_batch(x, km)), lambda r, size: km.sample(r, (size, n)),
                       20_000, seed=23, chunk_size=1000)
        assert abs(est.mean[0] - 0.5) <= 4.0 * est.stderr[0]
        assert abs(est.mean[1] - 2.0 * n / (n - 1)) <= 4.0 * est.stderr[1]
        assert np.allclose(rank_one_limit(km), [[0.5, 1.0], [1.0, 2.0]])

    @pytest.mark.slow
    def test_pm1_mean_large_n(self):
        """Test Σ at n = 2000 for the ±1 kernel against [[1/4, 1/2], [1/2, 1]]"""
        km = get_kernel('pm1-mean')
        sig = estimate_sigma(km, 2000, 100_000, seed=41, chunk_size=5000)
        assert sig.provenance == 'mc'
        target = rank_one_limit(km)
        assert np.all(np.abs(as_array(sig.sigma) - target) <= 4.0 * sig.stderr + 1e-12)

    def test_rank_one_limit_needs_variance(self):
        """Test kernels without an exact Var ψ₁"""
        km = KernelModel('bare', 1, {1: lambda x: x[..., 0]}, RADEMACHER.sample)
        with pytest.raises(ValueError):
            rank_one_limit(km)

    def test_pair_linearity(self, rng):
        """Test the exact conditional mean of the coupling is −ΛW"""
        km = get_kernel('ternary-variance')
        pair = UStatPair(km, 6)
        states = pair.draw_states(rng, 50)
        residual = pair.cond_mean(states) + pair.embed(states) @ as_array(lambda_ustat(6, 2)).T
        assert np.max(np.abs(residual)) <= 1e-12

    def test_pair_second_moments(self):
        """Test E ΔWΔWᵗ = 2ΣΛᵗ for the pm1-mean coupling"""
        km = get_kernel('pm1-mean')
        sig = estimate_sigma(km, 6, 100, seed=0)
        z, _ = pair_second_moment_check(UStatPair(km, 6), lambda_ustat(6, 2), sig.sigma, 100_000, seed=29)
        assert np.max(np.abs(z)) <= 4.0

    def test_aprime_below_simplified_bound(self):
        """Test the directly computed A′ against its simplified bound"""
        km = get_kernel('ternary-variance')
        n = 8
        pair = UStatPair(km, n)
        lam = lambda_ustat(n, 2)
        sigma = estimate_sigma(km, n, 100, seed=0).sigma
        raw = abc_from_pairs(pair, lam, 2000, seed=37)
        std = abc_from_pairs(pair, lam, 2000, seed=37, sigma=sigma)
        _, lamhat = standardized_lambda(lam, sigma)
        bound = aprime_simplified(2, supnorm(sym_inv_sqrt(sigma)), lamhat, max(raw.cond_sd))
        assert std.A <= bound * (1 + 1e-10)


class TestKernelTables:
    """Tests for the kernel table format"""

    def test_round_trip(self):
        """Test formatting then parsing a table kernel"""
        km = get_kernel('ternary-variance')
        parsed = parse_kernel_table(format_kernel_table(km))
        grid, _ = TERNARY.grid(2)
        assert np.array_equal(parsed.psi_k(2)(grid), km.psi_k(2)(grid))
        assert parsed.rho == pytest.approx(km.rho, rel=1e-15)

    def test_unsorted_support(self):
        """Test a table listing support values in decreasing order"""
        km = parse_kernel_table('1 2\n1 0.5\n-1 0.5\n0.5\n-0.5\n')
        assert km.psi_k(1)(np.array([[-1.0]]))[0] == -0.5
        assert km.d == 1

    def test_probability_sum(self):
        """Test a support whose probabilities do not sum to 1"""
        with pytest.raises(FormatError) as info:
            parse_kernel_table('1 2\n-1 0.4\n1 0.5\n-0.5\n0.5\n')
        assert info.value.line == 3

    def test_wrong_line_count(self):
        """Test a table with missing kernel values"""
        with pytest.raises(FormatError):
            parse_kernel_table('2 2\n-1 0.5\n1 0.5\n0\n1\n')

    def test_not_a_number(self):
        """Test a non-numeric kernel value"""
        with pytest.raises(FormatError, match='line 4'):
            parse_kernel_table('1 2\n-1 0.5\n1 0.5\nabc\n0.5\n')

    def test_file_lookup(self, tmp_path):
        """Test get_kernel with a path: prefix and with a bare path"""
        path = tmp_path / 'tern.txt'
        path.write_text(format_kernel_table(get_kernel('ternary-variance')))
        assert get_kernel(f'path:{path}').name == 'tern'
        assert get_kernel(str(path)).d == 2

    def test_lookup_lives_with_tables(self):
        """Test name lookup from the table module and the unknown-name KeyError"""
        assert kernel_io.get_kernel is get_kernel
        assert kernel_io.get_kernel('pm1-mean').d == 2
        assert set(BUILTINS) <= set(kernel_io.kernel_names())
        with pytest.raises(KeyError, match='pm1-mean'):
            kernel_io.get_kernel('no-such-kernel')
