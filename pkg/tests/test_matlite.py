"""
Tests for the small-matrix layer.
"""

import inspect

import numpy as np
import pytest

from stein_embed import exceptions
from stein_embed.exceptions import (
    DimensionMismatch,
    InvalidMatrix,
    NoConvergence,
    NotPSD,
    NotSymmetric,
    Singular,
    SteinEmbedError,
)
from stein_embed.graphs import GraphModel, lambda_graph, sigma0
from stein_embed.matlite import (
    LowerMatrix,
    SymMatrix,
    as_array,
    check_same_dimension,
    jacobi_eigen,
    lambda_colsums,
    lower_inverse,
    psd_eigencheck,
    supnorm,
    sym_inv_sqrt,
    sym_sqrt,
    tag_psd,
)
from stein_embed.ustats import lambda_ustat


class TestMatrices:
    """Tests for SymMatrix and LowerMatrix construction"""

    def test_symmetric_rejects_asymmetric(self):
        """Test that an asymmetric input raises NotSymmetric"""
        with pytest.raises(NotSymmetric):
            SymMatrix([[1.0, 2.0], [2.5, 1.0]])

    def test_symmetrized_accepts_rounding(self):
        """Test averaging with the transpose"""
        m = SymMatrix.symmetrized([[1.0, 2.0], [2.0 + 1e-17, 1.0]])
        assert np.array_equal(m.entries, m.entries.T)

    def test_lower_rejects_upper_entries(self):
        """Test that a nonzero entry above the diagonal raises InvalidMatrix"""
        with pytest.raises(InvalidMatrix):
            LowerMatrix([[1.0, 1.0], [0.0, 1.0]])

    def test_entries_are_read_only(self):
        """Test immutability of the wrapped array"""
        m = SymMatrix.identity(2)
        with pytest.raises(ValueError):
            m.entries[0, 0] = 3.0

    def test_non_square_is_dimension_mismatch(self):
        """Test that a rectangular array is rejected"""
        with pytest.raises(DimensionMismatch):
            SymMatrix(np.zeros((2, 3)))

    def test_check_same_dimension(self):
        """Test the dimension guard"""
        assert check_same_dimension(SymMatrix.identity(3), np.eye(3)) == 3
        with pytest.raises(DimensionMismatch):
            check_same_dimension(SymMatrix.identity(3), SymMatrix.identity(2))

    def test_invertible_flag(self):
        """Test detection of a zero diagonal"""
        assert LowerMatrix.diag(1.0, 2.0).invertible
        assert not LowerMatrix.diag(1.0, 0.0).invertible


class TestErrorFamilies:
    """Tests for the exception hierarchy"""

    def test_matrix_errors(self):
        """Test structural failures are ValueErrors and numerical ones ArithmeticErrors"""
        for cls in (NotSymmetric, InvalidMatrix, DimensionMismatch):
            assert issubclass(cls, SteinEmbedError) and issubclass(cls, ValueError)
        for cls in (NotPSD, Singular, NoConvergence):
            assert issubclass(cls, SteinEmbedError) and issubclass(cls, ArithmeticError)

    def test_every_error_documented(self):
        """Test each package exception carries its own docstring"""
        for name, cls in inspect.getmembers(exceptions, inspect.isclass):
            if issubclass(cls, SteinEmbedError):
                assert cls.__doc__, name


class TestEigen:
    """Tests for the Jacobi eigen-decomposition"""

    def test_diagonal_spectrum(self):
        """Test eigenvalues of a diagonal matrix"""
        assert psd_eigencheck(SymMatrix.diag(2.0, 1.0)) == [1.0, 2.0]

    def test_sigma0_top_eigenvalue(self):
        """Test the rank-one limit covariance at p = 1/2"""
        values = psd_eigencheck(sigma0(0.5))
        assert values[-1] == pytest.approx(0.2578125, abs=1e-12)
        assert abs(values[0]) < 1e-12
        assert abs(values[1]) < 1e-12

    def test_decomposition_reconstructs(self, rng):
        """Test V diag(values) Vᵗ = S with orthonormal V"""
        for _ in range(50):
            d = int(rng.integers(1, 8))
            b = rng.standard_normal((d, d))
            s = (b + b.T) / 2.0
            values, vectors = jacobi_eigen(s)
            assert np.allclose(vectors @ np.diag(values) @ vectors.T, s, atol=1e-10)
            assert np.allclose(vectors.T @ vectors, np.eye(d), atol=1e-10)

    def test_sweep_budget(self):
        """Test NoConvergence when no sweep is allowed"""
        with pytest.raises(NoConvergence):
            jacobi_eigen(np.array([[1.0, 0.5], [0.5, 2.0]]), max_sweeps=0)


class TestSquareRoots:
    """Tests for sym_sqrt and sym_inv_sqrt"""

    def test_identity(self):
        """Test the root of the identity"""
        assert np.allclose(as_array(sym_sqrt(SymMatrix.identity(3))), np.eye(3), atol=1e-14)

    def test_diagonal(self):
        """Test diag(4, 9) gives diag(2, 3)"""
        root = sym_sqrt(SymMatrix.diag(4.0, 9.0))
        assert np.allclose(as_array(root), np.diag([2.0, 3.0]), atol=1e-12)
        assert root.psd

    def test_rank_one_sigma0(self):
        """Test the root of Σ₀ squares back and equals (√c/|v|) vvᵗ"""
        p = 0.3
        s = as_array(sigma0(p))
        root = as_array(sym_sqrt(sigma0(p)))
        v = np.array([1.0, 2 * p, p ** 2])
        c = 0.5 * p * (1 - p)
        assert np.max(np.abs(root @ root - s)) <= 1e-10 * (1 + supnorm(s))
        # null eigenvalues come back as ±1e-17, whose roots are ~1e-9
        assert np.allclose(root, np.sqrt(c) / np.linalg.norm(v) * np.outer(v, v), atol=1e-7)

    def test_random_psd_round_trip(self, rng):
        """Test R·R = S for random PSD matrices, full rank and rank deficient"""
        for trial in range(1000):
            d = int(rng.integers(1, 6))
            cols = d if trial % 2 else max(1, d - 1)
            b = rng.standard_normal((d, cols))
            s = b @ b.T
            root = as_array(sym_sqrt(SymMatrix.symmetrized(s)))
            assert np.max(np.abs(root @ root - s)) <= 1e-10 * (1 + supnorm(s))

    def test_not_psd(self):
        """Test that a negative eigenvalue raises NotPSD"""
        with pytest.raises(NotPSD):
            sym_sqrt(SymMatrix.diag(1.0, -1.0))
        with pytest.raises(NotPSD):
            tag_psd(np.array([[0.0, 1.0], [1.0, 0.0]]))

    def test_inverse_root(self):
        """Test diag(4, 9) gives diag(1/2, 1/3)"""
        inv = sym_inv_sqrt(SymMatrix.diag(4.0, 9.0))
        assert np.allclose(as_array(inv), np.diag([0.5, 1.0 / 3.0]), atol=1e-12)

    def test_inverse_root_singular(self):
        """Test that Σ₀ has no inverse root"""
        with pytest.raises(Singular):
            sym_inv_sqrt(sigma0(0.5))


class TestLowerInverse:
    """Tests for lower_inverse and lambda_colsums"""

    def test_identity(self):
        """Test the inverse of the identity"""
        assert np.array_equal(as_array(lower_inverse(LowerMatrix.identity(3))), np.eye(3))

    def test_graph_lambda(self, model_small):
        """Test the inverse of Λ for G(4, 1/2)"""
        inv = as_array(lower_inverse(lambda_graph(model_small)))
        expected = 6.0 * np.array([
            [1.0, 0.0, 0.0],
            [0.5, 0.5, 0.0],
            [1.0 / 12.0, 1.0 / 12.0, 1.0 / 3.0],
        ])
        assert np.allclose(inv, expected, atol=1e-12)
        assert np.allclose(lambda_colsums(inv), [9.5, 3.5, 2.0], atol=1e-12)

    def test_graph_weights_closed_form(self):
        """Test λ⁽ⁱ⁾ = C(1+p+p²/3), C(1/2+p/6), C/3 across a grid"""
        for n in (4, 7, 20):
            for p in (0.1, 0.5, 0.9):
                model = GraphModel(n, p)
                c = model.pairs
                weights = lambda_colsums(lower_inverse(lambda_graph(model)))
                assert np.allclose(weights, [c * (1 + p + p * p / 3), c * (0.5 + p / 6), c / 3.0], rtol=1e-12)
                assert np.max(weights) <= 1.5 * n * n

    def test_ustat_lambda(self):
        """Test (Λ⁻¹)_{k,l} = n/l and its column sums"""
        inv = as_array(lower_inverse(lambda_ustat(10, 3)))
        assert np.allclose(inv, np.tril(np.tile([10.0, 5.0, 10.0 / 3.0], (3, 1))), atol=1e-12)
        assert np.allclose(lambda_colsums(inv), [30.0, 10.0, 10.0 / 3.0], atol=1e-12)

    def test_zero_diagonal(self):
        """Test Singular for a zero pivot"""
        with pytest.raises(Singular):
            lower_inverse(LowerMatrix.diag(1.0, 0.0))

    def test_supnorm(self):
        """Test largest absolute entry"""
        assert supnorm(sigma0(0.5)) == pytest.approx(0.125)
        assert supnorm(np.array([[-3.0, 1.0], [1.0, 2.0]])) == 3.0
