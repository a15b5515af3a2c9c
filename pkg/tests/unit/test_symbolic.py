"""Tests for exact polynomial matrices and adjugate annihilators."""

import numpy as np
import pytest
import sympy as sp

from wavecone.errors import DimensionError, NotEllipticError, SymbolicBudgetError
from wavecone.operators import builtin, compose, reduced_symbol_batch
from wavecone.symbolic import (
    PolyMatrix,
    annihilator,
    frequency_symbols,
    iterated_laplacian,
    laplacian_symbol,
    minimal_iteration_order,
    poly_adjugate,
    poly_det,
    polymatrix_from_json,
    polymatrix_kernel,
    symbol_polymatrix,
    verify_annihilator,
)
from wavecone.symbolic.polymatrix import polymatrix_to_operator

XI1, XI2 = frequency_symbols(2)


def poly(expr):
    return sp.Poly(expr, XI1, XI2, domain=sp.QQ)


class TestPolyMatrix:
    """Tests for polynomial matrix algebra."""

    def test_symbol_round_trip(self):
        """A symbol read back as an operator is the same operator."""
        op = builtin("symmetric_gradient", 2)
        assert polymatrix_to_operator(symbol_polymatrix(op)) == op

    def test_evaluate_matches_symbol(self):
        """Numerical evaluation agrees with the reduced symbol."""
        op = builtin("curl", 2, m=2)
        xis = np.array([[0.3, -0.4], [1.0, 2.0]])
        np.testing.assert_allclose(
            symbol_polymatrix(op).evaluate(xis), reduced_symbol_batch(op, xis), atol=1e-14
        )

    def test_json_round_trip(self):
        """The entry-list wire format restores every polynomial."""
        M = laplacian_symbol(builtin("symmetric_gradient", 2))
        restored = polymatrix_from_json(M.to_json())
        assert restored.shape == M.shape
        assert restored.degree == 2
        assert all(restored[i, j] == M[i, j] for i in range(2) for j in range(2))

    def test_gradient_laplacian_is_norm_squared(self):
        """B* B for the scalar gradient is |xi|^2."""
        M = laplacian_symbol(builtin("gradient", 2))
        assert M.shape == (1, 1)
        assert M[0, 0] == poly(XI1**2 + XI2**2)

    def test_determinant_and_adjugate(self):
        """adj(M) M = det(M) I exactly."""
        M = PolyMatrix.from_grid(
            [[poly(XI1), poly(XI2)], [poly(-XI2), poly(XI1)]], (XI1, XI2), degree=1
        )
        det = poly_det(M)
        assert det == poly(XI1**2 + XI2**2)
        product = poly_adjugate(M) @ M
        assert (product - PolyMatrix.identity(2, M.gens).scale(det)).is_zero()

    def test_bareiss_matches_berkowitz_on_three_by_three(self):
        """Fraction-free elimination agrees with sympy on a 3x3 Laplacian symbol."""
        M = laplacian_symbol(builtin("gradient", 3, m=3))
        expr = sp.Matrix([[p.as_expr() for p in row] for row in M.entries]).det()
        assert poly_det(M) == sp.Poly(sp.expand(expr), *M.gens, domain=sp.QQ)

    def test_non_square_determinant(self):
        """Determinants need square matrices."""
        with pytest.raises(DimensionError):
            poly_det(symbol_polymatrix(builtin("gradient", 2)))

    def test_inhomogeneous_degree_rejected(self):
        """Entries must match the declared degree."""
        with pytest.raises(ValueError, match="degree"):
            PolyMatrix.from_grid([[poly(XI1**2)]], (XI1, XI2), degree=1)


class TestAnnihilator:
    """Tests for the adjugate annihilator construction."""

    def test_gradient_annihilator_symbol(self):
        """For the scalar gradient A(xi) = |xi|^2 I - xi xi^T."""
        result = annihilator(builtin("gradient", 2))
        assert result.order == 2
        A = result.symbol_a
        assert A[0, 0] == poly(XI2**2)
        assert A[0, 1] == poly(-XI1 * XI2)
        assert A[1, 1] == poly(XI1**2)

    @pytest.mark.parametrize(
        "name,d,m,order",
        [
            ("gradient", 2, 1, 2),
            ("gradient", 3, 1, 2),
            ("gradient", 2, 2, 4),
            ("gradient", 3, 2, 4),
            ("symmetric_gradient", 2, None, 4),
        ],
    )
    def test_annihilator_is_exact(self, name, d, m, order):
        """A o B = 0 symbolically and ker A(xi) = im B(xi) on 100 frequencies."""
        op_b = builtin(name, d, m=m)
        result = annihilator(op_b)
        assert result.op_a.k == order
        assert compose(result.op_a, op_b).is_zero
        check = verify_annihilator(result.op_a, op_b, seed=0)
        assert check.symbolic_zero
        assert check.frequencies == 100
        assert check.dim_mismatches == 0
        assert check.max_angle <= 1e-8
        assert check.is_exact

    def test_kernel_of_annihilator_symbol(self):
        """ker A(xi) is span(xi) for the scalar gradient."""
        A = annihilator(builtin("gradient", 2)).symbol_a
        basis = polymatrix_kernel(A, np.array([3.0, 4.0]))
        assert basis.shape == (2, 1)
        np.testing.assert_allclose(np.abs(basis[:, 0]), [0.6, 0.8], atol=1e-12)

    def test_non_elliptic_input(self):
        """The construction requires an elliptic operator."""
        with pytest.raises(NotEllipticError, match="nontrivial symbol kernel"):
            annihilator(builtin("curl", 2))

    def test_domain_budget(self):
        """dim U above 4 is refused before any symbolic work."""
        with pytest.raises(SymbolicBudgetError, match="dim U"):
            annihilator(builtin("gradient", 2, m=5))

    def test_curl_annihilates_gradient(self):
        """curl is an exact annihilator of the gradient without ellipticity."""
        assert verify_annihilator(builtin("curl", 2), builtin("gradient", 2)).is_exact

    def test_wrong_candidate(self):
        """The vector Laplacian does not annihilate the gradient."""
        check = verify_annihilator(builtin("laplacian", 2, m=2), builtin("gradient", 2))
        assert not check.symbolic_zero
        assert not check.is_exact


class TestIteratedLaplacian:
    """Tests for iterated Laplacians of annihilators."""

    @pytest.mark.parametrize("k,d,r", [(1, 2, 2), (1, 3, 2), (2, 3, 1), (1, 1, 1), (1, 4, 3)])
    def test_minimal_iteration_order(self, k, d, r):
        """r is the first exponent with 2^r k > d."""
        assert minimal_iteration_order(k, d) == r

    def test_iterated_gradient_laplacian(self):
        """[B^T B]^2 for the gradient is |xi|^4."""
        M = iterated_laplacian(builtin("gradient", 2), 2)
        assert M[0, 0] == poly((XI1**2 + XI2**2) ** 2)

    def test_iteration_budget(self):
        """Degrees beyond the budget are refused."""
        with pytest.raises(SymbolicBudgetError):
            iterated_laplacian(builtin("gradient", 2), 6)
