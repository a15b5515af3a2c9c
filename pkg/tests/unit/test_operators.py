"""Tests for operator specs, symbols, builtins and reference resolution."""

import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from wavecone.errors import DimensionError, SpecError, UnknownBuiltinError
from wavecone.operators import (
    MultiIndex,
    OperatorSpec,
    adjoint,
    builtin,
    compose,
    from_json,
    full_symbol_batch,
    load_operator,
    multi_indices,
    reduced_symbol_batch,
    scale,
    spec_hash,
    symbol_eval,
    to_json,
)
from wavecone.operators.resolver import is_builtin_ref, parse_builtin_ref
from wavecone.operators.spec import parse_rational, save_spec_file

FIXTURES = Path(__file__).parent.parent / "fixtures" / "operators"


class TestMultiIndex:
    """Tests for multi-index arithmetic."""

    def test_rejects_negative_entries(self):
        """Negative exponents are not multi-indices."""
        with pytest.raises(ValueError, match="non-negative"):
            MultiIndex.of([1, -1])

    def test_modulus_and_addition(self):
        """Modulus sums entries; addition is componentwise."""
        alpha = MultiIndex.of([1, 2]) + MultiIndex.unit(2, 0)
        assert alpha.entries == (2, 2)
        assert alpha.modulus == 4

    def test_monomial_batch(self):
        """xi^alpha is evaluated row by row."""
        xis = np.array([[2.0, 3.0], [1.0, -1.0]])
        np.testing.assert_allclose(MultiIndex.of([1, 2]).monomial(xis), [18.0, 1.0])

    def test_multi_indices_of_modulus(self):
        """All exponents of modulus k are enumerated once."""
        assert [a.entries for a in multi_indices(2, 2)] == [(2, 0), (1, 1), (0, 2)]
        assert len(list(multi_indices(3, 2))) == 6


class TestOperatorSpec:
    """Tests for OperatorSpec validation and serialization."""

    def test_zero_coefficients_are_dropped(self):
        """Zero matrices do not change the operator."""
        op = OperatorSpec(
            d=2,
            k=1,
            dim_v=1,
            dim_w=1,
            coeffs={MultiIndex.of([1, 0]): [[1]], MultiIndex.of([0, 1]): [[0]]},
        )
        assert list(op.coeffs) == [MultiIndex.of([1, 0])]

    def test_all_zero_is_rejected(self):
        """An operator needs a nonzero coefficient."""
        with pytest.raises(SpecError, match="no nonzero coefficient"):
            OperatorSpec(d=1, k=1, dim_v=1, dim_w=1, coeffs={MultiIndex.of([1]): [[0]]})

    def test_wrong_modulus(self):
        """Coefficients must sit at |alpha| = k."""
        with pytest.raises(SpecError, match="modulus"):
            OperatorSpec(d=2, k=1, dim_v=1, dim_w=1, coeffs={MultiIndex.of([1, 1]): [[1]]})

    def test_wrong_matrix_shape(self):
        """Coefficient matrices are dimW x dimV."""
        with pytest.raises(DimensionError):
            OperatorSpec(d=1, k=1, dim_v=2, dim_w=1, coeffs={MultiIndex.of([1]): [[1]]})

    def test_json_round_trip(self):
        """to_json output parses back to an equal operator."""
        op = builtin("symmetric_gradient", 2)
        assert from_json(to_json(op)) == op

    def test_hash_ignores_name(self):
        """The hash covers coefficients, not the display name."""
        op = builtin("gradient", 2)
        renamed = OperatorSpec(op.d, op.k, op.dim_v, op.dim_w, op.coeffs, name="other")
        assert spec_hash(op) == spec_hash(renamed)
        assert spec_hash(op) != spec_hash(builtin("gradient", 3))

    def test_specs_are_hashable(self):
        """Equal specs hash alike and can key sets and dicts."""
        op = builtin("curl", 2, m=2)
        renamed = OperatorSpec(op.d, op.k, op.dim_v, op.dim_w, op.coeffs, name="other")
        assert hash(op) == hash(renamed)
        assert {op, renamed, builtin("gradient", 2)} == {op, builtin("gradient", 2)}
        assert hash(from_json(to_json(op))) == hash(op)

    def test_fixture_matches_builtin(self):
        """The gradient fixture is the catalog gradient."""
        assert load_operator(FIXTURES / "gradient_d2.json") == builtin("gradient", 2)

    def test_malformed_json_reports_line(self):
        """Broken JSON is a SpecError with the line number."""
        with pytest.raises(SpecError, match="line 5"):
            load_operator(FIXTURES / "malformed.json")

    def test_schema_violation_names_field(self):
        """Missing fields are reported by path."""
        with pytest.raises(SpecError, match="dimW"):
            from_json('{"d": 2, "k": 1, "dimV": 1, "coeffs": []}')

    def test_bad_modulus_file(self):
        """Semantic errors carry the source path."""
        with pytest.raises(SpecError, match="bad_modulus.json"):
            load_operator(FIXTURES / "bad_modulus.json")

    def test_save_and_load(self):
        """Saved specs load back unchanged."""
        op = builtin("curl", 3, m=2)
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "nested" / "curl.json"
            save_spec_file(op, path)
            assert load_operator(path) == op

    def test_parse_rational(self):
        """Rationals parse from strings, ints and decimals."""
        assert parse_rational("3/2") == Fraction(3, 2)
        assert parse_rational(2) == Fraction(2)
        assert parse_rational("0.25") == Fraction(1, 4)
        with pytest.raises(ValueError):
            parse_rational("x/2")
        with pytest.raises(ValueError):
            parse_rational(True)


class TestSymbols:
    """Tests for symbol evaluation and operator algebra."""

    def test_reduced_gradient_symbol(self):
        """The reduced symbol of the gradient is xi as a column."""
        batch = reduced_symbol_batch(builtin("gradient", 2), np.array([[3.0, -1.0]]))
        np.testing.assert_allclose(batch[0], [[3.0], [-1.0]])

    def test_full_symbol_factor(self):
        """The full symbol carries (2 pi i)^k."""
        op = builtin("laplacian", 2)
        full = full_symbol_batch(op, np.array([[1.0, 1.0]]))[0, 0, 0]
        assert full == pytest.approx((2j * np.pi) ** 2 * 2.0)

    def test_symbol_eval_checks_dimension(self):
        """Frequencies need d components."""
        with pytest.raises(DimensionError):
            symbol_eval(builtin("gradient", 2), [1.0, 0.0, 0.0])

    def test_curl_of_gradient_is_zero(self):
        """curl o gradient composes to the zero operator."""
        assert compose(builtin("curl", 2), builtin("gradient", 2)).is_zero

    def test_divergence_of_symmetric_gradient_is_not_zero(self):
        """Composition keeps nonzero results."""
        composed = compose(builtin("divergence_rows", 2), builtin("symmetric_gradient", 2))
        assert not composed.is_zero
        assert composed.k == 2

    def test_compose_checks_dimensions(self):
        """Inner target must match outer domain."""
        with pytest.raises(DimensionError):
            compose(builtin("gradient", 2), builtin("gradient", 2))

    def test_formal_adjoint_conjugates_full_symbol(self):
        """The formal adjoint has the conjugate-transposed full symbol."""
        op = builtin("gradient", 2)
        xi = np.array([[0.3, -0.7]])
        forward = full_symbol_batch(op, xi)[0]
        backward = full_symbol_batch(adjoint(op, formal=True), xi)[0]
        np.testing.assert_allclose(backward, forward.conj().T)

    def test_scale_rejects_zero(self):
        """Scaling by zero would produce the zero operator."""
        with pytest.raises(ValueError, match="nonzero"):
            scale(builtin("gradient", 2), 0)
        doubled = scale(builtin("gradient", 2), "2")
        np.testing.assert_allclose(
            reduced_symbol_batch(doubled, np.array([[1.0, 0.0]]))[0], [[2.0], [0.0]]
        )


class TestBuiltins:
    """Tests for the operator catalog and references."""

    def test_shapes(self):
        """Catalog operators have the documented dimensions."""
        assert (builtin("gradient", 3, m=2).dim_v, builtin("gradient", 3, m=2).dim_w) == (2, 6)
        assert builtin("divergence_rows", 2).dim_v == 4
        assert builtin("hessian_k", 2, k=3).dim_w == 4
        assert builtin("laplacian", 3).k == 2

    def test_curl_kernel_is_rank_one(self):
        """curl(xi) annihilates a (x) xi."""
        op = builtin("curl", 2, m=2)
        xi = np.array([0.6, 0.8])
        a = np.array([1.5, -2.0])
        symbol = reduced_symbol_batch(op, xi[None, :])[0]
        np.testing.assert_allclose(symbol @ np.outer(a, xi).ravel(), 0.0, atol=1e-14)

    def test_unknown_builtin(self):
        """Unknown names list the catalog."""
        with pytest.raises(UnknownBuiltinError, match="Available"):
            builtin("wave", 2)

    def test_order_only_for_hessian(self):
        """k is only a parameter of hessian_k."""
        with pytest.raises(DimensionError):
            builtin("gradient", 2, k=2)

    def test_builtin_reference(self):
        """Builtin references resolve with integer parameters."""
        assert is_builtin_ref("builtin:gradient?d=2")
        assert not is_builtin_ref(FIXTURES / "gradient_d2.json")
        assert parse_builtin_ref("builtin:hessian_k?d=3&k=2") == ("hessian_k", {"d": 3, "k": 2})
        assert load_operator("builtin:curl?d=2&m=2") == builtin("curl", 2, m=2)

    @pytest.mark.parametrize(
        "ref,message",
        [
            ("builtin:gradient", "missing the dimension"),
            ("builtin:gradient?d=x", "must be an integer"),
            ("builtin:gradient?d=2&n=3", "Unknown builtin parameter"),
            ("builtin:Gradient?d=2", "Invalid builtin reference"),
        ],
    )
    def test_malformed_references(self, ref, message):
        """Malformed references are SpecErrors."""
        with pytest.raises(SpecError, match=message):
            load_operator(ref)

    def test_missing_file(self):
        """A missing spec file is a SpecError."""
        with pytest.raises(SpecError, match="not found"):
            load_operator(FIXTURES / "nope.json")
