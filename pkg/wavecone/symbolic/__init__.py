"""Exact polynomial-matrix algebra for symbols."""

from wavecone.symbolic.annihilator import (
    Annihilator,
    AnnihilatorCheck,
    annihilator,
    iterated_laplacian,
    minimal_iteration_order,
    polymatrix_kernel,
    verify_annihilator,
)
from wavecone.symbolic.polymatrix import (
    PolyMatrix,
    PolyMatrixModel,
    frequency_symbols,
    laplacian_symbol,
    poly_adjugate,
    poly_det,
    polymatrix_from_json,
    polymatrix_to_operator,
    symbol_polymatrix,
)

__all__ = [
    "Annihilator",
    "AnnihilatorCheck",
    "PolyMatrix",
    "PolyMatrixModel",
    "annihilator",
    "frequency_symbols",
    "iterated_laplacian",
    "laplacian_symbol",
    "minimal_iteration_order",
    "poly_adjugate",
    "poly_det",
    "polymatrix_from_json",
    "polymatrix_kernel",
    "symbol_polymatrix",
    "verify_annihilator",
]
