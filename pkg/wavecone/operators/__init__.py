"""Operator specifications, symbols and the builtin catalog."""

from wavecone.operators.builtins import BUILTINS, builtin
from wavecone.operators.multiindex import MultiIndex, multi_indices
from wavecone.operators.resolver import load_operator
from wavecone.operators.spec import (
    OperatorSpec,
    OperatorSpecModel,
    from_json,
    spec_hash,
    to_json,
)
from wavecone.operators.symbol import (
    SymbolValue,
    adjoint,
    compose,
    full_symbol_batch,
    reduced_symbol_batch,
    scale,
    symbol_eval,
)

__all__ = [
    "BUILTINS",
    "MultiIndex",
    "OperatorSpec",
    "OperatorSpecModel",
    "SymbolValue",
    "adjoint",
    "builtin",
    "compose",
    "from_json",
    "full_symbol_batch",
    "load_operator",
    "multi_indices",
    "reduced_symbol_batch",
    "scale",
    "spec_hash",
    "symbol_eval",
    "to_json",
]
