"""Resolve operator references to OperatorSpecs.

Reference formats:
- Builtin: "builtin:gradient?d=2&m=1", "builtin:hessian_k?d=3&k=2"
- File: any path to an operator spec JSON file
"""

from __future__ import annotations

import re
from pathlib import Path
from urllib.parse import parse_qs

from wavecone.errors import SpecError
from wavecone.operators.builtins import builtin
from wavecone.operators.spec import OperatorSpec, load_spec_file

BUILTIN_PATTERN = re.compile(r"^builtin:([a-z_]+)(?:\?([a-zA-Z0-9_=&]*))?$")

BUILTIN_PARAMS = ("d", "m", "k")


def parse_builtin_ref(ref: str) -> tuple[str, dict[str, int]]:
    """Split a builtin reference into its name and integer parameters.

    Raises:
        SpecError: If the reference is malformed or parameters are not integers
    """
    match = BUILTIN_PATTERN.match(ref)
    if not match:
        raise SpecError(
            f"Invalid builtin reference: '{ref}'. Expected format: builtin:NAME?d=INT&m=INT"
        )
    name, query = match.group(1), match.group(2) or ""
    params: dict[str, int] = {}
    for key, values in parse_qs(query, strict_parsing=bool(query)).items():
        if key not in BUILTIN_PARAMS:
            raise SpecError(f"Unknown builtin parameter '{key}' in '{ref}'")
        if len(values) != 1:
            raise SpecError(f"Parameter '{key}' given more than once in '{ref}'")
        try:
            params[key] = int(values[0])
        except ValueError as e:
            raise SpecError(f"Parameter '{key}' must be an integer in '{ref}'") from e
    if "d" not in params:
        raise SpecError(f"Builtin reference '{ref}' is missing the dimension d")
    return name, params


def is_builtin_ref(ref: str | Path) -> bool:
    return isinstance(ref, str) and ref.startswith("builtin:")


def load_operator(ref: str | Path) -> OperatorSpec:
    """Load an operator from a builtin reference or a JSON file path.

    Raises:
        SpecError: On malformed references, unknown builtins, missing files or invalid JSON
    """
    if is_builtin_ref(ref):
        name, params = parse_builtin_ref(str(ref))
        return builtin(name, params["d"], m=params.get("m"), k=params.get("k"))
    return load_spec_file(Path(ref))
