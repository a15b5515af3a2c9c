"""wavecone - operators, wave cones and cone-constrained measures on the torus.

Core API:
    analyze(op_ref) -> AnalysisReport
    annihilate(op_ref) -> (OperatorSpec, AnnihilatorCheck)
    solve(op_ref, n, seed, perturbation) -> SolveResult
    run_experiment(config_path, out_dir) -> list[Path]

Example:
    >>> from wavecone import analyze
    >>> report = analyze("builtin:divergence_rows?d=2")
    >>> report.is_constant_rank, report.is_canceling
    (True, False)
"""

__version__ = "0.3.0"

from wavecone.api import SolveResult, analyze, annihilate, run_experiment, solve  # noqa: E402
from wavecone.config import AnalysisSettings  # noqa: E402
from wavecone.errors import (  # noqa: E402
    HypothesisError,
    PreconditionError,
    SpecError,
    WaveconeError,
)

__all__ = [
    "AnalysisSettings",
    "HypothesisError",
    "PreconditionError",
    "SolveResult",
    "SpecError",
    "WaveconeError",
    "__version__",
    "analyze",
    "annihilate",
    "run_experiment",
    "solve",
]
