"""Programmatic interface for wavecone.

The CLI commands are thin wrappers over these functions:
- analyze(op_ref) -> AnalysisReport
- annihilate(op_ref) -> (annihilator spec, exactness check)
- solve(op_ref, n, seed, perturbation) -> SolveResult
- run_experiment(config_path, out_dir) -> written report paths

Operator references are either builtin references such as
"builtin:gradient?d=2&m=1" or paths to operator spec JSON files.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from pathlib import Path
from typing import NamedTuple

from wavecone.config import AnalysisSettings
from wavecone.cones.geometry import ConeSpec, SubspaceSpec
from wavecone.cones.report import AnalysisReport, analysis_report
from wavecone.lab.configs import SwirlConfig, load_experiment_config
from wavecone.lab.experiments import run_config
from wavecone.lab.report import ExperimentReport, ReportFormat
from wavecone.lab.swirl import swirl_fields
from wavecone.operators.resolver import load_operator
from wavecone.operators.spec import OperatorSpec
from wavecone.spectral.grid import TorusField, TorusGrid, random_field
from wavecone.spectral.io import write_field
from wavecone.spectral.solvers import (
    DEFAULT_MAX_ITER,
    Perturbation,
    laplace_residual,
    solve_laplace,
    solve_perturbed,
)
from wavecone.symbolic.annihilator import AnnihilatorCheck, annihilator, verify_annihilator

logger = logging.getLogger(__name__)


def analyze(
    op_ref: str | Path,
    subspaces: list[SubspaceSpec] | None = None,
    cone: ConeSpec | None = None,
    settings: AnalysisSettings | None = None,
) -> AnalysisReport:
    """Sampled analysis of an operator, including its wave-cone sample.

    Raises:
        SpecError: If the reference cannot be resolved
    """
    op = load_operator(op_ref)
    return analysis_report(op, subspaces, cone, settings, include_wave_cone=True)


def annihilate(
    op_ref: str | Path, settings: AnalysisSettings | None = None
) -> tuple[OperatorSpec, AnnihilatorCheck]:
    """Adjugate annihilator of an elliptic operator with its exactness check.

    Raises:
        NotEllipticError: If the operator is not elliptic on the sample
        SymbolicBudgetError: If the construction exceeds the symbolic budget
    """
    settings = settings or AnalysisSettings.default()
    op_b = load_operator(op_ref)
    result = annihilator(op_b, sample_size=settings.sample_size, seed=settings.seed)
    check = verify_annihilator(
        result.op_a,
        op_b,
        angle_tol=settings.angle_tol,
        rank_tol=settings.rank_tol,
        seed=settings.seed,
    )
    return result.op_a, check


class SolveResult(NamedTuple):
    u: TorusField
    f: TorusField
    residual: float
    iterations: int
    contraction: float
    converged: bool


def solve(
    op_ref: str | Path,
    n: int = 64,
    seed: int = 0,
    perturbation: float = 0.0,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SolveResult:
    """Solve (Id + Delta_B - R) u = f for a seeded random right-hand side.

    R is ``perturbation`` times the polyharmonic operator Delta^k; zero gives
    the direct spectral solve.

    Raises:
        PerturbationDivergedError: If the fixed-point iteration diverges
    """
    op = load_operator(op_ref)
    grid = TorusGrid(d=op.d, n=n)
    f = random_field(grid, op.dim_v, seed)
    if perturbation == 0.0:
        u = solve_laplace(op, f)
        return SolveResult(u, f, laplace_residual(op, u, f), 1, 0.0, True)
    shape = Perturbation.polyharmonic(grid, op.dim_v, op.k, delta=perturbation)
    result = solve_perturbed(op, shape, f, max_iter=max_iter)
    return SolveResult(
        result.u, f, result.residual, result.iterations, result.contraction, result.converged
    )


def _report_stem(report: ExperimentReport | object, count: int) -> str | None:
    if count > 1 and isinstance(report, ExperimentReport):
        return f"{report.kind}_p{report.p.replace('/', '-')}"
    return None


def run_experiment(
    config_path: Path,
    out_dir: Path,
    formats: Sequence[ReportFormat] = ("json", "csv"),
    overrides: dict | None = None,
) -> list[Path]:
    """Run an experiment config and write its reports under out_dir.

    Relative operator paths in the config resolve against the config's
    directory. A p-sweep writes one report per exponent. ``overrides`` replaces
    top-level config keys (seed, grid, p, scales) before validation.

    Raises:
        FileNotFoundError: If the config file doesn't exist
        pydantic.ValidationError: If the config is invalid
        HypothesisError: If a hypothesis gate fails
    """
    config = load_experiment_config(config_path, overrides)
    reports = run_config(config, base_dir=config_path.parent)
    written: list[Path] = []
    for report in reports:
        written.extend(report.write(out_dir, formats, stem=_report_stem(report, len(reports))))
    if isinstance(config, SwirlConfig) and config.grid is not None:
        grid = TorusGrid(d=2, n=config.grid)
        for eps in config.eps:
            fields = swirl_fields(eps, grid)
            tag = f"{eps!r}"
            for name, field in fields._asdict().items():
                path = out_dir / f"swirl_{name}_eps{tag}.bin"
                write_field(field, path, label=f"swirl {name} eps={tag}")
                written.append(path)
    logger.debug("wrote %d files to %s", len(written), out_dir)
    return written
