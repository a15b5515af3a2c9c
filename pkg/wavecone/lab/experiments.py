"""Higher-integrability, local-canceling and counterexample experiments.

Each experiment is a pure function of its inputs and seed and returns a report
from ``wavecone.lab.report``. ``run_config`` dispatches a validated experiment
config to the matching runner.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from wavecone.cones.analysis import canceling_check, ellipticity_distance, rank_profile
from wavecone.cones.geometry import ConeSpec
from wavecone.cones.sphere import sphere_sample
from wavecone.config import AnalysisSettings
from wavecone.errors import (
    ConeViolationError,
    DimensionError,
    ExponentRangeError,
    NotCancelingError,
)
from wavecone.lab.compactness import compactness_diagnostics
from wavecone.lab.configs import (
    CompactnessConfig,
    ExperimentConfig,
    HigherIntegrabilityConfig,
    LaminateConfig,
    LaminateSequence,
    LocalCancelingConfig,
    SwirlConfig,
)
from wavecone.lab.laminates import laminate_sequence, pairing_decay_rate
from wavecone.lab.ladder import (
    LadderSeed,
    RunMode,
    exponent_window,
    ladder_seed,
    run_mode,
)
from wavecone.lab.measures import DiscreteMeasure, SubBox, mollify
from wavecone.lab.polar import polar_diagnostics
from wavecone.lab.report import (
    CompactnessReport,
    CompactnessRow,
    ExperimentReport,
    LaminateReport,
    LaminateRow,
    LocalCancelingReport,
    LocalCancelingRow,
    Report,
    ScaleRow,
    SwirlReport,
    SwirlRow,
    bounded_ratio,
)
from wavecone.lab.swirl import EXPECTED_INNER_MASS, eta_constant, swirl_table
from wavecone.operators.resolver import is_builtin_ref, load_operator
from wavecone.operators.spec import OperatorSpec, spec_hash
from wavecone.spectral.grid import TorusField, TorusGrid
from wavecone.spectral.multipliers import apply_operator
from wavecone.spectral.norms import bessel_norm, lq_norm

logger = logging.getLogger(__name__)

A_FREE_TOL = 1e-10

MeasureFamily = DiscreteMeasure | Mapping[float, DiscreteMeasure]


def _measure_at(family: MeasureFamily, t: float) -> DiscreteMeasure:
    if isinstance(family, DiscreteMeasure):
        return family
    if t not in family:
        raise KeyError(f"no measure given for scale t={t}")
    return family[t]


def _scale_row(
    op: OperatorSpec,
    measure: DiscreteMeasure,
    t: float,
    cone: ConeSpec,
    p: float,
    mask: np.ndarray,
) -> ScaleRow:
    mu_t = mollify(measure, t, cone)
    diagnostics = polar_diagnostics(mu_t, cone)
    if diagnostics.violations:
        raise ConeViolationError(
            f"{diagnostics.violations} polar values of mu_t leave K_eps at t={t} "
            f"(max distance {diagnostics.max_dist:.3e}, eps={cone.epsilon})"
        )
    sigma_t = apply_operator(op, mu_t)
    lp = lq_norm(mu_t, p, mask)
    tv_mu = lq_norm(mu_t, 1.0)
    tv_sigma = lq_norm(sigma_t, 1.0)
    return ScaleRow(
        scale=t,
        lp_norm=lp,
        tv_mu=tv_mu,
        tv_sigma=tv_sigma,
        ratio=bounded_ratio(lp, tv_mu, tv_sigma),
        cone_max_dist=diagnostics.max_dist,
        M_inf=diagnostics.m_inf,
    )


def higher_integrability_experiment(
    op: OperatorSpec,
    measures: MeasureFamily,
    cone: ConeSpec,
    p: Fraction | int | str,
    scales: Sequence[float],
    box: SubBox | None = None,
    force: bool = False,
    seed: int = 0,
    settings: AnalysisSettings | None = None,
    workers: int = 1,
) -> ExperimentReport:
    """Ratio |mu_t|_{L^p(box)} / (|mu_t| + |A mu_t|) across mollification scales t.

    ``measures`` is one measure mollified at every scale or a mapping from
    scale to measure. Without ``force`` the exponent must lie in the window for
    the operator order; the endpoint d/(d-k) also needs a canceling operator
    of constant rank. Scales may run on ``workers`` threads; rows keep the
    given scale order.

    Raises:
        ExponentRangeError: If p is outside the window (or is the endpoint for a
            non-canceling operator) and force is not set
        ConeViolationError: If a mollified polar leaves the cone
    """
    settings = settings or AnalysisSettings.default()
    p = Fraction(p)
    if cone.dim != op.dim_v:
        raise DimensionError(f"cone lives in R^{cone.dim} but V has dimension {op.dim_v}")
    window = exponent_window(op.d, op.k)
    canceling = False
    seed_info: LadderSeed | None = None
    if window.upper is not None and p == window.upper:
        try:
            check_local_canceling_hypotheses(op, settings)
            canceling = True
        except NotCancelingError as exc:
            if not force:
                raise ExponentRangeError(
                    f"p = {p} is the limiting endpoint of {window.describe()}, "
                    f"which needs a canceling constant-rank operator: {exc}"
                ) from exc
            logger.info("endpoint p=%s without the canceling hypotheses; force is set", p)
    if canceling or window.contains(p):
        seed_info = ladder_seed(p, op.d, op.k)
    elif not force:
        raise ExponentRangeError(
            f"p = {p} is outside the higher-integrability window {window.describe()} "
            f"for d={op.d}, k={op.k}"
        )
    else:
        logger.info("p=%s is outside the window; continuing because force is set", p)
    box = box or SubBox.centered(op.d)
    grid = _measure_at(measures, scales[0]).grid
    mask = box.mask(grid)

    def run(t: float) -> ScaleRow:
        return _scale_row(op, _measure_at(measures, t), t, cone, float(p), mask)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, scales))
    else:
        rows = [run(t) for t in scales]

    a_free = all(row.tv_sigma <= A_FREE_TOL * max(row.tv_mu, 1e-300) for row in rows)
    mode = run_mode(p, op.d, op.k, a_free, canceling)
    if mode is RunMode.EXPLORATORY:
        logger.warning(
            "p=%s lies outside %s for %s: report is exploratory",
            p,
            window.describe(),
            op.label(),
        )
    sample = sphere_sample(op.d, settings.sample_size, seed)
    gap = ellipticity_distance(op, cone.subspace, sample, settings.rank_tol)
    metadata = {
        "seed": seed,
        "n": grid.n,
        "d": op.d,
        "k": op.k,
        "operator": op.label(),
        "operator_hash": spec_hash(op),
        "epsilon": cone.epsilon,
        "cone_axis": cone.axis.tolist(),
        "box": [list(box.lower), list(box.upper)],
        "window": window.describe(),
        "ladder_q": str(seed_info.q) if seed_info else None,
        "ladder_flag": seed_info.flag.value if seed_info else None,
        "delta_L": None if gap.elliptic else gap.delta,
        "is_a_free": a_free,
        "force": force,
    }
    return ExperimentReport(mode=mode, p=str(p), rows=rows, metadata=metadata)


def p_sweep(
    op: OperatorSpec,
    measures: MeasureFamily,
    cone: ConeSpec,
    ps: Sequence[Fraction | int | str],
    scales: Sequence[float],
    box: SubBox | None = None,
    seed: int = 0,
    settings: AnalysisSettings | None = None,
) -> list[ExperimentReport]:
    """One forced higher-integrability run per exponent; runs past the window are exploratory."""
    return [
        higher_integrability_experiment(
            op, measures, cone, p, scales, box=box, force=True, seed=seed, settings=settings
        )
        for p in ps
    ]


def check_local_canceling_hypotheses(
    op: OperatorSpec, settings: AnalysisSettings | None = None
) -> None:
    """Refuse operators that are not canceling, not of constant rank, or have k >= d.

    Raises:
        NotCancelingError: Naming the failed hypothesis
    """
    settings = settings or AnalysisSettings.default()
    if op.k >= op.d:
        raise NotCancelingError(f"{op.label()} has order k={op.k} >= d={op.d}")
    sample = sphere_sample(op.d, settings.sample_size, settings.seed)
    profile = rank_profile(op, sample, settings.rank_tol, settings.refine)
    if not profile.is_constant_rank:
        raise NotCancelingError(
            f"{op.label()} is not of constant rank (ranks {profile.min_rank}..{profile.max_rank})"
        )
    result = canceling_check(op, sample, settings.rank_tol, settings.angle_tol)
    if not result.is_canceling:
        raise NotCancelingError(
            f"{op.label()} is not canceling: the images of A(xi) share a "
            f"{result.intersection_dim}-dimensional subspace"
        )


def local_canceling_experiment(
    op: OperatorSpec,
    measure: DiscreteMeasure,
    box: SubBox | None = None,
    resolutions: Sequence[int] = (64, 128),
    t_cells: int = 4,
    seed: int = 0,
    settings: AnalysisSettings | None = None,
) -> LocalCancelingReport:
    """Bessel proxy of |chi A mu_t|_{W^{-1, d/(d-1)}} against |mu_t| + |A mu_t| per resolution.

    mu_t is the measure resampled to each grid and mollified at t = t_cells * h.
    """
    check_local_canceling_hypotheses(op, settings)
    if measure.dim != op.dim_v:
        raise DimensionError(f"measure has dim {measure.dim}, operator acts on dimV={op.dim_v}")
    box = box or SubBox.centered(op.d)
    q = op.d / (op.d - 1)
    rows = []
    for n in resolutions:
        grid = TorusGrid(d=op.d, n=n)
        mu_n = measure if measure.grid == grid else measure.resample(grid)
        t = t_cells * grid.h
        mu_t = mollify(mu_n, t)
        sigma = apply_operator(op, mu_t)
        localized = TorusField(grid=grid, values=sigma.values * box.cutoff(grid)[None, ...])
        neg = bessel_norm(localized, -1.0, q)
        tv_mu = lq_norm(mu_t, 1.0)
        tv_sigma = lq_norm(sigma, 1.0)
        rows.append(
            LocalCancelingRow(
                n=n,
                t=t,
                neg_norm=neg,
                tv_mu=tv_mu,
                tv_sigma=tv_sigma,
                ratio=bounded_ratio(neg, tv_mu, tv_sigma),
            )
        )
        logger.debug("local canceling n=%d: ratio %.6g", n, rows[-1].ratio)
    metadata = {
        "seed": seed,
        "d": op.d,
        "k": op.k,
        "operator": op.label(),
        "operator_hash": spec_hash(op),
        "q": q,
        "t_cells": t_cells,
        "box": [list(box.lower), list(box.upper)],
    }
    return LocalCancelingReport(rows=rows, metadata=metadata)


def swirl_report(eps_values: Sequence[float], seed: int = 0) -> SwirlReport:
    rows = [SwirlRow(**result._asdict()) for result in swirl_table(tuple(eps_values))]
    metadata = {
        "seed": seed,
        "expected_inner_first": EXPECTED_INNER_MASS,
        "eta_constant": eta_constant(),
    }
    return SwirlReport(rows=rows, metadata=metadata)


def laminate_report(
    op: OperatorSpec,
    xi: list[int],
    P: list[float],
    B0: list[float],
    delta: float,
    js: Sequence[int],
    grid: TorusGrid,
    seed: int = 0,
) -> LaminateReport:
    results = laminate_sequence(op, xi, P, B0, delta, tuple(js), grid)
    rows = [
        LaminateRow(
            j=r.j,
            a_free_residual=r.a_free_residual,
            pairing_error=r.pairing_error,
            l1_distance=r.l1_distance,
            expected_l1=r.expected_l1,
        )
        for r in results
    ]
    metadata = {
        "seed": seed,
        "n": grid.n,
        "operator": op.label(),
        "operator_hash": spec_hash(op),
        "xi": list(xi),
        "P": list(P),
        "B0": list(B0),
        "delta": delta,
        "pairing_decay_rate": pairing_decay_rate(results) if len(results) > 1 else None,
    }
    return LaminateReport(rows=rows, metadata=metadata)


def compactness_report(
    fields: Sequence[TorusField],
    box: SubBox,
    thresholds: Sequence[float],
    q: float = 1.0,
    cone: ConeSpec | None = None,
    metadata: dict | None = None,
) -> CompactnessReport:
    diagnostics = compactness_diagnostics(fields, box, thresholds, q=q, cone=cone)
    rows = []
    for i in range(len(fields)):
        rows.append(
            CompactnessRow(
                index=i,
                mass=diagnostics.masses[i],
                tails=diagnostics.tails[i].tolist(),
                weakstar_step=diagnostics.weakstar_steps[i - 1] if i else None,
                cone_violations=(
                    diagnostics.cone_violations[i] if diagnostics.cone_violations else None
                ),
            )
        )
    meta = dict(metadata or {})
    meta["q"] = q
    meta["weakstar_last"] = diagnostics.weakstar[-1].tolist()
    return CompactnessReport(
        rows=rows,
        thresholds=diagnostics.thresholds,
        equiintegrable=diagnostics.equiintegrable,
        metadata=meta,
    )


def resolve_operator(ref: str, base_dir: Path | None = None) -> OperatorSpec:
    """Builtin references load directly; relative paths resolve against base_dir."""
    if is_builtin_ref(ref) or base_dir is None or Path(ref).is_absolute():
        return load_operator(ref)
    return load_operator(base_dir / ref)


def _run_higher_integrability(
    config: HigherIntegrabilityConfig, base_dir: Path | None
) -> list[ExperimentReport]:
    op = resolve_operator(config.operator, base_dir)
    grid = TorusGrid(d=op.d, n=config.grid)
    measure = config.measure.build(grid)
    cone = config.cone.build()
    box = SubBox.centered(op.d, config.box_side)
    scales = config.scale_values()
    if config.sweep:
        return p_sweep(op, measure, cone, config.sweep, scales, box=box, seed=config.seed)
    report = higher_integrability_experiment(
        op, measure, cone, config.p, scales, box=box, force=config.force, seed=config.seed
    )
    return [report]


def _run_compactness(config: CompactnessConfig, base_dir: Path | None) -> CompactnessReport:
    sequence = config.sequence
    metadata: dict = {"seed": config.seed, "n": config.grid, "sequence": sequence.type}
    if isinstance(sequence, LaminateSequence):
        op = resolve_operator(sequence.operator, base_dir)
        grid = TorusGrid(d=op.d, n=config.grid)
        results = laminate_sequence(
            op, sequence.xi, sequence.P, sequence.B0, sequence.delta, tuple(sequence.js), grid
        )
        fields = [r.field for r in results]
        metadata["js"] = list(sequence.js)
    else:
        grid = TorusGrid(d=sequence.d, n=config.grid)
        measure = sequence.measure.build(grid)
        fields = [mollify(measure, float(Fraction(t))) for t in sequence.scales]
        metadata["scales"] = list(sequence.scales)
    cone = config.cone.build() if config.cone else None
    box = SubBox.centered(grid.d, config.box_side)
    return compactness_report(fields, box, config.thresholds, config.q, cone, metadata)


def run_config(config: ExperimentConfig, base_dir: Path | None = None) -> list[Report]:
    """Run a validated experiment config; returns one report per run."""
    if isinstance(config, HigherIntegrabilityConfig):
        return list(_run_higher_integrability(config, base_dir))
    if isinstance(config, LocalCancelingConfig):
        op = resolve_operator(config.operator, base_dir)
        first = TorusGrid(d=op.d, n=config.resolutions[0])
        return [
            local_canceling_experiment(
                op,
                config.measure.build(first),
                box=SubBox.centered(op.d, config.box_side),
                resolutions=config.resolutions,
                t_cells=config.t_cells,
                seed=config.seed,
            )
        ]
    if isinstance(config, SwirlConfig):
        return [swirl_report(config.eps, seed=config.seed)]
    if isinstance(config, LaminateConfig):
        op = resolve_operator(config.operator, base_dir)
        grid = TorusGrid(d=op.d, n=config.grid)
        return [
            laminate_report(
                op, config.xi, config.P, config.B0, config.delta, config.js, grid, config.seed
            )
        ]
    if isinstance(config, CompactnessConfig):
        return [_run_compactness(config, base_dir)]
    raise TypeError(f"unsupported experiment config: {type(config).__name__}")
