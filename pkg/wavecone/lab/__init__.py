"""Numerical experiments for cone-constrained measures and their counterexamples."""

from wavecone.lab.compactness import CompactnessDiagnostics, compactness_diagnostics
from wavecone.lab.configs import (
    ExperimentConfig,
    load_experiment_config,
    parse_experiment_config,
)
from wavecone.lab.conformal import (
    ConformalCoords,
    conformal_coords,
    dilatation_bound,
    distance_to_conformal,
    reconstruct,
)
from wavecone.lab.experiments import (
    check_local_canceling_hypotheses,
    higher_integrability_experiment,
    local_canceling_experiment,
    p_sweep,
    run_config,
)
from wavecone.lab.ladder import (
    ExponentWindow,
    LadderQuery,
    LadderSeed,
    RunMode,
    SeedFlag,
    exponent_window,
    ladder_seed,
    q_ladder,
    run_mode,
)
from wavecone.lab.laminates import LaminateResult, laminate, laminate_sequence
from wavecone.lab.measures import DiscreteMeasure, SubBox, mollifier_kernel, mollify
from wavecone.lab.polar import PolarDiagnostics, polar_diagnostics
from wavecone.lab.report import (
    CompactnessReport,
    ExperimentReport,
    LaminateReport,
    LocalCancelingReport,
    Report,
    SwirlReport,
)
from wavecone.lab.swirl import SwirlResult, swirl_example, swirl_integrals, swirl_table

__all__ = [
    "CompactnessDiagnostics",
    "CompactnessReport",
    "ConformalCoords",
    "DiscreteMeasure",
    "ExperimentConfig",
    "ExperimentReport",
    "ExponentWindow",
    "LadderQuery",
    "LadderSeed",
    "LaminateReport",
    "LaminateResult",
    "LocalCancelingReport",
    "PolarDiagnostics",
    "Report",
    "RunMode",
    "SeedFlag",
    "SubBox",
    "SwirlReport",
    "SwirlResult",
    "check_local_canceling_hypotheses",
    "compactness_diagnostics",
    "conformal_coords",
    "dilatation_bound",
    "distance_to_conformal",
    "exponent_window",
    "higher_integrability_experiment",
    "laminate",
    "laminate_sequence",
    "ladder_seed",
    "load_experiment_config",
    "local_canceling_experiment",
    "mollifier_kernel",
    "mollify",
    "p_sweep",
    "parse_experiment_config",
    "polar_diagnostics",
    "q_ladder",
    "reconstruct",
    "run_config",
    "run_mode",
    "swirl_example",
    "swirl_integrals",
    "swirl_table",
]
