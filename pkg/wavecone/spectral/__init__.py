"""FFT engine on the unit torus: multipliers, norms, solvers and kernels."""

from wavecone.spectral.grid import TorusField, TorusGrid, random_field
from wavecone.spectral.io import read_field, write_field, write_norms_csv
from wavecone.spectral.kernels import (
    KernelSample,
    a_representative,
    convolve,
    homogeneity_check,
    kernel_eval,
    kernel_smoothness,
)
from wavecone.spectral.multipliers import (
    MultiplierFn,
    ZeroModePolicy,
    apply_multiplier,
    apply_operator,
    identity_multiplier,
    projection_multiplier,
    symbol_multiplier,
)
from wavecone.spectral.norms import (
    bessel_norm,
    fourier_l2_norm,
    lq_norm,
    mihlin_ratio,
    riesz_potential,
)
from wavecone.spectral.solvers import (
    Perturbation,
    PerturbedSolution,
    contraction_sweep,
    laplace_residual,
    solve_laplace,
    solve_perturbed,
)

__all__ = [
    "KernelSample",
    "MultiplierFn",
    "Perturbation",
    "PerturbedSolution",
    "TorusField",
    "TorusGrid",
    "ZeroModePolicy",
    "a_representative",
    "apply_multiplier",
    "apply_operator",
    "bessel_norm",
    "contraction_sweep",
    "convolve",
    "fourier_l2_norm",
    "homogeneity_check",
    "identity_multiplier",
    "kernel_eval",
    "kernel_smoothness",
    "laplace_residual",
    "lq_norm",
    "mihlin_ratio",
    "projection_multiplier",
    "random_field",
    "read_field",
    "riesz_potential",
    "solve_laplace",
    "solve_perturbed",
    "symbol_multiplier",
    "write_field",
    "write_norms_csv",
]
