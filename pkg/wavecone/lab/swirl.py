"""The logarithmic swirl u_eps(x) = g_eps(ln|x|) / |ln eps| in the plane.

With L = ln eps, R = ln|x| / L and g_eps(s) = eta(s / L) s, the Hessian splits as

    Hess u = I + II
    I  = (eta(R) + eta'(R) R) / |L| * Hess ln|x|
    II = (2 eta'(R) + eta''(R) R) / (|L| L) * x (x) x / |x|^4

I is trace-free symmetric and carries a fixed amount of mass on B_1 \\ B_eps,
while II vanishes in L^1 as eps -> 0. eta is 1 on [0, 1], 0 on [2, inf) and
follows the quintic step in between.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from functools import lru_cache
from typing import NamedTuple

import numpy as np
import sympy as sp
from scipy.integrate import quad

from wavecone.cones.geometry import trace_free_symmetric
from wavecone.errors import ParameterRangeError
from wavecone.lab.measures import quintic_step, quintic_step_d1, quintic_step_d2
from wavecone.spectral.grid import TorusField, TorusGrid

logger = logging.getLogger(__name__)

QUAD_LIMIT = 200
EXPECTED_INNER_MASS = 2.0 * np.sqrt(2.0) * np.pi


def eta(t: np.ndarray) -> np.ndarray:
    return 1.0 - quintic_step(np.asarray(t, dtype=np.float64) - 1.0)


def eta_d1(t: np.ndarray) -> np.ndarray:
    return -quintic_step_d1(np.asarray(t, dtype=np.float64) - 1.0)


def eta_d2(t: np.ndarray) -> np.ndarray:
    return -quintic_step_d2(np.asarray(t, dtype=np.float64) - 1.0)


def _check_eps(eps: float) -> float:
    if not 0.0 < eps < 1.0:
        raise ParameterRangeError(f"swirl scale eps must lie in (0, 1), got {eps}")
    return float(np.log(eps))


def first_coefficient(R: np.ndarray, log_eps: float) -> np.ndarray:
    """Scalar factor of Hess ln|x| in I."""
    return (eta(R) + eta_d1(R) * R) / abs(log_eps)


def second_coefficient(R: np.ndarray, log_eps: float) -> np.ndarray:
    """Scalar factor of x (x) x / |x|^4 in II."""
    return (2.0 * eta_d1(R) + eta_d2(R) * R) / (abs(log_eps) * log_eps)


def split_hessian(points: np.ndarray, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """I and II at planar points (N, 2) with x != 0, each of shape (N, 2, 2)."""
    log_eps = _check_eps(eps)
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    r2 = np.sum(points**2, axis=1)
    R = 0.5 * np.log(r2) / log_eps
    outer = np.einsum("ni,nj->nij", points, points) / r2[:, None, None]
    hess_log = (np.eye(2)[None] - 2.0 * outer) / r2[:, None, None]
    first = first_coefficient(R, log_eps)[:, None, None] * hess_log
    second = second_coefficient(R, log_eps)[:, None, None] * outer / r2[:, None, None]
    return first, second


@lru_cache(maxsize=16)
def _direct_hessian(eps: float) -> Callable[[np.ndarray, np.ndarray], list[list[np.ndarray]]]:
    """Hess u_eps by symbolic differentiation of u_eps itself."""
    x, y = sp.symbols("x y", real=True)
    log_eps = sp.log(sp.Float(eps, 30))
    s = sp.log(x**2 + y**2) / 2
    R = s / log_eps
    z = R - 1
    cutoff = sp.Piecewise(
        (1, R <= 1), (1 - (10 * z**3 - 15 * z**4 + 6 * z**5), R < 2), (0, True)
    )
    u = cutoff * s / sp.Abs(log_eps)
    hessian = sp.hessian(u, (x, y))
    return sp.lambdify((x, y), hessian.tolist(), modules="numpy")


def direct_hessian(points: np.ndarray, eps: float) -> np.ndarray:
    _check_eps(eps)
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    fn = _direct_hessian(float(eps))
    rows = []
    for px, py in points:
        rows.append(np.array(fn(px, py), dtype=np.float64))
    return np.array(rows)


def swirl_split_residual(eps: float, radii: np.ndarray | list[float], angle: float = 0.3) -> float:
    """max |I + II - Hess u| / |Hess u| over points at the given radii."""
    radii = np.asarray(radii, dtype=np.float64)
    points = radii[:, None] * np.array([np.cos(angle), np.sin(angle)])[None, :]
    first, second = split_hessian(points, eps)
    direct = direct_hessian(points, eps)
    diff = np.linalg.norm(first + second - direct, axis=(1, 2))
    scale = np.maximum(np.linalg.norm(direct, axis=(1, 2)), np.finfo(float).tiny)
    return float(np.max(diff / scale))


def _radial_integral(fn: Callable[[float], float], lo: float, hi: float, log_eps: float) -> float:
    """Integral over the annulus R in [lo, hi] of a radial density given per unit R.

    fn(R) must already include the 2 pi r^2 area factor of the polar measure in s = ln r.
    """
    value, _ = quad(fn, lo, hi, limit=QUAD_LIMIT, epsabs=1e-13, epsrel=1e-11)
    return abs(log_eps) * value


class SwirlResult(NamedTuple):
    epsilon: float
    inner_first: float
    full_first: float
    full_second: float
    sd_distance: float
    scaled_second: float
    split_residual: float


class SwirlFields(NamedTuple):
    u: TorusField
    first: TorusField
    second: TorusField
    hessian: TorusField


def eta_constant() -> float:
    """C_eta = int_1^2 |2 eta' + eta'' R| dR."""
    value, _ = quad(
        lambda R: abs(2.0 * eta_d1(R) + eta_d2(R) * R), 1.0, 2.0, limit=QUAD_LIMIT
    )
    return float(value)


def swirl_integrals(eps: float) -> SwirlResult:
    """L^1 masses of I and II and the L^1 distance of Hess u to SD(2), by radial quadrature.

    In s = ln r the area element is 2 pi r^2 ds, so |I| = sqrt 2 |c1| / r^2
    and |II| = |c2| / r^2 integrate without the singular weight.
    """
    log_eps = _check_eps(eps)
    sd = trace_free_symmetric(2)

    def first_density(R: float) -> float:
        return 2.0 * np.pi * np.sqrt(2.0) * abs(float(first_coefficient(R, log_eps)))

    def second_density(R: float) -> float:
        return 2.0 * np.pi * abs(float(second_coefficient(R, log_eps)))

    def distance_density(R: float) -> float:
        r = float(np.exp(R * log_eps))
        first, second = split_hessian(np.array([[r, 0.0]]), eps)
        return 2.0 * np.pi * r**2 * float(sd.distance((first + second).reshape(1, 4))[0])

    inner_first = _radial_integral(first_density, 0.0, 1.0, log_eps)
    full_first = inner_first + _radial_integral(first_density, 1.0, 2.0, log_eps)
    full_second = _radial_integral(second_density, 1.0, 2.0, log_eps)
    sd_distance = _radial_integral(distance_density, 1.0, 2.0, log_eps)
    radii = np.exp(log_eps * np.linspace(0.05, 1.95, 25))
    residual = swirl_split_residual(eps, radii)
    return SwirlResult(
        epsilon=float(eps),
        inner_first=inner_first,
        full_first=full_first,
        full_second=full_second,
        sd_distance=sd_distance,
        scaled_second=abs(log_eps) * full_second,
        split_residual=residual,
    )


def swirl_fields(eps: float, grid: TorusGrid) -> SwirlFields:
    """u, I, II and Hess u sampled around the grid centre; all set to 0 at the centre itself."""
    if grid.d != 2:
        raise ParameterRangeError("the swirl lives in the plane (d = 2)")
    log_eps = _check_eps(eps)
    points = grid.points - 0.5
    r2 = np.sum(points**2, axis=1)
    live = r2 > 0
    first = np.zeros((grid.size, 2, 2))
    second = np.zeros((grid.size, 2, 2))
    first[live], second[live] = split_hessian(points[live], eps)
    s = np.zeros(grid.size)
    s[live] = 0.5 * np.log(r2[live])
    u = np.where(live, eta(s / log_eps) * s / abs(log_eps), 0.0)

    def as_field(values: np.ndarray) -> TorusField:
        flat = values.reshape(grid.size, -1).T
        return TorusField(grid=grid, values=flat.reshape(-1, *grid.shape))

    return SwirlFields(
        u=TorusField(grid=grid, values=u.reshape(grid.shape)),
        first=as_field(first),
        second=as_field(second),
        hessian=as_field(first + second),
    )


def swirl_example(
    eps: float, grid: TorusGrid | None = None
) -> tuple[SwirlResult, SwirlFields | None]:
    """Quadrature diagnostics for one eps, plus sampled fields when a grid is given."""
    result = swirl_integrals(eps)
    logger.info(
        "swirl eps=%g: |I| on B1\\Beps = %.6f (2 sqrt2 pi = %.6f), |II| = %.6f",
        eps,
        result.inner_first,
        EXPECTED_INNER_MASS,
        result.full_second,
    )
    fields = swirl_fields(eps, grid) if grid is not None else None
    return result, fields


def swirl_table(eps_values: list[float] | tuple[float, ...]) -> list[SwirlResult]:
    return [swirl_integrals(eps) for eps in eps_values]
