"""Closed-form performance bounds for tours and for the dynamic repair problem.

All evaluators are pure functions of the workspace dimensions and vehicle
parameters.  Where a printed constant disagrees with the value implied by its
own derivation, both are exposed with provenance labels; assertions elsewhere
in the package use the derived value.
"""

from __future__ import annotations

import math

from ditsp.vehicle import VehicleParams

# 3D dynamic lower-bound coefficient: printed value and the value obtained by
# rearranging the stochastic tour lower bound ((5/6)**5 * 20 = 15625/1944)
DTRP3_LOWER_PRINTED = 7813.0 / 972.0
DTRP3_LOWER_DERIVED = 15625.0 / 1944.0


def tour_lower_2d(W: float, H: float, params: VehicleParams, n: int) -> float:
    """Stochastic-tour expected-time lower bound, rectangle: (3/4)(6WH/(rv*rc))^(1/3) n^(2/3)."""
    _check_n(n)
    return 0.75 * (6.0 * W * H / (params.r_vel * params.r_ctr)) ** (1 / 3) * n ** (2 / 3)


def tour_lower_3d(W: float, H: float, D: float, params: VehicleParams, n: int) -> float:
    """Stochastic-tour expected-time lower bound, box: (5/6)(20WHD/(pi rv rc^2))^(1/5) n^(4/5)."""
    _check_n(n)
    base = 20.0 * W * H * D / (math.pi * params.r_vel * params.r_ctr**2)
    return (5.0 / 6.0) * base ** (1 / 5) * n ** (4 / 5)


def turn_penalty(W: float, params: VehicleParams) -> float:
    """Constant-speed sweep overhead factor 1 + 7*pi*r_vel^2/(3*W*r_ctr)."""
    return 1.0 + 7.0 * math.pi * params.r_vel**2 / (3.0 * W * params.r_ctr)


def tour_upper_2d(W: float, H: float, params: VehicleParams, n: int) -> float:
    """Recursive bead-tiling total-time upper bound: 24 (WH/(rv rc))^(1/3) (1+7 pi rv^2/(3W rc)) n^(2/3)."""
    _check_n(n)
    return (24.0 * (W * H / (params.r_vel * params.r_ctr)) ** (1 / 3)
            * turn_penalty(W, params) * n ** (2 / 3))


def tour_upper_3d(W: float, H: float, D: float, params: VehicleParams, n: int) -> float:
    """Recursive cylinder-covering total-time upper bound with coefficient
    (3328/15) (pi/16)^(4/5) / r_vel-normalization (approximately 61)."""
    _check_n(n)
    coeff = (3328.0 / 15.0) * (math.pi / 16.0) ** (4 / 5)
    return (coeff * (W * H * D / (params.r_ctr**2 * params.r_vel)) ** (1 / 5)
            * turn_penalty(W, params) * n ** (4 / 5))


def dtrp_lower(dim: int, dims: tuple, params: VehicleParams) -> float:
    """Coefficient of lambda^2 (2D) or lambda^4 (3D) in the system-time lower bound."""
    if dim == 2:
        W, H = dims
        return (81.0 / 32.0) * W * H / (params.r_vel * params.r_ctr)
    if dim == 3:
        W, H, D = dims
        return DTRP3_LOWER_DERIVED * W * H * D / (params.r_vel * params.r_ctr**2)
    raise ValueError("dim must be 2 or 3")


def dtrp_lower_printed_3d(dims: tuple, params: VehicleParams) -> float:
    """3D lower-bound coefficient using the printed constant 7813/972."""
    W, H, D = dims
    return DTRP3_LOWER_PRINTED * W * H * D / (params.r_vel * params.r_ctr**2)


def dtrp_upper(dim: int, dims: tuple, params: VehicleParams) -> float:
    """Coefficient of lambda^2 / lambda^4 in the system-time upper bound.

    2D: 70.5 * WH/(rv rc) * (1 + 7 pi rv^2/(3 W rc))^3.
    3D: 2e7 * WHD/(rv rc^2) * (1 + 7 pi rv^2/(3 W rc))^5.
    """
    if dim == 2:
        W, H = dims
        return 70.5 * W * H / (params.r_vel * params.r_ctr) * turn_penalty(W, params) ** 3
    if dim == 3:
        W, H, D = dims
        return 2e7 * W * H * D / (params.r_vel * params.r_ctr**2) * turn_penalty(W, params) ** 5
    raise ValueError("dim must be 2 or 3")


def reachable_leading(dim: int, v: float, params: VehicleParams, t: float) -> float:
    """Leading-order measure of the set reachable within time t at initial speed v.

    Area r_ctr*v*t^3/6 in 2D, volume pi*r_ctr^2*v*t^5/20 in 3D.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if not 0 <= v <= params.r_vel:
        raise ValueError("v must lie in [0, r_vel]")
    if dim == 2:
        return params.r_ctr * v * t**3 / 6.0
    if dim == 3:
        return math.pi * params.r_ctr**2 * v * t**5 / 20.0
    raise ValueError("dim must be 2 or 3")


def approximation_factor_2d() -> float:
    """Gap between 2D upper and lower tour coefficients as rho -> 0: 32/6^(1/3)."""
    return 32.0 / 6.0 ** (1 / 3)


def bound_set(dims: tuple, params: VehicleParams, n: int = 1000) -> dict:
    """All coefficients for the given parameters, name-tagged (for the CLI)."""
    out = {}
    if len(dims) == 2:
        W, H = dims
        out["tour_lower_2d"] = tour_lower_2d(W, H, params, n)
        out["tour_upper_2d"] = tour_upper_2d(W, H, params, n)
        out["dtrp_lower_2d"] = dtrp_lower(2, dims, params)
        out["dtrp_upper_2d"] = dtrp_upper(2, dims, params)
        out["reachable_area_coeff"] = params.r_ctr * params.r_vel / 6.0
    else:
        W, H, D = dims
        out["tour_lower_3d"] = tour_lower_3d(W, H, D, params, n)
        out["tour_upper_3d"] = tour_upper_3d(W, H, D, params, n)
        out["dtrp_lower_3d_derived"] = dtrp_lower(3, dims, params)
        out["dtrp_lower_3d_printed"] = dtrp_lower_printed_3d(dims, params)
        out["dtrp_upper_3d"] = dtrp_upper(3, dims, params)
        out["reachable_volume_coeff"] = math.pi * params.r_ctr**2 * params.r_vel / 20.0
    out["n"] = n
    return out


def _check_n(n: int):
    if n < 1:
        raise ValueError("n must be >= 1")
