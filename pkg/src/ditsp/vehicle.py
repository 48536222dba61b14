"""Double-integrator motion model and motion-time primitives.

The vehicle accelerates with bounded control magnitude ``r_ctr`` and is
speed-limited at ``r_vel``.  Planners never integrate trajectories: they
account time as path length divided by a constant cruise speed for curved
sweeps, plus rest-to-rest point-to-point times for stop-go legs.  A curve of
bounded curvature ``1/rho`` traversed at constant speed ``s`` is feasible for
the double integrator exactly when ``rho = s**2 / r_ctr``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class VehicleParams:
    """Speed cap ``r_vel`` (length/time) and control cap ``r_ctr`` (length/time^2)."""

    r_vel: float
    r_ctr: float

    def __post_init__(self):
        if self.r_vel <= 0 or self.r_ctr <= 0:
            raise ValueError("r_vel and r_ctr must be positive")

    @property
    def turn_radius(self) -> float:
        """Turn radius induced by cruising at the speed cap."""
        return self.r_vel**2 / self.r_ctr


@dataclass(frozen=True)
class CruiseProfile:
    """Constant cruise speed ``s`` and the turn radius ``rho = s**2/r_ctr`` it induces."""

    s: float
    rho: float


def stop_go_time(delta: float, params: VehicleParams) -> float:
    """Minimum rest-to-rest travel time over a straight distance ``delta``.

    Bang-bang below the speed-saturation distance ``r_vel**2 / r_ctr``,
    bang-cruise-bang above it.  Continuous at the breakpoint, where both
    branches give ``2 * r_vel / r_ctr``.
    """
    if delta < 0:
        raise ValueError("distance must be nonnegative")
    if delta <= params.r_vel**2 / params.r_ctr:
        return 2.0 * math.sqrt(delta / params.r_ctr)
    return params.r_vel / params.r_ctr + delta / params.r_vel


def cruise_profile(s: float, params: VehicleParams) -> CruiseProfile:
    """Profile for cruising at constant speed ``s`` (0 < s <= r_vel)."""
    if not 0 < s <= params.r_vel:
        raise ValueError("cruise speed must lie in (0, r_vel]")
    return CruiseProfile(s=s, rho=s**2 / params.r_ctr)


def u_turn_length(rho: float) -> float:
    """Length of the shortest bounded-curvature path reversing heading in place.

    For turn radius ``rho`` the reversal with co-located endpoints takes
    ``(7/3) * pi * rho``.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    return (7.0 / 3.0) * math.pi * rho
