"""Earth constants, circular-orbit kinematics and the stereographic footprint chart.

All lengths are meters, angles radians, times seconds unless a name says
otherwise. Every function here is pure; the dataclasses are immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT_MPS = 299792458.0

# Equatorial radius; reproduces the reference footprint sizing. Overridable
# through the config (`earth.radius_km`).
DEFAULT_EARTH_RADIUS_M = 6378.137e3
DEFAULT_EARTH_MU_M3S2 = 3.986004418e14


@dataclass(frozen=True)
class EarthModel:
    """Spherical Earth with gravitational parameter mu = G * m_earth."""

    radius_m: float = DEFAULT_EARTH_RADIUS_M
    mu_m3s2: float = DEFAULT_EARTH_MU_M3S2

    def __post_init__(self):
        if self.radius_m <= 0.0:
            raise ValueError("earth radius must be positive")
        if self.mu_m3s2 <= 0.0:
            raise ValueError("earth mu must be positive")


@dataclass(frozen=True)
class ConstellationGeometry:
    """Walker-style constellation summary: planes, satellites per plane,
    inclination and circular-orbit altitude."""

    n_planes: int
    n_sats_per_plane: int
    inclination_rad: float
    altitude_m: float

    def __post_init__(self):
        if self.n_planes < 1 or self.n_sats_per_plane < 1:
            raise ValueError("constellation counts must be >= 1")
        if not 0.0 < self.inclination_rad <= math.pi / 2:
            raise ValueError("inclination must be in (0, pi/2]")
        if self.altitude_m <= 0.0:
            raise ValueError("altitude must be positive")


def orbital_speed_mps(earth: EarthModel, altitude_m: float) -> float:
    """Linear speed of a circular orbit at the given altitude."""
    if altitude_m <= 0.0:
        raise ValueError("altitude must be positive")
    return math.sqrt(earth.mu_m3s2 / (earth.radius_m + altitude_m))


def angular_speed_rad_s(earth: EarthModel, altitude_m: float) -> float:
    """Orbital angular rate about Earth's center."""
    r = earth.radius_m + altitude_m
    return orbital_speed_mps(earth, altitude_m) / r


def shadow_speed_mps(earth: EarthModel, altitude_m: float) -> float:
    """Ground speed of the sub-satellite point (always below orbital speed)."""
    return angular_speed_rad_s(earth, altitude_m) * earth.radius_m


def orbital_period_s(earth: EarthModel, altitude_m: float) -> float:
    return 2.0 * math.pi / angular_speed_rad_s(earth, altitude_m)


@dataclass(frozen=True)
class SatelliteState:
    """Position/velocity of a satellite on a circular orbit, Earth-centered frame."""

    position_m: np.ndarray
    velocity_mps: np.ndarray
    epoch_s: float = 0.0

    def __post_init__(self):
        pos = np.asarray(self.position_m, dtype=float)
        vel = np.asarray(self.velocity_mps, dtype=float)
        if pos.shape != (3,) or vel.shape != (3,):
            raise ValueError("position and velocity must be 3-vectors")
        rn = np.linalg.norm(pos)
        vn = np.linalg.norm(vel)
        if rn == 0.0 or vn == 0.0:
            raise ValueError("degenerate satellite state")
        if abs(float(pos @ vel)) / (rn * vn) > 1e-9:
            raise ValueError("circular orbit requires velocity orthogonal to position")
        object.__setattr__(self, "position_m", pos)
        object.__setattr__(self, "velocity_mps", vel)

    @property
    def radius_m(self) -> float:
        return float(np.linalg.norm(self.position_m))

    @property
    def speed_mps(self) -> float:
        return float(np.linalg.norm(self.velocity_mps))


def circular_state(earth: EarthModel, altitude_m: float, phase_rad: float = 0.0,
                   epoch_s: float = 0.0) -> SatelliteState:
    """Satellite on a circular orbit in the x-z plane, overhead +z at phase 0,
    moving toward +x."""
    r = earth.radius_m + altitude_m
    v = orbital_speed_mps(earth, altitude_m)
    c, s = math.cos(phase_rad), math.sin(phase_rad)
    return SatelliteState(
        position_m=np.array([r * s, 0.0, r * c]),
        velocity_mps=np.array([v * c, 0.0, -v * s]),
        epoch_s=epoch_s,
    )


def propagate_circular(state: SatelliteState, dt_s: float, earth: EarthModel) -> SatelliteState:
    """Advance a circular-orbit state by rotating it about the orbit normal."""
    r = state.position_m
    v = state.velocity_mps
    rn = state.radius_m
    w = state.speed_mps / rn
    axis = np.cross(r, v)
    axis = axis / np.linalg.norm(axis)
    ang = w * dt_s
    return SatelliteState(
        position_m=_rotate(r, axis, ang),
        velocity_mps=_rotate(v, axis, ang),
        epoch_s=state.epoch_s + dt_s,
    )


def _rotate(x: np.ndarray, axis: np.ndarray, angle_rad: float) -> np.ndarray:
    """Rodrigues rotation of x about a unit axis."""
    c, s = math.cos(angle_rad), math.sin(angle_rad)
    return x * c + np.cross(axis, x) * s + axis * (axis @ x) * (1.0 - c)


@dataclass(frozen=True)
class StereoFrame:
    """Orthonormal frame anchoring the footprint chart: radial direction,
    along-track (velocity) and cross-track axes."""

    u_sat: np.ndarray
    u_x: np.ndarray
    u_y: np.ndarray

    def __post_init__(self):
        us = np.asarray(self.u_sat, dtype=float)
        ux = np.asarray(self.u_x, dtype=float)
        uy = np.asarray(self.u_y, dtype=float)
        for u in (us, ux, uy):
            if abs(np.linalg.norm(u) - 1.0) > 1e-12:
                raise ValueError("frame axes must be unit vectors")
        if max(abs(us @ ux), abs(us @ uy), abs(ux @ uy)) > 1e-12:
            raise ValueError("frame axes must be orthogonal")
        object.__setattr__(self, "u_sat", us)
        object.__setattr__(self, "u_x", ux)
        object.__setattr__(self, "u_y", uy)

    @classmethod
    def from_state(cls, state: SatelliteState) -> "StereoFrame":
        u_sat = state.position_m / state.radius_m
        u_x = state.velocity_mps / state.speed_mps
        u_y = np.cross(u_x, u_sat)
        return cls(u_sat=u_sat, u_x=u_x, u_y=np.asarray(u_y) / np.linalg.norm(u_y))


@dataclass(frozen=True)
class RoiEllipse:
    """Elliptical footprint in the stereographic chart, semi-radii in meters."""

    semi_x_m: float
    semi_y_m: float
    frame: StereoFrame

    def __post_init__(self):
        if self.semi_x_m <= 0.0 or self.semi_y_m <= 0.0:
            raise ValueError("ellipse semi-radii must be positive")

    def contains(self, x_m, y_m):
        """Membership test, boundary inclusive; accepts scalars or arrays."""
        return (np.asarray(x_m) / self.semi_x_m) ** 2 + (np.asarray(y_m) / self.semi_y_m) ** 2 <= 1.0


def stereo_to_sphere(p_xy, frame: StereoFrame, earth: EarthModel) -> np.ndarray:
    """Map a chart point (x, y) onto the sphere through Earth's center.

    Point (x, y) maps to R * (R*u_sat + x*u_x + y*u_y) / sqrt(R^2 + x^2 + y^2),
    so the result always has norm R.
    """
    x, y = float(p_xy[0]), float(p_xy[1])
    r = earth.radius_m
    p = r * frame.u_sat + x * frame.u_x + y * frame.u_y
    return r * p / math.sqrt(r * r + x * x + y * y)


def sphere_to_stereo(point_m: np.ndarray, frame: StereoFrame, earth: EarthModel) -> tuple[float, float]:
    """Inverse chart: sphere point (front hemisphere) back to (x, y)."""
    q = np.asarray(point_m, dtype=float)
    z = float(q @ frame.u_sat)
    if z <= 0.0:
        raise ValueError("point is on the far hemisphere of the chart")
    r = earth.radius_m
    return r * float(q @ frame.u_x) / z, r * float(q @ frame.u_y) / z


def ray_sphere_ground(origin_m: np.ndarray, direction, earth: EarthModel):
    """Nearest intersection of a ray with the Earth sphere, or None if it misses."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    o = np.asarray(origin_m, dtype=float)
    b = float(o @ d)
    disc = b * b - (float(o @ o) - earth.radius_m ** 2)
    if disc < 0.0:
        return None
    t = -b - math.sqrt(disc)
    if t <= 0.0:
        return None
    return o + t * d


def design_roi(geom: ConstellationGeometry, earth: EarthModel, frame: StereoFrame) -> RoiEllipse:
    """Size the footprint ellipse so the constellation tiles the whole sphere.

    Returns semi-radii sqrt(2)*pi*R/N_s along-track and
    sqrt(2)*pi*R*sin(incl)/N_p cross-track; the resulting pair meets the
    coverage inequality with equality (both terms contribute 1/2).
    """
    r = earth.radius_m
    semi_x = math.sqrt(2.0) * math.pi * r / geom.n_sats_per_plane
    semi_y = math.sqrt(2.0) * math.pi * r * math.sin(geom.inclination_rad) / geom.n_planes
    return RoiEllipse(semi_x_m=semi_x, semi_y_m=semi_y, frame=frame)


def check_roi_coverage(semi_x_m: float, semi_y_m: float, geom: ConstellationGeometry,
                       earth: EarthModel) -> tuple[bool, float]:
    """Evaluate the whole-Earth coverage condition for an ellipse pair.

    Returns (condition holds, left-hand-side value); the LHS compares the
    constellation's ground grid spacing against the ellipse semi-radii.
    """
    if semi_x_m <= 0.0 or semi_y_m <= 0.0:
        raise ValueError("ellipse semi-radii must be positive")
    r = earth.radius_m
    gx = math.pi * r / geom.n_sats_per_plane
    gy = math.pi * r * math.sin(geom.inclination_rad) / geom.n_planes
    lhs = (gx / semi_x_m) ** 2 + (gy / semi_y_m) ** 2
    return lhs <= 1.0, lhs


def elevation_rad(sat_position_m: np.ndarray, ground_point_m: np.ndarray) -> float:
    """Elevation of the satellite above the local horizon of a ground point."""
    up = np.asarray(ground_point_m, dtype=float)
    up = up / np.linalg.norm(up)
    los = np.asarray(sat_position_m, dtype=float) - ground_point_m
    los = los / np.linalg.norm(los)
    return math.asin(max(-1.0, min(1.0, float(los @ up))))
