"""Array geometry, steering vectors, and the three user-terminal antenna models.

The terminal models are a uniform planar array (conjugate beamforming), a
leaky-wave panel (exponential amplitude taper, scanned phase pair) and a
metasurface with a fixed peak gain and elevation roll-off. Gains are power
gains; dB values are 10*log10 of the linear gain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np


@dataclass(frozen=True)
class ArrayGeometry:
    """Antenna element positions (N x 3, meters) plus carrier wavelength."""

    element_positions_m: np.ndarray
    wavelength_m: float

    def __post_init__(self):
        pos = np.asarray(self.element_positions_m, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise ValueError("element positions must be an N x 3 array with N >= 1")
        if not np.all(np.isfinite(pos)):
            raise ValueError("element positions must be finite")
        if self.wavelength_m <= 0.0:
            raise ValueError("wavelength must be positive")
        object.__setattr__(self, "element_positions_m", pos)

    @property
    def n_elements(self) -> int:
        return self.element_positions_m.shape[0]

    @classmethod
    def upa(cls, nx: int, ny: int, wavelength_m: float,
            spacing_m: Optional[float] = None) -> "ArrayGeometry":
        """Regular nx x ny planar grid in the z=0 plane, half-wave spacing by default.

        Element n = ix*ny + iy sits at (ix*d, iy*d, 0), so index order is
        x-major and the grid origin is the corner element.
        """
        if nx < 1 or ny < 1:
            raise ValueError("grid dimensions must be >= 1")
        d = wavelength_m / 2.0 if spacing_m is None else spacing_m
        ix, iy = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
        pos = np.zeros((nx * ny, 3))
        pos[:, 0] = ix.ravel() * d
        pos[:, 1] = iy.ravel() * d
        return cls(element_positions_m=pos, wavelength_m=wavelength_m)


@dataclass(frozen=True)
class BeamWeights:
    """Complex antenna weight vector."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=complex)
        if w.ndim != 1 or w.shape[0] < 1:
            raise ValueError("weights must be a non-empty vector")
        if np.any(np.isnan(w)):
            raise ValueError("weights must not contain NaN")
        object.__setattr__(self, "weights", w)

    def is_constant_modulus(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(np.abs(self.weights) - 1.0) < tol))


def steering_vector(geom: ArrayGeometry, direction) -> np.ndarray:
    """Unit-modulus array response e^{-i 2pi/lambda <k_n, v>} toward unit vector v."""
    v = np.asarray(direction, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    phase = -2.0 * np.pi / geom.wavelength_m * (geom.element_positions_m @ v)
    return np.exp(1j * phase)


def upa_max_gain_db(geom: ArrayGeometry) -> float:
    """Best achievable planar-array gain in any direction: 10*log10(N)."""
    return 10.0 * math.log10(geom.n_elements)


@dataclass(frozen=True)
class Upa:
    geometry: ArrayGeometry


@dataclass(frozen=True)
class LeakyWave:
    """Leaky-wave panel on an nx x ny half-wave grid.

    The leakage factor applies per element index (amplitude e^{-alpha*(ix+iy)}),
    matching the closed-form gain expression; the phase pair (theta1, theta2)
    is limited to [-pi, pi] per axis, which restricts the scan range.
    """

    nx: int
    ny: int
    wavelength_m: float
    alpha: float

    def __post_init__(self):
        if self.alpha < 0.0:
            raise ValueError("leakage factor must be >= 0")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid dimensions must be >= 1")

    @property
    def geometry(self) -> ArrayGeometry:
        return ArrayGeometry.upa(self.nx, self.ny, self.wavelength_m)


@dataclass(frozen=True)
class Metasurface:
    """Commercial metasurface terminal: peak gain minus a cosine-type roll-off
    with satellite elevation. No array factor is available, so only the gain
    is modeled."""

    peak_gain_db: float = 33.0
    rolloff: float = 1.2

    def __post_init__(self):
        if not math.isfinite(self.peak_gain_db):
            raise ValueError("peak gain must be finite")


TerminalAntenna = Union[Upa, LeakyWave, Metasurface]


def combining_gain_linear(geom: ArrayGeometry, weights: np.ndarray, direction) -> float:
    """Realized power gain |<a(v), w>|^2 / ||w||^2 of a fixed combiner."""
    a = steering_vector(geom, direction)
    w = np.asarray(weights, dtype=complex)
    num = abs(np.vdot(w, a)) ** 2
    return float(num / np.real(np.vdot(w, w)))


def metasurface_gain_db(antenna: Metasurface, elevation_rad: float) -> float:
    """Elevation-dependent metasurface gain; satellite must be above the horizon."""
    if elevation_rad <= 0.0:
        raise ValueError("satellite below horizon: elevation must be positive")
    s = math.sin(min(elevation_rad, math.pi / 2.0))
    return antenna.peak_gain_db - antenna.rolloff * 10.0 * math.log10(s)


def best_combiner(antenna: TerminalAntenna, direction) -> tuple[Optional[BeamWeights], float]:
    """Best feasible combiner toward a direction and its realized gain in dB.

    Upa: conjugate-matched constant-modulus weights (gain 10*log10(N)).
    LeakyWave: tapered weights with the phase pair scanned over [-pi, pi]^2.
    Metasurface: no weights; elevation-based gain, direction given in the
    terminal's local frame with +z up.
    """
    if isinstance(antenna, Metasurface):
        v = np.asarray(direction, dtype=float)
        el = math.asin(max(-1.0, min(1.0, float(v[2]) / np.linalg.norm(v))))
        return None, metasurface_gain_db(antenna, el)
    if isinstance(antenna, Upa):
        w = steering_vector(antenna.geometry, direction)
        return BeamWeights(w), upa_max_gain_db(antenna.geometry)
    if isinstance(antenna, LeakyWave):
        return _leaky_best_combiner(antenna, direction)
    raise TypeError(f"unsupported terminal antenna: {type(antenna).__name__}")


def _leaky_axis_response(n: int, alpha: float, theta: float, u: float) -> complex:
    """Geometric-series sum_j e^{-alpha j} e^{i j (theta/2 - u)} for one axis."""
    r = complex(math.cos(theta / 2.0 - u), math.sin(theta / 2.0 - u)) * math.exp(-alpha)
    if abs(1.0 - r) < 1e-15:
        return complex(n, 0.0)
    return (1.0 - r ** n) / (1.0 - r)


def _leaky_scan_axis(n: int, alpha: float, u: float, n_grid: int = 512) -> tuple[float, float]:
    """Best phase parameter in [-pi, pi] for one axis, grid scan plus golden refine."""
    thetas = np.linspace(-math.pi, math.pi, n_grid)
    mags = np.array([abs(_leaky_axis_response(n, alpha, t, u)) for t in thetas])
    k = int(np.argmax(mags))
    lo = thetas[max(0, k - 1)]
    hi = thetas[min(n_grid - 1, k + 1)]
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - gr * (b - a)
    d = a + gr * (b - a)
    fc = -abs(_leaky_axis_response(n, alpha, c, u))
    fd = -abs(_leaky_axis_response(n, alpha, d, u))
    for _ in range(60):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = -abs(_leaky_axis_response(n, alpha, c, u))
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = -abs(_leaky_axis_response(n, alpha, d, u))
    best = (a + b) / 2.0
    return best, abs(_leaky_axis_response(n, alpha, best, u))


def _leaky_best_combiner(antenna: LeakyWave, direction) -> tuple[BeamWeights, float]:
    v = np.asarray(direction, dtype=float)
    v = v / np.linalg.norm(v)
    # half-wave spacing makes the 2-D scan separable per axis
    ux = math.pi * v[0]
    uy = math.pi * v[1]
    t1, sx = _leaky_scan_axis(antenna.nx, antenna.alpha, ux)
    t2, sy = _leaky_scan_axis(antenna.ny, antenna.alpha, uy)
    qx = sum(math.exp(-2.0 * antenna.alpha * j) for j in range(antenna.nx))
    qy = sum(math.exp(-2.0 * antenna.alpha * j) for j in range(antenna.ny))
    gain_lin = (sx * sx / qx) * (sy * sy / qy)
    ix, iy = np.meshgrid(np.arange(antenna.nx), np.arange(antenna.ny), indexing="ij")
    ix = ix.ravel().astype(float)
    iy = iy.ravel().astype(float)
    w = np.exp(-antenna.alpha * (ix + iy) - 0.5j * (ix * t1 + iy * t2))
    return BeamWeights(w), 10.0 * math.log10(gain_lin)


def leaky_wave_gain_db(nx: int, ny: int, alpha: float) -> float:
    """Closed-form broadside gain of the tapered leaky-wave panel (alpha > 0)."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive; use the planar-array formula at alpha=0")
    ex, ey, e1 = math.exp(-alpha * nx), math.exp(-alpha * ny), math.exp(-alpha)
    num = (1.0 - ex) * (1.0 - ey) * (1.0 + e1) * (1.0 + e1)
    den = (1.0 + ex) * (1.0 + ey) * (1.0 - e1) * (1.0 - e1)
    return 10.0 * math.log10(num / den)


def leaky_wave_threshold_db(alpha: float) -> float:
    """Large-array gain limit of the leaky-wave panel."""
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    e1 = math.exp(-alpha)
    return 10.0 * math.log10(((1.0 + e1) / (1.0 - e1)) ** 2)


@dataclass(frozen=True)
class PointingStats:
    """Realized-gain statistics under beam misalignment."""

    mean_db: float
    min_db: float
    max_db: float
    aligned_db: float
    n_trials: int


def _sample_cap(rng: np.random.Generator, axis: np.ndarray, half_angle_rad: float,
                n: int) -> np.ndarray:
    """Directions uniform over the spherical cap of the given half-angle."""
    cos_min = math.cos(half_angle_rad)
    cos_chi = cos_min + (1.0 - cos_min) * rng.random(n)
    sin_chi = np.sqrt(np.maximum(0.0, 1.0 - cos_chi ** 2))
    phi = 2.0 * math.pi * rng.random(n)
    # orthonormal basis around the axis
    a = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(axis, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    out = (cos_chi[:, None] * axis[None, :]
           + (sin_chi * np.cos(phi))[:, None] * e1[None, :]
           + (sin_chi * np.sin(phi))[:, None] * e2[None, :])
    return out / np.linalg.norm(out, axis=1, keepdims=True)


def gain_with_pointing_error(antenna: TerminalAntenna, true_dir, error_deg: float,
                             n_trials: int, rng_seed: int) -> PointingStats:
    """Monte Carlo gain of a combiner locked to the nominal direction while the
    true direction wanders inside a cone of the given half-angle."""
    if error_deg < 0.0:
        raise ValueError("pointing error must be >= 0")
    if n_trials < 1:
        raise ValueError("need at least one trial")
    if isinstance(antenna, Metasurface):
        raise ValueError("no array factor available for the metasurface terminal")
    weights, aligned_db = best_combiner(antenna, true_dir)
    geom = antenna.geometry
    axis = np.asarray(true_dir, dtype=float)
    axis = axis / np.linalg.norm(axis)
    if error_deg == 0.0:
        g = combining_gain_linear(geom, weights.weights, axis)
        g_db = 10.0 * math.log10(g)
        return PointingStats(g_db, g_db, g_db, g_db, n_trials)
    rng = np.random.default_rng(rng_seed)
    dirs = _sample_cap(rng, axis, math.radians(error_deg), n_trials)
    a_all = np.exp(-2j * np.pi / geom.wavelength_m * (dirs @ geom.element_positions_m.T))
    num = np.abs(a_all @ np.conj(weights.weights)) ** 2
    gains = num / float(np.real(np.vdot(weights.weights, weights.weights)))
    return PointingStats(
        mean_db=10.0 * math.log10(float(np.mean(gains))),
        min_db=10.0 * math.log10(float(np.min(gains))),
        max_db=10.0 * math.log10(float(np.max(gains))),
        aligned_db=aligned_db,
        n_trials=n_trials,
    )


def quantize_phases(weights: BeamWeights, bits: int) -> BeamWeights:
    """Round each weight's phase to the nearest of 2^bits uniform levels.

    Entries already sitting on a level pass through untouched, which makes
    repeated quantization at the same depth a bit-exact no-op.
    """
    if bits < 1:
        raise ValueError("need at least one phase bit")
    step = 2.0 * math.pi / (2 ** bits)
    w = weights.weights
    ph = np.angle(w)
    snapped = np.round(ph / step) * step
    on_grid = np.abs(ph - snapped) < 1e-12
    return BeamWeights(np.where(on_grid, w, np.abs(w) * np.exp(1j * snapped)))


def analog_vs_hybrid_gain_db(geom: ArrayGeometry, direction, bits: int) -> tuple[float, float]:
    """Quantized single-chain conjugate beamformer vs a two-chain hybrid combiner.

    The hybrid stage projects the ideal steering vector onto the span of two
    quantized constant-modulus columns (the quantized conjugate beam and the
    quantized phase of its residual), so it can never do worse than the
    analog beamformer alone.
    """
    a = steering_vector(geom, direction)
    q1 = quantize_phases(BeamWeights(a), bits).weights
    g_analog = combining_gain_linear(geom, q1, direction)
    # residual of a after projecting on q1
    coef = np.vdot(q1, a) / np.real(np.vdot(q1, q1))
    resid = a - coef * q1
    if np.max(np.abs(resid)) < 1e-9:
        q2 = q1
    else:
        step = 2.0 * math.pi / (2 ** bits)
        q2 = np.exp(1j * np.round(np.angle(resid) / step) * step)
    basis = np.stack([q1, q2], axis=1)
    sol, *_ = np.linalg.lstsq(basis, a, rcond=None)
    w = basis @ sol
    if np.max(np.abs(w)) < 1e-12:
        w = q1
    g_hybrid = combining_gain_linear(geom, w, direction)
    return 10.0 * math.log10(g_analog), 10.0 * math.log10(g_hybrid)
