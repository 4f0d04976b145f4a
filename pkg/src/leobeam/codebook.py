"""Partially connected sub-array codebook: oversampled 2-D DFT dictionary,
pruning to the footprint ellipse, oversampling search and cell tiling.

Beam phases follow the DFT ladder theta_n = 2*pi*(n-1)/(O*N_sub) per axis;
theta/pi is wrapped into [-1, 1) and used directly as the spatial-frequency
component of an Earth-pointing unit direction. With half-wave element
spacing the wrap leaves the weights unchanged, so each dictionary column is
exactly a sub-array steering vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .orbit import (
    EarthModel,
    RoiEllipse,
    SatelliteState,
    StereoFrame,
    ray_sphere_ground,
    sphere_to_stereo,
)


@dataclass(frozen=True)
class HybridArchitecture:
    """Satellite array dimensions and RF-chain counts; chains partition the
    array into contiguous equal tiles, one independent beam per chain."""

    sat_nx: int
    sat_ny: int
    rf_nx: int
    rf_ny: int

    def __post_init__(self):
        for name in ("sat_nx", "sat_ny", "rf_nx", "rf_ny"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.sat_nx % self.rf_nx or self.sat_ny % self.rf_ny:
            raise ValueError("RF-chain counts must divide the array dimensions")

    @property
    def sub_nx(self) -> int:
        return self.sat_nx // self.rf_nx

    @property
    def sub_ny(self) -> int:
        return self.sat_ny // self.rf_ny

    @property
    def n_elements(self) -> int:
        return self.sat_nx * self.sat_ny

    @property
    def n_chains(self) -> int:
        return self.rf_nx * self.rf_ny

    @property
    def n_sub_elements(self) -> int:
        return self.sub_nx * self.sub_ny


def rf_index_map(arch: HybridArchitecture) -> np.ndarray:
    """Antenna index n = ix*sat_ny + iy -> RF-chain index (surjective, one
    chain per contiguous sub_nx x sub_ny tile)."""
    ix, iy = np.meshgrid(np.arange(arch.sat_nx), np.arange(arch.sat_ny), indexing="ij")
    chain = (ix // arch.sub_nx) * arch.rf_ny + (iy // arch.sub_ny)
    return chain.ravel()


def wrap_spatial_frequency(u):
    """Map theta/pi onto [-1, 1)."""
    return (np.asarray(u, dtype=float) + 1.0) % 2.0 - 1.0


@dataclass(frozen=True)
class DftBeam:
    """One dictionary entry: raw phase pair, wrapped Earth-pointing direction
    and its position on the DFT grid."""

    theta1: float
    theta2: float
    direction: np.ndarray
    grid_index: tuple[int, int]

    def __post_init__(self):
        v = np.asarray(self.direction, dtype=float)
        if v.shape != (3,) or v[2] > 0.0:
            raise ValueError("beam direction must be a 3-vector with non-positive v3")
        object.__setattr__(self, "direction", v)

    @property
    def v1(self) -> float:
        return float(self.direction[0])

    @property
    def v2(self) -> float:
        return float(self.direction[1])


@dataclass(frozen=True)
class DftDictionary:
    """Full oversampled dictionary before ROI pruning (visible beams only)."""

    arch: HybridArchitecture
    oversampling: float
    beams: tuple
    grid_nx: int
    grid_ny: int


def dictionary_axis_values(oversampling: float, n_sub: int) -> np.ndarray:
    """Wrapped spatial frequencies of one DFT axis: round(O*N) rungs spaced
    2/(O*N), starting at broadside."""
    count = round(oversampling * n_sub)
    theta_over_pi = 2.0 * np.arange(count) / (oversampling * n_sub)
    return wrap_spatial_frequency(theta_over_pi)


def build_dictionary(arch: HybridArchitecture, oversampling: float) -> DftDictionary:
    """Generate the oversampled 2-D DFT grid and keep the visible directions
    (v1^2 + v2^2 <= 1), pointing toward Earth."""
    if oversampling <= 0.0:
        raise ValueError("oversampling factor must be positive")
    v1s = dictionary_axis_values(oversampling, arch.sub_nx)
    v2s = dictionary_axis_values(oversampling, arch.sub_ny)
    beams = []
    for i, v1 in enumerate(v1s):
        theta1 = 2.0 * math.pi * i / (oversampling * arch.sub_nx)
        for j, v2 in enumerate(v2s):
            rr = v1 * v1 + v2 * v2
            if rr > 1.0:
                continue
            theta2 = 2.0 * math.pi * j / (oversampling * arch.sub_ny)
            v3 = -math.sqrt(max(0.0, 1.0 - rr))
            beams.append(DftBeam(theta1, theta2, np.array([v1, v2, v3]), (i, j)))
    return DftDictionary(
        arch=arch,
        oversampling=oversampling,
        beams=tuple(beams),
        grid_nx=len(v1s),
        grid_ny=len(v2s),
    )


def beam_weights(beam: DftBeam, arch: HybridArchitecture, subarray_index: int) -> np.ndarray:
    """Column of the analog precoder for one beam on one RF chain.

    Nonzero only on the chain's tile; entries are the unit-modulus sub-array
    steering phases taken at the global element positions (half-wave grid).
    """
    if not 0 <= subarray_index < arch.n_chains:
        raise ValueError("sub-array index out of range")
    chains = rf_index_map(arch)
    ix, iy = np.meshgrid(np.arange(arch.sat_nx), np.arange(arch.sat_ny), indexing="ij")
    phase = -math.pi * (ix.ravel() * beam.v1 + iy.ravel() * beam.v2)
    col = np.where(chains == subarray_index, np.exp(1j * phase), 0.0 + 0.0j)
    return col


@dataclass(frozen=True)
class SubarrayCodebook:
    """Dictionary beams whose footprint centers fall inside the ROI, in grid
    order, together with those centers in chart coordinates."""

    beams: tuple
    ground_xy_m: np.ndarray
    oversampling: float
    arch: HybridArchitecture
    grid_nx: int
    grid_ny: int

    @property
    def n_beams(self) -> int:
        return len(self.beams)

    def directions(self) -> np.ndarray:
        return np.array([b.direction for b in self.beams])


def direction_ground_point(direction, frame: StereoFrame, sat: SatelliteState,
                           earth: EarthModel) -> Optional[tuple[float, float]]:
    """Chart coordinates where a frame-local direction ray from the satellite
    hits the ground, or None if it misses Earth."""
    v = np.asarray(direction, dtype=float)
    d_ecef = v[0] * frame.u_x + v[1] * frame.u_y + v[2] * frame.u_sat
    hit = ray_sphere_ground(sat.position_m, d_ecef, earth)
    if hit is None:
        return None
    return sphere_to_stereo(hit, frame, earth)


def beam_ground_point(beam: DftBeam, frame: StereoFrame, sat: SatelliteState,
                      earth: EarthModel) -> Optional[tuple[float, float]]:
    """Chart coordinates of the beam-axis ground intersection, or None if the
    beam ray misses Earth."""
    return direction_ground_point(beam.direction, frame, sat, earth)


def prune_to_roi(dictionary: DftDictionary, roi: RoiEllipse, sat: SatelliteState,
                 earth: EarthModel) -> SubarrayCodebook:
    """Keep the beams whose axis intersects the ground inside the ROI ellipse."""
    kept = []
    centers = []
    for beam in dictionary.beams:
        xy = beam_ground_point(beam, roi.frame, sat, earth)
        if xy is None:
            continue
        if roi.contains(xy[0], xy[1]):
            kept.append(beam)
            centers.append(xy)
    centers_arr = np.array(centers) if centers else np.zeros((0, 2))
    return SubarrayCodebook(
        beams=tuple(kept),
        ground_xy_m=centers_arr,
        oversampling=dictionary.oversampling,
        arch=dictionary.arch,
        grid_nx=dictionary.grid_nx,
        grid_ny=dictionary.grid_ny,
    )


@dataclass(frozen=True)
class OversamplingSearch:
    """Result of the oversampling sweep: chosen factor plus the count curve."""

    factor: float
    count: int
    target: int
    achieved: bool
    curve: tuple  # (oversampling, pruned count) pairs


def find_oversampling(arch: HybridArchitecture, roi: RoiEllipse, sat: SatelliteState,
                      earth: EarthModel, o_range: tuple[float, float] = (0.8, 4.0),
                      step: float = 0.005) -> OversamplingSearch:
    """Sweep the oversampling factor and return the largest value whose pruned
    beam count equals the number of RF chains; falls back to the closest
    count if no factor matches exactly."""
    lo, hi = o_range
    if not (0.0 < lo < hi):
        raise ValueError("invalid oversampling range")
    target = arch.n_chains
    curve = []
    best_exact = None
    best_close = None
    n_steps = int(round((hi - lo) / step))
    for k in range(n_steps + 1):
        o = round(lo + k * step, 9)
        count = prune_to_roi(build_dictionary(arch, o), roi, sat, earth).n_beams
        curve.append((o, count))
        if count == target:
            best_exact = (o, count)
        if best_close is None or abs(count - target) < abs(best_close[1] - target):
            best_close = (o, count)
    if best_exact is not None:
        o_sel, count_sel = best_exact
        achieved = True
    else:
        o_sel, count_sel = best_close
        achieved = False
    return OversamplingSearch(factor=o_sel, count=count_sel, target=target,
                              achieved=achieved, curve=tuple(curve))


def dirichlet_magnitude(delta, n: int) -> np.ndarray:
    """|sum_{j<n} e^{-i pi j delta}| for half-wave element ladders."""
    x = 0.5 * np.pi * np.asarray(delta, dtype=float)
    sx = np.sin(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sin(n * x) / sx
    return np.abs(np.where(np.abs(sx) < 1e-12, float(n) * np.cos(n * x) / np.cos(x), ratio))


def transmit_gains_linear(codebook: SubarrayCodebook, v1, v2) -> np.ndarray:
    """Normalized per-beam transmit gain |<a_sat(v), f_m>|^2 with unit-power
    beams: peaks at the sub-array element count on the beam axis.

    v1/v2 are the spatial-frequency components of the satellite-to-user
    direction in the footprint frame; returns shape (n_beams,) + v1.shape.
    """
    arch = codebook.arch
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    out = np.empty((codebook.n_beams,) + v1.shape)
    for m, beam in enumerate(codebook.beams):
        dx = dirichlet_magnitude(v1 - beam.v1, arch.sub_nx)
        dy = dirichlet_magnitude(v2 - beam.v2, arch.sub_ny)
        out[m] = (dx * dy) ** 2 / arch.n_sub_elements
    return out


@dataclass(frozen=True)
class CellMap:
    """Argmax-beam tiling of the footprint on a chart grid."""

    xs_m: np.ndarray
    ys_m: np.ndarray
    mask: np.ndarray        # in-ellipse flag, shape (nx, ny)
    best_beam: np.ndarray   # argmax beam index, -1 outside the ellipse
    best_gain_db: np.ndarray
    second_gain_db: np.ndarray


def direction_components(xs_m, ys_m, roi: RoiEllipse, sat: SatelliteState,
                         earth: EarthModel) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Spatial-frequency components (v1, v2) of the satellite-to-ground
    direction for a chart grid, plus the slant range and ground points."""
    x, y = np.meshgrid(np.asarray(xs_m, dtype=float), np.asarray(ys_m, dtype=float),
                       indexing="ij")
    r = earth.radius_m
    denom = np.sqrt(r * r + x * x + y * y)
    f = roi.frame
    ground = (r / denom)[..., None] * (r * f.u_sat + x[..., None] * f.u_x + y[..., None] * f.u_y)
    los = ground - sat.position_m
    dist = np.linalg.norm(los, axis=-1)
    v1 = (los @ f.u_x) / dist
    v2 = (los @ f.u_y) / dist
    return v1, v2, dist, ground


def tile_cells(codebook: SubarrayCodebook, roi: RoiEllipse, sat: SatelliteState,
               earth: EarthModel, grid_resolution: int) -> CellMap:
    """Assign every in-ellipse chart point to its strongest beam (ties break
    to the lowest beam index) and record the runner-up gain."""
    if codebook.n_beams == 0:
        raise ValueError("codebook is empty")
    n = int(grid_resolution)
    xs = np.linspace(-roi.semi_x_m, roi.semi_x_m, n) if n > 0 else np.zeros(0)
    ys = np.linspace(-roi.semi_y_m, roi.semi_y_m, n) if n > 0 else np.zeros(0)
    if n == 0:
        empty = np.zeros((0, 0))
        return CellMap(xs, ys, empty.astype(bool), empty.astype(int), empty, empty)
    xg, yg = np.meshgrid(xs, ys, indexing="ij")
    mask = np.asarray(roi.contains(xg, yg))
    v1, v2, _, _ = direction_components(xs, ys, roi, sat, earth)
    gains = transmit_gains_linear(codebook, v1, v2)
    order = np.argsort(-gains, axis=0, kind="stable")
    best = order[0]
    second = order[1] if codebook.n_beams > 1 else order[0]
    best_gain = np.take_along_axis(gains, best[None], axis=0)[0]
    second_gain = np.take_along_axis(gains, second[None], axis=0)[0]
    with np.errstate(divide="ignore"):
        best_db = 10.0 * np.log10(best_gain)
        second_db = 10.0 * np.log10(second_gain)
    best = np.where(mask, best, -1)
    best_db = np.where(mask, best_db, np.nan)
    second_db = np.where(mask, second_db, np.nan)
    return CellMap(xs, ys, mask, best, best_db, second_db)


@dataclass(frozen=True)
class CornerPoint:
    """Lattice half-point where adjacent beam cells meet; gains tie exactly
    among the beams present around it."""

    x_m: float
    y_m: float
    v1: float
    v2: float
    n_present: int
    present_beams: tuple
    gains_linear: np.ndarray


def corner_ties(codebook: SubarrayCodebook, roi: RoiEllipse, sat: SatelliteState,
                earth: EarthModel) -> list[CornerPoint]:
    """All in-ellipse lattice half-points with at least three of the four
    surrounding dictionary beams in the codebook.

    Four present beams is a four-cell corner; three is a T-junction where a
    boundary beam was pruned. By the symmetry of the DFT kernels, every
    present surrounding beam has the same gain at the half-point.
    """
    arch = codebook.arch
    v1s = dictionary_axis_values(codebook.oversampling, arch.sub_nx)
    v2s = dictionary_axis_values(codebook.oversampling, arch.sub_ny)
    nx, ny = codebook.grid_nx, codebook.grid_ny
    index_of = {b.grid_index: m for m, b in enumerate(codebook.beams)}
    out = []
    for i in range(nx):
        i2 = (i + 1) % nx
        gap1 = (v1s[i2] - v1s[i]) % 2.0
        v1c = wrap_spatial_frequency(v1s[i] + gap1 / 2.0)
        for j in range(ny):
            j2 = (j + 1) % ny
            quad = [(i, j), (i2, j), (i, j2), (i2, j2)]
            present = [index_of[q] for q in quad if q in index_of]
            if len(present) < 3:
                continue
            gap2 = (v2s[j2] - v2s[j]) % 2.0
            v2c = wrap_spatial_frequency(v2s[j] + gap2 / 2.0)
            rr = v1c * v1c + v2c * v2c
            if rr > 1.0:
                continue
            v_corner = np.array([v1c, v2c, -math.sqrt(1.0 - rr)])
            xy = direction_ground_point(v_corner, roi.frame, sat, earth)
            if xy is None or not roi.contains(xy[0], xy[1]):
                continue
            gains = transmit_gains_linear(codebook, np.atleast_1d(v1c), np.atleast_1d(v2c))[:, 0]
            out.append(CornerPoint(
                x_m=xy[0], y_m=xy[1], v1=float(v1c), v2=float(v2c),
                n_present=len(present), present_beams=tuple(present),
                gains_linear=gains,
            ))
    return out
