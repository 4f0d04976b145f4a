"""Experiment drivers: coverage and SINR maps, axis cuts, Doppler fields,
beam-switching timeline and terminal-antenna sweeps, plus the CSV writers.

Runs are deterministic: all randomness derives from the configured seed and
output files carry no timestamps, so identical configs produce identical
bytes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .antennas import (
    ArrayGeometry,
    LeakyWave,
    Metasurface,
    TerminalAntenna,
    Upa,
    analog_vs_hybrid_gain_db,
    gain_with_pointing_error,
    leaky_wave_gain_db,
    leaky_wave_threshold_db,
    metasurface_gain_db,
    upa_max_gain_db,
)
from .atmosphere import AtmosphereProfile, atmospheric_loss_db
from .channel import (
    SPEED_OF_LIGHT_MPS,
    free_space_loss_db,
    from_db,
    noise_power_dbw,
    to_db,
    user_doppler,
)
from .codebook import (
    HybridArchitecture,
    SubarrayCodebook,
    build_dictionary,
    corner_ties,
    direction_components,
    find_oversampling,
    prune_to_roi,
    tile_cells,
    transmit_gains_linear,
)
from .config import RunConfig
from .metrics import PointMetrics, expected_receive_gain
from .orbit import (
    ConstellationGeometry,
    EarthModel,
    RoiEllipse,
    SatelliteState,
    StereoFrame,
    angular_speed_rad_s,
    circular_state,
    design_roi,
    orbital_period_s,
    orbital_speed_mps,
    propagate_circular,
    shadow_speed_mps,
    sphere_to_stereo,
)

# fixed tags deriving per-task RNG streams from the master seed
_SEED_POINTING = 11
_SEED_BITS = 12
_SEED_USER_DOPPLER = 13


@dataclass(frozen=True)
class SimContext:
    """Everything derived from a validated config that the drivers share."""

    config: RunConfig
    earth: EarthModel
    geom: ConstellationGeometry
    state: SatelliteState
    frame: StereoFrame
    roi: RoiEllipse
    arch: HybridArchitecture
    codebook: SubarrayCodebook
    n_pruned: int
    oversampling: float
    wavelength_m: float
    freq_hz: float
    bandwidth_hz: float
    lp_at_db: float
    noise_dbw: float


def build_context(config: RunConfig) -> SimContext:
    """Resolve geometry, footprint and codebook for a validated config."""
    config.require_valid()
    earth = EarthModel(radius_m=config["earth.radius_km"] * 1e3, mu_m3s2=config["earth.mu"])
    geom = ConstellationGeometry(
        n_planes=config["constellation.n_planes"],
        n_sats_per_plane=config["constellation.n_sats"],
        inclination_rad=math.radians(config["constellation.inclination_deg"]),
        altitude_m=config["constellation.altitude_km"] * 1e3,
    )
    state = circular_state(earth, geom.altitude_m)
    frame = StereoFrame.from_state(state)
    if config["roi.auto"]:
        roi = design_roi(geom, earth, frame)
    else:
        roi = RoiEllipse(config["roi.semi_x_km"] * 1e3, config["roi.semi_y_km"] * 1e3, frame)
    arch = HybridArchitecture(
        sat_nx=config["sat.nx"], sat_ny=config["sat.ny"],
        rf_nx=config["sat.rf_nx"], rf_ny=config["sat.rf_ny"],
    )
    freq_hz = config["link.freq_ghz"] * 1e9
    if config["codebook.auto_oversampling"]:
        oversampling = find_oversampling(arch, roi, state, earth).factor
    else:
        oversampling = config["codebook.oversampling"]
    codebook = prune_to_roi(build_dictionary(arch, oversampling), roi, state, earth)
    n_pruned = codebook.n_beams
    if n_pruned > arch.n_chains:
        # more footprint beams than RF chains: keep the first chain-count in grid order
        codebook = SubarrayCodebook(
            beams=codebook.beams[:arch.n_chains],
            ground_xy_m=codebook.ground_xy_m[:arch.n_chains],
            oversampling=oversampling,
            arch=arch,
            grid_nx=codebook.grid_nx,
            grid_ny=codebook.grid_ny,
        )
    if config["atmosphere.mode"] == "computed":
        profile = AtmosphereProfile.standard(
            sea_level_vapor_gm3=config["atmosphere.water_vapor_gm3"])
        lp_at_db = atmospheric_loss_db(profile, freq_hz, math.pi / 2.0)
    else:
        lp_at_db = config["atmosphere.lp_at_db"]
    return SimContext(
        config=config,
        earth=earth,
        geom=geom,
        state=state,
        frame=frame,
        roi=roi,
        arch=arch,
        codebook=codebook,
        n_pruned=n_pruned,
        oversampling=oversampling,
        wavelength_m=SPEED_OF_LIGHT_MPS / freq_hz,
        freq_hz=freq_hz,
        bandwidth_hz=config["link.bandwidth_mhz"] * 1e6,
        lp_at_db=lp_at_db,
        noise_dbw=noise_power_dbw(config["link.noise_temp_dbk"],
                                  config["link.bandwidth_mhz"] * 1e6),
    )


def terminal_antenna(config: RunConfig, wavelength_m: float) -> TerminalAntenna:
    kind = config["ut.kind"]
    if kind == "upa":
        return Upa(ArrayGeometry.upa(config["ut.nx"], config["ut.ny"], wavelength_m))
    if kind == "leaky_wave":
        return LeakyWave(config["ut.nx"], config["ut.ny"], wavelength_m, config["ut.alpha"])
    return Metasurface(config["ut.peak_gain_db"], config["ut.rolloff"])


def _leaky_axis_gain_map(n: int, alpha: float, u_flat: np.ndarray,
                         n_grid: int = 361, chunk: int = 4096) -> np.ndarray:
    """Best per-axis leaky-wave amplitude over the scanned phase grid, for an
    array of target spatial frequencies (times pi)."""
    thetas = np.linspace(-math.pi, math.pi, n_grid)
    decay = math.exp(-alpha)
    out = np.empty(u_flat.shape[0])
    for start in range(0, u_flat.shape[0], chunk):
        u = u_flat[start:start + chunk]
        phase = 0.5 * thetas[None, :] - u[:, None]
        r = decay * np.exp(1j * phase)
        s = np.abs((1.0 - r ** n) / (1.0 - r))
        out[start:start + chunk] = s.max(axis=1)
    return out


def _receive_gain_db_grid(config: RunConfig, wavelength_m: float, ground: np.ndarray,
                          dist: np.ndarray, state: SatelliteState,
                          frame: StereoFrame, k_factor: float) -> np.ndarray:
    """Expected terminal combining gain (dB) over a grid of ground points.

    The planar array is direction independent; the metasurface depends on
    elevation; the leaky-wave panel is scanned per point with its x-axis
    aligned along-track.
    """
    kind = config["ut.kind"]
    bits = config["ut.phase_bits"]
    if kind == "upa" and bits == 0:
        n = config["ut.nx"] * config["ut.ny"]
        return np.full(dist.shape, to_db(n + 1.0 / k_factor))
    d_up = (state.position_m - ground) / dist[..., None]
    ez = ground / np.linalg.norm(ground, axis=-1, keepdims=True)
    sin_el = np.clip(np.sum(d_up * ez, axis=-1), -1.0, 1.0)
    if kind == "metasurface":
        peak, roll = config["ut.peak_gain_db"], config["ut.rolloff"]
        gain_db = peak - roll * 10.0 * np.log10(np.clip(sin_el, 1e-9, 1.0))
        return 10.0 * np.log10(10.0 ** (gain_db / 10.0) + 1.0 / k_factor)
    # planar array / leaky wave: project the satellite direction on the panel axes
    ex = frame.u_x - np.sum(frame.u_x * ez, axis=-1)[..., None] * ez
    ex = ex / np.linalg.norm(ex, axis=-1, keepdims=True)
    ey = np.cross(ez, ex)
    u1 = math.pi * np.sum(d_up * ex, axis=-1)
    u2 = math.pi * np.sum(d_up * ey, axis=-1)
    nx, ny = config["ut.nx"], config["ut.ny"]
    if kind == "upa":
        gain = _quantized_upa_gain_map(nx, ny, bits, u1.ravel(), u2.ravel()) + 1.0 / k_factor
        return (10.0 * np.log10(gain)).reshape(dist.shape)
    alpha = config["ut.alpha"]
    sx = _leaky_axis_gain_map(nx, alpha, u1.ravel())
    sy = _leaky_axis_gain_map(ny, alpha, u2.ravel())
    qx = sum(math.exp(-2.0 * alpha * j) for j in range(nx))
    qy = sum(math.exp(-2.0 * alpha * j) for j in range(ny))
    gain = (sx * sx / qx) * (sy * sy / qy) + 1.0 / k_factor
    return (10.0 * np.log10(gain)).reshape(dist.shape)


def _quantized_upa_gain_map(nx: int, ny: int, bits: int, u1: np.ndarray, u2: np.ndarray,
                            chunk: int = 2048) -> np.ndarray:
    """Matched-combiner gain of an nx x ny half-wave array with the phases
    snapped to 2^bits levels; u1/u2 are pi times the direction components."""
    ix, iy = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    ix = ix.ravel()[None, :]
    iy = iy.ravel()[None, :]
    step = 2.0 * math.pi / (2 ** bits)
    n = nx * ny
    out = np.empty(u1.shape[0])
    for start in range(0, u1.shape[0], chunk):
        phase = -(u1[start:start + chunk, None] * ix + u2[start:start + chunk, None] * iy)
        resid = phase - np.round(phase / step) * step
        out[start:start + chunk] = np.abs(np.exp(1j * resid).sum(axis=1)) ** 2 / n
    return out


@dataclass(frozen=True)
class CoverageGrid:
    """Per-point coverage metrics over the footprint bounding box."""

    xs_m: np.ndarray
    ys_m: np.ndarray
    mask: np.ndarray
    best_beam: np.ndarray
    gtx_db: np.ndarray
    rss_dbw: np.ndarray
    interference_dbw: np.ndarray
    snr_db: np.ndarray
    sinr_db: np.ndarray
    se_interf: np.ndarray
    se_no_interf: np.ndarray
    bandwidth_hz: float = 0.0

    def point(self, i: int, j: int) -> Optional[PointMetrics]:
        """Assembled metrics record for one grid point, None outside the mask."""
        if not bool(self.mask[i, j]):
            return None
        return PointMetrics(
            rss_dbw=float(self.rss_dbw[i, j]),
            snr_db=float(self.snr_db[i, j]),
            interference_dbw=float(self.interference_dbw[i, j]),
            sinr_db=float(self.sinr_db[i, j]),
            se_no_interf_bps_hz=float(self.se_no_interf[i, j]),
            se_interf_bps_hz=float(self.se_interf[i, j]),
            throughput_no_interf_bps=float(self.se_no_interf[i, j]) * self.bandwidth_hz,
            throughput_interf_bps=float(self.se_interf[i, j]) * self.bandwidth_hz,
        )


def run_coverage(config: RunConfig, context: Optional[SimContext] = None) -> CoverageGrid:
    """Coverage, SNR, SINR and spectral-efficiency maps with best-beam
    selection (maximum transmit gain) at every in-footprint point."""
    ctx = context or build_context(config)
    n = config["grid.resolution"]
    roi = ctx.roi
    xs = np.linspace(-roi.semi_x_m, roi.semi_x_m, n) if n > 0 else np.zeros(0)
    ys = np.linspace(-roi.semi_y_m, roi.semi_y_m, n) if n > 0 else np.zeros(0)
    if n == 0:
        e = np.zeros((0, 0))
        return CoverageGrid(xs, ys, e.astype(bool), e.astype(int), e, e, e, e, e, e, e,
                            ctx.bandwidth_hz)
    xg, yg = np.meshgrid(xs, ys, indexing="ij")
    mask = np.asarray(roi.contains(xg, yg))
    v1, v2, dist, ground = direction_components(xs, ys, roi, ctx.state, ctx.earth)
    gains = transmit_gains_linear(ctx.codebook, v1, v2)
    best = np.argmax(gains, axis=0)
    g_best = np.max(gains, axis=0)
    g_others = np.sum(gains, axis=0) - g_best
    gtx_db = 10.0 * np.log10(g_best)
    g_rx_db = _receive_gain_db_grid(config, ctx.wavelength_m, ground, dist,
                                    ctx.state, ctx.frame, config["link.k_factor"])
    lp_fs = 20.0 * np.log10(4.0 * math.pi * dist * ctx.freq_hz / SPEED_OF_LIGHT_MPS)
    base_db = (config["link.p_tx_dbw"] - config["link.lp_cable_db"]
               - ctx.lp_at_db - lp_fs + g_rx_db)
    rss_dbw = base_db + gtx_db
    snr_db = rss_dbw - ctx.noise_dbw
    rss_w = 10.0 ** (rss_dbw / 10.0)
    noise_w = from_db(ctx.noise_dbw)
    with np.errstate(divide="ignore"):
        interf_dbw = np.where(g_others > 0.0,
                              base_db + 10.0 * np.log10(np.maximum(g_others, 1e-300)),
                              -np.inf)
    interf_w = np.where(g_others > 0.0, 10.0 ** (interf_dbw / 10.0), 0.0)
    sinr_lin = rss_w / (interf_w + noise_w)
    sinr_db = 10.0 * np.log10(sinr_lin)
    se_int = np.log2(1.0 + sinr_lin)
    se_noint = np.log2(1.0 + 10.0 ** (snr_db / 10.0))
    nanf = lambda a: np.where(mask, a, np.nan)
    return CoverageGrid(
        xs_m=xs, ys_m=ys, mask=mask,
        best_beam=np.where(mask, best, -1),
        gtx_db=nanf(gtx_db),
        rss_dbw=nanf(rss_dbw),
        interference_dbw=nanf(interf_dbw),
        snr_db=nanf(snr_db), sinr_db=nanf(sinr_db),
        se_interf=nanf(se_int), se_no_interf=nanf(se_noint),
        bandwidth_hz=ctx.bandwidth_hz,
    )


@dataclass(frozen=True)
class AxisCuts:
    """Min/max SNR across the other axis, per chart axis."""

    x_m: np.ndarray
    x_max_db: np.ndarray
    x_min_db: np.ndarray
    x_argmax_y_m: np.ndarray
    y_m: np.ndarray
    y_max_db: np.ndarray
    y_min_db: np.ndarray
    y_argmax_x_m: np.ndarray


def run_axis_cuts(grid: CoverageGrid) -> AxisCuts:
    """Collapse the SNR map into per-axis envelope curves."""
    if grid.xs_m.size == 0:
        raise ValueError("empty coverage grid")

    def cuts(snr, mask, other_axis):
        n = snr.shape[0]
        mx = np.full(n, np.nan)
        mn = np.full(n, np.nan)
        arg = np.full(n, np.nan)
        for i in range(n):
            sel = mask[i]
            if not np.any(sel):
                continue
            vals = snr[i][sel]
            mx[i] = np.max(vals)
            mn[i] = np.min(vals)
            arg[i] = other_axis[sel][np.argmax(vals)]
        return mx, mn, arg

    x_max, x_min, x_arg = cuts(grid.snr_db, grid.mask, grid.ys_m)
    y_max, y_min, y_arg = cuts(grid.snr_db.T, grid.mask.T, grid.xs_m)
    return AxisCuts(grid.xs_m, x_max, x_min, x_arg, grid.ys_m, y_max, y_min, y_arg)


def _center_line_ripple(pos: np.ndarray, snr: np.ndarray) -> float:
    """Mean cell-center-to-edge SNR drop along one central line.

    Local minima strictly between the first and last local maxima count as
    cell edges; each contributes the average of its two neighbouring peaks
    minus its own value, which excludes the footprint-boundary roll-off.
    """
    finite = np.isfinite(snr)
    s = snr[finite]
    if s.size < 5:
        raise ValueError("central line too short for a ripple estimate")
    peaks = []
    dips = []
    for k in range(1, s.size - 1):
        if s[k] >= s[k - 1] and s[k] >= s[k + 1]:
            peaks.append(k)
        elif s[k] <= s[k - 1] and s[k] <= s[k + 1]:
            dips.append(k)
    if len(peaks) < 2:
        raise ValueError("no interior cells found on the central line")
    interior = [d for d in dips if peaks[0] < d < peaks[-1]]
    drops = []
    for d in interior:
        left = max(p for p in peaks if p < d)
        right = min(p for p in peaks if p > d)
        drops.append(0.5 * (s[left] + s[right]) - s[d])
    if not drops:
        raise ValueError("no interior cell edges on the central line")
    return float(np.mean(drops))


def axis_ripple(grid: CoverageGrid) -> tuple[float, float]:
    """Cell-center-to-edge SNR ripple along the two central axes (dB)."""
    i0 = int(np.argmin(np.abs(grid.xs_m)))
    j0 = int(np.argmin(np.abs(grid.ys_m)))
    ripple_x = _center_line_ripple(grid.xs_m, grid.snr_db[:, j0])
    ripple_y = _center_line_ripple(grid.ys_m, grid.snr_db[i0, :])
    return ripple_x, ripple_y


@dataclass(frozen=True)
class DopplerGrid:
    """Satellite-motion Doppler and relative angular speed over the footprint,
    plus moving-terminal Doppler statistics."""

    xs_m: np.ndarray
    ys_m: np.ndarray
    mask: np.ndarray
    doppler_hz: np.ndarray
    w_rel_rad_s: np.ndarray
    user_doppler: tuple


def run_doppler_maps(config: RunConfig, context: Optional[SimContext] = None) -> DopplerGrid:
    """Evaluate the satellite Doppler and angular-speed fields over the ROI
    grid and a small table of terminal-speed Doppler statistics."""
    ctx = context or build_context(config)
    n = config["grid.resolution"]
    roi = ctx.roi
    xs = np.linspace(-roi.semi_x_m, roi.semi_x_m, n) if n > 0 else np.zeros(0)
    ys = np.linspace(-roi.semi_y_m, roi.semi_y_m, n) if n > 0 else np.zeros(0)
    if n == 0:
        e = np.zeros((0, 0))
        return DopplerGrid(xs, ys, e.astype(bool), e, e, ())
    xg, yg = np.meshgrid(xs, ys, indexing="ij")
    mask = np.asarray(roi.contains(xg, yg))
    _, _, dist, ground = direction_components(xs, ys, roi, ctx.state, ctx.earth)
    los = ground - ctx.state.position_m
    radial = los @ ctx.state.velocity_mps / dist
    doppler = radial * ctx.freq_hz / SPEED_OF_LIGHT_MPS
    cos_a = radial / ctx.state.speed_mps
    w_rel = np.sqrt(np.maximum(0.0, 1.0 - cos_a ** 2)) * ctx.state.speed_mps / dist
    seed = config["run.seed"]
    stats = []
    for speed in (1.0, 3.0, 10.0, 30.0):
        mx, mean_abs = user_doppler(speed, ctx.freq_hz, 20000,
                                    seed=_derived_seed(seed, _SEED_USER_DOPPLER))
        stats.append({"speed_mps": speed, "max_hz": mx, "mean_abs_hz": mean_abs})
    return DopplerGrid(
        xs_m=xs, ys_m=ys, mask=mask,
        doppler_hz=np.where(mask, doppler, np.nan),
        w_rel_rad_s=np.where(mask, w_rel, np.nan),
        user_doppler=tuple(stats),
    )


def _derived_seed(master: int, tag: int) -> int:
    return int(np.random.SeedSequence([master, tag]).generate_state(1)[0])


@dataclass(frozen=True)
class TimelineTrace:
    """Beam-selection history for a fixed user under the moving satellite."""

    times_s: np.ndarray
    sat_positions_m: np.ndarray
    selected_beam: np.ndarray
    snr_db: np.ndarray
    all_snr_db: np.ndarray
    switch_events: tuple   # (time_s, old_beam, new_beam)
    left_roi_at_s: Optional[float]

    def first_dwell_s(self) -> Optional[float]:
        if not self.switch_events:
            return None
        return self.switch_events[0][0] - float(self.times_s[0])


def run_timeline(config: RunConfig, duration_s: Optional[float] = None,
                 step_s: Optional[float] = None, user_pos_m=None,
                 context: Optional[SimContext] = None) -> TimelineTrace:
    """Propagate the satellite, reselect the best-SNR beam for a fixed user
    each step, and record switches until the user leaves the footprint."""
    ctx = context or build_context(config)
    duration = config["timeline.duration_s"] if duration_s is None else duration_s
    step = config["timeline.step_s"] if step_s is None else step_s
    if step <= 0.0:
        raise ValueError("timeline step must be positive")
    if user_pos_m is None:
        # sub-satellite point at t = 0
        user = ctx.earth.radius_m * ctx.frame.u_sat
    else:
        user = np.asarray(user_pos_m, dtype=float)
    k_factor = config["link.k_factor"]
    antenna = terminal_antenna(config, ctx.wavelength_m)
    bits = config["ut.phase_bits"]
    upa_grx_db = (to_db(config["ut.nx"] * config["ut.ny"] + 1.0 / k_factor)
                  if isinstance(antenna, Upa) and bits == 0 else None)
    n_steps = int(math.floor(duration / step)) + 1
    times, positions, sel, snr_sel, snr_all = [], [], [], [], []
    switch_events = []
    left_at = None
    state = ctx.state
    for k in range(n_steps):
        t = k * step
        if k > 0:
            state = propagate_circular(ctx.state, t, ctx.earth)
        frame = StereoFrame.from_state(state)
        visible = float(user @ frame.u_sat) > 0.0
        inside = visible and ctx.roi.contains(*sphere_to_stereo(user, frame, ctx.earth))
        if not inside:
            if k == 0:
                raise ValueError("user starts outside the footprint")
            left_at = t
            break
        los = user - state.position_m
        dist = float(np.linalg.norm(los))
        v1 = float(los @ frame.u_x) / dist
        v2 = float(los @ frame.u_y) / dist
        gains = transmit_gains_linear(ctx.codebook, np.atleast_1d(v1), np.atleast_1d(v2))[:, 0]
        if upa_grx_db is not None:
            g_rx_db = upa_grx_db
        else:
            d_local = _local_direction(-los / dist, user, frame)
            if isinstance(antenna, Upa):
                g = _quantized_upa_gain_map(
                    config["ut.nx"], config["ut.ny"], bits,
                    np.atleast_1d(math.pi * d_local[0]),
                    np.atleast_1d(math.pi * d_local[1]))[0]
                g_rx_db = to_db(g + 1.0 / k_factor)
            else:
                g_rx_db = to_db(expected_receive_gain(antenna, d_local, k_factor))
        lp_fs = free_space_loss_db(dist, ctx.freq_hz)
        beam_snr = (config["link.p_tx_dbw"] - config["link.lp_cable_db"]
                    + 10.0 * np.log10(gains) - ctx.lp_at_db - lp_fs + g_rx_db
                    - ctx.noise_dbw)
        m = int(np.argmax(beam_snr))
        if sel and m != sel[-1]:
            switch_events.append((t, sel[-1], m))
        times.append(t)
        positions.append(state.position_m)
        sel.append(m)
        snr_sel.append(float(beam_snr[m]))
        snr_all.append(beam_snr)
    return TimelineTrace(
        times_s=np.array(times),
        sat_positions_m=np.array(positions),
        selected_beam=np.array(sel, dtype=int),
        snr_db=np.array(snr_sel),
        all_snr_db=np.array(snr_all),
        switch_events=tuple(switch_events),
        left_roi_at_s=left_at,
    )


def _local_direction(d_to_sat: np.ndarray, ground: np.ndarray, frame: StereoFrame) -> np.ndarray:
    """Express a user-to-satellite direction in the terminal's local frame
    (panel x along-track, z up)."""
    ez = ground / np.linalg.norm(ground)
    ex = frame.u_x - float(frame.u_x @ ez) * ez
    ex = ex / np.linalg.norm(ex)
    ey = np.cross(ez, ex)
    return np.array([float(d_to_sat @ ex), float(d_to_sat @ ey), float(d_to_sat @ ez)])


def corner_sinr_noisefree(ctx: SimContext) -> list[dict]:
    """Noise-free SINR at every in-footprint cell-corner tie point."""
    out = []
    for c in corner_ties(ctx.codebook, ctx.roi, ctx.state, ctx.earth):
        sel = c.present_beams[0]
        g_sel = c.gains_linear[sel]
        g_other = float(np.sum(c.gains_linear)) - g_sel
        out.append({
            "x_m": c.x_m, "y_m": c.y_m, "n_tied": c.n_present,
            "sinr_db": to_db(g_sel / g_other),
        })
    return out


def run_ut_sweeps(config: RunConfig, n_trials: int = 2000,
                  context: Optional[SimContext] = None) -> list[tuple]:
    """Terminal-antenna study: gain vs leakage factor, elevation, pointing
    error and phase-shifter resolution. Returns long-format rows
    (sweep, param, series, value_db)."""
    ctx = context or build_context(config)
    lam = ctx.wavelength_m
    nx, ny = config["ut.nx"], config["ut.ny"]
    seed = config["run.seed"]
    rows = []
    upa_db = upa_max_gain_db(ArrayGeometry.upa(nx, ny, lam))
    for alpha in np.logspace(-2, 0, 25):
        rows.append(("alpha", float(alpha), "leaky_wave", leaky_wave_gain_db(nx, ny, float(alpha))))
        rows.append(("alpha", float(alpha), "threshold", leaky_wave_threshold_db(float(alpha))))
        rows.append(("alpha", float(alpha), "upa_ref", upa_db))
    meta = Metasurface(config["ut.peak_gain_db"], config["ut.rolloff"])
    for el_deg in range(5, 91, 5):
        rows.append(("elevation", float(el_deg), "metasurface",
                     metasurface_gain_db(meta, math.radians(el_deg))))
    broadside = np.array([0.0, 0.0, 1.0])
    upa = Upa(ArrayGeometry.upa(nx, ny, lam))
    leaky = LeakyWave(nx, ny, lam, config["ut.alpha"])
    for err in np.arange(0.0, 8.01, 0.5):
        for name, ant in (("upa", upa), ("leaky_wave", leaky)):
            st = gain_with_pointing_error(ant, broadside, float(err), n_trials,
                                          _derived_seed(seed, _SEED_POINTING))
            rows.append(("error_deg", float(err), f"{name}_mean", st.mean_db))
            rows.append(("error_deg", float(err), f"{name}_min", st.min_db))
            rows.append(("error_deg", float(err), f"{name}_max", st.max_db))
    rng = np.random.default_rng(_derived_seed(seed, _SEED_BITS))
    dirs = _random_upper_directions(rng, 50)
    geom = ArrayGeometry.upa(nx, ny, lam)
    for bits in range(1, 9):
        analog = []
        hybrid = []
        for d in dirs:
            a_db, h_db = analog_vs_hybrid_gain_db(geom, d, bits)
            analog.append(from_db(a_db))
            hybrid.append(from_db(h_db))
        rows.append(("bits", float(bits), "analog", to_db(float(np.mean(analog)))))
        rows.append(("bits", float(bits), "hybrid", to_db(float(np.mean(hybrid)))))
        rows.append(("bits", float(bits), "unquantized_ref", upa_db))
    return rows


def _random_upper_directions(rng: np.random.Generator, n: int) -> np.ndarray:
    """Unit directions uniform over the upper hemisphere."""
    z = rng.uniform(0.05, 1.0, n)
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    s = np.sqrt(1.0 - z ** 2)
    return np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=1)


# -- output files -------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    f = float(v)
    if math.isnan(f):
        return ""
    if math.isinf(f):
        return "-inf" if f < 0 else "inf"
    return repr(f)


def _write_rows(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def write_coverage_csv(grid: CoverageGrid, path) -> None:
    rows = []
    for i, x in enumerate(grid.xs_m):
        for j, y in enumerate(grid.ys_m):
            inside = bool(grid.mask[i, j])
            if inside:
                rows.append((x, y, 1, int(grid.best_beam[i, j]), grid.gtx_db[i, j],
                             grid.snr_db[i, j], grid.sinr_db[i, j],
                             grid.se_interf[i, j], grid.se_no_interf[i, j]))
            else:
                rows.append((x, y, 0, "", "", "", "", "", ""))
    _write_rows(path, ["x_m", "y_m", "in_roi", "best_beam", "gtx_db", "snr_db",
                       "sinr_db", "se", "se_noint"], rows)


def write_cells_csv(cells, path) -> None:
    rows = []
    for i, x in enumerate(cells.xs_m):
        for j, y in enumerate(cells.ys_m):
            if bool(cells.mask[i, j]):
                rows.append((x, y, 1, int(cells.best_beam[i, j]),
                             cells.best_gain_db[i, j], cells.second_gain_db[i, j]))
            else:
                rows.append((x, y, 0, "", "", ""))
    _write_rows(path, ["x_m", "y_m", "in_roi", "best_beam", "gtx_db", "second_gtx_db"], rows)


def write_doppler_csv(grid: DopplerGrid, path) -> None:
    rows = []
    for i, x in enumerate(grid.xs_m):
        for j, y in enumerate(grid.ys_m):
            if bool(grid.mask[i, j]):
                rows.append((x, y, 1, grid.doppler_hz[i, j], grid.w_rel_rad_s[i, j]))
            else:
                rows.append((x, y, 0, "", ""))
    _write_rows(path, ["x_m", "y_m", "in_roi", "doppler_sat_hz", "w_rel_rad_s"], rows)


def write_timeline_csv(trace: TimelineTrace, path) -> None:
    switch_times = {t for t, _, _ in trace.switch_events}
    rows = []
    for k, t in enumerate(trace.times_s):
        rows.append((t, int(trace.selected_beam[k]), trace.snr_db[k],
                     1 if float(t) in switch_times else 0))
    _write_rows(path, ["t_s", "beam", "snr_db", "switch_flag"], rows)


def write_sweeps_csv(rows, path) -> None:
    _write_rows(path, ["sweep", "param", "series", "value_db"],
                [(s, p, n, v) for s, p, n, v in rows])


def write_codebook_json(ctx: SimContext, path) -> None:
    import json
    beams = []
    for m, beam in enumerate(ctx.codebook.beams):
        beams.append({
            "index": m,
            "grid_i": beam.grid_index[0],
            "grid_j": beam.grid_index[1],
            "theta1": beam.theta1,
            "theta2": beam.theta2,
            "direction": [beam.v1, beam.v2, float(beam.direction[2])],
            "ground_x_m": float(ctx.codebook.ground_xy_m[m, 0]),
            "ground_y_m": float(ctx.codebook.ground_xy_m[m, 1]),
        })
    doc = {
        "oversampling": ctx.oversampling,
        "arch": {
            "sat_nx": ctx.arch.sat_nx, "sat_ny": ctx.arch.sat_ny,
            "rf_nx": ctx.arch.rf_nx, "rf_ny": ctx.arch.rf_ny,
            "sub_nx": ctx.arch.sub_nx, "sub_ny": ctx.arch.sub_ny,
        },
        "n_beams": ctx.codebook.n_beams,
        "beams": beams,
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def build_run_meta(ctx: SimContext, command: str, overrides, extras=None) -> dict:
    """Config echo plus derived constants; no timestamps (runs must be
    byte-reproducible)."""
    cfg = ctx.config
    meta = {
        "version": __version__,
        "command": command,
        "overrides": list(overrides),
        "config": cfg.to_nested(),
        "config_hash": cfg.canonical_hash(),
        "seed": cfg["run.seed"],
        "derived": {
            "v_sat_mps": orbital_speed_mps(ctx.earth, ctx.geom.altitude_m),
            "w_sat_rad_s": angular_speed_rad_s(ctx.earth, ctx.geom.altitude_m),
            "v_shadow_mps": shadow_speed_mps(ctx.earth, ctx.geom.altitude_m),
            "period_s": orbital_period_s(ctx.earth, ctx.geom.altitude_m),
            "roi_semi_x_m": ctx.roi.semi_x_m,
            "roi_semi_y_m": ctx.roi.semi_y_m,
            "oversampling": ctx.oversampling,
            "n_beams_pruned": ctx.n_pruned,
            "n_beams_used": ctx.codebook.n_beams,
            "wavelength_m": ctx.wavelength_m,
            "lp_at_db": ctx.lp_at_db,
            "noise_dbw": ctx.noise_dbw,
        },
    }
    if extras:
        meta.update(extras)
    return meta


def write_run_meta(meta: dict, path) -> None:
    import json
    Path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def tile_cells_for_context(ctx: SimContext, resolution: Optional[int] = None):
    n = ctx.config["codebook.grid_resolution"] if resolution is None else resolution
    return tile_cells(ctx.codebook, ctx.roi, ctx.state, ctx.earth, n)
