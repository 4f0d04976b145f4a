"""Received signal strength, interference, SINR and spectral efficiency.

Interference follows the full-frequency-reuse worst case: all codebook beams
transmit simultaneously at equal power, and the undesired beams' transmit
gains are summed in the linear power domain before re-entering the dB budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antennas import TerminalAntenna, best_combiner
from .channel import LinkBudget, RicianChannel, from_db, to_db


@dataclass(frozen=True)
class PointMetrics:
    """Per-location link metrics."""

    rss_dbw: float
    snr_db: float
    interference_dbw: float
    sinr_db: float
    se_no_interf_bps_hz: float
    se_interf_bps_hz: float
    throughput_no_interf_bps: float
    throughput_interf_bps: float


@dataclass(frozen=True)
class RssResult:
    """RSS of one beam/combiner pair plus its rank-1 factorization."""

    watts: float
    dbw: float
    g_rx_linear: float
    g_tx_linear: float
    gamma_sq: float


def rss(channel: RicianChannel, f_weights: np.ndarray, w_weights: np.ndarray) -> RssResult:
    """|w^H H f|^2 and its decomposition into |gamma|^2 * G_RX * G_TX.

    The receive/transmit gains are reported per unit-power weights; the raw
    RSS keeps the caller's normalization.
    """
    f = np.asarray(f_weights, dtype=complex)
    w = np.asarray(w_weights, dtype=complex)
    n_ut, n_sat = channel.h_matrix.shape
    if f.shape != (n_sat,) or w.shape != (n_ut,):
        raise ValueError("weight dimensions do not match the channel")
    amp = np.vdot(w, channel.h_matrix @ f)
    watts = float(abs(amp) ** 2)
    rx = channel.rx_response
    g_rx = float(abs(np.vdot(w, rx)) ** 2 / np.real(np.vdot(w, w)))
    g_tx = float(abs(np.vdot(f, channel.sat_steering)) ** 2 / np.real(np.vdot(f, f)))
    return RssResult(
        watts=watts,
        dbw=to_db(watts) if watts > 0.0 else -math.inf,
        g_rx_linear=g_rx,
        g_tx_linear=g_tx,
        gamma_sq=float(abs(channel.gamma) ** 2),
    )


def expected_receive_gain(antenna: TerminalAntenna, direction, k_factor: float) -> float:
    """Mean combining gain with an unknown diffuse component: the best
    line-of-sight combiner gain plus 1/K (identity Rician covariance)."""
    if k_factor <= 0.0:
        raise ValueError("Rician factor must be positive")
    _, gain_db = best_combiner(antenna, direction)
    return from_db(gain_db) + 1.0 / k_factor


def interference_dbw(budget: LinkBudget, beam_gains_db, selected: int) -> tuple[float, float]:
    """Interference power (W, dBW) from all non-selected beams.

    The undesired transmit gains are summed in the linear domain and pushed
    through the same budget as the signal (shared path loss and receive gain,
    since every beam leaves the same aperture). A single-beam codebook yields
    zero watts and a -inf dBW sentinel.
    """
    gains = list(beam_gains_db)
    if not gains:
        raise ValueError("beam gain list is empty")
    if not 0 <= selected < len(gains):
        raise ValueError("selected beam index out of range")
    others = [g for m, g in enumerate(gains) if m != selected]
    if not others:
        return 0.0, -math.inf
    g_sum_lin = sum(from_db(g) for g in others)
    i_dbw = (budget.p_tx_dbw - budget.lp_cable_db + to_db(g_sum_lin)
             - budget.lp_at_db - budget.lp_fs_db + budget.g_rx_db)
    return from_db(i_dbw), i_dbw


def sinr(rss_w: float, interference_w: float, noise_w: float) -> float:
    """Linear SINR = RSS / (I + noise)."""
    if noise_w <= 0.0:
        raise ValueError("noise power must be positive")
    return rss_w / (interference_w + noise_w)


def spectral_efficiency(ratio: float) -> float:
    """Shannon spectral efficiency log2(1 + ratio) in bps/Hz."""
    if ratio < 0.0:
        raise ValueError("SNR/SINR ratio must be >= 0")
    return math.log2(1.0 + ratio)


def throughput_bps(se_bps_hz: float, bandwidth_hz: float) -> float:
    if bandwidth_hz <= 0.0:
        raise ValueError("bandwidth must be positive")
    return se_bps_hz * bandwidth_hz
