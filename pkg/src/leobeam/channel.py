"""Link-budget terms, Doppler / relative angular speed, and the Rician channel.

Doppler is an analysis output only: the channel matrix assumes Doppler has
been corrected upstream, so it never appears in H.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antennas import ArrayGeometry, steering_vector
from .orbit import (
    SPEED_OF_LIGHT_MPS,
    ConstellationGeometry,
    EarthModel,
    RoiEllipse,
    SatelliteState,
)

BOLTZMANN_DBW_PER_K_HZ = -228.6


def to_db(linear: float) -> float:
    return 10.0 * math.log10(linear)


def from_db(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class LinkBudget:
    """All dB-domain budget terms for one link geometry."""

    p_tx_dbw: float
    lp_cable_db: float
    g_tx_db: float
    lp_at_db: float
    lp_fs_db: float
    g_rx_db: float
    noise_temp_dbk: float
    bandwidth_hz: float

    def __post_init__(self):
        if self.bandwidth_hz <= 0.0:
            raise ValueError("bandwidth must be positive")

    def rss_dbw(self) -> float:
        return (self.p_tx_dbw - self.lp_cable_db + self.g_tx_db
                - self.lp_at_db - self.lp_fs_db + self.g_rx_db)

    def noise_dbw(self) -> float:
        return noise_power_dbw(self.noise_temp_dbk, self.bandwidth_hz)

    def snr_db(self) -> float:
        return self.rss_dbw() - self.noise_dbw()


def free_space_loss_db(distance_m: float, freq_hz: float) -> float:
    """Free-space path loss 20*(log10 d + log10 f + log10(4 pi / c))."""
    if distance_m <= 0.0 or freq_hz <= 0.0:
        raise ValueError("distance and frequency must be positive")
    return 20.0 * (math.log10(distance_m) + math.log10(freq_hz)
                   + math.log10(4.0 * math.pi / SPEED_OF_LIGHT_MPS))


def noise_power_dbw(temp_dbk: float, bandwidth_hz: float) -> float:
    """Thermal noise power: T[dBK] + k[dBW/K/Hz] + B[dBHz]."""
    if bandwidth_hz <= 0.0:
        raise ValueError("bandwidth must be positive")
    return temp_dbk + BOLTZMANN_DBW_PER_K_HZ + 10.0 * math.log10(bandwidth_hz)


def doppler_and_angular_speed(sat: SatelliteState, user_pos_m, freq_hz: float) -> tuple[float, float]:
    """Doppler shift (Hz) and relative angular speed (rad/s) seen by a fixed user.

    The shift is <v_sat, u_los> * f / c with u_los the satellite-to-user unit
    vector; the angular speed uses the transverse velocity component over the
    slant range.
    """
    user = np.asarray(user_pos_m, dtype=float)
    los = user - sat.position_m
    dist = float(np.linalg.norm(los))
    if dist == 0.0:
        raise ValueError("user and satellite positions coincide")
    u_los = los / dist
    radial = float(sat.velocity_mps @ u_los)
    doppler_hz = radial * freq_hz / SPEED_OF_LIGHT_MPS
    cos_a = radial / sat.speed_mps
    sin_sq = max(0.0, 1.0 - cos_a * cos_a)
    w_rel = math.sqrt(sin_sq) * sat.speed_mps / dist
    return doppler_hz, w_rel


@dataclass(frozen=True)
class KinematicMaxima:
    """Closed-form maxima of the Doppler and angular-speed fields over the ROI."""

    doppler_exact_hz: float
    doppler_simplified_hz: float
    w_rel_rad_s: float


def max_doppler_hz(geom: ConstellationGeometry, roi: RoiEllipse, earth: EarthModel,
                   freq_hz: float) -> KinematicMaxima:
    """Maximum |Doppler| at the along-track footprint edge (exact and the
    small-footprint simplification R_x*v/h) plus the peak relative angular
    speed v/h at the sub-satellite point."""
    r = earth.radius_m
    h = geom.altitude_m
    rx = roi.semi_x_m
    v = math.sqrt(earth.mu_m3s2 / (r + h))
    hyp = math.sqrt(r * r + rx * rx)
    num = (r * rx / hyp) * v
    den = math.sqrt(r * r + (r + h) ** 2 - 2.0 * r * r * (r + h) / hyp)
    exact = num / den * freq_hz / SPEED_OF_LIGHT_MPS
    simplified = rx * v / h * freq_hz / SPEED_OF_LIGHT_MPS
    return KinematicMaxima(
        doppler_exact_hz=exact,
        doppler_simplified_hz=simplified,
        w_rel_rad_s=v / h,
    )


def user_doppler(v_user_mps: float, freq_hz: float, n_trials: int, seed: int) -> tuple[float, float]:
    """Worst-case and mean |Doppler| of a terminal moving at v_user in a
    uniformly random direction.

    The maximum is the analytic v*f/c; the mean of |cos| over the uniform
    sphere is 1/2, estimated here by Monte Carlo.
    """
    if v_user_mps < 0.0:
        raise ValueError("user speed must be >= 0")
    max_hz = v_user_mps * freq_hz / SPEED_OF_LIGHT_MPS
    if v_user_mps == 0.0 or n_trials < 1:
        return max_hz, 0.0 if v_user_mps == 0.0 else max_hz * 0.5
    rng = np.random.default_rng(seed)
    cos_t = rng.uniform(-1.0, 1.0, n_trials)
    mean_abs = float(np.mean(np.abs(cos_t))) * max_hz
    return max_hz, mean_abs


@dataclass(frozen=True)
class RicianChannel:
    """Rank-1 Rician downlink channel H = gamma * (a_u + a_R/sqrt(K)) * a_sat^H."""

    gamma: complex
    k_factor: float
    h_matrix: np.ndarray
    rician_component: np.ndarray
    ut_los: np.ndarray
    sat_steering: np.ndarray

    @property
    def rx_response(self) -> np.ndarray:
        """Effective receive-side vector a_u + a_R / sqrt(K)."""
        return self.ut_los + self.rician_component / math.sqrt(self.k_factor)


def build_channel(sat: SatelliteState, user_pos_m, ut_geom: ArrayGeometry,
                  sat_geom: ArrayGeometry, gamma: complex, k_factor: float,
                  seed: int) -> RicianChannel:
    """Draw one Rician channel realization (deterministic for a given seed).

    The diffuse component a_R is complex normal with identity covariance, so
    E||a_R||^2 equals the number of terminal elements, matching the line-of-
    sight steering-vector energy.
    """
    if k_factor <= 0.0:
        raise ValueError("Rician factor must be positive")
    user = np.asarray(user_pos_m, dtype=float)
    los = user - sat.position_m
    dist = float(np.linalg.norm(los))
    if dist == 0.0:
        raise ValueError("user and satellite positions coincide")
    d_to_user = los / dist
    a_u = steering_vector(ut_geom, d_to_user)
    a_sat = steering_vector(sat_geom, -d_to_user)
    rng = np.random.default_rng(seed)
    n = ut_geom.n_elements
    a_r = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
    rx = a_u + a_r / math.sqrt(k_factor)
    h = gamma * np.outer(rx, np.conj(a_sat))
    return RicianChannel(
        gamma=complex(gamma),
        k_factor=k_factor,
        h_matrix=h,
        rician_component=a_r,
        ut_los=a_u,
        sat_steering=a_sat,
    )


def path_gamma(lp_cable_db: float, lp_at_db: float, lp_fs_db: float) -> complex:
    """LoS complex gain magnitude from the dB losses, zero phase."""
    return complex(math.sqrt(from_db(-(lp_cable_db + lp_at_db + lp_fs_db))), 0.0)
