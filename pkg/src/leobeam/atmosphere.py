"""1976 U.S. Standard Atmosphere profile and gaseous absorption loss.

The vertical profile uses the standard seven lapse-rate layers. Specific
attenuation comes from the closed-form dry-air / water-vapour approximations
of ITU-R P.676 Annex 2 (valid through the Ku band; the dry-air term holds
below 57 GHz). Water vapour follows the no-cloud assumption: a configurable
sea-level density scaled with air density up to a cutoff height, zero above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Seven-layer standard atmosphere, geopotential base heights (km), lapse rates
# (K/km). Sea level: 288.15 K, 101325 Pa.
_LAYER_BASE_KM = (0.0, 11.0, 20.0, 32.0, 47.0, 51.0, 71.0, 84.852)
_LAPSE_K_PER_KM = (-6.5, 0.0, 1.0, 2.8, 0.0, -2.8, -2.0)
_T0_K = 288.15
_P0_PA = 101325.0
_G0 = 9.80665
_R_AIR = 287.0528  # J/(kg K)

DEFAULT_H_MAX_M = 81e3
DEFAULT_VAPOR_GM3 = 7.5
DEFAULT_VAPOR_CUTOFF_M = 2300.0


def standard_temperature_pressure(height_m: float) -> tuple[float, float]:
    """Temperature (K) and pressure (Pa) at a geopotential height up to ~84.8 km."""
    h_km = height_m / 1e3
    if h_km < 0.0:
        raise ValueError("height must be >= 0")
    h_km = min(h_km, _LAYER_BASE_KM[-1])
    t, p = _T0_K, _P0_PA
    for base, top, lapse in zip(_LAYER_BASE_KM[:-1], _LAYER_BASE_KM[1:], _LAPSE_K_PER_KM):
        dh = min(h_km, top) - base
        if dh < 0.0:
            break
        if lapse == 0.0:
            p = p * math.exp(-_G0 * dh * 1e3 / (_R_AIR * t))
        else:
            t_new = t + lapse * dh
            p = p * (t_new / t) ** (-_G0 / (_R_AIR * lapse * 1e-3))
            t = t_new
        if h_km <= top:
            break
    return t, p


def air_density_kgm3(temp_k: float, pressure_pa: float) -> float:
    return pressure_pa / (_R_AIR * temp_k)


def specific_attenuation_db_per_km(freq_hz: float, temp_k: float, pressure_pa: float,
                                   water_vapor_gm3: float) -> float:
    """Dry-air plus water-vapour specific attenuation (dB/km)."""
    f = freq_hz / 1e9
    if f <= 0.0:
        raise ValueError("frequency must be positive")
    if f > 57.0:
        raise ValueError("dry-air approximation only holds below 57 GHz")
    rp = (pressure_pa / 100.0) / 1013.0
    rt = 288.0 / temp_k
    rho = water_vapor_gm3
    gamma_o = (7.27 * rt / (f * f + 0.351 * rp * rp * rt * rt)
               + 7.5 / ((f - 57.0) ** 2 + 2.44 * rp * rp * rt ** 5)) * f * f * rp * rp * rt * rt * 1e-3
    gamma_w = (3.27e-2 * rt
               + 1.67e-3 * rho * rt ** 7 / rp
               + 7.7e-4 * math.sqrt(f)
               + 3.79 / ((f - 22.235) ** 2 + 9.81 * rp * rp * rt)
               + 11.73 * rt / ((f - 183.31) ** 2 + 11.85 * rp * rp * rt)
               + 4.01 * rt / ((f - 325.153) ** 2 + 10.44 * rp * rp * rt)
               ) * f * f * rho * rp * rt * 1e-4
    return gamma_o + gamma_w


@dataclass(frozen=True)
class AtmosphereProfile:
    """Sampled vertical profile used by the absorption integral."""

    heights_m: np.ndarray
    temperature_k: np.ndarray
    pressure_pa: np.ndarray
    water_vapor_gm3: np.ndarray
    h_max_m: float = DEFAULT_H_MAX_M

    def __post_init__(self):
        h = np.asarray(self.heights_m, dtype=float)
        t = np.asarray(self.temperature_k, dtype=float)
        p = np.asarray(self.pressure_pa, dtype=float)
        w = np.asarray(self.water_vapor_gm3, dtype=float)
        if not (h.shape == t.shape == p.shape == w.shape) or h.ndim != 1 or h.size < 2:
            raise ValueError("profile arrays must be 1-D and of equal length >= 2")
        if np.any(np.diff(h) <= 0.0):
            raise ValueError("heights must be strictly increasing")
        if np.any(t <= 0.0) or np.any(p <= 0.0):
            raise ValueError("temperature and pressure must be positive")
        if np.any(w < 0.0):
            raise ValueError("water vapour density must be >= 0")
        for name, arr in (("heights_m", h), ("temperature_k", t),
                          ("pressure_pa", p), ("water_vapor_gm3", w)):
            object.__setattr__(self, name, arr)

    @classmethod
    def standard(cls, step_m: float = 100.0, h_max_m: float = DEFAULT_H_MAX_M,
                 sea_level_vapor_gm3: float = DEFAULT_VAPOR_GM3,
                 vapor_cutoff_m: float = DEFAULT_VAPOR_CUTOFF_M) -> "AtmosphereProfile":
        """Default no-cloud profile: standard T/P, vapour tracking air density
        up to the cutoff height and zero above it."""
        n = int(round(h_max_m / step_m)) + 1
        heights = np.linspace(0.0, h_max_m, n)
        t = np.empty(n)
        p = np.empty(n)
        for i, h in enumerate(heights):
            t[i], p[i] = standard_temperature_pressure(h)
        rho0 = air_density_kgm3(t[0], p[0])
        vapor = np.where(
            heights <= vapor_cutoff_m,
            sea_level_vapor_gm3 * (p / (_R_AIR * t)) / rho0,
            0.0,
        )
        return cls(heights, t, p, vapor, h_max_m=h_max_m)


def atmospheric_loss_db(profile: AtmosphereProfile, freq_hz: float,
                        elevation_rad: float, h_min_m: float = 0.0) -> float:
    """Slant-path absorption loss: vertical integral of the specific
    attenuation from h_min to the top of the profile, scaled by the cosecant
    of the elevation."""
    if not 0.0 < elevation_rad <= math.pi / 2.0:
        raise ValueError("elevation must be in (0, pi/2]")
    h = profile.heights_m
    if h_min_m >= h[-1]:
        return 0.0
    sel = h >= h_min_m
    hs = h[sel]
    ts = profile.temperature_k[sel]
    ps = profile.pressure_pa[sel]
    ws = profile.water_vapor_gm3[sel]
    if hs[0] > h_min_m and h_min_m >= h[0]:
        t0 = np.interp(h_min_m, h, profile.temperature_k)
        p0 = np.interp(h_min_m, h, profile.pressure_pa)
        w0 = np.interp(h_min_m, h, profile.water_vapor_gm3)
        hs = np.concatenate([[h_min_m], hs])
        ts = np.concatenate([[t0], ts])
        ps = np.concatenate([[p0], ps])
        ws = np.concatenate([[w0], ws])
    atten = np.array([
        specific_attenuation_db_per_km(freq_hz, t, p, w)
        for t, p, w in zip(ts, ps, ws)
    ])
    zenith_db = float(np.trapezoid(atten, hs / 1e3))
    return zenith_db / math.sin(elevation_rad)
