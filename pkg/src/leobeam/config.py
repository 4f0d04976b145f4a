"""Run configuration: schema, defaults, INI/JSON round-trip and validation.

The default parameter set is the reference Ku-band downlink scenario
(1300 km orbit, 83 planes x 53 satellites at 53 deg, 60x72 satellite array
with 5x3 RF chains, oversampling 1.2, 24x24 terminal array). The on-disk
format is a sectioned key=value file; a nested JSON echo is written into
every run's metadata for machine re-ingestion.
"""

from __future__ import annotations

import configparser
import difflib
import hashlib
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path


class ConfigError(Exception):
    """Invalid configuration; carries one message per offending key."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def _parse_bool(raw: str) -> bool:
    s = str(raw).strip().lower()
    if s in ("true", "yes", "on", "1"):
        return True
    if s in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


# key -> (type, default); declaration order is the canonical file order
_SCHEMA = {
    "earth.radius_km": (float, 6378.137),
    "earth.mu": (float, 3.986004418e14),
    "constellation.n_planes": (int, 83),
    "constellation.n_sats": (int, 53),
    "constellation.inclination_deg": (float, 53.0),
    "constellation.altitude_km": (float, 1300.0),
    "roi.auto": (bool, False),
    "roi.semi_x_km": (float, 534.1),
    "roi.semi_y_km": (float, 170.5),
    "sat.nx": (int, 60),
    "sat.ny": (int, 72),
    "sat.rf_nx": (int, 5),
    "sat.rf_ny": (int, 3),
    "codebook.oversampling": (float, 1.2),
    "codebook.auto_oversampling": (bool, False),
    "codebook.grid_resolution": (int, 201),
    "ut.kind": (str, "upa"),
    "ut.nx": (int, 24),
    "ut.ny": (int, 24),
    "ut.alpha": (float, 0.1),
    "ut.peak_gain_db": (float, 33.0),
    "ut.rolloff": (float, 1.2),
    "ut.phase_bits": (int, 0),
    "link.freq_ghz": (float, 11.45),
    "link.bandwidth_mhz": (float, 250.0),
    "link.p_tx_dbw": (float, 15.0),
    "link.lp_cable_db": (float, 0.0),
    "link.noise_temp_dbk": (float, 24.1),
    "link.k_factor": (float, 10.0),
    "atmosphere.mode": (str, "constant"),
    "atmosphere.lp_at_db": (float, 0.017),
    "atmosphere.water_vapor_gm3": (float, 7.5),
    "grid.resolution": (int, 201),
    "timeline.duration_s": (float, 120.0),
    "timeline.step_s": (float, 1.0),
    "output.dir": (str, "out"),
    "run.seed": (int, 0),
}

_ALIASES = {"seed": "run.seed"}

_UT_KINDS = ("upa", "leaky_wave", "metasurface")
_ATMO_MODES = ("constant", "computed")


def _coerce(key: str, raw) -> object:
    typ = _SCHEMA[key][0]
    if typ is bool:
        return raw if isinstance(raw, bool) else _parse_bool(raw)
    if typ is int:
        if isinstance(raw, bool):
            raise ValueError(f"{key} expects an integer")
        if isinstance(raw, int):
            return raw
        if isinstance(raw, float) and raw.is_integer():
            return int(raw)
        return int(str(raw).strip())
    if typ is float:
        return float(raw) if not isinstance(raw, str) else float(raw.strip())
    return str(raw).strip()


def resolve_key(key: str) -> str:
    """Canonical schema key for a user-supplied name; suggests the nearest
    valid key on a miss."""
    k = _ALIASES.get(key, key)
    if k in _SCHEMA:
        return k
    close = difflib.get_close_matches(key, list(_SCHEMA) + list(_ALIASES), n=1)
    hint = f" (did you mean {close[0]!r}?)" if close else ""
    raise KeyError(f"unknown config key {key!r}{hint}")


@dataclass(frozen=True)
class RunConfig:
    """Immutable resolved configuration (flat dotted-key mapping)."""

    values: dict

    def __post_init__(self):
        object.__setattr__(self, "values", dict(self.values))

    @classmethod
    def default(cls) -> "RunConfig":
        return cls({k: d for k, (_, d) in _SCHEMA.items()})

    def __getitem__(self, key: str):
        return self.values[resolve_key(key)]

    def with_overrides(self, assignments) -> "RunConfig":
        """Apply `key=value` strings on top of this config."""
        vals = dict(self.values)
        for item in assignments:
            if "=" not in item:
                raise ValueError(f"override must look like key=value, got {item!r}")
            key, raw = item.split("=", 1)
            k = resolve_key(key.strip())
            try:
                vals[k] = _coerce(k, raw)
            except ValueError as exc:
                raise ValueError(f"{k}: {exc}") from exc
        return RunConfig(vals)

    # -- serialization ------------------------------------------------------

    def to_nested(self) -> dict:
        out: dict = {}
        for key, val in self.values.items():
            section, name = key.split(".", 1)
            out.setdefault(section, {})[name] = val
        return out

    @classmethod
    def from_nested(cls, nested: dict) -> "RunConfig":
        vals = {k: d for k, (_, d) in _SCHEMA.items()}
        for section, entries in nested.items():
            if not isinstance(entries, dict):
                raise ConfigError([f"{section}: expected a section object"])
            for name, raw in entries.items():
                key = resolve_key(f"{section}.{name}")
                vals[key] = _coerce(key, raw)
        return cls(vals)

    def to_ini_text(self) -> str:
        buf = io.StringIO()
        current = None
        for key in _SCHEMA:
            section, name = key.split(".", 1)
            if section != current:
                if current is not None:
                    buf.write("\n")
                buf.write(f"[{section}]\n")
                current = section
            val = self.values[key]
            if isinstance(val, bool):
                text = "true" if val else "false"
            elif isinstance(val, float):
                text = repr(val)
            else:
                text = str(val)
            buf.write(f"{name} = {text}\n")
        return buf.getvalue()

    def save(self, path) -> None:
        p = Path(path)
        if p.suffix == ".json":
            p.write_text(json.dumps(self.to_nested(), indent=2, sort_keys=True) + "\n")
        else:
            p.write_text(self.to_ini_text())

    @classmethod
    def load(cls, path) -> "RunConfig":
        p = Path(path)
        if not p.exists():
            raise FileNotFoundError(f"config file not found: {p}")
        if p.suffix == ".json":
            return cls.from_nested(json.loads(p.read_text()))
        parser = configparser.ConfigParser()
        parser.read_string(p.read_text())
        nested = {s: dict(parser.items(s)) for s in parser.sections()}
        return cls.from_nested(nested)

    def canonical_hash(self) -> str:
        return hashlib.sha256(self.to_ini_text().encode()).hexdigest()

    # -- validation ---------------------------------------------------------

    def validate(self) -> list[str]:
        """All invariant violations, one message per key path."""
        v = self.values
        errors = []

        def positive(key):
            if not v[key] > 0:
                errors.append(f"{key}: must be positive (got {v[key]})")

        def at_least(key, n):
            if v[key] < n:
                errors.append(f"{key}: must be >= {n} (got {v[key]})")

        positive("earth.radius_km")
        positive("earth.mu")
        at_least("constellation.n_planes", 1)
        at_least("constellation.n_sats", 1)
        if not 0.0 < v["constellation.inclination_deg"] <= 90.0:
            errors.append("constellation.inclination_deg: must be in (0, 90]")
        positive("constellation.altitude_km")
        if not v["roi.auto"]:
            positive("roi.semi_x_km")
            positive("roi.semi_y_km")
        for key in ("sat.nx", "sat.ny", "sat.rf_nx", "sat.rf_ny", "ut.nx", "ut.ny"):
            at_least(key, 1)
        if v["sat.nx"] % v["sat.rf_nx"]:
            errors.append("sat.rf_nx: RF chains must divide sat.nx "
                          f"({v['sat.rf_nx']} does not divide {v['sat.nx']})")
        if v["sat.ny"] % v["sat.rf_ny"]:
            errors.append("sat.rf_ny: RF chains must divide sat.ny "
                          f"({v['sat.rf_ny']} does not divide {v['sat.ny']})")
        positive("codebook.oversampling")
        at_least("codebook.grid_resolution", 0)
        if v["ut.kind"] not in _UT_KINDS:
            errors.append(f"ut.kind: must be one of {_UT_KINDS} (got {v['ut.kind']!r})")
        if v["ut.alpha"] < 0:
            errors.append("ut.alpha: must be >= 0")
        if not math.isfinite(v["ut.peak_gain_db"]):
            errors.append("ut.peak_gain_db: must be finite")
        if v["ut.phase_bits"] < 0:
            errors.append("ut.phase_bits: must be >= 0 (0 means unquantized)")
        if v["ut.phase_bits"] > 0 and v["ut.kind"] != "upa":
            errors.append("ut.phase_bits: phase quantization is modeled for the "
                          "planar-array terminal only")
        positive("link.freq_ghz")
        positive("link.bandwidth_mhz")
        positive("link.k_factor")
        if v["link.lp_cable_db"] < 0:
            errors.append("link.lp_cable_db: must be >= 0")
        if v["atmosphere.mode"] not in _ATMO_MODES:
            errors.append(f"atmosphere.mode: must be one of {_ATMO_MODES}")
        if v["atmosphere.lp_at_db"] < 0:
            errors.append("atmosphere.lp_at_db: must be >= 0")
        if v["atmosphere.water_vapor_gm3"] < 0:
            errors.append("atmosphere.water_vapor_gm3: must be >= 0")
        at_least("grid.resolution", 0)
        positive("timeline.duration_s")
        positive("timeline.step_s")
        if v["run.seed"] < 0:
            errors.append("run.seed: must be >= 0")
        return errors

    def require_valid(self) -> "RunConfig":
        errors = self.validate()
        if errors:
            raise ConfigError(errors)
        return self
