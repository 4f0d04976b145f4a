"""Command-line entry point: config ingestion, validation and run dispatch.

Subcommands map one-to-one onto the simulation drivers; every run writes its
output files plus a `run_meta.json` echoing the resolved config. Output
directory precedence: --output flag, then the LEOBEAM_OUTPUT environment
variable, then the config's `output.dir`.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .channel import free_space_loss_db, to_db
from .codebook import tile_cells
from .config import ConfigError, RunConfig
from .metrics import expected_receive_gain
from .sim import (
    build_context,
    build_run_meta,
    run_coverage,
    run_doppler_maps,
    run_timeline,
    run_ut_sweeps,
    terminal_antenna,
    write_cells_csv,
    write_codebook_json,
    write_coverage_csv,
    write_doppler_csv,
    write_run_meta,
    write_sweeps_csv,
    write_timeline_csv,
)

_COMMANDS = ("coverage", "doppler", "timeline", "codebook", "linkbudget", "ut-gain")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leobeam",
        description="LEO satellite downlink simulator: footprint design, "
                    "DFT beam codebook, coverage/SINR, Doppler and timelines.",
    )
    default_hash = RunConfig.default().canonical_hash()[:12]
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}+cfg.{default_hash}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("coverage", "coverage / SNR / SINR / spectral-efficiency maps"),
        ("doppler", "Doppler and angular-speed fields over the footprint"),
        ("timeline", "beam switching for a fixed user under the moving satellite"),
        ("codebook", "dump the pruned beam set and the cell map"),
        ("linkbudget", "print the single-point link budget at the footprint center"),
        ("ut-gain", "terminal antenna gain sweeps"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-c", "--config", metavar="PATH",
                       help="config file (.ini-style or .json); defaults used if omitted")
        p.add_argument("-s", "--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override one config key")
        p.add_argument("-o", "--output", metavar="DIR",
                       help="output directory (overrides LEOBEAM_OUTPUT and output.dir)")
        if name == "ut-gain":
            p.add_argument("--trials", type=int, default=2000,
                           help="Monte Carlo trials per pointing-error sample")
    return parser


def _load_config(args) -> RunConfig:
    if args.config:
        cfg = RunConfig.load(args.config)
    else:
        cfg = RunConfig.default()
    return cfg.with_overrides(args.overrides)


def _output_dir(args, config: RunConfig) -> Path:
    if args.output:
        out = Path(args.output)
    elif os.environ.get("LEOBEAM_OUTPUT"):
        out = Path(os.environ["LEOBEAM_OUTPUT"])
    else:
        out = Path(config["output.dir"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _print_budget_table(ctx, config) -> None:
    dist = ctx.geom.altitude_m
    lp_fs = free_space_loss_db(dist, ctx.freq_hz)
    gtx_db = to_db(ctx.arch.n_sub_elements)
    antenna = terminal_antenna(config, ctx.wavelength_m)
    grx_db = to_db(expected_receive_gain(antenna, np.array([0.0, 0.0, 1.0]),
                                         config["link.k_factor"]))
    rss = (config["link.p_tx_dbw"] - config["link.lp_cable_db"] + gtx_db
           - ctx.lp_at_db - lp_fs + grx_db)
    rows = [
        ("P_TX", config["link.p_tx_dbw"], "dBW", "transmit power"),
        ("LP_cable", config["link.lp_cable_db"], "dB", "cable loss"),
        ("G_TX", gtx_db, "dB", "transmit gain (beam axis)"),
        ("LP_at", ctx.lp_at_db, "dB", f"atmospheric loss ({config['atmosphere.mode']})"),
        ("LP_fs", lp_fs, "dB", f"free-space loss at {dist / 1e3:.0f} km"),
        ("G_RX", grx_db, "dB", f"receive gain ({config['ut.kind']})"),
        ("RSS", rss, "dBW", "received signal strength"),
        ("T", config["link.noise_temp_dbk"], "dBK", "noise temperature"),
        ("k", -228.6, "dBW/K/Hz", "Boltzmann constant"),
        ("B", 10.0 * math.log10(ctx.bandwidth_hz), "dBHz", "bandwidth"),
        ("sigma2", ctx.noise_dbw, "dBW", "noise power"),
        ("SNR", rss - ctx.noise_dbw, "dB", "signal-to-noise ratio"),
    ]
    width = max(len(r[0]) for r in rows)
    print(f"link budget at the sub-satellite point (best beam, {ctx.freq_hz / 1e9:g} GHz)")
    for name, value, unit, note in rows:
        print(f"  {name:<{width}}  {value:>10.3f} {unit:<9} {note}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args)
        ctx = build_context(config)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, KeyError, ValueError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return 2

    if args.command == "linkbudget":
        _print_budget_table(ctx, config)
        return 0

    out = _output_dir(args, config)
    meta_extras = {}

    if args.command == "coverage":
        grid = run_coverage(config, ctx)
        write_coverage_csv(grid, out / "coverage.csv")
        cells = tile_cells(ctx.codebook, ctx.roi, ctx.state, ctx.earth,
                           config["codebook.grid_resolution"])
        write_cells_csv(cells, out / "cells.csv")
        n_inside = int(np.sum(grid.mask))
        print(f"coverage: {ctx.codebook.n_beams} beams, {n_inside} footprint points "
              f"-> {out / 'coverage.csv'}")
    elif args.command == "doppler":
        dgrid = run_doppler_maps(config, ctx)
        write_doppler_csv(dgrid, out / "doppler.csv")
        meta_extras["user_doppler"] = list(dgrid.user_doppler)
        peak = float(np.nanmax(np.abs(dgrid.doppler_hz))) if dgrid.doppler_hz.size else 0.0
        print(f"doppler: peak |shift| {peak / 1e3:.1f} kHz -> {out / 'doppler.csv'}")
    elif args.command == "timeline":
        trace = run_timeline(config, context=ctx)
        write_timeline_csv(trace, out / "timeline.csv")
        meta_extras["switch_events"] = [list(e) for e in trace.switch_events]
        meta_extras["left_roi_at_s"] = trace.left_roi_at_s
        dwell = trace.first_dwell_s()
        dwell_txt = f"{dwell:.1f} s" if dwell is not None else "none"
        print(f"timeline: {len(trace.times_s)} samples, first dwell {dwell_txt} "
              f"-> {out / 'timeline.csv'}")
    elif args.command == "codebook":
        write_codebook_json(ctx, out / "codebook.json")
        cells = tile_cells(ctx.codebook, ctx.roi, ctx.state, ctx.earth,
                           config["codebook.grid_resolution"])
        write_cells_csv(cells, out / "cells.csv")
        print(f"codebook: {ctx.codebook.n_beams} beams kept of {ctx.n_pruned} pruned "
              f"(O={ctx.oversampling:g}) -> {out / 'codebook.json'}")
    elif args.command == "ut-gain":
        rows = run_ut_sweeps(config, n_trials=args.trials, context=ctx)
        write_sweeps_csv(rows, out / "ut_sweeps.csv")
        print(f"ut-gain: {len(rows)} sweep rows -> {out / 'ut_sweeps.csv'}")

    meta = build_run_meta(ctx, args.command, args.overrides, meta_extras)
    write_run_meta(meta, out / "run_meta.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
