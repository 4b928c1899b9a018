"""Command-line interface: run experiments, inspect presets.

Exit codes: 0 success, 1 configuration error, 2 all sweep points failed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError, QvdpError
from .experiments import arnold_tongue_summary, load_config, run
from .presets import get_preset, preset_names, quoted_ratio_checks


def _cmd_run(args) -> int:
    try:
        config = load_config(Path(args.config).read_text(encoding="utf-8"))
    except FileNotFoundError:
        print(f"config file not found: {args.config}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    if args.engine:
        config = type(config)(**{**config.__dict__, "engine": args.engine})
    workers = args.workers if args.workers else config.workers
    out_dir = Path(args.out) if args.out else Path(config.output.get("dir", "out"))
    try:
        rows = run(config, workers=workers, out_dir=out_dir)
    except QvdpError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 2
    failed = sum(1 for r in rows if r.error)
    print(f"{len(rows)} rows -> {out_dir / 'results.csv'}" + (f" ({failed} failed)" if failed else ""))
    if config.scenario == "arnold_tongue" and not failed:
        summary = arnold_tongue_summary(rows)
        lines = ["omega_hz_over_2pi\\delta_hz_over_2pi," + ",".join(repr(d) for d in summary.delta_values)]
        for i, omega in enumerate(summary.omega_values):
            lines.append(repr(omega) + "," + ",".join(repr(v) for v in summary.s_grid[i]))
        (out_dir / "tongue.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        contour_lines = ["omega_hz_over_2pi,delta_left,delta_right"]
        for omega, seg in zip(summary.omega_values, summary.contour):
            if seg is None:
                contour_lines.append(f"{omega!r},,")
            else:
                contour_lines.append(f"{omega!r},{seg[0]!r},{seg[1]!r}")
        (out_dir / "tongue_contour.csv").write_text("\n".join(contour_lines) + "\n", encoding="utf-8")
        print(f"tongue summary -> {out_dir / 'tongue.csv'}")
    return 0


def _cmd_preset_list(_args) -> int:
    for name in preset_names():
        spec = get_preset(name)
        print(f"{name:22s} {spec.scenario:18s} {spec.note}")
    return 0


def _cmd_preset_show(args) -> int:
    try:
        spec = get_preset(args.name)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 1
    twopi = 2 * np.pi
    print(f"preset {spec.name} ({spec.scenario}): {spec.note}")
    print(f"  gamma1_plus   = {spec.gamma1_plus / 1e3:g} kHz")
    print(f"  gamma1_minus  = {spec.gamma1_minus / 1e3:g} kHz")
    print(f"  gamma_h       = {spec.gamma_h / 1e3:g} kHz")
    print(f"  gamma2        = {spec.gamma2 / 1e3:g} kHz")
    print(f"  omega/2pi     = {spec.omega / twopi:g} Hz")
    print(f"  omega2/2pi    = {spec.omega2 / twopi:g} Hz")
    print(f"  delta/2pi     = {spec.delta / twopi:g} Hz")
    print(f"  theta         = {spec.theta:g} rad")
    print(f"  drive_phase   = {spec.drive_phase:g} rad")
    print(f"  n_max         = {spec.n_max}")
    print(
        "  pulse times   = "
        f"bsb {spec.tau_bsb * 1e6:g} us, rsb {spec.tau_rsb * 1e6:g} us, "
        f"2rsb {spec.tau_2rsb * 1e6:g} us, squeeze {spec.tau_sq * 1e6:g} us, "
        f"reset {spec.tau_reset * 1e6:g} us"
    )
    print(f"  cycle         = {spec.cycle_period * 1e6:g} us x {spec.n_cycles} cycles")
    if spec.steady:
        print("  mode          = steady state")
    else:
        times = ", ".join(f"{t * 1e6:g}" for t in spec.sample_times)
        print(f"  sample times  = {times} us")
    for axis in spec.sweep:
        print(f"  sweep         = {'+'.join(axis['params'])}: {list(axis['values'])}")
    return 0


def _cmd_preset_ratios(_args) -> int:
    print(f"{'ratio':36s} {'table':>9s} {'quoted':>7s} {'rel.err':>8s}")
    worst = 0.0
    for label, value, quoted in quoted_ratio_checks():
        rel = abs(value / quoted - 1.0)
        worst = max(worst, rel)
        print(f"{label:36s} {value:9.4f} {quoted:7.2f} {rel:8.2%}")
    print(f"worst deviation: {worst:.2%}")
    return 0 if worst <= 0.03 else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qvdp", description="driven-dissipative nonlinear oscillator experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config", help="YAML config file (or preset via 'preset: <name>')")
    p_run.add_argument("--workers", type=int, default=None, help="parallel sweep workers")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--engine", choices=("exact", "trotter_rwa", "trotter_full"), default=None)
    p_run.set_defaults(func=_cmd_run)

    p_preset = sub.add_parser("preset", help="inspect built-in presets")
    sub_p = p_preset.add_subparsers(dest="preset_command", required=True)
    sub_p.add_parser("list", help="list presets").set_defaults(func=_cmd_preset_list)
    p_show = sub_p.add_parser("show", help="print resolved parameters with units")
    p_show.add_argument("name")
    p_show.set_defaults(func=_cmd_preset_show)
    sub_p.add_parser("ratios", help="units self-test against quoted ratios").set_defaults(
        func=_cmd_preset_ratios
    )

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
