"""Configuration-driven experiment runner.

Loads a YAML document (or a named preset), expands parameter sweeps, runs
each point on the selected engine (exact master equation, or the pulsed
emulation in rotating-wave or full-coupling mode) and emits deterministic
CSV plus optional Wigner-grid text files.

Dimensional config keys carry explicit unit suffixes (``_khz``,
``_hz_over_2pi``, ``_per_s``, ``_us``, ``_rad``); bare dimensional numbers
are rejected.  Internally everything converts to 1/s, rad/s, s and rad.
"""

from __future__ import annotations

import itertools
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError, QvdpError
from .fock import (
    DensityMatrix,
    FockTruncation,
    coherent_state,
    displaced_thermal_state,
    vacuum_state,
)
from .lindblad import VdpParams, evolve, settle_to_steady_state, steady_state
from .presets import get_preset
from .tomography import (
    WignerGrid,
    classical_limit_radius,
    mean_amplitude,
    mean_phonon_number,
    phase_distribution,
    ring_radius,
    sync_measure,
    wigner_polar,
)
from .trotter import (
    DriveSpec,
    Pulse,
    PulseSchedule,
    rabi_for_rate,
    rabi_for_squeeze,
    run_schedule,
    second_order_sideband_shift,
    squeeze_tone_group,
)

ENGINES = ("exact", "trotter_rwa", "trotter_full")
SCENARIOS = (
    "limit_cycle",
    "entrainment",
    "phase_locking",
    "phase_distribution",
    "arnold_tongue",
    "dissipation_boost",
    "squeezing_scan",
    "custom",
)

# suffixed config key -> (canonical name, conversion factor to internal units)
UNIT_KEYS = {
    "gamma1_plus_khz": ("gamma1_plus", 1e3),
    "gamma1_minus_khz": ("gamma1_minus", 1e3),
    "gamma2_khz": ("gamma2", 1e3),
    "gamma_h_khz": ("gamma_h", 1e3),
    "gamma1_plus_per_s": ("gamma1_plus", 1.0),
    "gamma1_minus_per_s": ("gamma1_minus", 1.0),
    "gamma2_per_s": ("gamma2", 1.0),
    "gamma_h_per_s": ("gamma_h", 1.0),
    "omega_hz_over_2pi": ("omega", 2 * np.pi),
    "omega2_hz_over_2pi": ("omega2", 2 * np.pi),
    "delta_hz_over_2pi": ("delta", 2 * np.pi),
    "theta_rad": ("theta", 1.0),
    "drive_phase_rad": ("drive_phase", 1.0),
    "tau_bsb_us": ("tau_bsb", 1e-6),
    "tau_rsb_us": ("tau_rsb", 1e-6),
    "tau_2rsb_us": ("tau_2rsb", 1e-6),
    "tau_sq_us": ("tau_sq", 1e-6),
    "tau_reset_us": ("tau_reset", 1e-6),
    "cycle_period_us": ("cycle_period", 1e-6),
}
DIMENSIONLESS_KEYS = {
    "n_max": "n_max",
    "n_cycles": "n_cycles",
    "tail_tolerance": "tail_tolerance",
    "initial_alpha_re": "initial_alpha_re",
    "initial_alpha_im": "initial_alpha_im",
    "initial_nbar": "initial_nbar",
}
_BARE_DIMENSIONAL = {canonical for canonical, _ in UNIT_KEYS.values()}


@dataclass(frozen=True)
class SweepAxis:
    names: tuple[str, ...]  # suffixed, as written in the config / CSV header
    canonical: tuple[str, ...]
    display_values: tuple[tuple[float, ...], ...]
    values: tuple[tuple[float, ...], ...]  # converted


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    scenario: str
    engine: str
    base: dict  # canonical parameter values (rates, drives, taus, counts)
    steady: bool
    sample_times: tuple[float, ...]
    initial_state: dict
    sweep: tuple[SweepAxis, ...]
    wigner: dict
    output: dict
    workers: int = 1


@dataclass
class ResultRow:
    coords: tuple  # ((name, value), ...) sweep coordinates, display units
    time: float | None
    s: float | None = None
    mean_phase: float | None = None
    re_a: float | None = None
    im_a: float | None = None
    n_mean: float | None = None
    purity: float | None = None
    wigner_file: str | None = None
    error: str | None = None


def _convert_param(key, value):
    if key in UNIT_KEYS:
        canonical, factor = UNIT_KEYS[key]
        return canonical, float(value) * factor
    if key in DIMENSIONLESS_KEYS:
        return DIMENSIONLESS_KEYS[key], value
    if key in _BARE_DIMENSIONAL:
        raise ConfigError(
            f"parameter {key!r} needs a unit suffix "
            f"(one of: {', '.join(k for k in UNIT_KEYS if k.startswith(key))})"
        )
    raise ConfigError(f"unknown key {key!r} in params")


def _check_keys(section: dict, allowed, where):
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} in {where}")


def _parse_sweep(raw) -> tuple[SweepAxis, ...]:
    axes = []
    for entry in raw:
        _check_keys(entry, {"param", "params", "values"}, "sweep axis")
        if "param" in entry:
            names = (entry["param"],)
            values = [(v,) for v in entry["values"]]
        else:
            names = tuple(entry["params"])
            values = [tuple(v) for v in entry["values"]]
        if not values:
            raise ConfigError(f"sweep axis {names} has an empty value list")
        canonical, converted = [], []
        for name in names:
            canon, _ = _convert_param(name, 0.0)
            canonical.append(canon)
        for vals in values:
            if len(vals) != len(names):
                raise ConfigError(f"sweep axis {names}: value tuple {vals} wrong length")
            converted.append(tuple(_convert_param(n, v)[1] for n, v in zip(names, vals)))
        axes.append(
            SweepAxis(
                names=names,
                canonical=tuple(canonical),
                display_values=tuple(tuple(float(x) for x in v) for v in values),
                values=tuple(converted),
            )
        )
    return tuple(axes)


def _sweep_from_preset(raw_axes) -> tuple[SweepAxis, ...]:
    return _parse_sweep([{"params": list(a["params"]), "values": [list(v) for v in a["values"]]} for a in raw_axes])


def config_from_preset(
    name: str,
    engine: str = "exact",
    workers: int = 1,
    output: dict | None = None,
    wigner: dict | None = None,
) -> ExperimentConfig:
    """Resolve a named preset into a runnable configuration."""
    spec = get_preset(name)
    base = dict(
        gamma1_plus=spec.gamma1_plus,
        gamma1_minus=spec.gamma1_minus,
        gamma2=spec.gamma2,
        gamma_h=spec.gamma_h,
        omega=spec.omega,
        omega2=spec.omega2,
        delta=spec.delta,
        theta=spec.theta,
        drive_phase=spec.drive_phase,
        n_max=spec.n_max,
        tau_bsb=spec.tau_bsb,
        tau_rsb=spec.tau_rsb,
        tau_2rsb=spec.tau_2rsb,
        tau_sq=spec.tau_sq,
        tau_reset=spec.tau_reset,
        cycle_period=spec.cycle_period,
        n_cycles=spec.n_cycles,
    )
    w = dict(r_max=spec.r_max, n_r=spec.n_r, n_phi=spec.n_phi)
    if wigner:
        w.update(wigner)
    return ExperimentConfig(
        name=name,
        scenario=spec.scenario,
        engine=engine,
        base=base,
        steady=spec.steady,
        sample_times=spec.sample_times,
        initial_state=dict(spec.initial_state),
        sweep=_sweep_from_preset(spec.sweep),
        wigner=w,
        output=output or {},
        workers=workers,
    )


_TOP_KEYS = {
    "name",
    "preset",
    "scenario",
    "engine",
    "workers",
    "params",
    "initial_state",
    "steady_state",
    "sample_times_us",
    "sweep",
    "wigner",
    "output",
}


def load_config(text: str) -> ExperimentConfig:
    """Parse and validate a YAML experiment document."""
    doc = yaml.safe_load(text)
    if doc is None or doc == {}:
        raise ConfigError(
            "empty config; required: 'preset: <name>' or "
            "'scenario', 'params', 'initial_state' and either "
            "'steady_state: true' or 'sample_times_us'"
        )
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a mapping")
    _check_keys(doc, _TOP_KEYS, "config")

    engine = doc.get("engine", "exact")
    if engine not in ENGINES:
        raise ConfigError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")
    workers = int(doc.get("workers", 1))
    output = doc.get("output", {}) or {}
    _check_keys(output, {"dir", "wigner"}, "output")
    wigner = doc.get("wigner", {}) or {}
    _check_keys(wigner, {"r_max", "n_r", "n_phi"}, "wigner")

    if "preset" in doc:
        conflicts = {"scenario", "params", "initial_state", "sweep", "sample_times_us", "steady_state"} & set(doc)
        if conflicts:
            raise ConfigError(
                f"preset {doc['preset']!r} conflicts with explicit {sorted(conflicts)}; "
                "use scenario: custom for overrides"
            )
        return config_from_preset(
            doc["preset"], engine=engine, workers=workers, output=output, wigner=wigner
        )

    missing = [k for k in ("scenario", "params") if k not in doc]
    if "steady_state" not in doc and "sample_times_us" not in doc:
        missing.append("steady_state or sample_times_us")
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    scenario = doc["scenario"]
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")

    base = dict(
        gamma1_plus=0.0, gamma1_minus=0.0, gamma2=0.0, gamma_h=0.0,
        omega=0.0, omega2=0.0, delta=0.0, theta=0.0, drive_phase=0.0,
        n_max=30, tau_bsb=0.0, tau_rsb=0.0, tau_2rsb=0.0, tau_sq=0.0,
        tau_reset=0.0, cycle_period=0.0, n_cycles=0,
    )
    for key, value in (doc.get("params") or {}).items():
        canon, converted = _convert_param(key, value)
        base[canon] = converted

    initial = doc.get("initial_state") or {}
    _check_keys(initial, {"kind", "alpha", "alpha_re", "alpha_im", "nbar"}, "initial_state")
    kind = initial.get("kind", "vacuum")
    if kind not in ("vacuum", "coherent", "displaced_thermal"):
        raise ConfigError(f"unknown initial state kind {kind!r}")
    state = {"kind": kind}
    if kind != "vacuum":
        state["alpha"] = complex(
            initial.get("alpha_re", initial.get("alpha", 0.0)), initial.get("alpha_im", 0.0)
        )
    if kind == "displaced_thermal":
        state["nbar"] = float(initial.get("nbar", 0.0))

    steady = bool(doc.get("steady_state", False))
    sample_times = tuple(float(t) * 1e-6 for t in doc.get("sample_times_us", ()))
    if not steady and not sample_times:
        raise ConfigError("time-resolved runs need sample_times_us")

    w = dict(r_max=4.0, n_r=60, n_phi=120)
    w.update(wigner)
    return ExperimentConfig(
        name=doc.get("name", scenario),
        scenario=scenario,
        engine=engine,
        base=base,
        steady=steady,
        sample_times=sample_times,
        initial_state=state,
        sweep=_parse_sweep(doc.get("sweep", ())),
        wigner=w,
        output=output,
        workers=workers,
    )


def _expand_points(config: ExperimentConfig):
    """Cartesian product of sweep axes: (index, overrides, display coords)."""
    if not config.sweep:
        return [(0, {}, ())]
    choices = [list(zip(axis.values, axis.display_values)) for axis in config.sweep]
    points = []
    for idx, combo in enumerate(itertools.product(*choices)):
        overrides, coords = {}, []
        for axis, (vals, disp) in zip(config.sweep, combo):
            overrides.update(dict(zip(axis.canonical, vals)))
            coords.extend(zip(axis.names, disp))
        points.append((idx, overrides, tuple(coords)))
    return points


def _point_base(config: ExperimentConfig, overrides: dict) -> dict:
    base = dict(config.base)
    base.update({k: v for k, v in overrides.items() if not k.startswith("initial_")})
    return base


def _point_initial(config: ExperimentConfig, overrides: dict, trunc) -> DensityMatrix:
    state = dict(config.initial_state)
    alpha = complex(state.get("alpha", 0.0))
    if "initial_alpha_re" in overrides or "initial_alpha_im" in overrides:
        alpha = complex(
            overrides.get("initial_alpha_re", alpha.real),
            overrides.get("initial_alpha_im", alpha.imag),
        )
    nbar = overrides.get("initial_nbar", state.get("nbar", 0.0))
    kind = state["kind"]
    if kind == "vacuum" and "initial_alpha_re" not in overrides and "initial_alpha_im" not in overrides:
        return vacuum_state(trunc)
    if kind == "displaced_thermal":
        return displaced_thermal_state(trunc, nbar, alpha)
    return coherent_state(trunc, alpha)


def _vdp_params(base: dict) -> VdpParams:
    trunc = FockTruncation(int(base["n_max"]), base.get("tail_tolerance", FockTruncation().tail_tolerance))
    return VdpParams(
        delta=base["delta"],
        omega=base["omega"],
        omega2=base["omega2"],
        theta=base["theta"],
        gamma1_plus=base["gamma1_plus"],
        gamma1_minus=base["gamma1_minus"],
        gamma2=base["gamma2"],
        gamma_h=base["gamma_h"],
        trunc=trunc,
        drive_phase=base["drive_phase"],
    )


def build_schedule(base: dict, full_mode: bool = False) -> PulseSchedule:
    """Pulse program realizing the point's rates with the table pulse times.

    Order per cycle: squeeze block, one-particle pumping, one-particle loss,
    two-particle loss, spin reset; each engineered-dissipation pulse is
    followed by a spin reset (the final one carries the budgeted reset
    time).  Channels with zero pulse time are omitted: their table rates
    are either ambient (heating) or unrealizable in pulse form.
    """
    t_cycle = base["cycle_period"]
    if t_cycle <= 0:
        raise ConfigError("trotter engines need a cycle_period")
    trunc = FockTruncation(int(base["n_max"]))
    pulses: list[Pulse] = []
    if base["omega2"] > 0 and base["tau_sq"] > 0:
        rabi = rabi_for_squeeze(base["omega2"], base["tau_sq"], t_cycle)
        theta_abs = base["theta"] + base["drive_phase"]
        pulses.extend(
            squeeze_tone_group(rabi, base["tau_sq"], theta_abs, delta_m=2 * np.pi * 20e3)
        )
    sidebands = [
        ("bsb1", base["gamma1_plus"], base["tau_bsb"]),
        ("rsb1", base["gamma1_minus"], base["tau_rsb"]),
        ("rsb2", base["gamma2"], base["tau_2rsb"]),
    ]
    live = [(kind, g, tau) for kind, g, tau in sidebands if g > 0 and tau > 0]
    for i, (kind, gamma, tau) in enumerate(live):
        pulse = Pulse(kind, rabi=rabi_for_rate(gamma, tau, t_cycle), duration=tau)
        if full_mode:
            shift = second_order_sideband_shift(
                pulse, 0.0925, 2 * np.pi * 1.1e6, trunc, n_ref=2
            )
            pulse = replace(pulse, detuning=shift)
        pulses.append(pulse)
        last = i == len(live) - 1
        pulses.append(Pulse("spin_reset", duration=base["tau_reset"] if last else 0.0))
    drive = None
    if base["omega"] > 0:
        drive = DriveSpec(omega=base["omega"], delta=base["delta"], phase=-base["drive_phase"])
    return PulseSchedule(
        pulses=tuple(pulses),
        cycle_period=t_cycle,
        n_cycles=int(base["n_cycles"]),
        continuous_drive=drive,
        gamma_h=base["gamma_h"],
    )


DENSE_EIG_DIM_LIMIT = 48
EMULATION_TAIL_TOLERANCE = 2e-2  # pulsed loss saturates at high n; see trotter docs


def _observe(state: DensityMatrix, config, point_idx, tag, out_dir, base):
    w = wigner_polar(
        state,
        r_max=config.wigner["r_max"],
        n_r=int(config.wigner["n_r"]),
        n_phi=int(config.wigner["n_phi"]),
    )
    s, mean_phase = sync_measure(phase_distribution(w))
    amp = mean_amplitude(state)
    row = dict(
        s=s,
        mean_phase=mean_phase,
        re_a=amp.real,
        im_a=amp.imag,
        n_mean=mean_phonon_number(state),
        purity=state.purity(),
    )
    if out_dir is not None and config.output.get("wigner"):
        fname = f"wigner_p{point_idx:03d}_{tag}.txt"
        meta = {"S": s, "mass": w.mass()}
        if base["gamma2"] > 0 and base["gamma1_plus"] >= base["gamma1_minus"]:
            meta["r_classical"] = classical_limit_radius(
                base["gamma1_plus"], base["gamma1_minus"], base["gamma2"]
            )
        if s <= 0.05:  # ring radius only meaningful for phase-symmetric states
            meta["ring_radius"] = ring_radius(w)
        write_wigner(Path(out_dir) / fname, w, meta)
        row["wigner_file"] = fname
    return row


def _run_point(args):
    config, point_idx, overrides, coords, out_dir = args
    base = _point_base(config, overrides)
    rows: list[ResultRow] = []
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            trunc_tol = (
                EMULATION_TAIL_TOLERANCE
                if config.engine != "exact"
                else FockTruncation().tail_tolerance
            )
            trunc = FockTruncation(int(base["n_max"]), trunc_tol)
            if config.steady:
                if config.engine == "exact":
                    params = _vdp_params(base)
                    if trunc.dim <= DENSE_EIG_DIM_LIMIT:
                        state = steady_state(params)
                    else:
                        state = settle_to_steady_state(params)
                else:
                    sched = build_schedule(base, full_mode=config.engine == "trotter_full")
                    traj = run_schedule(
                        _point_initial(config, overrides, trunc),
                        sched,
                        mode="rwa" if config.engine == "trotter_rwa" else "full",
                        tail_tolerance=EMULATION_TAIL_TOLERANCE,
                    )
                    state = traj.states[-1]
                obs = _observe(state, config, point_idx, "ss", out_dir, base)
                rows.append(ResultRow(coords=coords, time=None, **obs))
            else:
                rho0 = _point_initial(config, overrides, trunc)
                if config.engine == "exact":
                    params = _vdp_params(base)
                    t_end = max(config.sample_times)
                    traj = evolve(rho0, params, t_end, sample_times=config.sample_times)
                else:
                    sched = build_schedule(base, full_mode=config.engine == "trotter_full")
                    traj = run_schedule(
                        rho0,
                        sched,
                        mode="rwa" if config.engine == "trotter_rwa" else "full",
                        tail_tolerance=EMULATION_TAIL_TOLERANCE,
                    )
                wanted = {round(t, 12) for t in config.sample_times} | {0.0}
                for k, (t, state) in enumerate(zip(traj.times, traj.states)):
                    if not any(abs(t - tw) < 1e-9 for tw in wanted):
                        continue
                    obs = _observe(state, config, point_idx, f"t{k:03d}", out_dir, base)
                    rows.append(ResultRow(coords=coords, time=float(t), **obs))
    except Exception as exc:  # contained: emit an error marker row
        rows = [ResultRow(coords=coords, time=None, error=f"{type(exc).__name__}: {exc}")]
    return point_idx, rows


def run(config: ExperimentConfig, workers: int | None = None, out_dir=None):
    """Execute all sweep points; returns rows in deterministic order.

    Points are independent and distribute over a process pool; the merged
    row order is sorted by sweep coordinates and time regardless of worker
    count.  Failed points produce error-marker rows; the run fails only if
    every point failed.
    """
    workers = workers if workers is not None else config.workers
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
    points = _expand_points(config)
    args = [(config, idx, ov, coords, str(out_dir) if out_dir else None) for idx, ov, coords in points]
    results = {}
    if workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for idx, rows in pool.map(_run_point, args):
                results[idx] = rows
    else:
        for a in args:
            idx, rows = _run_point(a)
            results[idx] = rows
    ordered: list[ResultRow] = []
    for idx, _, _ in points:
        ordered.extend(results[idx])
    if ordered and all(r.error is not None for r in ordered):
        raise QvdpError("all sweep points failed; first error: " + ordered[0].error)
    if out_dir is not None:
        write_rows_csv(out_dir / "results.csv", ordered)
    return ordered


# ---------------------------------------------------------------------------
# Arnold-tongue summary


@dataclass
class TongueSummary:
    omega_values: tuple[float, ...]  # display units (Hz)
    delta_values: tuple[float, ...]
    s_grid: np.ndarray  # [i_omega, j_delta]
    iso_level: float
    contour: tuple  # per omega row: (delta_left, delta_right) or None


def arnold_tongue_summary(rows, iso_level: float = 0.5) -> TongueSummary:
    """Rectangular S(detuning, drive) grid plus the iso-S boundary.

    The boundary is reported per drive row as the linearly interpolated
    detunings where S crosses the iso level on each side of the maximum.
    """
    omega_key, delta_key = "omega_hz_over_2pi", "delta_hz_over_2pi"
    data = {}
    for row in rows:
        coords = dict(row.coords)
        if omega_key not in coords or delta_key not in coords:
            raise QvdpError("rows lack drive/detuning sweep coordinates")
        if row.error:
            raise QvdpError(f"cannot summarize: point {row.coords} failed: {row.error}")
        data[(coords[omega_key], coords[delta_key])] = row.s
    omegas = tuple(sorted({k[0] for k in data}))
    deltas = tuple(sorted({k[1] for k in data}))
    missing = [(o, d) for o in omegas for d in deltas if (o, d) not in data]
    if missing:
        raise QvdpError(f"incomplete sweep grid; missing points: {missing}")
    grid = np.array([[data[(o, d)] for d in deltas] for o in omegas])
    contour = []
    for i, _ in enumerate(omegas):
        s = grid[i]
        j_max = int(np.argmax(s))
        if s[j_max] < iso_level:
            contour.append(None)
            continue
        left = deltas[0]
        for j in range(j_max, 0, -1):
            if s[j - 1] < iso_level <= s[j]:
                frac = (iso_level - s[j - 1]) / (s[j] - s[j - 1])
                left = deltas[j - 1] + frac * (deltas[j] - deltas[j - 1])
                break
        right = deltas[-1]
        for j in range(j_max, len(deltas) - 1):
            if s[j + 1] < iso_level <= s[j]:
                frac = (s[j] - iso_level) / (s[j] - s[j + 1])
                right = deltas[j] + frac * (deltas[j + 1] - deltas[j])
                break
        contour.append((left, right))
    return TongueSummary(omegas, deltas, grid, iso_level, tuple(contour))


# ---------------------------------------------------------------------------
# CSV and Wigner-grid text formats


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: list[ResultRow]) -> str:
    """Serialize rows; float cells use shortest round-trip representation."""
    coord_names = list(dict(rows[0].coords)) if rows else []
    header = coord_names + [
        "time_s", "S", "mean_phase_rad", "re_a", "im_a", "n_mean", "purity",
        "wigner_file", "error",
    ]
    lines = [",".join(header)]
    for row in rows:
        coords = dict(row.coords)
        if list(coords) != coord_names:
            raise QvdpError("rows carry inconsistent sweep coordinates")
        cells = [_fmt(coords[n]) for n in coord_names] + [
            _fmt(row.time), _fmt(row.s), _fmt(row.mean_phase), _fmt(row.re_a),
            _fmt(row.im_a), _fmt(row.n_mean), _fmt(row.purity),
            row.wigner_file or "", row.error or "",
        ]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_rows_csv(path, rows):
    Path(path).write_text(rows_to_csv(rows), encoding="utf-8")


def parse_rows_csv(text: str) -> list[ResultRow]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0].split(",")
    fixed = ["time_s", "S", "mean_phase_rad", "re_a", "im_a", "n_mean", "purity", "wigner_file", "error"]
    coord_names = header[: len(header) - len(fixed)]
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        coords = tuple((n, float(c)) for n, c in zip(coord_names, cells))
        rest = cells[len(coord_names):]
        fl = lambda c: float(c) if c else None
        rows.append(
            ResultRow(
                coords=coords,
                time=fl(rest[0]),
                s=fl(rest[1]),
                mean_phase=fl(rest[2]),
                re_a=fl(rest[3]),
                im_a=fl(rest[4]),
                n_mean=fl(rest[5]),
                purity=fl(rest[6]),
                wigner_file=rest[7] or None,
                error=rest[8] or None,
            )
        )
    return rows


def write_wigner(path, grid: WignerGrid, meta: dict | None = None):
    """Self-describing text serialization of a polar Wigner grid."""
    lines = ["wigner-grid v1", f"n_r {len(grid.r_axis)}", f"n_phi {len(grid.phi_axis)}"]
    for key, value in (meta or {}).items():
        lines.append(f"meta {key} {_fmt(float(value))}")
    lines.append("r_axis " + " ".join(_fmt(float(v)) for v in grid.r_axis))
    lines.append("phi_axis " + " ".join(_fmt(float(v)) for v in grid.phi_axis))
    lines.append("values")
    for i in range(len(grid.r_axis)):
        lines.append(" ".join(_fmt(float(v)) for v in grid.values[i]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def parse_wigner(text: str) -> tuple[WignerGrid, dict]:
    lines = text.splitlines()
    if not lines or lines[0] != "wigner-grid v1":
        raise QvdpError("not a wigner-grid v1 document")
    meta = {}
    n_r = n_phi = None
    r_axis = phi_axis = None
    values = []
    in_values = False
    for line in lines[1:]:
        if not line.strip():
            continue
        if in_values:
            values.append([float(x) for x in line.split()])
            continue
        key, _, rest = line.partition(" ")
        if key == "n_r":
            n_r = int(rest)
        elif key == "n_phi":
            n_phi = int(rest)
        elif key == "meta":
            mkey, _, mval = rest.partition(" ")
            meta[mkey] = float(mval)
        elif key == "r_axis":
            r_axis = np.array([float(x) for x in rest.split()])
        elif key == "phi_axis":
            phi_axis = np.array([float(x) for x in rest.split()])
        elif key == "values":
            in_values = True
        else:
            raise QvdpError(f"unknown wigner-grid field {key!r}")
    grid = WignerGrid(r_axis, phi_axis, np.array(values))
    if len(grid.r_axis) != n_r or len(grid.phi_axis) != n_phi:
        raise QvdpError("wigner-grid axis lengths disagree with the header")
    return grid, meta
