"""Acceptance suite: one test per primary criterion, printed pass/fail lines.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the report lines.
The rendering component's criterion lives in the frontend package and is
exercised by its own test suite; everything here runs without it.
"""

import time
import warnings

import numpy as np
import pytest

from qvdp.experiments import build_schedule, config_from_preset, run
from qvdp.fock import (
    FockTruncation,
    coherent_state,
    displaced_thermal_state,
    fock_state,
)
from qvdp.lindblad import VdpParams, evolve, steady_state
from qvdp.presets import quoted_ratio_checks
from qvdp.tomography import (
    classical_limit_radius,
    local_maxima,
    mean_phonon_number,
    phase_distribution,
    ring_radius,
    sync_measure,
    wigner_polar,
)
from qvdp.trotter import (
    PulseSchedule,
    Pulse,
    equivalent_vdp_params,
    refine_schedule,
    run_schedule,
)

WORKERS = 2


def report(name: str, ok: bool, detail: str):
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, f"{name}: {detail}"


def vdp_params_from(config, **overrides) -> VdpParams:
    base = dict(config.base)
    base.update(overrides)
    return VdpParams(
        delta=base["delta"],
        omega=base["omega"],
        omega2=base["omega2"],
        theta=base["theta"],
        gamma1_plus=base["gamma1_plus"],
        gamma1_minus=base["gamma1_minus"],
        gamma2=base["gamma2"],
        gamma_h=base["gamma_h"],
        trunc=FockTruncation(int(base["n_max"])),
        drive_phase=base["drive_phase"],
    )


def sync_of(state, **grid):
    return sync_measure(phase_distribution(wigner_polar(state, **grid)))


def trace_distance(a, b):
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def test_limit_cycle_fig2():
    t0 = time.monotonic()
    config = config_from_preset("fig2")
    params = vdp_params_from(config)
    rho0 = displaced_thermal_state(params.trunc, 1.5, 1.0)
    traj = evolve(rho0, params, 4e-3, sample_times=[4e-3])
    w = wigner_polar(traj.states[-1])
    s, _ = sync_measure(phase_distribution(w))
    radius = ring_radius(w)
    r_classical = classical_limit_radius(2060.0, 90.0, 1110.0)
    elapsed = time.monotonic() - t0
    report(
        "limit cycle (fig2)",
        s <= 0.05 and 1.0 <= radius <= 1.7 and elapsed <= 30,
        f"S(4ms) = {s:.4f} <= 0.05; ring radius = {radius:.3f} in [1.0, 1.7] "
        f"(~ r_c/2 = {r_classical / 2:.2f}); {elapsed:.1f}s <= 30s",
    )


def test_phase_locking_fig3b():
    t0 = time.monotonic()
    config = config_from_preset("fig3b")
    params = vdp_params_from(config)
    rho0 = coherent_state(params.trunc, -1.0)
    traj = evolve(
        rho0, params, max(config.sample_times), sample_times=config.sample_times
    )
    s_final, phase_final = sync_of(traj.states[-1])
    ss = steady_state(params)
    s_steady, phase_steady = sync_of(ss)
    off_final = abs(phase_final - np.pi / 2)
    elapsed = time.monotonic() - t0
    report(
        "phase locking (fig3b)",
        off_final <= 0.2 and s_steady >= 0.5 and elapsed <= 30,
        f"|<phi>(4.1ms) - pi/2| = {off_final:.3f} <= 0.2 rad; steady S = "
        f"{s_steady:.3f} >= 0.5 (steady phase {phase_steady:.4f}); {elapsed:.1f}s <= 30s",
    )


def test_phase_distribution_narrowing_fig3c():
    t0 = time.monotonic()
    config = config_from_preset("fig3c")
    rows = run(config, workers=WORKERS)
    variances = [1.0 - row.s for row in rows]
    elapsed = time.monotonic() - t0
    strictly_decreasing = all(b < a for a, b in zip(variances, variances[1:]))
    report(
        "phase narrowing (fig3c)",
        strictly_decreasing and len(rows) == 6 and elapsed <= 60,
        f"circular variance {['%.4f' % v for v in variances]} strictly decreasing "
        f"over six drives; {elapsed:.1f}s <= 60s",
    )


def test_arnold_tongue_fig3d():
    t0 = time.monotonic()
    config = config_from_preset("fig3d")
    rows = run(config, workers=WORKERS)
    s = {}
    for row in rows:
        c = dict(row.coords)
        s[(c["omega_hz_over_2pi"], c["delta_hz_over_2pi"])] = row.s
    omegas = sorted({k[0] for k in s})
    deltas = sorted({k[1] for k in s})
    center = [s[(o, 0.0)] for o in omegas]
    increasing = all(b > a for a, b in zip(center, center[1:]))
    off_axis_ok = True
    symmetry = 0.0
    for o in omegas:
        for d in deltas:
            if abs(d) > 0:
                closer = 0.0 if abs(d) == 136 else np.sign(d) * 136
                off_axis_ok &= s[(o, d)] <= s[(o, closer)] + 1e-3
            symmetry = max(symmetry, abs(s[(o, d)] - s[(o, -d)]))
    elapsed = time.monotonic() - t0
    report(
        "Arnold tongue (fig3d)",
        len(rows) == 20 and increasing and off_axis_ok and symmetry <= 1e-6 and elapsed <= 120,
        f"20 points; S increasing in drive at resonance {['%.3f' % v for v in center]}; "
        f"non-increasing with |detuning| (tol 1e-3); max |S(d)-S(-d)| = {symmetry:.2e} "
        f"<= 1e-6; {elapsed:.0f}s <= 120s",
    )


def test_dissipation_boost_fig4a_and_s2():
    t0 = time.monotonic()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        deep = run(config_from_preset("fig4a_deep"), workers=WORKERS)
        quantum = run(config_from_preset("fig4a_quantum"), workers=WORKERS)
        semi = run(config_from_preset("fig4a_semiclassical"), workers=WORKERS)
    s_deep = [r.s for r in deep]
    s_quantum = [r.s for r in quantum]
    s_semi = [r.s for r in semi]
    boost = max(s_deep) > s_deep[0]
    q_mono = all(b <= a + 1e-3 for a, b in zip(s_quantum, s_quantum[1:]))
    semi_mono = all(b <= a + 1e-3 for a, b in zip(s_semi, s_semi[1:]))
    pointwise = all(q > d for q, d in zip(s_quantum, s_deep))
    elapsed = time.monotonic() - t0
    report(
        "dissipation boost (fig4a / figS2)",
        boost and q_mono and semi_mono and pointwise and elapsed <= 180,
        f"deep S {['%.3f' % v for v in s_deep]} boosted above baseline; quantum "
        f"{['%.3f' % v for v in s_quantum]} and semiclassical {['%.3f' % v for v in s_semi]} "
        f"non-increasing (tol 1e-3); quantum > deep pointwise; {elapsed:.0f}s <= 180s",
    )


def test_squeezing_fig4bc():
    t0 = time.monotonic()
    config = config_from_preset("fig4bc")
    states = {}
    for omega2_hz, theta in ((0, 0.0), (32, 0.0), (32, np.pi / 2), (63, np.pi / 2)):
        params = vdp_params_from(config, omega2=2 * np.pi * omega2_hz, theta=theta)
        states[(omega2_hz, theta)] = steady_state(params)
    s_ref, _ = sync_of(states[(0, 0.0)])
    s_perp, _ = sync_of(states[(32, 0.0)])
    s_para, _ = sync_of(states[(32, np.pi / 2)])
    w_bist = wigner_polar(states[(63, np.pi / 2)])
    peaks = local_maxima(w_bist, rel_threshold=0.5, min_separation=0.5)
    elapsed = time.monotonic() - t0
    report(
        "squeezing and bifurcation (fig4bc)",
        s_perp > s_ref and s_para < s_ref and len(peaks) >= 2 and elapsed <= 60,
        f"S: none {s_ref:.3f}, perpendicular {s_perp:.3f} (up), parallel {s_para:.3f} "
        f"(down); strong parallel squeeze gives {len(peaks)} separated maxima; "
        f"{elapsed:.0f}s <= 60s",
    )


def test_deep_quantum_fixed_point():
    trunc = FockTruncation(15)
    ss = steady_state(VdpParams(gamma1_plus=1.0, gamma2=1e4, trunc=trunc))
    pops = np.real(np.diag(ss.mat))
    ok = (
        abs(pops[0] - 2 / 3) < 1e-3
        and abs(pops[1] - 1 / 3) < 1e-3
        and abs(mean_phonon_number(ss) - 1 / 3) < 1e-3
    )
    report(
        "deep-quantum fixed point",
        ok,
        f"populations ({pops[0]:.5f}, {pops[1]:.5f}) vs (2/3, 1/3) within 1e-3; "
        f"<n> = {mean_phonon_number(ss):.5f}",
    )


def test_trotter_exact_equivalence_fig3b():
    t0 = time.monotonic()
    config = config_from_preset("fig3b")
    sched = build_schedule(config.base)
    trunc = FockTruncation(30)
    params = equivalent_vdp_params(sched, trunc)
    rho0 = coherent_state(trunc, -1.0)
    traj_t = run_schedule(rho0, sched, dt=1e-6, mode="rwa")
    traj_e = evolve(
        rho0,
        params,
        sched.n_cycles * sched.cycle_period,
        sample_times=[k * sched.cycle_period for k in range(sched.n_cycles + 1)],
    )
    sample_cycles = [round(t / sched.cycle_period) for t in config.sample_times]
    dists = [
        trace_distance(traj_t.states[k].mat, traj_e.states[k].mat) for k in sample_cycles
    ]
    terminal = [dists[-1]]
    for factor in (2, 4):
        refined = run_schedule(rho0, refine_schedule(sched, factor), dt=1e-6, mode="rwa")
        terminal.append(trace_distance(refined.states[-1].mat, traj_e.states[-1].mat))
    monotone = terminal[0] > terminal[1] > terminal[2]
    elapsed = time.monotonic() - t0
    report(
        "emulation equivalence (fig3b)",
        max(dists) <= 0.05 and monotone and elapsed <= 120,
        f"trace distance <= {max(dists):.4f} at the preset's sampled cycles (bound "
        f"0.05); terminal distance {['%.4f' % v for v in terminal]} falls as the cycle "
        f"halves twice; {elapsed:.0f}s <= 120s",
    )


def test_single_decay_oracle():
    tau, t_cycle = 20e-6, 40e-6
    rabi = 0.2 / tau  # pulse area 0.2
    gamma = (rabi / 2) ** 2 * tau**2 / t_cycle
    trunc = FockTruncation(10)
    sched = PulseSchedule(
        pulses=(
            Pulse("rsb1", rabi=rabi, duration=tau),
            Pulse("spin_reset", duration=5e-6),
        ),
        cycle_period=t_cycle,
        n_cycles=120,
    )
    traj = run_schedule(fock_state(trunc, 1), sched, dt=1e-6, mode="rwa")
    p1 = np.array([st.mat[1, 1].real for st in traj.states])
    expected = np.exp(-gamma * traj.times)
    worst = float(np.max(np.abs(p1[1:] - expected[1:]) / expected[1:]))
    report(
        "single-decay pulse train",
        worst < 0.01,
        f"population tracks exp(-gamma k T) within {worst:.2%} over 120 cycles "
        f"(bound 1%) at pulse area 0.2",
    )


def test_units_self_test():
    checks = quoted_ratio_checks()
    worst_label, worst = max(
        ((label, abs(value / quoted - 1.0)) for label, value, quoted in checks),
        key=lambda t: t[1],
    )
    report(
        "units self-test",
        worst <= 0.03,
        f"{len(checks)} quoted dimensionless ratios reproduced; worst {worst_label} "
        f"off by {worst:.2%} (bound 3%)",
    )
