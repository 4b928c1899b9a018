"""Pulse-level emulation of the trapped-ion reservoir-engineering scheme.

A joint spin-phonon state evolves under sideband drives applied cyclically;
spin resets after the sideband blocks convert the coherent spin-motion
coupling into effective phonon dissipation, and pulse-area algebra maps the
(Rabi rate, pulse time, cycle period) of each channel onto the
master-equation rates of the exact model.

Frames and conventions
----------------------
Everything is integrated in the interaction frame of the bare motion (the
phonon rotating at ``omega_z``) and of the spin splitting, so a matrix
element connecting phonon levels m -> n under a tone detuned by ``delta``
oscillates at ``omega_z (m - n) - delta``.  Sideband resonances are then
``delta = +omega_z`` (first blue), ``-omega_z`` (first red), ``-2 omega_z``
(second red), with ``Pulse.detuning`` counted on top of the resonance.  The
continuous displacement drive at ``omega_z + delta`` reduces to the
rotating-frame drive of the exact model with ``drive_phase = -phase``.

Two fidelity modes:

* ``rwa``   - each sideband keeps only its resonant coupling (a, a^+, a^2);
  cheap, converges to the exact master equation as pulse areas shrink.
* ``full``  - the complete exp(i eta (a + a^+)) coupling with its explicit
  time dependence; reproduces off-resonant artifacts such as the
  level-dependent light shift of the second red sideband, and needs steps
  that resolve 2 omega_z.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .kernels._threads import blas_single_thread
from .errors import (
    DimensionMismatchError,
    SchedulingError,
    TraceDriftError,
    TruncationTailError,
)
from .fock import (
    SIGMA_PLUS,
    SPIN_DOWN,
    DensityMatrix,
    FockTruncation,
    Operator,
    SpaceTag,
    ladder_ops,
    lift_to_joint,
    phonon_marginal_mat,
)
from .lindblad import Trajectory, VdpParams

DEFAULT_ETA = 0.0925
DEFAULT_OMEGA_Z = 2 * np.pi * 1.1e6  # rad/s
DEFAULT_DT_RWA = 1e-6
FULL_MODE_STEP_FRACTION = 0.05  # dt = this / omega_z in full mode

SIDEBAND_KINDS = ("bsb1", "rsb1", "rsb2")
SQUEEZE_TONE_KINDS = (
    "squeeze_tone_r_plus",
    "squeeze_tone_r_minus",
    "squeeze_tone_b_plus",
    "squeeze_tone_b_minus",
)
PULSE_KINDS = SIDEBAND_KINDS + SQUEEZE_TONE_KINDS + ("spin_reset", "idle")

# Ideal resonance of each laser kind, in units of omega_z.
_BASE_DETUNING = {
    "bsb1": +1.0,
    "rsb1": -1.0,
    "rsb2": -2.0,
    "squeeze_tone_r_plus": -1.0,
    "squeeze_tone_r_minus": -1.0,
    "squeeze_tone_b_plus": +1.0,
    "squeeze_tone_b_minus": +1.0,
}


@dataclass(frozen=True)
class Pulse:
    """One entry of the cycle program.

    ``rabi`` is the sideband Rabi rate (the Omega_x of the coupling
    Hamiltonians), ``detuning`` an offset from the ideal sideband resonance,
    ``phase`` the optical phase.  ``spin_reset`` and ``idle`` ignore all
    three and only consume ``duration``.
    """

    kind: str
    rabi: float = 0.0
    detuning: float = 0.0
    phase: float = 0.0
    duration: float = 0.0

    def __post_init__(self):
        if self.kind not in PULSE_KINDS:
            raise SchedulingError(f"unknown pulse kind {self.kind!r}")
        if self.duration < 0:
            raise SchedulingError("pulse duration must be >= 0")


@dataclass(frozen=True)
class DriveSpec:
    """Continuous displacement drive at omega_z + delta with optical phase."""

    omega: float
    delta: float = 0.0
    phase: float = 0.0


@dataclass(frozen=True)
class PulseSchedule:
    """One Trotter cycle (ordered pulses) repeated ``n_cycles`` times.

    Consecutive squeeze tones of equal duration run simultaneously as one
    block.  Time left over after the listed pulses idles (drive and heating
    stay on; heating acts uniformly across the cycle, reset slots included).
    """

    pulses: tuple[Pulse, ...]
    cycle_period: float
    n_cycles: int
    continuous_drive: DriveSpec | None = None
    eta: float = DEFAULT_ETA
    omega_z: float = DEFAULT_OMEGA_Z
    gamma_h: float = 0.0
    squeeze_tone_offset: float = 2 * np.pi * 20e3  # delta_m of the tone pairs

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(self.pulses))
        if self.cycle_period <= 0:
            raise SchedulingError("cycle period must be positive")
        if self.n_cycles < 0:
            raise SchedulingError("n_cycles must be >= 0")
        if not 0 < self.eta < 1:
            raise SchedulingError("Lamb-Dicke parameter must lie in (0, 1)")
        if self.gamma_h < 0:
            raise SchedulingError("heating rate must be >= 0")
        used = self.busy_time
        if used > self.cycle_period * (1 + 1e-9):
            raise SchedulingError(
                f"pulse durations sum to {used:.3e} s > cycle period "
                f"{self.cycle_period:.3e} s"
            )

    @property
    def busy_time(self) -> float:
        """Per-cycle time consumed; simultaneous tone groups count once."""
        return sum(group[0].duration for _, group in _squeeze_groups(self.pulses))


@dataclass(frozen=True)
class EffectiveRates:
    """Master-equation rates implied by one cycle of the schedule."""

    gamma1_plus: float = 0.0
    gamma1_minus: float = 0.0
    gamma2: float = 0.0
    omega2_eff: float = 0.0


@functools.lru_cache(maxsize=32)
def _exp_ikx(eta: float, n_max: int) -> np.ndarray:
    """exp(i eta (a + a^+)) via eigendecomposition of the Hermitian quadrature."""
    a, a_dag, _ = ladder_ops(FockTruncation(n_max))
    q = eta * (a.mat + a_dag.mat)
    vals, vecs = np.linalg.eigh(q)
    return (vecs * np.exp(1j * vals)) @ vecs.conj().T


def _rabi_prefactor(kind: str, rabi: float, eta: float) -> float:
    if kind == "rsb2":
        return rabi / eta**2
    return rabi / (2 * eta)


def sideband_term(
    pulse: Pulse, eta: float, omega_z: float, trunc: FockTruncation
) -> tuple[np.ndarray, np.ndarray, float]:
    """(A, W, phi) of one laser tone: H(t) = A exp(i(W t)) e^{-i phi} + h.c.

    A is the upper (spin-raising) part on the joint space, W the elementwise
    frequency matrix omega_z (m_ph - n_ph) - delta of the interaction frame.
    """
    if pulse.kind not in _BASE_DETUNING:
        raise SchedulingError(f"{pulse.kind!r} is not a laser pulse")
    d = trunc.dim
    delta = _BASE_DETUNING[pulse.kind] * omega_z + pulse.detuning
    coupling = _rabi_prefactor(pulse.kind, pulse.rabi, eta) * _exp_ikx(eta, trunc.n_max)
    amp = np.kron(SIGMA_PLUS, coupling)
    ph = np.tile(np.arange(d, dtype=float), 2)
    w = omega_z * (ph[:, None] - ph[None, :]) - delta
    return amp, w, pulse.phase


def sideband_hamiltonian(
    pulse: Pulse, eta: float, omega_z: float, time: float, trunc: FockTruncation
) -> Operator:
    """Joint Hermitian sideband Hamiltonian at one instant of lab time."""
    amp, w, phi = sideband_term(pulse, eta, omega_z, trunc)
    half = amp * np.exp(1j * (w * time - phi))
    return Operator(half + half.conj().T, SpaceTag("spin_phonon", trunc.n_max))


def _rwa_coupling(pulse: Pulse, trunc: FockTruncation) -> np.ndarray:
    """Resonant two-level coupling of one sideband: (rabi/2) sigma+ O + h.c. half."""
    a, a_dag, _ = ladder_ops(trunc)
    op = {"bsb1": a_dag.mat, "rsb1": a.mat, "rsb2": a.mat @ a.mat}[pulse.kind]
    return 0.5 * pulse.rabi * np.kron(SIGMA_PLUS, op)


def _squeeze_block_rwa(rabi: float, theta: float, trunc: FockTruncation) -> np.ndarray:
    """Effective phonon squeeze during a tone block: i(rabi/2)(a^+2 e^{2i th} - h.c.)."""
    _, a_dag, _ = ladder_ops(trunc)
    ad2 = a_dag.mat @ a_dag.mat
    half = 0.5j * rabi * np.exp(2j * theta) * ad2
    return np.kron(np.eye(2), half + half.conj().T)


def spin_reset(rho_joint: DensityMatrix) -> DensityMatrix:
    """Optical pumping back to spin-down: discard spin coherences, keep phonons."""
    if rho_joint.space.kind != "spin_phonon":
        raise DimensionMismatchError("spin reset needs a joint spin-phonon state")
    red = phonon_marginal_mat(rho_joint.mat, rho_joint.space.n_max)
    mat = np.kron(SPIN_DOWN, red)
    return DensityMatrix(
        Operator(mat, rho_joint.space),
        rho_joint.herm_tol,
        rho_joint.trace_tol,
        rho_joint.eig_floor,
    )


def rabi_for_rate(gamma: float, tau: float, cycle_period: float) -> float:
    """Invert gamma = (rabi/2)^2 tau^2 / T for the sideband Rabi rate."""
    if tau <= 0:
        raise SchedulingError("pulse time must be positive to realize a rate")
    return 2.0 / tau * float(np.sqrt(gamma * cycle_period))


def rabi_for_squeeze(omega2: float, tau: float, cycle_period: float) -> float:
    """Invert omega2 = rabi * tau / T for the squeeze-block Rabi rate."""
    if tau <= 0:
        raise SchedulingError("pulse time must be positive to realize a squeeze")
    return omega2 * cycle_period / tau


def _squeeze_groups(pulses: tuple[Pulse, ...]):
    """Split the cycle into segments; consecutive equal-length tones group."""
    segments: list[tuple[str, list[Pulse]]] = []
    i = 0
    while i < len(pulses):
        p = pulses[i]
        if p.kind in SQUEEZE_TONE_KINDS:
            group = [p]
            while (
                i + 1 < len(pulses)
                and pulses[i + 1].kind in SQUEEZE_TONE_KINDS
                and pulses[i + 1].duration == p.duration
            ):
                i += 1
                group.append(pulses[i])
            segments.append(("squeeze", group))
        else:
            segments.append((p.kind, [p]))
        i += 1
    return segments


def effective_rates(schedule: PulseSchedule) -> EffectiveRates:
    """Pulse-area algebra: each channel's rate from (Rabi, tau, T).

    First-order sidebands and the second red sideband give
    gamma = (rabi/2)^2 tau^2 / T; a squeeze block gives
    omega2 = rabi tau / T.  Channels absent from the schedule yield zero.
    """
    t = schedule.cycle_period
    g1p = g1m = g2 = om2 = 0.0
    for kind, group in _squeeze_groups(schedule.pulses):
        p = group[0]
        if p.duration == 0:
            continue
        if kind == "bsb1":
            g1p += (p.rabi / 2) ** 2 * p.duration**2 / t
        elif kind == "rsb1":
            g1m += (p.rabi / 2) ** 2 * p.duration**2 / t
        elif kind == "rsb2":
            g2 += (p.rabi / 2) ** 2 * p.duration**2 / t
        elif kind == "squeeze":
            om2 += p.rabi * p.duration / t
    return EffectiveRates(g1p, g1m, g2, om2)


def equivalent_vdp_params(schedule: PulseSchedule, trunc: FockTruncation) -> VdpParams:
    """Exact-model parameters this schedule emulates (for oracle comparisons).

    The squeeze-block optical phase is the absolute squeeze axis; the exact
    model measures theta relative to its drive orientation, so the drive
    phase is subtracted out.
    """
    eff = effective_rates(schedule)
    drive = schedule.continuous_drive
    drive_phase = -drive.phase if drive else 0.0
    theta = 0.0
    for kind, group in _squeeze_groups(schedule.pulses):
        if kind == "squeeze":
            theta = group[0].phase - drive_phase
            break
    return VdpParams(
        delta=drive.delta if drive else 0.0,
        omega=drive.omega if drive else 0.0,
        omega2=eff.omega2_eff,
        theta=theta,
        gamma1_plus=eff.gamma1_plus,
        gamma1_minus=eff.gamma1_minus,
        gamma2=eff.gamma2,
        gamma_h=schedule.gamma_h,
        trunc=trunc,
        drive_phase=drive_phase,
    )


def refine_schedule(schedule: PulseSchedule, factor: int) -> PulseSchedule:
    """Shrink the Trotter step: T ->T/f, tau -> tau/f, rabi -> rabi sqrt(f).

    Keeps every effective rate and the duty cycle exactly while pulse areas
    shrink by 1/sqrt(f), so the emulation converges to the exact master
    equation as the factor grows.
    """
    if factor < 1:
        raise ValueError("factor must be >= 1")
    root = float(np.sqrt(factor))
    pulses = tuple(
        replace(
            p,
            duration=p.duration / factor,
            rabi=p.rabi * root if p.kind != "spin_reset" else p.rabi,
        )
        for p in schedule.pulses
    )
    return replace(
        schedule,
        pulses=pulses,
        cycle_period=schedule.cycle_period / factor,
        n_cycles=schedule.n_cycles * factor,
    )


def _drive_term(drive: DriveSpec, omega_z: float, trunc: FockTruncation):
    """Continuous displacement drive as an (A, W, phi) kernel term."""
    d = trunc.dim
    _, a_dag, _ = ladder_ops(trunc)
    amp = 1j * drive.omega * np.kron(np.eye(2), a_dag.mat)
    ph = np.tile(np.arange(d, dtype=float), 2)
    w = omega_z * (ph[:, None] - ph[None, :]) - (omega_z + drive.delta)
    return amp, w, drive.phase


def _is_static(amp: np.ndarray, w: np.ndarray) -> bool:
    support = np.abs(amp) > 0
    return not support.any() or float(np.max(np.abs(w[support]))) == 0.0


class _SegmentPlan:
    """Kernel inputs for one pulse (or tone-block) segment of a cycle."""

    __slots__ = ("h_static", "term_a", "term_w", "term_phi", "duration", "reset_after")

    def __init__(self, h_static, terms, duration, reset_after=False):
        d = h_static.shape[0]
        self.h_static = h_static
        live = [(a, w, p) for a, w, p in terms if not _is_static(a, w)]
        for a, w, p in terms:
            if _is_static(a, w):
                half = a * np.exp(-1j * p)
                self.h_static = self.h_static + half + half.conj().T
        if live:
            self.term_a = np.ascontiguousarray([a for a, _, _ in live])
            self.term_w = np.ascontiguousarray([w for _, w, _ in live])
            self.term_phi = np.array([p for _, _, p in live])
        else:
            self.term_a = np.zeros((0, d, d), dtype=complex)
            self.term_w = np.zeros((0, d, d))
            self.term_phi = np.zeros(0)
        self.duration = duration
        self.reset_after = reset_after


def _plan_cycle(schedule: PulseSchedule, trunc: FockTruncation, mode: str):
    d = 2 * trunc.dim
    zero = np.zeros((d, d), dtype=complex)
    background = []
    if schedule.continuous_drive is not None and schedule.continuous_drive.omega != 0:
        background.append(_drive_term(schedule.continuous_drive, schedule.omega_z, trunc))

    plans: list[_SegmentPlan] = []
    used = 0.0
    for kind, group in _squeeze_groups(schedule.pulses):
        pulse = group[0]
        if pulse.duration == 0:
            if kind == "spin_reset":  # instantaneous projection is meaningful
                plans.append(_SegmentPlan(zero, [], 0.0, reset_after=True))
            continue
        used += pulse.duration  # tone groups run simultaneously
        terms = list(background)
        h_static = zero
        reset_after = False
        if kind == "spin_reset":
            reset_after = True
        elif kind == "idle":
            pass
        elif kind == "squeeze":
            if mode == "full":
                for p in group:
                    terms.append(sideband_term(p, schedule.eta, schedule.omega_z, trunc))
            else:
                h_static = h_static + _squeeze_block_rwa(pulse.rabi, pulse.phase, trunc)
        else:  # sidebands
            if mode == "full":
                terms.append(sideband_term(pulse, schedule.eta, schedule.omega_z, trunc))
            else:
                half = _rwa_coupling(pulse, trunc) * np.exp(-1j * pulse.phase)
                h_static = h_static + half + half.conj().T
        plans.append(_SegmentPlan(h_static, terms, pulse.duration, reset_after))

    remainder = schedule.cycle_period - used
    if remainder > 1e-12:
        plans.append(_SegmentPlan(zero, list(background), remainder))
    return plans


def run_schedule(
    rho0_phonon: DensityMatrix,
    schedule: PulseSchedule,
    dt: float | None = None,
    mode: str = "rwa",
    tail_tolerance: float | None = None,
) -> Trajectory:
    """Integrate the pulse program; phonon marginal at every cycle boundary.

    The state is lifted to spin-down (x) rho0; within each cycle the pulse
    segments run in order under RK4 (continuous drive and heating always
    on), ``spin_reset`` segments idle for their duration and project the
    spin at the end.  Errors out when the trace drifts past 1e-5 or when the
    phonon tail outgrows ``tail_tolerance``.

    Finite pulse areas make the engineered two-phonon loss saturate at high
    n while pumping does not, so long pulse trains leak a slowly growing
    population toward the truncation edge (it would march upward harmlessly
    in the untruncated experiment).  Emulation callers therefore often need
    a looser ``tail_tolerance`` than the exact engine's default; the
    equivalence of the bulk dynamics is guarded by comparing against the
    exact engine, not by this bound.
    """
    if mode not in ("rwa", "full"):
        raise ValueError("mode must be 'rwa' or 'full'")
    if rho0_phonon.space.kind != "phonon":
        raise DimensionMismatchError("run_schedule expects a phonon-space initial state")
    trunc = FockTruncation(
        rho0_phonon.space.n_max,
        tail_tolerance if tail_tolerance is not None else FockTruncation().tail_tolerance,
    )
    if dt is None:
        dt = DEFAULT_DT_RWA if mode == "rwa" else FULL_MODE_STEP_FRACTION / schedule.omega_z
    if mode == "full" and dt > 0.5e-6:
        raise ValueError("full mode needs dt <= 0.5 us to resolve 2*omega_z")

    d = 2 * trunc.dim
    a, a_dag, _ = ladder_ops(trunc)
    if schedule.gamma_h > 0:
        root = np.sqrt(schedule.gamma_h)
        jumps = np.ascontiguousarray(
            [root * np.kron(np.eye(2), a.mat), root * np.kron(np.eye(2), a_dag.mat)]
        )
        jdags = np.ascontiguousarray(np.conj(np.transpose(jumps, (0, 2, 1))))
    else:
        jumps = np.zeros((0, d, d), dtype=complex)
        jdags = jumps

    plans = _plan_cycle(schedule, trunc, mode)
    rho = np.array(lift_to_joint(rho0_phonon).mat, dtype=complex, order="C")
    space = SpaceTag("phonon", trunc.n_max)

    times, states = [], []

    def record(t):
        red = phonon_marginal_mat(rho, trunc.n_max)
        red = 0.5 * (red + red.conj().T)
        state = DensityMatrix(
            Operator(red, space), herm_tol=1e-12, trace_tol=1e-5, eig_floor=-1e-5
        )
        tail = state.tail_population()
        if tail > trunc.tail_tolerance:
            raise TruncationTailError(
                f"phonon tail {tail:.2e} at cycle boundary t = {t:.3e} s; raise n_max"
            )
        times.append(t)
        states.append(state)

    def reset_now():
        nonlocal rho
        red = phonon_marginal_mat(rho, trunc.n_max)
        rho = np.ascontiguousarray(np.kron(SPIN_DOWN, red))

    record(0.0)
    t_abs = 0.0
    max_dev = 0.0
    with blas_single_thread():
        for _ in range(schedule.n_cycles):
            for plan in plans:
                if plan.duration > 0.0:
                    n_steps = max(int(round(plan.duration / dt)), 1)
                    dt_seg = plan.duration / n_steps
                    dev = kernels.rk4_lindblad(
                        rho,
                        plan.h_static,
                        plan.term_a,
                        plan.term_w,
                        plan.term_phi,
                        jumps,
                        jdags,
                        t_abs,
                        dt_seg,
                        n_steps,
                    )
                    max_dev = max(max_dev, dev)
                    if max_dev > 1e-5:
                        raise TraceDriftError(
                            f"trace drift {max_dev:.2e} exceeds 1e-5 (dt = {dt:.2e} s)"
                        )
                    t_abs += plan.duration
                if plan.reset_after:
                    reset_now()
            record(t_abs)
    return Trajectory(np.array(times), states, schedule)


def squeeze_tone_group(
    rabi: float, duration: float, theta: float, delta_m: float
) -> tuple[Pulse, ...]:
    """The four simultaneous tones of one squeeze block.

    Two pairs straddle the red and blue sidebands at +-delta_m; the common
    optical phase sets the squeeze axis (same convention the rotating-wave
    reduction uses).
    """
    return tuple(
        Pulse(kind, rabi=rabi, detuning=sign * delta_m, phase=theta, duration=duration)
        for kind, sign in (
            ("squeeze_tone_r_plus", +1.0),
            ("squeeze_tone_r_minus", -1.0),
            ("squeeze_tone_b_plus", +1.0),
            ("squeeze_tone_b_minus", -1.0),
        )
    )


def second_order_sideband_shift(
    pulse: Pulse, eta: float, omega_z: float, trunc: FockTruncation, n_ref: int = 2
) -> float:
    """Resonance shift of |down, n> <-> |up, n-k> from off-resonant couplings.

    Second-order secular (Magnus) contribution of every Fourier component of
    the full coupling: H2 = sum_{w>0} [C_w, C_w^+]/w.  Returns the shift of
    the transition used by this pulse, evaluated at phonon level ``n_ref``;
    adding it to ``Pulse.detuning`` re-centers the resonance the way the
    experimental calibration does.
    """
    amp, w, _ = sideband_term(pulse, eta, omega_z, trunc)
    h_amp = amp + amp.conj().T
    w_full = np.where(np.abs(amp) > 0, w, np.where(np.abs(amp.conj().T) > 0, -w.T, 0.0))
    freqs = np.unique(np.round(w_full[np.abs(h_amp) > 0], 6))
    freqs = freqs[freqs > 0]
    d = trunc.dim
    h2 = np.zeros((2 * d, 2 * d), dtype=complex)
    for fr in freqs:
        c = np.where(np.abs(w_full - fr) < 0.5, h_amp, 0.0)
        h2 += (c @ c.conj().T - c.conj().T @ c) / fr
    k = {"rsb1": 1, "bsb1": -1, "rsb2": 2}.get(pulse.kind)
    if k is None:
        raise SchedulingError("shift defined for sideband pulses only")
    lo = n_ref
    hi_ph = n_ref - k
    if not (0 <= hi_ph <= trunc.n_max):
        raise ValueError("n_ref incompatible with this sideband order")
    e_down = float(h2[lo, lo].real)  # |down, n_ref>
    up_idx = d + hi_ph
    e_up = float(h2[up_idx, up_idx].real)  # |up, n_ref - k>
    return e_up - e_down
