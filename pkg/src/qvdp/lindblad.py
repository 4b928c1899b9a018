"""Exact dynamics of the driven-dissipative nonlinear oscillator.

Rotating-frame master equation

    drho/dt = -i[H, rho] + (g1p + gh) D[a^+] rho + (g1m + gh) D[a] rho + g2 D[a^2] rho

with H = -delta a^+a + i*omega (a^+ e^{i phi_d} - a e^{-i phi_d})
       + i*omega2/2 (a^+2 e^{2i(theta+phi_d)} - a^2 e^{-2i(theta+phi_d)}).

Units: Hamiltonian coefficients are angular frequencies (rad/s), dissipation
rates plain 1/s.  ``drive_phase`` (phi_d) rotates the whole coherent part in
phase space; theta stays the relative angle between the squeeze axis and the
drive.  Time evolution is fixed-step RK4 through the kernels subpackage;
steady states come from the dense null space of the vectorized generator
(column-stacking convention), with a long-time-integration fallback for
truncations too large to eigendecompose.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import kernels
from .kernels._threads import blas_single_thread
from .errors import (
    DegenerateSteadyStateError,
    DimensionMismatchError,
    QvdpError,
    TraceDriftError,
    TruncationTailError,
)
from .fock import DensityMatrix, FockTruncation, Operator, SpaceTag, ladder_ops

DEFAULT_DT = 1e-6  # s; rates here stay below a few krad/s, deeply stable


@dataclass(frozen=True)
class VdpParams:
    """All master-equation parameters plus the Fock truncation.

    Rates (gamma*) in 1/s, angular frequencies (delta, omega, omega2) in
    rad/s, angles in radians.  ``gamma_h`` is the motional heating rate,
    entering as gh*D[a] + gh*D[a^+] on top of the engineered channels.
    """

    delta: float = 0.0
    omega: float = 0.0
    omega2: float = 0.0
    theta: float = 0.0
    gamma1_plus: float = 0.0
    gamma1_minus: float = 0.0
    gamma2: float = 0.0
    gamma_h: float = 0.0
    trunc: FockTruncation = field(default_factory=FockTruncation)
    drive_phase: float = 0.0

    def __post_init__(self):
        for name in ("gamma1_plus", "gamma1_minus", "gamma2", "gamma_h"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def total_rate(self) -> float:
        return self.gamma1_plus + self.gamma1_minus + self.gamma2 + 2 * self.gamma_h

    def has_dissipation(self) -> bool:
        return self.total_rate > 0


@dataclass
class Trajectory:
    """Sampled density matrices along one evolution.

    ``params`` records what generated it: a VdpParams for exact runs, a
    PulseSchedule for emulated ones.
    """

    times: np.ndarray
    states: list[DensityMatrix]
    params: object

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("times and states lengths differ")
        if len(self.times) and self.times[0] != 0.0:
            raise ValueError("trajectories start at t = 0")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")


def vdp_hamiltonian(params: VdpParams) -> Operator:
    """Coherent part: detuning, linear drive and squeeze drive."""
    a, a_dag, n = ladder_ops(params.trunc)
    drv = np.exp(1j * params.drive_phase)
    sq = np.exp(2j * (params.theta + params.drive_phase))
    mat = (
        -params.delta * n.mat
        + 1j * params.omega * (a_dag.mat * drv - a.mat * np.conj(drv))
        + 0.5j * params.omega2 * (a_dag.mat @ a_dag.mat * sq - a.mat @ a.mat * np.conj(sq))
    )
    return Operator(mat, a.space)


def jump_operators(params: VdpParams) -> list[tuple[float, Operator]]:
    """(rate, jump) pairs with heating folded into the linear channels."""
    a, a_dag, _ = ladder_ops(params.trunc)
    a2 = Operator(a.mat @ a.mat, a.space)
    pairs = [
        (params.gamma1_plus + params.gamma_h, a_dag),
        (params.gamma1_minus + params.gamma_h, a),
        (params.gamma2, a2),
    ]
    return [(rate, op) for rate, op in pairs if rate > 0]


def dissipator_apply(jump: Operator, rho: DensityMatrix) -> Operator:
    """D[O] rho = O rho O^+ - {O^+ O, rho}/2 (traceless, Hermitian; not a state)."""
    if jump.space != rho.space:
        raise DimensionMismatchError("jump operator and state on different spaces")
    o, r = jump.mat, rho.mat
    odag_o = o.conj().T @ o
    out = o @ r @ o.conj().T - 0.5 * (odag_o @ r + r @ odag_o)
    return Operator(out, jump.space)


def liouvillian_apply(params: VdpParams, rho: DensityMatrix) -> Operator:
    """Right-hand side of the master equation at this state."""
    h = vdp_hamiltonian(params)
    if h.space != rho.space:
        raise DimensionMismatchError("state truncation differs from params.trunc")
    out = -1j * (h.mat @ rho.mat - rho.mat @ h.mat)
    for rate, op in jump_operators(params):
        out += rate * dissipator_apply(op, rho).mat
    return Operator(out, h.space)


def liouvillian_superoperator(params: VdpParams) -> np.ndarray:
    """Dense column-stacking superoperator: L vec(rho) = vec(drho/dt)."""
    h = vdp_hamiltonian(params).mat
    d = h.shape[0]
    eye = np.eye(d)
    sup = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for rate, op in jump_operators(params):
        o = op.mat
        odag_o = o.conj().T @ o
        sup += rate * (
            np.kron(o.conj(), o)
            - 0.5 * (np.kron(eye, odag_o) + np.kron(odag_o.T, eye))
        )
    return sup


def _vec_to_state(vec: np.ndarray, space: SpaceTag) -> DensityMatrix:
    d = space.dim
    mat = vec.reshape((d, d), order="F")
    mat = 0.5 * (mat + mat.conj().T)
    tr = mat.trace().real
    if abs(tr) < 1e-12:
        raise DegenerateSteadyStateError("null vector is traceless; no unique steady state")
    mat /= tr
    return DensityMatrix(Operator(mat, space))


def steady_state(params: VdpParams) -> DensityMatrix:
    """Unique fixed point of the master equation from the generator's null space.

    Dense eigendecomposition of the d^2 x d^2 superoperator; the eigenvector
    with eigenvalue closest to zero is reshaped, Hermitized and normalized.
    Raises if no eigenvalue sits within 1e-6 * ||L|| of zero, or if a second
    one sits within 1e-8 * ||L|| (degenerate null space: the steady state is
    not unique, or the gap is too small to extract it reliably).
    """
    if not params.has_dissipation():
        raise QvdpError("steady state undefined without dissipation")
    sup = liouvillian_superoperator(params)
    norm = float(np.linalg.norm(sup, np.inf))
    w, v = scipy.linalg.eig(sup)
    order = np.argsort(np.abs(w))
    lam0, lam1 = w[order[0]], w[order[1]]
    if abs(lam0) > 1e-6 * norm:
        raise QvdpError(
            f"no eigenvalue close enough to zero (|lambda| = {abs(lam0):.3e}, "
            f"bound {1e-6 * norm:.3e})"
        )
    if abs(lam1) < 1e-8 * norm:
        raise DegenerateSteadyStateError(
            f"two eigenvalues within 1e-8*||L|| of zero "
            f"(|lambda_1| = {abs(lam1):.3e}); steady state not unique"
        )
    space = SpaceTag("phonon", params.trunc.n_max)
    return _vec_to_state(v[:, order[0]], space)


def _kernel_inputs(params: VdpParams):
    d = params.trunc.dim
    h = vdp_hamiltonian(params).mat
    jumps = [np.sqrt(rate) * op.mat for rate, op in jump_operators(params)]
    jmat = np.array(jumps) if jumps else np.zeros((0, d, d), dtype=complex)
    jdag = np.conj(np.transpose(jmat, (0, 2, 1))) if len(jumps) else jmat
    no_terms = np.zeros((0, d, d), dtype=complex)
    no_freqs = np.zeros((0, d, d))
    no_phis = np.zeros(0)
    return h, no_terms, no_freqs, no_phis, np.ascontiguousarray(jmat), np.ascontiguousarray(jdag)


def _snap_samples(sample_times, t_end: float, dt: float) -> np.ndarray:
    """Sample instants snapped to the integration grid, 0 always included."""
    times = np.atleast_1d(np.asarray(sample_times, dtype=float))
    if np.any(times < 0) or np.any(times > t_end + 0.5 * dt):
        raise ValueError("sample times must lie in [0, t_end]")
    idx = np.unique(np.concatenate(([0], np.rint(times / dt).astype(int))))
    return idx


def evolve(
    rho0: DensityMatrix,
    params: VdpParams,
    t_end: float,
    dt: float = DEFAULT_DT,
    sample_times=None,
) -> Trajectory:
    """Fixed-step RK4 integration, sampling the state at the requested times.

    Sample times are snapped to the step grid (reported times are the
    realized ones).  States are re-Hermitized every step; the run errors out
    when the accumulated trace drift exceeds 1e-6 or when population piles
    up in the top two Fock levels beyond the truncation's tail tolerance.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if rho0.space != SpaceTag("phonon", params.trunc.n_max):
        raise DimensionMismatchError("initial state truncation differs from params")
    if sample_times is None:
        sample_times = [t_end]
    idx = _snap_samples(sample_times, t_end, dt)

    h, ta, tw, tp, jumps, jdags = _kernel_inputs(params)
    rho = np.array(rho0.mat, dtype=complex, order="C")
    times, states = [], []
    max_dev = 0.0

    def record(k):
        times.append(k * dt)
        state = DensityMatrix(
            Operator(rho.copy(), rho0.space),
            herm_tol=1e-12,
            trace_tol=1e-6,
            eig_floor=-1e-6,
        )
        tail = state.tail_population()
        if tail > params.trunc.tail_tolerance:
            raise TruncationTailError(
                f"top-two-level population {tail:.2e} at t = {k * dt:.3e} s exceeds "
                f"tail tolerance {params.trunc.tail_tolerance:.1e}; raise n_max"
            )
        states.append(state)

    prev = 0
    if idx[0] == 0:
        record(0)
        idx = idx[1:]
    with blas_single_thread():
        for k in idx:
            dev = kernels.rk4_lindblad(
                rho, h, ta, tw, tp, jumps, jdags, prev * dt, dt, int(k - prev)
            )
            max_dev = max(max_dev, dev)
            if max_dev > 1e-6:
                raise TraceDriftError(
                    f"trace drift {max_dev:.2e} exceeds 1e-6; decrease dt (currently {dt:.2e} s)"
                )
            record(k)
            prev = k
    return Trajectory(np.array(times), states, params)


def banded_rhs(params: VdpParams):
    """Master-equation right-hand side exploiting the band structure.

    Every operator in the model shifts Fock indices by at most 2, so the
    full generator action costs O(d^2) instead of the O(d^3) of dense
    products.  Returns a closure rho -> drho/dt; used for large truncations
    where dense matmuls dominate.  Cross-checked against the dense
    ``liouvillian_apply`` by the test suite.
    """
    d = params.trunc.dim
    m = np.arange(d, dtype=float)
    s1 = np.sqrt(m[1:])  # <n-1|a|n>
    s2 = np.sqrt(m[2:] * (m[2:] - 1.0))  # <n-2|a^2|n>

    g_up = params.gamma1_plus + params.gamma_h  # D[a^+]
    g_dn = params.gamma1_minus + params.gamma_h  # D[a]
    g2 = params.gamma2

    # Hamiltonian diagonals: offset -> weights w[k] = H[k, k+offset].
    c_ad = 1j * params.omega * np.exp(1j * params.drive_phase)  # a^+ coefficient
    c_ad2 = 0.5j * params.omega2 * np.exp(2j * (params.theta + params.drive_phase))
    hdiags = {
        0: -params.delta * m,
        1: np.conj(c_ad) * s1,  # a term
        -1: c_ad * s1,  # a^+ term
        2: np.conj(c_ad2) * s2,  # a^2 term
        -2: c_ad2 * s2,  # a^+2 term
    }
    hdiags = {k: v for k, v in hdiags.items() if np.any(v != 0)}

    # Elementwise anticommutator weight and the three sandwich weights.
    # a a^+ on the truncated space is diag(1, .., n_max, 0): the top level
    # cannot be pumped further, so its anticommutator weight vanishes.
    nn_up = np.concatenate((m[1:], [0.0]))
    anti = 0.5 * (
        g_dn * (m[:, None] + m[None, :])
        + g_up * (nn_up[:, None] + nn_up[None, :])
        + g2 * (m[:, None] * (m[:, None] - 1) + m[None, :] * (m[None, :] - 1))
    )
    w_dn = g_dn * np.outer(s1, s1)
    w_up = g_up * np.outer(s1, s1)
    w_2 = g2 * np.outer(s2, s2)

    def rhs(rho: np.ndarray) -> np.ndarray:
        hp = np.zeros_like(rho)
        ph = np.zeros_like(rho)
        for off, w in hdiags.items():
            if off >= 0:
                hp[: d - off, :] += w[:, None] * rho[off:, :]
                ph[:, off:] += rho[:, : d - off] * w[None, :]
            else:
                k = -off
                hp[k:, :] += w[:, None] * rho[: d - k, :]
                ph[:, : d - k] += rho[:, k:] * w[None, :]
        out = -1j * (hp - ph) - anti * rho
        if g_dn:
            out[:-1, :-1] += w_dn * rho[1:, 1:]
        if g_up:
            out[1:, 1:] += w_up * rho[:-1, :-1]
        if g2:
            out[:-2, :-2] += w_2 * rho[2:, 2:]
        return out

    return rhs


def settle_to_steady_state(
    params: VdpParams,
    rho0: DensityMatrix | None = None,
    dt: float | None = None,
    block: float | None = None,
    tol: float = 1e-7,
    max_time: float = 2.0,
) -> DensityMatrix:
    """Steady state by long-time integration, for truncations too large to eig.

    Fixed-step RK4 on the banded right-hand side, in blocks; successive
    block-to-block changes decay geometrically once the slowest mode
    dominates, so the remaining distance to the fixed point is extrapolated
    and the loop stops when it drops below ``tol`` (max-norm).  Used by the
    experiment runner when the superoperator would not be tractable densely.
    """
    from .fock import vacuum_state  # local import to avoid cycle noise

    if not params.has_dissipation():
        raise QvdpError("steady state undefined without dissipation")
    d = params.trunc.dim
    # RK4 stability: fastest scale is the two-phonon decay of the top level.
    rate_max = (
        (params.gamma1_plus + params.gamma_h) * d
        + (params.gamma1_minus + params.gamma_h) * d
        + params.gamma2 * d * (d - 1)
        + abs(params.delta) * d
        + 2 * params.omega * np.sqrt(d)
        + 2 * params.omega2 * d
    )
    if dt is None:
        dt = min(2.0 / rate_max, 2e-5)
    slow = max(
        params.gamma1_plus,
        params.gamma1_minus,
        params.gamma2,
        params.gamma_h,
        1e-3,
    )
    if block is None:
        block = max(1.0 / slow, 50 * dt)
    steps = max(int(round(block / dt)), 1)

    rhs = banded_rhs(params)
    rho = np.array((rho0 or vacuum_state(params.trunc)).mat, dtype=complex, order="C")
    prev = rho.copy()
    t = 0.0
    delta_prev = None
    converged = False
    while t < max_time:
        for _ in range(steps):
            k1 = rhs(rho)
            k2 = rhs(rho + (0.5 * dt) * k1)
            k3 = rhs(rho + (0.5 * dt) * k2)
            k4 = rhs(rho + dt * k3)
            rho += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
            rho = 0.5 * (rho + rho.conj().T)
        t += steps * dt
        delta = float(np.max(np.abs(rho - prev)))
        prev[:] = rho
        if delta_prev is not None and delta < delta_prev:
            ratio = delta / delta_prev
            remaining = delta * ratio / (1.0 - ratio)
            if remaining < tol:
                converged = True
                break
        delta_prev = delta
    if not converged:
        raise QvdpError(f"no steady state reached within {max_time} s of model time")
    rho /= rho.trace().real
    state = DensityMatrix(
        Operator(rho, SpaceTag("phonon", params.trunc.n_max)),
        herm_tol=1e-12,
        trace_tol=1e-6,
        eig_floor=-1e-6,
    )
    tail = state.tail_population()
    if tail > params.trunc.tail_tolerance:
        raise TruncationTailError(
            f"steady state keeps {tail:.2e} in the top two levels; raise n_max"
        )
    return state
