"""Pure-NumPy fallback for the RK4 Lindblad propagation kernel.

Same contract as the compiled extension ``qvdp.kernels._cy``; kept in exact
behavioral lockstep with it (the test suite cross-checks both backends).
"""

import numpy as np


def rk4_lindblad(rho, ham_static, term_a, term_w, term_phi, jumps, jump_dags, t0, dt, n_steps):
    """Integrate drho/dt = -i[H(t), rho] + sum_j (L_j rho L_j^+ - {L_j^+ L_j, rho}/2) in place.

    H(t) = ham_static + sum_k (term_a[k] * exp(i*(term_w[k]*t - term_phi[k])) + h.c.)
    with the exponential taken elementwise; jump operators arrive pre-scaled
    by sqrt(rate).  rho is re-Hermitized after every step.  Returns the
    largest |Tr rho - 1| seen at any step boundary.

    Oscillating phases advance by a fixed half-step rotator instead of being
    recomputed, so the trig cost is one initialization per call.
    """
    n_terms = term_a.shape[0]
    n_jumps = jumps.shape[0]

    half_mdag = np.zeros_like(rho)
    for j in range(n_jumps):
        half_mdag += jump_dags[j] @ jumps[j]
    base = ham_static - 0.5j * half_mdag  # effective non-Hermitian generator

    if n_terms:
        # q[k] = A_k with its running phase folded in; rot advances by dt/2.
        q = term_a * np.exp(1j * (term_w * t0 - term_phi[:, None, None]))
        rot = np.exp(1j * term_w * (0.5 * dt))

    def rhs_from(gen, r):
        y = gen @ r
        out = -1j * (y - y.conj().T)  # r Hermitian: covers commutator + anticommutator
        for j in range(n_jumps):
            out += (jumps[j] @ r) @ jump_dags[j]
        return out

    def gen_now():
        if not n_terms:
            return base
        osc = q.sum(axis=0)
        return base + osc + osc.conj().T

    max_dev = 0.0
    for _ in range(n_steps):
        k1 = rhs_from(gen_now(), rho)
        if n_terms:
            q *= rot
        gen_mid = gen_now()
        k2 = rhs_from(gen_mid, rho + (0.5 * dt) * k1)
        k3 = rhs_from(gen_mid, rho + (0.5 * dt) * k2)
        if n_terms:
            q *= rot
        k4 = rhs_from(gen_now(), rho + dt * k3)
        rho += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        rho[:] = 0.5 * (rho + rho.conj().T)
        dev = abs(float(np.trace(rho).real) - 1.0)
        if dev > max_dev:
            max_dev = dev
    return max_dev
