# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled RK4 Lindblad propagation kernel.

Same contract as ``qvdp.kernels._pure.rk4_lindblad``; matrix products go
straight to BLAS zgemm, the oscillating Hamiltonian terms advance through
precomputed half-step phase rotators, and the elementwise work
(Hermitization, RK4 combination) runs in tight C loops.
"""

import numpy as np

from scipy.linalg.cython_blas cimport zgemm

ctypedef double complex zc


cdef inline void _mm(int d, zc* a, zc* b, zc* c, zc alpha, zc beta) noexcept nogil:
    # Row-major C = alpha*A@B + beta*C via column-major zgemm on swapped operands.
    cdef char nt = b'N'
    zgemm(&nt, &nt, &d, &d, &d, &alpha, b, &d, a, &d, &beta, c, &d)


cdef void _rhs(int d, int n_terms, int n_jumps,
               zc* base, zc* q, zc* osc,
               zc* jumps, zc* jdags, zc* gen, zc* r,
               zc* y, zc* z, zc* out) noexcept nogil:
    cdef int i, j, k, nn = d * d
    cdef zc one = 1.0, zero = 0.0
    cdef zc v

    if n_terms > 0:
        for i in range(nn):
            osc[i] = q[i]
        for k in range(1, n_terms):
            for i in range(nn):
                osc[i] = osc[i] + q[k * nn + i]
        for i in range(d):
            for j in range(d):
                gen[i * d + j] = base[i * d + j] + osc[i * d + j] + osc[j * d + i].conjugate()
        _mm(d, gen, r, y, one, zero)
    else:
        _mm(d, base, r, y, one, zero)
    # r Hermitian: -i(y - y^+) covers both the commutator and the anticommutator.
    for i in range(d):
        for j in range(d):
            v = y[i * d + j] - y[j * d + i].conjugate()
            out[i * d + j] = v * (-1.0j)
    for k in range(n_jumps):
        _mm(d, jumps + k * nn, r, z, one, zero)
        _mm(d, z, jdags + k * nn, out, one, one)


def rk4_lindblad(rho, ham_static, term_a, term_w, term_phi, jumps, jump_dags,
                 double t0, double dt, long n_steps):
    """In-place RK4 Lindblad integration; returns max |Tr rho - 1| seen."""
    cdef zc[:, ::1] rho_v = rho
    cdef int d = rho_v.shape[0]
    cdef int nn = d * d
    cdef int n_terms = term_a.shape[0]
    cdef int n_jumps = jumps.shape[0]

    half = np.zeros((d, d), dtype=complex)
    for j in range(n_jumps):
        half += np.asarray(jump_dags[j]) @ np.asarray(jumps[j])
    base_arr = np.ascontiguousarray(np.asarray(ham_static, dtype=complex) - 0.5j * half)

    if n_jumps:
        jmp_arr = np.ascontiguousarray(jumps, dtype=complex)
        jdg_arr = np.ascontiguousarray(jump_dags, dtype=complex)
    else:
        jmp_arr = np.zeros((1, d, d), dtype=complex)  # placeholder, never read
        jdg_arr = jmp_arr

    # Oscillating terms: q = A * exp(i(W t - phi)) at the current time; each
    # half RK4 stage multiplies q by the fixed rotator exp(i W dt/2).
    if n_terms:
        ta = np.ascontiguousarray(term_a, dtype=complex)
        tw = np.ascontiguousarray(term_w, dtype=float)
        tp = np.ascontiguousarray(term_phi, dtype=float)
        q_arr = np.ascontiguousarray(ta * np.exp(1j * (tw * t0 - tp[:, None, None])))
        rot_arr = np.ascontiguousarray(np.exp(1j * tw * (0.5 * dt)))
    else:
        q_arr = np.zeros((1, d, d), dtype=complex)
        rot_arr = np.zeros((1, d, d), dtype=complex)
    cdef zc[:, :, ::1] q = q_arr
    cdef zc[:, :, ::1] rot = rot_arr

    cdef zc[:, ::1] base = base_arr
    cdef zc[:, :, ::1] jmp = jmp_arr
    cdef zc[:, :, ::1] jdg = jdg_arr

    work = [np.empty((d, d), dtype=complex) for _ in range(7)]
    cdef zc[:, ::1] gen = work[0]
    cdef zc[:, ::1] y = work[1]
    cdef zc[:, ::1] z = work[2]
    cdef zc[:, ::1] stage = work[3]
    cdef zc[:, ::1] kbuf = work[4]
    cdef zc[:, ::1] acc = work[5]
    cdef zc[:, ::1] oscb = work[6]

    cdef zc* base_p = &base[0, 0]
    cdef zc* q_p = &q[0, 0, 0]
    cdef zc* rot_p = &rot[0, 0, 0]
    cdef zc* jmp_p = &jmp[0, 0, 0]
    cdef zc* jdg_p = &jdg[0, 0, 0]
    cdef zc* rho_p = &rho_v[0, 0]
    cdef zc* gen_p = &gen[0, 0]
    cdef zc* osc_p = &oscb[0, 0]
    cdef zc* y_p = &y[0, 0]
    cdef zc* z_p = &z[0, 0]
    cdef zc* stage_p = &stage[0, 0]
    cdef zc* k_p = &kbuf[0, 0]
    cdef zc* acc_p = &acc[0, 0]

    cdef long step
    cdef int i
    cdef int qn = n_terms * nn
    cdef double tr, dev, max_dev = 0.0
    cdef double h6 = dt / 6.0
    cdef zc v
    cdef int jj

    with nogil:
        for step in range(n_steps):
            # k1 at phase(t)
            _rhs(d, n_terms, n_jumps, base_p, q_p, osc_p, jmp_p, jdg_p, gen_p,
                 rho_p, y_p, z_p, k_p)
            for i in range(nn):
                acc_p[i] = k_p[i]
                stage_p[i] = rho_p[i] + 0.5 * dt * k_p[i]
            for i in range(qn):
                q_p[i] = q_p[i] * rot_p[i]
            # k2, k3 at phase(t + dt/2)
            _rhs(d, n_terms, n_jumps, base_p, q_p, osc_p, jmp_p, jdg_p, gen_p,
                 stage_p, y_p, z_p, k_p)
            for i in range(nn):
                acc_p[i] = acc_p[i] + 2.0 * k_p[i]
                stage_p[i] = rho_p[i] + 0.5 * dt * k_p[i]
            _rhs(d, n_terms, n_jumps, base_p, q_p, osc_p, jmp_p, jdg_p, gen_p,
                 stage_p, y_p, z_p, k_p)
            for i in range(nn):
                acc_p[i] = acc_p[i] + 2.0 * k_p[i]
                stage_p[i] = rho_p[i] + dt * k_p[i]
            for i in range(qn):
                q_p[i] = q_p[i] * rot_p[i]
            # k4 at phase(t + dt)
            _rhs(d, n_terms, n_jumps, base_p, q_p, osc_p, jmp_p, jdg_p, gen_p,
                 stage_p, y_p, z_p, k_p)
            for i in range(nn):
                rho_p[i] = rho_p[i] + h6 * (acc_p[i] + k_p[i])
            # re-Hermitize and track trace drift
            tr = 0.0
            for i in range(d):
                for jj in range(i, d):
                    v = 0.5 * (rho_p[i * d + jj] + rho_p[jj * d + i].conjugate())
                    rho_p[i * d + jj] = v
                    rho_p[jj * d + i] = v.conjugate()
                tr += rho_p[i * d + i].real
            dev = tr - 1.0
            if dev < 0.0:
                dev = -dev
            if dev > max_dev:
                max_dev = dev
    return max_dev
