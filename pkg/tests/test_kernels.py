import numpy as np
import pytest
import scipy.linalg

from qvdp import kernels
from qvdp.kernels import _pure, available_backends


def random_problem(seed, d=6, n_terms=2, n_jumps=2):
    rng = np.random.default_rng(seed)
    h = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = 0.5 * (h + h.conj().T)
    ta = 0.3 * (rng.standard_normal((n_terms, d, d)) + 1j * rng.standard_normal((n_terms, d, d)))
    tw = 3.0 * rng.standard_normal((n_terms, d, d))
    tp = rng.standard_normal(n_terms)
    jumps = np.ascontiguousarray(
        0.4 * (rng.standard_normal((n_jumps, d, d)) + 1j * rng.standard_normal((n_jumps, d, d)))
    )
    jdags = np.ascontiguousarray(np.conj(np.transpose(jumps, (0, 2, 1))))
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = m @ m.conj().T
    rho /= np.trace(rho).real
    return h, ta, tw, tp, jumps, jdags, rho


def empty_terms(d):
    return np.zeros((0, d, d), dtype=complex), np.zeros((0, d, d)), np.zeros(0)


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    assert "python" in available_backends()


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_backends_agree(seed):
    backends = available_backends()
    if "cython" not in backends:
        pytest.skip("compiled kernel not built")
    h, ta, tw, tp, jumps, jdags, rho = random_problem(seed)
    results = {}
    for name, mod in backends.items():
        r = np.array(rho, order="C")
        dev = mod.rk4_lindblad(r, h, ta, tw, tp, jumps, jdags, 0.37, 0.01, 250)
        results[name] = (r, dev)
    r_py, d_py = results["python"]
    r_cy, d_cy = results["cython"]
    np.testing.assert_allclose(r_cy, r_py, atol=1e-13)
    assert abs(d_py - d_cy) < 1e-13


def test_static_case_against_superoperator_exponential():
    # Independent oracle: exact exp(L t) acting on vec(rho), column stacking.
    d = 6
    h, _, _, _, jumps, jdags, rho = random_problem(11, d=d)
    eye = np.eye(d)
    sup = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for l, ldag in zip(jumps, jdags):
        ldl = ldag @ l
        sup += np.kron(l.conj(), l) - 0.5 * (np.kron(eye, ldl) + np.kron(ldl.T, eye))
    t_end = 0.8
    expected = (scipy.linalg.expm(sup * t_end) @ rho.flatten(order="F")).reshape(
        d, d, order="F"
    )
    ta, tw, tp = empty_terms(d)
    r = np.array(rho, order="C")
    kernels.rk4_lindblad(r, h, ta, tw, tp, jumps, jdags, 0.0, t_end / 4000, 4000)
    np.testing.assert_allclose(r, expected, atol=1e-8)


def test_oscillating_term_against_rabi_formula():
    # Detuned two-level Rabi problem: H(t) = g (s+ e^{-i delta t} + h.c.).
    g, delta = 0.7, 1.9
    d = 2
    amp = np.zeros((1, d, d), dtype=complex)
    amp[0, 1, 0] = g  # sigma_plus in (down, up) ordering
    w = np.zeros((1, d, d))
    w[0] = -delta
    phi = np.zeros(1)
    jumps = np.zeros((0, d, d), dtype=complex)
    rho = np.zeros((d, d), dtype=complex)
    rho[0, 0] = 1.0
    t_end = 3.0
    r = np.array(rho, order="C")
    kernels.rk4_lindblad(
        r, np.zeros((d, d), dtype=complex), amp, w, phi, jumps, jumps, 0.0, t_end / 6000, 6000
    )
    omega_r = np.hypot(g, delta / 2)
    expected = (g / omega_r) ** 2 * np.sin(omega_r * t_end) ** 2
    assert abs(r[1, 1].real - expected) < 1e-6


def test_phase_offset_honored():
    # A pi phase flip of the term must flip the sign of the coupling.
    d = 2
    amp = np.zeros((1, d, d), dtype=complex)
    amp[0, 1, 0] = 0.5
    w = np.zeros((1, d, d))
    jumps = np.zeros((0, d, d), dtype=complex)
    psi_plus = np.zeros((d, d), dtype=complex)
    psi_plus[0, 0] = 1.0
    r1 = np.array(psi_plus, order="C")
    kernels.rk4_lindblad(
        r1, np.zeros((d, d), dtype=complex), amp, w, np.zeros(1), jumps, jumps, 0.0, 1e-3, 500
    )
    r2 = np.array(psi_plus, order="C")
    kernels.rk4_lindblad(
        r2, np.zeros((d, d), dtype=complex), amp, w, np.array([np.pi]), jumps, jumps, 0.0, 1e-3, 500
    )
    # populations agree, coherences change sign
    assert abs(r1[1, 1] - r2[1, 1]) < 1e-12
    assert abs(r1[0, 1] + r2[0, 1]) < 1e-12


def test_trace_dev_reported():
    d = 4
    h = np.zeros((d, d), dtype=complex)
    ta, tw, tp = empty_terms(d)
    jumps = np.zeros((0, d, d), dtype=complex)
    rho = np.eye(d, dtype=complex) / d
    r = np.array(rho, order="C")
    dev = kernels.rk4_lindblad(r, h, ta, tw, tp, jumps, jumps, 0.0, 0.1, 100)
    assert dev < 1e-14
    np.testing.assert_allclose(r, rho, atol=1e-14)
