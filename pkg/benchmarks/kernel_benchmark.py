"""Benchmark the RK4 Lindblad kernels: compiled extension vs NumPy fallback.

Three representative workloads:

* exact   - phonon-space master equation (static Hamiltonian, 3 jumps),
            the exact-engine integration profile;
* rwa     - joint spin-phonon space, static couplings plus heating, the
            rotating-wave emulation profile;
* full    - joint space with oscillating coupling terms, the
            full-Hamiltonian emulation profile (phase-rotator hot path).

Usage: python benchmarks/kernel_benchmark.py [--steps N]
"""

import argparse
import time

import numpy as np

from qvdp.kernels import available_backends
from qvdp.kernels._threads import blas_single_thread


def workload(name: str):
    rng = np.random.default_rng(42)
    if name == "exact":
        d, n_terms, n_jumps = 31, 0, 3
    elif name == "rwa":
        d, n_terms, n_jumps = 62, 0, 2
    else:  # full
        d, n_terms, n_jumps = 62, 2, 0
    h = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = 0.5 * (h + h.conj().T) * 1e3
    ta = 0.01 * (rng.standard_normal((n_terms, d, d)) + 1j * rng.standard_normal((n_terms, d, d)))
    tw = 1e6 * rng.standard_normal((n_terms, d, d))
    tp = np.zeros(n_terms)
    jumps = np.ascontiguousarray(
        3.0 * (rng.standard_normal((n_jumps, d, d)) + 1j * rng.standard_normal((n_jumps, d, d)))
    )
    jdags = np.ascontiguousarray(np.conj(np.transpose(jumps, (0, 2, 1))))
    rho = np.eye(d, dtype=complex) / d
    return h, ta, tw, tp, jumps, jdags, rho


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=2000)
    args = parser.parse_args()

    backends = available_backends()
    names = ["exact", "rwa", "full"]
    print(f"{'workload':10s}" + "".join(f"{b:>16s}" for b in backends) + f"{'speedup':>10s}")
    with blas_single_thread():
        for name in names:
            h, ta, tw, tp, jumps, jdags, rho = workload(name)
            per_step = {}
            for bname, mod in backends.items():
                r = np.array(rho, order="C")
                mod.rk4_lindblad(r, h, ta, tw, tp, jumps, jdags, 0.0, 1e-9, 50)
                t0 = time.perf_counter()
                mod.rk4_lindblad(r, h, ta, tw, tp, jumps, jdags, 0.0, 1e-9, args.steps)
                per_step[bname] = (time.perf_counter() - t0) / args.steps * 1e6
            line = f"{name:10s}" + "".join(f"{per_step[b]:13.1f} us" for b in backends)
            if "cython" in per_step:
                line += f"{per_step['python'] / per_step['cython']:9.2f}x"
            print(line)


if __name__ == "__main__":
    main()
