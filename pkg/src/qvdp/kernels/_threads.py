"""BLAS threading control for the propagation hot loops.

The RK4 kernels multiply small matrices (tens of rows) millions of times;
multi-threaded BLAS loses a factor of 2-3 to per-call thread handoff at
these sizes, so propagation loops run under a single-threaded BLAS limit.
Large one-shot factorizations (the steady-state eigenproblem) are left
threaded.
"""

import contextlib

try:
    from threadpoolctl import threadpool_limits

    def blas_single_thread():
        return threadpool_limits(limits=1, user_api="blas")

except ImportError:  # pragma: no cover - threadpoolctl ships with scikit-learn

    def blas_single_thread():
        return contextlib.nullcontext()
