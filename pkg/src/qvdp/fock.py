"""Operators and states on truncated Fock spaces and joint spin-phonon spaces.

Dense complex matrices throughout; at the dimensions used here (tens of
levels) dense kernels beat any sparse bookkeeping.  Conventions fixed once
for the whole package:

* a truncation retaining levels ``0 .. n_max`` has dimension ``n_max + 1``;
* joint spaces are ordered spin (x) phonon with spin basis (down, up), so a
  joint index is ``s * (n_max + 1) + n``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import (
    DimensionMismatchError,
    DisplacementTruncationWarning,
    ThermalTailWarning,
)

# Spin-1/2 matrices in the (down, up) basis.
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
SPIN_DOWN = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
SPIN_UP = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


@dataclass(frozen=True)
class FockTruncation:
    """Fock-space cutoff: levels 0..n_max are retained.

    ``tail_tolerance`` bounds the population allowed above level
    ``n_max - 2`` (the top two levels) after any evolution; more than that
    flags the run as under-truncated.
    """

    n_max: int = 30
    tail_tolerance: float = 1e-4

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2 (two-phonon loss needs level 2)")
        if self.tail_tolerance <= 0:
            raise ValueError("tail_tolerance must be positive")

    @property
    def dim(self) -> int:
        return self.n_max + 1


@dataclass(frozen=True)
class SpaceTag:
    """Identifies the Hilbert space an operator lives on."""

    kind: str  # "phonon" | "spin_phonon"
    n_max: int

    def __post_init__(self):
        if self.kind not in ("phonon", "spin_phonon"):
            raise ValueError(f"unknown space kind {self.kind!r}")

    @property
    def dim(self) -> int:
        d = self.n_max + 1
        return d if self.kind == "phonon" else 2 * d


@dataclass(eq=False)
class Operator:
    """Dense complex matrix tagged with its Hilbert space."""

    mat: np.ndarray
    space: SpaceTag

    def __post_init__(self):
        self.mat = np.ascontiguousarray(self.mat, dtype=complex)
        if self.mat.ndim != 2 or self.mat.shape[0] != self.mat.shape[1]:
            raise ValueError("operator matrix must be square")
        if self.mat.shape[0] != self.space.dim:
            raise DimensionMismatchError(
                f"matrix dim {self.mat.shape[0]} != {self.space.kind}({self.space.n_max}) "
                f"dim {self.space.dim}"
            )

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def dag(self) -> "Operator":
        return Operator(self.mat.conj().T, self.space)

    def __matmul__(self, other: "Operator") -> "Operator":
        if self.space != other.space:
            raise DimensionMismatchError(f"{self.space} @ {other.space}")
        return Operator(self.mat @ other.mat, self.space)

    def __add__(self, other: "Operator") -> "Operator":
        if self.space != other.space:
            raise DimensionMismatchError(f"{self.space} + {other.space}")
        return Operator(self.mat + other.mat, self.space)

    def __sub__(self, other: "Operator") -> "Operator":
        if self.space != other.space:
            raise DimensionMismatchError(f"{self.space} - {other.space}")
        return Operator(self.mat - other.mat, self.space)

    def __rmul__(self, scalar) -> "Operator":
        return Operator(scalar * self.mat, self.space)


@dataclass(eq=False)
class DensityMatrix:
    """Hermitian unit-trace operator; the simulator's state.

    Construction enforces Hermiticity/trace within the stored tolerances and
    positivity of the spectrum down to ``eig_floor``; ``validate`` re-checks
    at any time (evolution uses looser trace bounds, see the integrator).
    """

    op: Operator
    herm_tol: float = 1e-9
    trace_tol: float = 1e-9
    eig_floor: float = -1e-8

    def __post_init__(self):
        self.validate()

    def validate(self, check_positivity: bool = True) -> None:
        m = self.op.mat
        herm_dev = np.max(np.abs(m - m.conj().T))
        if herm_dev > self.herm_tol:
            raise ValueError(f"not Hermitian: max deviation {herm_dev:.3e}")
        trace_dev = abs(m.trace() - 1.0)
        if trace_dev > self.trace_tol:
            raise ValueError(f"trace deviates from 1 by {trace_dev:.3e}")
        if check_positivity:
            lowest = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
            if lowest < self.eig_floor:
                raise ValueError(f"negative eigenvalue {lowest:.3e} below floor")

    @property
    def mat(self) -> np.ndarray:
        return self.op.mat

    @property
    def space(self) -> SpaceTag:
        return self.op.space

    def expect(self, operator: Operator) -> complex:
        if operator.space != self.op.space:
            raise DimensionMismatchError("expectation on mismatched space")
        return complex(np.trace(operator.mat @ self.op.mat))

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    def tail_population(self) -> float:
        """Total population in the top two Fock levels (phonon marginal)."""
        pops = phonon_populations(self)
        return float(pops[-2:].sum())


def ladder_ops(trunc: FockTruncation) -> tuple[Operator, Operator, Operator]:
    """Annihilation, creation and number operators on the truncated space."""
    d = trunc.dim
    space = SpaceTag("phonon", trunc.n_max)
    a = np.zeros((d, d), dtype=complex)
    ns = np.arange(1, d)
    a[ns - 1, ns] = np.sqrt(ns)
    a_dag = a.conj().T
    return Operator(a, space), Operator(a_dag, space), Operator(a_dag @ a, space)


def identity_op(space: SpaceTag) -> Operator:
    return Operator(np.eye(space.dim, dtype=complex), space)


def parity_signs(trunc: FockTruncation) -> np.ndarray:
    """(-1)^n for n = 0..n_max."""
    return (-1.0) ** np.arange(trunc.dim)


def displacement_op(trunc: FockTruncation, alpha: complex) -> Operator:
    """Displacement exp(alpha a^dag - alpha* a) from its closed-form matrix elements.

    Uses the associated-Laguerre expression in the Fock basis (the matrix
    exponential serves as an independent test oracle only).  Unitary on the
    retained subspace up to truncation error; a warning is raised when
    D^dag D deviates from identity by more than 1e-6 on the lower half of
    the space, which signals that the truncation is too small for |alpha|.
    """
    d = trunc.dim
    space = SpaceTag("phonon", trunc.n_max)
    if alpha == 0:
        return identity_op(space)

    m, n = np.indices((d, d))
    lo, hi = np.minimum(m, n), np.maximum(m, n)
    k = hi - lo
    x = abs(alpha) ** 2
    # sqrt(lo!/hi!) via log-gamma; stable up to hundreds of levels.
    amp = np.exp(0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) - 0.5 * x)
    lag = eval_genlaguerre(lo, k, x)
    upper = np.where(m >= n, alpha**k, 1.0)  # m >= n carries alpha^(m-n)
    lower = np.where(m < n, (-np.conj(alpha)) ** k, 1.0)
    mat = amp * lag * upper * lower

    half = d // 2
    unit_dev = np.max(np.abs((mat.conj().T @ mat - np.eye(d))[:half, :half]))
    if unit_dev > 1e-6:
        warnings.warn(
            f"displacement(|alpha|={abs(alpha):.3g}) loses unitarity "
            f"({unit_dev:.2e}) on the lower half of a {d}-level space",
            DisplacementTruncationWarning,
            stacklevel=2,
        )
    return Operator(mat, space)


def thermal_populations(trunc: FockTruncation, nbar: float) -> np.ndarray:
    """Geometric thermal populations, renormalized on the truncated space."""
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    if nbar == 0:
        p = np.zeros(trunc.dim)
        p[0] = 1.0
        return p
    ratio = nbar / (1.0 + nbar)
    p = ratio ** np.arange(trunc.dim) / (1.0 + nbar)
    tail = 1.0 - p.sum()
    if tail > trunc.tail_tolerance:
        warnings.warn(
            f"thermal tail {tail:.2e} above truncation exceeds tolerance "
            f"{trunc.tail_tolerance:.1e}",
            ThermalTailWarning,
            stacklevel=3,
        )
    return p / p.sum()


def displaced_thermal_state(
    trunc: FockTruncation, nbar: float, alpha: complex
) -> DensityMatrix:
    """D(alpha) rho_thermal(nbar) D(alpha)^dag, renormalized to unit trace."""
    pops = thermal_populations(trunc, nbar)
    disp = displacement_op(trunc, alpha)
    mat = (disp.mat * pops) @ disp.mat.conj().T
    mat = 0.5 * (mat + mat.conj().T)
    mat /= mat.trace().real
    state = DensityMatrix(Operator(mat, disp.space))
    tail = state.tail_population()
    if tail > trunc.tail_tolerance:
        warnings.warn(
            f"displaced thermal state keeps {tail:.2e} population in the top "
            f"two levels (tolerance {trunc.tail_tolerance:.1e})",
            ThermalTailWarning,
            stacklevel=2,
        )
    return state


def coherent_state(trunc: FockTruncation, alpha: complex) -> DensityMatrix:
    return displaced_thermal_state(trunc, 0.0, alpha)


def vacuum_state(trunc: FockTruncation) -> DensityMatrix:
    return fock_state(trunc, 0)


def fock_state(trunc: FockTruncation, n: int) -> DensityMatrix:
    if not 0 <= n <= trunc.n_max:
        raise ValueError(f"level {n} outside 0..{trunc.n_max}")
    mat = np.zeros((trunc.dim, trunc.dim), dtype=complex)
    mat[n, n] = 1.0
    return DensityMatrix(Operator(mat, SpaceTag("phonon", trunc.n_max)))


def tensor_with_spin(phonon_op: Operator, spin_mat: np.ndarray) -> Operator:
    """Joint operator spin (x) phonon, spin factor ordered first."""
    spin_mat = np.asarray(spin_mat, dtype=complex)
    if spin_mat.shape != (2, 2):
        raise DimensionMismatchError("spin factor must be 2x2")
    if phonon_op.space.kind != "phonon":
        raise DimensionMismatchError("phonon factor must be phonon-tagged")
    joint = SpaceTag("spin_phonon", phonon_op.space.n_max)
    return Operator(np.kron(spin_mat, phonon_op.mat), joint)


def lift_to_joint(rho: DensityMatrix) -> DensityMatrix:
    """Embed a phonon state as (spin down) (x) rho."""
    if rho.space.kind != "phonon":
        raise DimensionMismatchError("expected a phonon-space state")
    op = tensor_with_spin(rho.op, SPIN_DOWN)
    return DensityMatrix(op, rho.herm_tol, rho.trace_tol, rho.eig_floor)


def phonon_marginal_mat(mat: np.ndarray, n_max: int) -> np.ndarray:
    """Partial trace over the spin of a joint-space matrix."""
    d = n_max + 1
    if mat.shape != (2 * d, 2 * d):
        raise DimensionMismatchError("matrix is not on the joint space")
    return mat[:d, :d] + mat[d:, d:]


def reduce_to_phonon(rho: DensityMatrix) -> DensityMatrix:
    """Phonon marginal of a joint spin-phonon state."""
    if rho.space.kind != "spin_phonon":
        raise DimensionMismatchError("expected a spin_phonon state")
    red = phonon_marginal_mat(rho.mat, rho.space.n_max)
    op = Operator(red, SpaceTag("phonon", rho.space.n_max))
    return DensityMatrix(op, rho.herm_tol, rho.trace_tol, rho.eig_floor)


def phonon_populations(rho: DensityMatrix) -> np.ndarray:
    """Diagonal Fock populations (marginalized over spin if joint)."""
    if rho.space.kind == "spin_phonon":
        m = phonon_marginal_mat(rho.mat, rho.space.n_max)
        return np.real(np.diag(m))
    return np.real(np.diag(rho.mat))


def check_tail(rho: DensityMatrix, trunc: FockTruncation) -> float:
    """Return the top-two-level population (callers raise on violation)."""
    return rho.tail_population()
