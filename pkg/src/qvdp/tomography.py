"""Phase-space observables: polar Wigner function, phase distribution,
circular synchronization statistics, amplitudes, ring and limit-cycle radii.

Wigner normalization is the probability convention, integral of W over the
plane = 1, so the vacuum peaks at 2/pi and P(phi) = integral of W r dr is a
true density on the circle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    NoLimitCycleError,
    PhaseDistributionWarning,
    QvdpError,
    RingProfileWarning,
    WignerNormalizationWarning,
)
from .fock import DensityMatrix, FockTruncation, ladder_ops, displacement_op, parity_signs

DEFAULT_R_MAX = 4.0
DEFAULT_N_R = 60
DEFAULT_N_PHI = 120


@dataclass
class WignerGrid:
    """W(r, phi) sampled on a polar grid.

    ``r_axis`` is increasing from 0, ``phi_axis`` uniform on [0, 2pi);
    ``values[i, j]`` = W(r_i, phi_j).
    """

    r_axis: np.ndarray
    phi_axis: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (len(self.r_axis), len(self.phi_axis)):
            raise ValueError("values shape does not match the axes")

    def mass(self) -> float:
        """Total integral of W over the sampled disc (trapezoid in r, exact in phi)."""
        dphi = 2 * np.pi / len(self.phi_axis)
        radial = np.trapezoid(self.values * self.r_axis[:, None], self.r_axis, axis=0)
        return float(radial.sum() * dphi)


@dataclass
class PhaseDistribution:
    """P(phi) on the same uniform angular grid as the source Wigner function."""

    phi_axis: np.ndarray
    p: np.ndarray

    def total(self) -> float:
        return float(self.p.sum() * 2 * np.pi / len(self.phi_axis))


def wigner_polar(
    rho: DensityMatrix,
    r_max: float = DEFAULT_R_MAX,
    n_r: int = DEFAULT_N_R,
    n_phi: int = DEFAULT_N_PHI,
) -> WignerGrid:
    """Wigner function from displaced-parity expectation values.

    W(alpha) = (2/pi) Tr[rho D(alpha) P D(alpha)^+] at alpha = r e^{i phi},
    evaluated through the exact identity D(alpha) P D(alpha)^+ = D(2 alpha) P
    so every kernel element comes straight from the closed-form displacement
    matrix (no truncated operator products).  The phi dependence enters only
    through phases of the Fock off-diagonals, so one kernel per radius
    serves the whole angle row.
    """
    if r_max <= 0:
        raise ValueError("r_max must be positive")
    if rho.space.kind != "phonon":
        raise QvdpError("Wigner tomography expects a phonon-space state")
    trunc = FockTruncation(rho.space.n_max)
    d = trunc.dim
    if r_max**2 > 0.9 * trunc.n_max:
        warnings.warn(
            f"r_max^2 = {r_max**2:.1f} approaches the truncation n_max = {trunc.n_max}; "
            "Wigner values near the rim are unreliable",
            WignerNormalizationWarning,
            stacklevel=2,
        )
    parity = parity_signs(trunc)
    r_axis = np.linspace(0.0, r_max, n_r)
    phi_axis = np.arange(n_phi) * (2 * np.pi / n_phi)

    # Fourier coefficients over the angle: W(r, phi) = sum_k c_k(r) e^{i k phi}.
    ks = np.arange(-(d - 1), d)
    coeffs = np.zeros((n_r, len(ks)), dtype=complex)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # D(2r) is used as a set of exact elements
        for i, r in enumerate(r_axis):
            kernel = displacement_op(trunc, 2.0 * r).mat * parity
            t = rho.mat * kernel.T  # T_mn = rho_mn * M_nm; k = n - m groups the angle phases
            for j, k in enumerate(ks):
                coeffs[i, j] = np.trace(t, offset=k)
    w = (2 / np.pi) * coeffs @ np.exp(1j * np.outer(ks, phi_axis))
    imag_max = float(np.max(np.abs(w.imag)))
    if imag_max > 1e-8:
        raise QvdpError(f"Wigner values came out complex (max imag {imag_max:.2e})")
    grid = WignerGrid(r_axis, phi_axis, np.ascontiguousarray(w.real))

    mass = grid.mass()
    if abs(mass - 1.0) > 0.01:
        warnings.warn(
            f"Wigner mass {mass:.4f} deviates from 1 by more than 0.01; "
            f"r_max = {r_max} is probably too small for this state",
            WignerNormalizationWarning,
            stacklevel=2,
        )
    return grid


def phase_distribution(w: WignerGrid) -> PhaseDistribution:
    """P(phi): trapezoidal radial integration of W(r, phi) r dr per angle."""
    p = np.trapezoid(w.values * w.r_axis[:, None], w.r_axis, axis=0)
    neg = -float(p.min()) if p.min() < 0 else 0.0
    if neg > 0.05 * float(p.max()):
        warnings.warn(
            f"phase distribution has negative excursions ({-neg:.3e}) beyond 5% of "
            "its peak; Wigner negativity is unusually strong here",
            PhaseDistributionWarning,
            stacklevel=2,
        )
    return PhaseDistribution(w.phi_axis, p)


def sync_measure(p: PhaseDistribution) -> tuple[float, float | None]:
    """Mean resultant length S = |integral of e^{i phi} P(phi) dphi| and mean phase.

    S = 0 for a phase-symmetric state, 1 for a delta-like locked state.  The
    mean phase is undefined (None) when S < 1e-6.  Negative excursions of P
    are kept; clipping would bias the statistic.
    """
    dphi = 2 * np.pi / len(p.phi_axis)
    z = complex(np.sum(np.exp(1j * p.phi_axis) * p.p) * dphi)
    s = abs(z)
    mean_phase = float(np.angle(z) % (2 * np.pi)) if s >= 1e-6 else None
    return s, mean_phase


def circular_variance(p: PhaseDistribution) -> float:
    """1 - S; decreases as the distribution narrows."""
    s, _ = sync_measure(p)
    return 1.0 - s


def mean_amplitude(rho: DensityMatrix) -> complex:
    """Tr(rho a)."""
    if rho.space.kind != "phonon":
        raise QvdpError("mean amplitude expects a phonon-space state")
    a, _, _ = ladder_ops(FockTruncation(rho.space.n_max))
    return complex(np.trace(rho.mat @ a.mat))


def mean_phonon_number(rho: DensityMatrix) -> float:
    if rho.space.kind != "phonon":
        raise QvdpError("mean phonon number expects a phonon-space state")
    return float(np.real(np.diag(rho.mat)) @ np.arange(rho.space.n_max + 1))


def classical_limit_radius(gamma1_plus: float, gamma1_minus: float, gamma2: float) -> float:
    """Radius 2 sqrt((g1p - g1m)/g2) of the classical limit cycle."""
    if gamma2 <= 0:
        raise ValueError("gamma2 must be positive")
    if gamma1_plus < gamma1_minus:
        raise NoLimitCycleError(
            "linear loss exceeds pumping; the classical oscillator spirals to rest"
        )
    return 2.0 * float(np.sqrt((gamma1_plus - gamma1_minus) / gamma2))


def ring_radius(w: WignerGrid) -> float:
    """Peak radius of the angle-averaged Wigner profile (no r weighting).

    Matches how a ring is drawn on a Wigner plot: the crest of the profile,
    refined by quadratic interpolation around the grid maximum.  Warns when
    the state is visibly not phase symmetric (S > 0.05), where a single ring
    radius stops being meaningful.
    """
    s, _ = sync_measure(phase_distribution(w))
    if s > 0.05:
        warnings.warn(
            f"ring radius of a non-phase-symmetric state (S = {s:.3f})",
            RingProfileWarning,
            stacklevel=2,
        )
    profile = w.values.mean(axis=1)
    i = int(np.argmax(profile))
    if i == 0 or i == len(profile) - 1:
        return float(w.r_axis[i])
    ym, y0, yp = profile[i - 1], profile[i], profile[i + 1]
    denom = ym - 2 * y0 + yp
    shift = 0.0 if denom == 0 else 0.5 * (ym - yp) / denom
    dr = w.r_axis[1] - w.r_axis[0]
    return float(w.r_axis[i] + shift * dr)


def local_maxima(
    w: WignerGrid, rel_threshold: float = 0.5, min_separation: float = 0.5
) -> list[tuple[float, float, float]]:
    """Well-separated local maxima of W above ``rel_threshold`` * max(W).

    Neighborhood test on the polar grid (angle wraps around); maxima closer
    than ``min_separation`` in the plane collapse onto the stronger one.
    Returns (r, phi, value) triples sorted by decreasing value.
    """
    v = w.values
    thresh = rel_threshold * float(v.max())
    up = np.roll(v, -1, axis=1)
    down = np.roll(v, 1, axis=1)
    inner = np.zeros_like(v, dtype=bool)
    inner[1:-1] = (
        (v[1:-1] >= v[:-2]) & (v[1:-1] >= v[2:])
        & (v[1:-1] >= up[1:-1]) & (v[1:-1] >= down[1:-1])
        & (v[1:-1] > thresh)
    )
    cands = [
        (float(w.r_axis[i]), float(w.phi_axis[j]), float(v[i, j]))
        for i, j in zip(*np.nonzero(inner))
    ]
    cands.sort(key=lambda t: -t[2])
    kept: list[tuple[float, float, float]] = []
    for r, phi, val in cands:
        x, y = r * np.cos(phi), r * np.sin(phi)
        if all(
            np.hypot(x - rk * np.cos(pk), y - rk * np.sin(pk)) >= min_separation
            for rk, pk, _ in kept
        ):
            kept.append((r, phi, val))
    return kept
