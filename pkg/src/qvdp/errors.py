"""Exception and warning types shared across the package."""


class QvdpError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(QvdpError):
    """Operands live on different Hilbert spaces."""


class TraceDriftError(QvdpError):
    """Integration lost more trace than the contract allows (step too large)."""


class TruncationTailError(QvdpError):
    """Population leaked into the top Fock levels; the truncation is too small."""


class DegenerateSteadyStateError(QvdpError):
    """The Liouvillian null space is (numerically) degenerate; no unique steady state."""


class NoLimitCycleError(QvdpError):
    """Linear loss exceeds pumping; the classical model has no limit cycle."""


class ConfigError(QvdpError):
    """Experiment configuration document is invalid."""


class SchedulingError(QvdpError):
    """Pulse schedule is inconsistent (durations, kinds, or cycle period)."""


class DisplacementTruncationWarning(UserWarning):
    """Displacement amplitude too large for the retained Fock space."""


class ThermalTailWarning(UserWarning):
    """Truncated thermal tail exceeds the configured tail tolerance."""


class WignerNormalizationWarning(UserWarning):
    """Wigner grid mass deviates from 1; r_max probably too small."""


class PhaseDistributionWarning(UserWarning):
    """Phase distribution has large negative excursions."""


class RingProfileWarning(UserWarning):
    """Ring radius requested for a state that is not phase symmetric."""
