"""Quantum van der Pol oscillator toolkit.

Exact Lindblad dynamics of the driven-dissipative nonlinear oscillator,
pulse-level emulation of its trapped-ion reservoir-engineering realization,
and Wigner-function synchronization metrics, plus a config-driven experiment
runner (see ``qvdp.cli``).
"""

from .fock import (
    DensityMatrix,
    FockTruncation,
    Operator,
    SpaceTag,
    coherent_state,
    displaced_thermal_state,
    displacement_op,
    fock_state,
    ladder_ops,
    tensor_with_spin,
    vacuum_state,
)
from .lindblad import (
    Trajectory,
    VdpParams,
    dissipator_apply,
    evolve,
    liouvillian_apply,
    liouvillian_superoperator,
    steady_state,
    vdp_hamiltonian,
)

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "FockTruncation",
    "Operator",
    "SpaceTag",
    "Trajectory",
    "VdpParams",
    "coherent_state",
    "displaced_thermal_state",
    "displacement_op",
    "dissipator_apply",
    "evolve",
    "fock_state",
    "ladder_ops",
    "liouvillian_apply",
    "liouvillian_superoperator",
    "steady_state",
    "tensor_with_spin",
    "vacuum_state",
    "vdp_hamiltonian",
]
