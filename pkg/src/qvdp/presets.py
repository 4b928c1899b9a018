"""Built-in experiment presets.

Each preset bundles the dissipation rates, drive strengths, pulse timings
and sampling program of one demonstration scenario: the free limit cycle
(fig2), entrainment and phase locking (fig3a/fig3b), phase-distribution
narrowing (fig3c), the Arnold tongue (fig3d), the dissipation boost in
three damping regimes (fig4a_*, figS2) and the squeezing scan with its
bifurcation (fig4bc).

Conventions: rates are quoted in kHz and convert as 1 kHz = 1000/s; drive
strengths are quoted in Hz and convert as angular frequencies (2 pi x Hz).
The drive is oriented along the pi/2 phase-space direction, matching where
the locked phase is observed; theta stays the squeeze-vs-drive angle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

TWOPI = 2 * np.pi
DRIVE_PHASE = np.pi / 2

KHZ = 1e3
US = 1e-6


@dataclass(frozen=True)
class PresetSpec:
    """Raw numbers of one scenario, before engine-specific construction."""

    name: str
    scenario: str
    # master-equation parameters (canonical units: 1/s, rad/s, rad)
    gamma1_plus: float
    gamma1_minus: float
    gamma_h: float
    gamma2: float
    omega: float = 0.0
    omega2: float = 0.0
    delta: float = 0.0
    theta: float = 0.0
    drive_phase: float = DRIVE_PHASE
    n_max: int = 30
    # pulse program (seconds)
    tau_bsb: float = 0.0
    tau_rsb: float = 0.0
    tau_2rsb: float = 0.0
    tau_sq: float = 0.0
    tau_reset: float = 0.0
    cycle_period: float = 0.0
    n_cycles: int = 0
    # run program
    steady: bool = False
    sample_cycles: tuple[int, ...] = ()
    initial_state: dict = field(default_factory=lambda: {"kind": "vacuum"})
    sweep: tuple = ()
    # tomography grid
    r_max: float = 4.0
    n_r: int = 60
    n_phi: int = 120
    note: str = ""

    @property
    def sample_times(self) -> tuple[float, ...]:
        return tuple(k * self.cycle_period for k in self.sample_cycles)


def _axis(params, values):
    return {"params": tuple(params), "values": tuple(tuple(v) for v in values)}


_PRESETS: dict[str, PresetSpec] = {}


def _register(spec: PresetSpec):
    _PRESETS[spec.name] = spec
    return spec


_register(
    PresetSpec(
        name="fig2",
        scenario="limit_cycle",
        gamma1_plus=2.06 * KHZ,
        gamma1_minus=0.09 * KHZ,
        gamma_h=0.09 * KHZ,
        gamma2=1.11 * KHZ,
        tau_bsb=40 * US,
        tau_2rsb=150 * US,
        tau_reset=10 * US,
        cycle_period=200 * US,
        n_cycles=20,
        sample_cycles=(0, 3, 10, 20),
        initial_state={"kind": "displaced_thermal", "nbar": 1.5, "alpha": 1.0},
        note="free limit cycle from a displaced thermal state",
    )
)

_register(
    PresetSpec(
        name="fig3a",
        scenario="entrainment",
        gamma1_plus=0.28 * KHZ,
        gamma1_minus=0.12 * KHZ,
        gamma_h=0.12 * KHZ,
        gamma2=1.48 * KHZ,
        omega=TWOPI * 160,
        tau_bsb=10 * US,
        tau_2rsb=120 * US,
        tau_reset=10 * US,
        cycle_period=150 * US,
        n_cycles=22,
        sample_cycles=tuple(range(0, 23, 2)),
        initial_state={"kind": "coherent", "alpha": 0.0},
        sweep=(
            _axis(
                ("initial_alpha_re", "initial_alpha_im"),
                [(0.0, 0.0), (0.0, 0.5), (0.0, 1.0)],
            ),
        ),
        note="entrainment of the mean amplitude from several initial states",
    )
)

_register(
    PresetSpec(
        name="fig3b",
        scenario="phase_locking",
        gamma1_plus=0.23 * KHZ,
        gamma1_minus=0.09 * KHZ,
        gamma_h=0.09 * KHZ,
        gamma2=1.31 * KHZ,
        omega=TWOPI * 173,
        tau_bsb=10 * US,
        tau_2rsb=150 * US,
        tau_reset=10 * US,
        cycle_period=170 * US,
        n_cycles=24,
        sample_cycles=(0, 2, 3, 4, 6, 9, 12, 15, 18, 20, 22, 24),
        initial_state={"kind": "coherent", "alpha": -1.0},
        note="phase locking of an initially anti-aligned coherent state",
    )
)

_register(
    PresetSpec(
        name="fig3c",
        scenario="phase_distribution",
        gamma1_plus=0.23 * KHZ,
        gamma1_minus=0.09 * KHZ,
        gamma_h=0.09 * KHZ,
        gamma2=1.31 * KHZ,
        tau_bsb=10 * US,
        tau_2rsb=150 * US,
        tau_reset=10 * US,
        cycle_period=170 * US,
        n_cycles=20,
        steady=True,
        sweep=(_axis(("omega_hz_over_2pi",), [(0,), (17,), (43,), (87,), (130,), (173,)]),),
        note="steady phase distribution narrowing with drive strength",
    )
)

_register(
    PresetSpec(
        name="fig3d",
        scenario="arnold_tongue",
        gamma1_plus=0.28 * KHZ,
        gamma1_minus=0.12 * KHZ,
        gamma_h=0.12 * KHZ,
        gamma2=1.48 * KHZ,
        tau_bsb=10 * US,
        tau_2rsb=120 * US,
        tau_reset=10 * US,
        cycle_period=150 * US,
        n_cycles=48,
        steady=True,
        sweep=(
            _axis(("omega_hz_over_2pi",), [(45,), (91,), (136,), (181,)]),
            _axis(("delta_hz_over_2pi",), [(-272,), (-136,), (0,), (136,), (272,)]),
        ),
        note="synchronization region over drive strength and detuning",
    )
)

_FIG4A_G1M = [(0.12 * KHZ,), (0.27 * KHZ,), (0.74 * KHZ,), (1.33 * KHZ,), (2.12 * KHZ,)]
_FIG4A_G1M_KHZ = [(0.12,), (0.27,), (0.74,), (1.33,), (2.12,)]

_register(
    PresetSpec(
        name="fig4a_quantum",
        scenario="dissipation_boost",
        gamma1_plus=0.16 * KHZ,
        gamma1_minus=0.12 * KHZ,
        gamma_h=0.12 * KHZ,
        gamma2=0.22 * KHZ,
        omega=TWOPI * 76,
        tau_bsb=5 * US,
        tau_rsb=10 * US,
        tau_2rsb=50 * US,
        tau_reset=15 * US,
        cycle_period=160 * US,
        n_cycles=37,
        steady=True,
        sweep=(_axis(("gamma1_minus_khz",), _FIG4A_G1M_KHZ),),
        note="single-phonon dissipation scan, quantum regime",
    )
)

_register(
    PresetSpec(
        name="fig4a_deep",
        scenario="dissipation_boost",
        gamma1_plus=0.16 * KHZ,
        gamma1_minus=0.12 * KHZ,
        gamma_h=0.12 * KHZ,
        gamma2=1.25 * KHZ,
        omega=TWOPI * 76,
        tau_bsb=5 * US,
        tau_rsb=10 * US,
        tau_2rsb=120 * US,
        tau_reset=15 * US,
        cycle_period=160 * US,
        n_cycles=37,
        steady=True,
        sweep=(_axis(("gamma1_minus_khz",), _FIG4A_G1M_KHZ),),
        note="single-phonon dissipation scan, deep quantum regime",
    )
)

_register(
    PresetSpec(
        name="fig4a_semiclassical",
        scenario="dissipation_boost",
        gamma1_plus=0.16 * KHZ,
        gamma1_minus=0.12 * KHZ,
        gamma_h=0.12 * KHZ,
        gamma2=0.06 * 0.16 * KHZ,
        omega=TWOPI * 76,
        n_max=120,
        tau_bsb=5 * US,
        tau_rsb=10 * US,
        tau_2rsb=120 * US,
        tau_reset=15 * US,
        cycle_period=160 * US,
        n_cycles=37,
        steady=True,
        sweep=(_axis(("gamma1_minus_khz",), _FIG4A_G1M_KHZ),),
        r_max=7.0,
        n_r=90,
        note="weak nonlinear damping; not reachable on hardware, simulation only",
    )
)

_register(
    PresetSpec(
        name="fig4bc",
        scenario="squeezing_scan",
        gamma1_plus=0.23 * KHZ,
        gamma1_minus=0.12 * KHZ,
        gamma_h=0.12 * KHZ,
        gamma2=1.01 * KHZ,
        omega=TWOPI * 43,
        tau_bsb=10 * US,
        tau_2rsb=150 * US,
        tau_sq=35 * US,
        tau_reset=15 * US,
        cycle_period=220 * US,
        n_cycles=20,
        steady=True,
        sweep=(
            _axis(
                ("omega2_hz_over_2pi", "theta_rad"),
                [
                    (0, 0.0),
                    (32, 0.0),
                    (63, 0.0),
                    (32, np.pi / 2),
                    (63, np.pi / 2),
                ],
            ),
        ),
        note="squeeze axis perpendicular (theta=0) or parallel (theta=pi/2) to the drive",
    )
)

_register(
    PresetSpec(
        name="figS2",
        scenario="dissipation_boost",
        gamma1_plus=0.16 * KHZ,
        gamma1_minus=0.12 * KHZ,
        gamma_h=0.12 * KHZ,
        gamma2=0.22 * KHZ,
        omega=TWOPI * 76,
        tau_bsb=5 * US,
        tau_rsb=10 * US,
        tau_2rsb=50 * US,
        tau_reset=15 * US,
        cycle_period=160 * US,
        n_cycles=37,
        steady=True,
        sweep=(
            _axis(("gamma2_khz",), [(0.22,), (1.25,)]),
            _axis(("gamma1_minus_khz",), _FIG4A_G1M_KHZ),
        ),
        note="quantum vs deep-quantum dissipation scans side by side",
    )
)


def preset_names() -> list[str]:
    return sorted(_PRESETS)


def get_preset(name: str) -> PresetSpec:
    if name not in _PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(preset_names())}")
    spec = _PRESETS[name]
    if spec.n_max > 60:
        warnings.warn(
            f"preset {name!r} uses n_max = {spec.n_max}: dense states of "
            f"{(spec.n_max + 1)**2} entries per sample; expect long runtimes",
            ResourceWarning,
            stacklevel=2,
        )
    return spec


def quoted_ratio_checks() -> list[tuple[str, float, float]]:
    """(label, value from preset tables, quoted value) for the units self-test.

    Every dimensionless ratio quoted in the narrative must come out of the
    unit conventions within rounding; this is the guard on the kHz / Hz
    conversion rules.
    """
    p = _PRESETS
    return [
        ("fig3a omega/gamma1+", p["fig3a"].omega / p["fig3a"].gamma1_plus, 3.5),
        ("fig3b omega/gamma1+", p["fig3b"].omega / p["fig3b"].gamma1_plus, 4.7),
        ("fig3b gamma2/gamma1+", p["fig3b"].gamma2 / p["fig3b"].gamma1_plus, 5.7),
        ("fig3a gamma2/gamma1+", p["fig3a"].gamma2 / p["fig3a"].gamma1_plus, 5.2),
        ("fig4a_deep gamma2/gamma1+", p["fig4a_deep"].gamma2 / p["fig4a_deep"].gamma1_plus, 7.9),
        ("fig4bc gamma2/gamma1+", p["fig4bc"].gamma2 / p["fig4bc"].gamma1_plus, 4.4),
        ("fig4bc omega/gamma1+", p["fig4bc"].omega / p["fig4bc"].gamma1_plus, 1.2),
        (
            "fig2 gamma2/(gamma1+ - gamma1-)",
            p["fig2"].gamma2 / (p["fig2"].gamma1_plus - p["fig2"].gamma1_minus),
            0.56,
        ),
        ("fig4a omega/gamma1+", p["fig4a_deep"].omega / p["fig4a_deep"].gamma1_plus, 3.0),
        (
            "fig4a_quantum gamma2/gamma1+",
            p["fig4a_quantum"].gamma2 / p["fig4a_quantum"].gamma1_plus,
            1.4,
        ),
    ]
