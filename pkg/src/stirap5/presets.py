"""Bundled example scenarios (fig2a..fig5): peak Rabi values and pulse geometry."""

from __future__ import annotations

import math

from .config import ExperimentConfig
from .pulse import RABI_UNIT_FIELD, PulseEnvelope, PulseRole
from .superposition import TargetSuperposition
from .system import FiveLevelSystem

_SQRT2 = math.sqrt(2.0)
_E2 = math.exp(2.0)


def _pulse(role: PulseRole, center: float, width: float) -> PulseEnvelope:
    return PulseEnvelope(role=role, peak_amplitude=RABI_UNIT_FIELD, center=center, width=width)


def _config(name, system, pump, stokes, branching, control, target) -> ExperimentConfig:
    return ExperimentConfig(
        name=name,
        system=system,
        pump=pump,
        stokes=stokes,
        branching=branching,
        control=control,
        solve_control=False,
        target=target,
        grid=None,
        output_stem=name,
    )


def _build() -> dict[str, ExperimentConfig]:
    # Overlapping geometry: Stokes/branching peak first, pump/control one width later.
    pump = _pulse(PulseRole.PUMP, 1.0, 1.0)
    stokes = _pulse(PulseRole.STOKES, 0.0, 1.0)
    branching = _pulse(PulseRole.BRANCHING, 0.0, 1.0)
    control = _pulse(PulseRole.CONTROL, 1.0, 1.0)
    # Staggered geometry: branching between Stokes and pump, control trailing.
    branching_mid = _pulse(PulseRole.BRANCHING, 0.5, _SQRT2)
    control_late = _pulse(PulseRole.CONTROL, 2.5, _SQRT2)

    sys_a = FiveLevelSystem.from_peak_rabis(40, 30, 20 + 20j, 20, 30 + 20j, 10 + 50j)
    sys_b = FiveLevelSystem.from_peak_rabis(40, 10, 20 + 20j, 80j, 30 + 20j, 10 + 50j)
    sys_a3 = FiveLevelSystem.from_peak_rabis(40, 30, 20 + 20j, 20, 30 + 20j, (10 + 50j) * _E2)
    sys_b3 = FiveLevelSystem.from_peak_rabis(40, 10, 20 + 20j, 80j, 30 + 20j, (10 + 50j) * _E2)
    # Target lifetime (population) of a tenth of the pulse width: Gamma = 5.
    sys_decay = FiveLevelSystem.from_peak_rabis(
        40, 30, 20 + 20j, 20, 30 + 20j, 10 + 50j, decay_rate_3=5.0, decay_rate_4=5.0
    )
    sys_super = FiveLevelSystem.from_peak_rabis(40, 30, 20 + 20j, 20, 30 + 20j, 80 + 40j)

    return {
        "fig2a": _config("fig2a", sys_a, pump, stokes, branching, control, 3),
        "fig2b": _config("fig2b", sys_b, pump, stokes, branching, control, 3),
        "fig3a": _config("fig3a", sys_a3, pump, stokes, branching_mid, control_late, 3),
        "fig3b": _config("fig3b", sys_b3, pump, stokes, branching_mid, control_late, 3),
        "fig4": _config("fig4", sys_decay, pump, stokes, branching, control, 3),
        "fig5": _config(
            "fig5",
            sys_super,
            pump,
            stokes,
            branching,
            control,
            TargetSuperposition(theta=math.pi / 4, beta=-math.pi / 2),
        ),
    }


PRESETS: dict[str, ExperimentConfig] = _build()
PRESET_NAMES = tuple(PRESETS)
