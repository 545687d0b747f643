"""Control-pulse design: place a third dark-state node on the unwanted target.

The node condition factorizes into a phase equation, a peak-amplitude
equation with Gaussian-overlap factors, and width/center matching that makes
the pump*branching and Stokes*control envelope products identical in time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import NoPositiveWidth, RestrictionViolated, ZeroDipole
from .pulse import PulseEnvelope, PulseRole, rabi_set
from .spectrum import node_residual, dark_components, pair_scale
from .superposition import TargetSuperposition, rotated_system
from .system import FiveLevelSystem, couplings_accidental

SuppressedTarget = Union[int, TargetSuperposition]


@dataclass(frozen=True)
class DesignProblem:
    system: FiveLevelSystem
    pump: PulseEnvelope
    stokes: PulseEnvelope
    branching: PulseEnvelope
    suppressed_target: SuppressedTarget = 3

    def __post_init__(self):
        for pulse, role in (
            (self.pump, PulseRole.PUMP),
            (self.stokes, PulseRole.STOKES),
            (self.branching, PulseRole.BRANCHING),
        ):
            if pulse.role is not role:
                raise ValueError(f"expected a {role.value} pulse, got {pulse.role.value}")
        _validate_target(self.suppressed_target)


@dataclass(frozen=True)
class DesignSolution:
    control: PulseEnvelope
    residual_report: float
    restriction_ok: bool


def _validate_target(target: SuppressedTarget):
    if not isinstance(target, TargetSuperposition) and target not in (3, 4):
        raise ValueError(f"suppressed target must be 3, 4, or a TargetSuperposition, got {target!r}")


def _working_frame(system: FiveLevelSystem, target: SuppressedTarget):
    """Map a superposition target onto the level-3 design in the rotated frame."""
    _validate_target(target)
    if isinstance(target, TargetSuperposition):
        return rotated_system(system, target), 3
    return system, target


def solve_timing(
    width_pump: float,
    width_stokes: float,
    width_branching: float,
    center_pump: float,
    center_stokes: float,
    center_branching: float,
) -> tuple[float, float]:
    """Control width and center that match the two Gaussian envelope products.

    Equates inverse-square widths (1/T_P^2 + 1/T_B^2 = 1/T_S^2 + 1/T_C^2) and
    the weighted centers of the two products.  Raises NoPositiveWidth when
    the width equation has no positive solution.
    """
    if min(width_pump, width_stokes, width_branching) <= 0:
        raise ValueError("pulse widths must be positive")
    inv_tc2 = 1.0 / width_pump**2 + 1.0 / width_branching**2 - 1.0 / width_stokes**2
    if inv_tc2 <= 0:
        raise NoPositiveWidth(
            "pump/branching widths are too broad relative to the Stokes width; "
            "no Gaussian control pulse matches the envelope products"
        )
    width_control = 1.0 / math.sqrt(inv_tc2)
    wp2, wb2 = width_pump**2, width_branching**2
    ws2, wc2 = width_stokes**2, width_control**2
    product_center = (wb2 * center_pump + wp2 * center_branching) / (wp2 + wb2)
    center_control = ((ws2 + wc2) * product_center - wc2 * center_stokes) / ws2
    return width_control, center_control


def solve_phase(
    system: FiveLevelSystem,
    suppressed_target: SuppressedTarget = 3,
    phi_pump: float = 0.0,
    phi_stokes: float = 0.0,
    phi_branching: float = 0.0,
) -> float:
    """Control-pulse phase (in [-pi, pi)) that aligns the node cross products.

    Suppressing level 4 swaps the roles of the two target couplings; a
    superposition target uses the rotated-frame dipole phases.
    """
    sys_w, level = _working_frame(system, suppressed_target)
    if level == 3:
        alpha = sys_w.d45.phase + sys_w.d24.phase + sys_w.d12.phase - sys_w.d15.phase
    else:
        alpha = sys_w.d35.phase + sys_w.d23.phase + sys_w.d12.phase - sys_w.d15.phase
    phi = alpha + phi_pump + phi_stokes - phi_branching
    return float((phi + math.pi) % (2.0 * math.pi) - math.pi)


def solve_amplitude(
    system: FiveLevelSystem,
    pump: PulseEnvelope,
    stokes: PulseEnvelope,
    branching: PulseEnvelope,
    control_width: float,
    control_center: float,
    suppressed_target: SuppressedTarget = 3,
) -> float:
    """Control field amplitude that balances the two coupling chains.

    Each side carries the Gaussian overlap factor of its pulse pair,
    exp[-(t_X - t_Y)^2 / (T_X^2 + T_Y^2)].
    """
    sys_w, level = _working_frame(system, suppressed_target)
    mu_s = sys_w.d24.magnitude if level == 3 else sys_w.d23.magnitude
    mu_b = sys_w.d45.magnitude if level == 3 else sys_w.d35.magnitude
    if mu_s <= 0 or sys_w.d15.magnitude <= 0:
        raise ZeroDipole("the Stokes-side target dipole and the control dipole must be nonzero")
    if stokes.peak_amplitude <= 0:
        raise ValueError("Stokes amplitude must be positive to solve for the control amplitude")
    overlap_pb = math.exp(
        -((pump.center - branching.center) ** 2) / (pump.width**2 + branching.width**2)
    )
    overlap_sc = math.exp(
        -((stokes.center - control_center) ** 2) / (stokes.width**2 + control_width**2)
    )
    return (
        pump.peak_amplitude
        * branching.peak_amplitude
        * system.d12.magnitude
        * mu_b
        * overlap_pb
    ) / (stokes.peak_amplitude * mu_s * sys_w.d15.magnitude * overlap_sc)


def check_restriction(system: FiveLevelSystem, suppressed_target: SuppressedTarget = 3) -> bool:
    """True when the dipole-ratio restriction holds (branching control possible)."""
    sys_w, _ = _working_frame(system, suppressed_target)
    return not couplings_accidental(sys_w)


def residual_series(
    system: FiveLevelSystem,
    pulses,
    times,
    level: int,
) -> np.ndarray:
    """Node residual of `node_residual` evaluated at an array of times."""
    rabis = rabi_set(system, pulses, np.asarray(times, dtype=float))
    _, v3, v4 = dark_components(rabis)
    scale = pair_scale(rabis)
    raw = np.abs(v3 if level == 3 else v4)
    return np.where(scale > 0, raw / np.where(scale > 0, scale, 1.0), 0.0)


def design_control_pulse(problem: DesignProblem, samples: int = 1000) -> DesignSolution:
    """Solve timing, phase, and amplitude for the control pulse.

    The returned solution's residual report is the maximum node residual over
    `samples` times spanning four max-widths around the pulse cluster; exact
    solutions sit at the floating-point floor.
    """
    system, target = problem.system, problem.suppressed_target
    if not check_restriction(system, target):
        raise RestrictionViolated(
            "dipole ratios coincide; the dark state cannot separate the two targets"
        )
    width_c, center_c = solve_timing(
        problem.pump.width,
        problem.stokes.width,
        problem.branching.width,
        problem.pump.center,
        problem.stokes.center,
        problem.branching.center,
    )
    phi_c = solve_phase(
        system,
        target,
        phi_pump=problem.pump.phase,
        phi_stokes=problem.stokes.phase,
        phi_branching=problem.branching.phase,
    )
    amp_c = solve_amplitude(
        system,
        problem.pump,
        problem.stokes,
        problem.branching,
        width_c,
        center_c,
        target,
    )
    control = PulseEnvelope(
        role=PulseRole.CONTROL,
        peak_amplitude=amp_c,
        center=center_c,
        width=width_c,
        phase=phi_c,
    )
    sys_w, level = _working_frame(system, target)
    four = [problem.pump, problem.stokes, problem.branching, control]
    centers = [p.center for p in four]
    max_width = max(p.width for p in four)
    ts = np.linspace(min(centers) - 4 * max_width, max(centers) + 4 * max_width, samples)
    residual = float(residual_series(sys_w, four, ts, level).max())
    return DesignSolution(control=control, residual_report=residual, restriction_ok=True)


def control_peak_rabi(system: FiveLevelSystem, control: PulseEnvelope) -> complex:
    """Peak complex Rabi frequency of a control pulse on the (1,5) coupling."""
    return complex(
        system.d15.magnitude
        * (control.peak_amplitude / 2.0)
        * np.exp(1j * (control.phase + system.d15.phase))
    )
