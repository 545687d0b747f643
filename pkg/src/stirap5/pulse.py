"""Gaussian laser pulses, transition dipoles, and the six complex Rabi frequencies.

All quantities are dimensionless: times and widths in units of a reference
pulse width T, amplitudes and rates in units of 1/T.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .errors import PulseRoleError

if TYPE_CHECKING:
    from .system import FiveLevelSystem

# Field amplitude for which peak Rabi magnitude equals dipole magnitude
# (|mu| * E/2 = |mu| at E = 2).  Used by the "peak Rabi" input style.
RABI_UNIT_FIELD = 2.0


class PulseRole(str, enum.Enum):
    PUMP = "pump"
    STOKES = "stokes"
    BRANCHING = "branching"
    CONTROL = "control"


# The six laser-coupled level pairs of the five-level scheme.
COUPLED_EDGES = frozenset({(1, 2), (2, 3), (2, 4), (3, 5), (4, 5), (1, 5)})


@dataclass(frozen=True)
class PulseEnvelope:
    """One Gaussian pulse: E(t) = peak_amplitude * exp(-(t - center)^2 / width^2).

    `phase` is the optical phase entering the Rabi frequencies;
    `carrier_frequency` is inert metadata (all fields are on resonance).
    """

    role: PulseRole
    peak_amplitude: float
    center: float
    width: float
    phase: float = 0.0
    carrier_frequency: float | None = None

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError(f"pulse width must be positive, got {self.width}")
        if self.peak_amplitude < 0:
            raise ValueError(
                f"peak amplitude must be non-negative, got {self.peak_amplitude}"
            )

    def envelope(self, t):
        """Envelope value in (0, 1]; exactly 1 at t = center.  Accepts arrays."""
        return np.exp(-((t - self.center) ** 2) / self.width**2)


@dataclass(frozen=True)
class DipoleCoupling:
    """Transition dipole mu = magnitude * exp(i*phase) on one coupled edge."""

    from_level: int
    to_level: int
    magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        edge = (self.from_level, self.to_level)
        if edge not in COUPLED_EDGES:
            raise ValueError(f"no laser coupling on edge {edge}")
        if self.magnitude < 0:
            raise ValueError(f"dipole magnitude must be non-negative, got {self.magnitude}")

    @property
    def value(self) -> complex:
        return self.magnitude * np.exp(1j * self.phase)


@dataclass(frozen=True)
class RabiSet:
    """The six complex Rabi frequencies at one instant.

    Fields may also hold equal-shape arrays (one value per time sample);
    every derived quantity then broadcasts.
    """

    pump: complex
    stokes3: complex
    stokes4: complex
    branch3: complex
    branch4: complex
    control: complex

    def as_tuple(self):
        return (self.pump, self.stokes3, self.stokes4, self.branch3, self.branch4, self.control)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.as_tuple(), dtype=complex)

    def magnitudes(self):
        return tuple(np.abs(x) for x in self.as_tuple())

    def total_square(self):
        """Sum of |Omega|^2 over all six couplings."""
        return sum(np.abs(x) ** 2 for x in self.as_tuple())


def pulses_by_role(pulses: Iterable[PulseEnvelope]) -> dict[PulseRole, PulseEnvelope]:
    """Index pulses by role, requiring each role exactly once."""
    out: dict[PulseRole, PulseEnvelope] = {}
    for p in pulses:
        if p.role in out:
            raise PulseRoleError(f"duplicate {p.role.value} pulse")
        out[p.role] = p
    missing = [r.value for r in PulseRole if r not in out]
    if missing:
        raise PulseRoleError(f"missing pulse role(s): {', '.join(missing)}")
    return out


def peak_rabi_quadrature(system: "FiveLevelSystem", pulses: Iterable[PulseEnvelope]) -> float:
    """Quadrature sum of the six peak Rabi magnitudes (an upper bound on the
    instantaneous total Rabi magnitude at any time)."""
    by = pulses_by_role(pulses)
    pairs = (
        (system.d12, by[PulseRole.PUMP]),
        (system.d23, by[PulseRole.STOKES]),
        (system.d24, by[PulseRole.STOKES]),
        (system.d35, by[PulseRole.BRANCHING]),
        (system.d45, by[PulseRole.BRANCHING]),
        (system.d15, by[PulseRole.CONTROL]),
    )
    return float(
        np.sqrt(sum((dip.magnitude * pulse.peak_amplitude / 2.0) ** 2 for dip, pulse in pairs))
    )


def rabi_set(system: "FiveLevelSystem", pulses: Iterable[PulseEnvelope], t) -> RabiSet:
    """Evaluate the six Rabi frequencies at time t (scalar or array).

    Pump, Stokes, and control couplings carry exp[+i(phi_X + alpha)]; the two
    branching couplings carry exp[-i(phi_B - alpha)].  Magnitudes are
    |mu| * (E_X/2) * f_X(t).
    """
    by = pulses_by_role(pulses)
    pump, stokes = by[PulseRole.PUMP], by[PulseRole.STOKES]
    branch, control = by[PulseRole.BRANCHING], by[PulseRole.CONTROL]

    f_p = pump.envelope(t)
    f_s = stokes.envelope(t)
    f_b = branch.envelope(t)
    f_c = control.envelope(t)

    def forward(dip, pulse, f):
        return dip.magnitude * (pulse.peak_amplitude / 2.0) * f * np.exp(
            1j * (pulse.phase + dip.phase)
        )

    def backward(dip, pulse, f):
        return dip.magnitude * (pulse.peak_amplitude / 2.0) * f * np.exp(
            -1j * (pulse.phase - dip.phase)
        )

    return RabiSet(
        pump=forward(system.d12, pump, f_p),
        stokes3=forward(system.d23, stokes, f_s),
        stokes4=forward(system.d24, stokes, f_s),
        branch3=backward(system.d35, branch, f_b),
        branch4=backward(system.d45, branch, f_b),
        control=forward(system.d15, control, f_c),
    )
