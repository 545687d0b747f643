"""The five-level system and its rotating-wave Hamiltonian.

Level layout: |1> initial, |2> intermediate, |3>/|4> degenerate targets,
|5> branch state.  Only the targets may decay (complex-energy model).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .pulse import COUPLED_EDGES, DipoleCoupling, RabiSet


@dataclass(frozen=True)
class FiveLevelSystem:
    """Six transition dipoles plus amplitude-decay rates of the target states.

    Decay convention: a diagonal entry -i*Gamma gives amplitude decay
    exp(-Gamma*t), i.e. population decay exp(-2*Gamma*t).
    """

    d12: DipoleCoupling
    d23: DipoleCoupling
    d24: DipoleCoupling
    d35: DipoleCoupling
    d45: DipoleCoupling
    d15: DipoleCoupling
    decay_rate_3: float = 0.0
    decay_rate_4: float = 0.0

    def __post_init__(self):
        for name, edge in (
            ("d12", (1, 2)),
            ("d23", (2, 3)),
            ("d24", (2, 4)),
            ("d35", (3, 5)),
            ("d45", (4, 5)),
            ("d15", (1, 5)),
        ):
            dip = getattr(self, name)
            if (dip.from_level, dip.to_level) != edge:
                raise ValueError(f"{name} must couple levels {edge}, got "
                                 f"({dip.from_level}, {dip.to_level})")
        if self.decay_rate_3 < 0 or self.decay_rate_4 < 0:
            raise ValueError("decay rates must be non-negative")

    @classmethod
    def from_couplings(
        cls,
        couplings: Iterable[DipoleCoupling],
        decay_rate_3: float = 0.0,
        decay_rate_4: float = 0.0,
    ) -> "FiveLevelSystem":
        by_edge: dict[tuple[int, int], DipoleCoupling] = {}
        for c in couplings:
            edge = (c.from_level, c.to_level)
            if edge in by_edge:
                raise ValueError(f"duplicate coupling on edge {edge}")
            by_edge[edge] = c
        missing = COUPLED_EDGES - by_edge.keys()
        if missing:
            raise ValueError(f"missing couplings on edges {sorted(missing)}")
        return cls(
            d12=by_edge[(1, 2)],
            d23=by_edge[(2, 3)],
            d24=by_edge[(2, 4)],
            d35=by_edge[(3, 5)],
            d45=by_edge[(4, 5)],
            d15=by_edge[(1, 5)],
            decay_rate_3=decay_rate_3,
            decay_rate_4=decay_rate_4,
        )

    @classmethod
    def from_peak_rabis(
        cls,
        pump: complex,
        stokes3: complex,
        stokes4: complex,
        branch3: complex,
        branch4: complex,
        control: complex | None = None,
        decay_rate_3: float = 0.0,
        decay_rate_4: float = 0.0,
    ) -> "FiveLevelSystem":
        """Build from complex peak Rabi values (the Omega*T input style).

        Folds each peak's phase into the dipole phase; pair the result with
        pulses of amplitude RABI_UNIT_FIELD and zero phase so that the peak
        Rabi frequency of each coupling equals the given complex value.
        `control=None` installs a unit dipole on (1,5), ready for the design
        solver to choose the control field.
        """

        def dip(frm, to, z):
            z = complex(z)
            return DipoleCoupling(frm, to, abs(z), float(np.angle(z)))

        return cls(
            d12=dip(1, 2, pump),
            d23=dip(2, 3, stokes3),
            d24=dip(2, 4, stokes4),
            d35=dip(3, 5, branch3),
            d45=dip(4, 5, branch4),
            d15=DipoleCoupling(1, 5, 1.0, 0.0) if control is None else dip(1, 5, control),
            decay_rate_3=decay_rate_3,
            decay_rate_4=decay_rate_4,
        )

    def couplings(self) -> tuple[DipoleCoupling, ...]:
        return (self.d12, self.d23, self.d24, self.d35, self.d45, self.d15)

    def without_decay(self) -> "FiveLevelSystem":
        return replace(self, decay_rate_3=0.0, decay_rate_4=0.0)

    def with_decay(self, gamma3: float, gamma4: float) -> "FiveLevelSystem":
        return replace(self, decay_rate_3=gamma3, decay_rate_4=gamma4)

    def scale_couplings(self, factor: float) -> "FiveLevelSystem":
        """Scale all six dipole magnitudes (hence all Rabi frequencies)."""
        return replace(
            self,
            **{
                name: replace(getattr(self, name), magnitude=factor * getattr(self, name).magnitude)
                for name in ("d12", "d23", "d24", "d35", "d45", "d15")
            },
        )


def couplings_accidental(system: FiveLevelSystem, tol: float = 1e-9) -> bool:
    """True when mu24*mu35c equals mu23*mu45c within relative tolerance.

    At that locus the dark state loses its overlap with the initial level and
    extra null eigenstates appear, so branching control fails.
    """
    lhs = system.d24.value * np.conj(system.d35.value)
    rhs = system.d23.value * np.conj(system.d45.value)
    scale = max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) <= tol * scale


def build_hamiltonian(
    system: FiveLevelSystem, rabis: RabiSet, include_decay: bool = True
) -> np.ndarray:
    """Assemble the 5x5 rotating-wave Hamiltonian (units of 1/T).

    Hermitian when decay is off; with decay on, -i*Gamma is added on the
    target-state diagonal entries only.
    """
    h = np.zeros((5, 5), dtype=complex)
    h[0, 1] = rabis.pump
    h[0, 4] = rabis.control
    h[1, 2] = rabis.stokes3
    h[1, 3] = rabis.stokes4
    h[2, 4] = rabis.branch3
    h[3, 4] = rabis.branch4
    h += h.conj().T
    if include_decay:
        h[2, 2] = -1j * system.decay_rate_3
        h[3, 3] = -1j * system.decay_rate_4
    return h
