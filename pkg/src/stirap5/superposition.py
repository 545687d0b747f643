"""Rotated target bases: suppress an arbitrary superposition of the two targets.

A rotation (theta, beta) of the degenerate {|3>, |4>} subspace defines
|3'> = sin(theta)|3> + e^{i beta} cos(theta)|4> and the orthogonal |4'>.
Re-expressing the couplings in this basis gives primed dipoles; the standard
level-3 design applied to the primed system then suppresses |3'>.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .pulse import DipoleCoupling
from .system import FiveLevelSystem


@dataclass(frozen=True)
class TargetSuperposition:
    """Parameters (radians) of the rotated target basis."""

    theta: float
    beta: float


class RotatedDipoles(NamedTuple):
    d23: complex
    d24: complex
    d35: complex
    d45: complex


def basis_states(target: TargetSuperposition) -> tuple[np.ndarray, np.ndarray]:
    """The kets |3'> and |4'> as 5-component amplitude vectors."""
    st, ct = np.sin(target.theta), np.cos(target.theta)
    eb = np.exp(1j * target.beta)
    ket3p = np.array([0, 0, st, eb * ct, 0], dtype=complex)
    ket4p = np.array([0, 0, ct, -eb * st, 0], dtype=complex)
    return ket3p, ket4p


def rotated_dipoles(system: FiveLevelSystem, target: TargetSuperposition) -> RotatedDipoles:
    """Complex dipoles coupling |2> and |5> to the rotated targets.

    Computed from the exact linear combinations of the bare complex dipoles;
    the closed-form magnitude/arctangent expressions are provided separately
    as cross-checks only.
    """
    st, ct = np.sin(target.theta), np.cos(target.theta)
    eb = np.exp(1j * target.beta)
    m23, m24 = system.d23.value, system.d24.value
    m35, m45 = system.d35.value, system.d45.value
    return RotatedDipoles(
        d23=st * m23 + ct * eb * m24,
        d24=ct * m23 - st * eb * m24,
        d35=st * m35 + ct * np.conj(eb) * m45,
        d45=ct * m35 - st * np.conj(eb) * m45,
    )


def rotated_system(system: FiveLevelSystem, target: TargetSuperposition) -> FiveLevelSystem:
    """The same system described in the rotated target basis.

    Pump and control couplings are untouched; decay rates are carried over
    (the rotated description is exact for equal target decay rates).
    """
    rot = rotated_dipoles(system, target)

    def dip(frm, to, z):
        return DipoleCoupling(frm, to, abs(z), float(np.angle(z)))

    return replace(
        system,
        d23=dip(2, 3, rot.d23),
        d24=dip(2, 4, rot.d24),
        d35=dip(3, 5, rot.d35),
        d45=dip(4, 5, rot.d45),
    )


def closed_form_magnitudes(
    system: FiveLevelSystem, target: TargetSuperposition
) -> tuple[float, float]:
    """Cross-term-free closed forms for |mu'_24| and |mu'_45|.

    These omit the interference cross term between the two bare dipoles and
    therefore agree with `rotated_dipoles` only when that term vanishes; use
    `closed_form_magnitude_gap` to quantify the mismatch.
    """
    ct2, st2 = np.cos(target.theta) ** 2, np.sin(target.theta) ** 2
    m24 = np.sqrt(ct2 * system.d23.magnitude**2 + st2 * system.d24.magnitude**2)
    m45 = np.sqrt(ct2 * system.d35.magnitude**2 + st2 * system.d45.magnitude**2)
    return float(m24), float(m45)


def closed_form_phases(
    system: FiveLevelSystem, target: TargetSuperposition
) -> tuple[float, float]:
    """Arctangent closed forms for arg(mu'_24) and arg(mu'_45) (exact)."""
    st, ct = np.sin(target.theta), np.cos(target.theta)
    b = target.beta
    a23, a24 = system.d23.phase, system.d24.phase
    a35, a45 = system.d35.phase, system.d45.phase
    m23, m24 = system.d23.magnitude, system.d24.magnitude
    m35, m45 = system.d35.magnitude, system.d45.magnitude
    alpha24 = np.arctan2(
        ct * np.sin(a23) * m23 - st * np.sin(b + a24) * m24,
        ct * np.cos(a23) * m23 - st * np.cos(b + a24) * m24,
    )
    alpha45 = np.arctan2(
        ct * np.sin(a35) * m35 + st * np.sin(b - a45) * m45,
        ct * np.cos(a35) * m35 - st * np.cos(b - a45) * m45,
    )
    return float(alpha24), float(alpha45)


def closed_form_magnitude_gap(
    system: FiveLevelSystem, target: TargetSuperposition
) -> tuple[float, float]:
    """Relative gap between exact and cross-term-free primed magnitudes."""
    rot = rotated_dipoles(system, target)
    cf24, cf45 = closed_form_magnitudes(system, target)

    def gap(exact, closed):
        scale = max(abs(exact), abs(closed))
        return abs(abs(exact) - closed) / scale if scale > 0 else 0.0

    return gap(rot.d24, cf24), gap(rot.d45, cf45)


def project_onto_targets(amplitudes, target: TargetSuperposition):
    """Populations (P_3', P_4') of a 5-component amplitude vector.

    Accepts a trajectory array of shape (..., 5); returns arrays of the
    leading shape.  P_3' + P_4' equals |c3|^2 + |c4|^2.
    """
    amps = np.asarray(amplitudes)
    c3, c4 = amps[..., 2], amps[..., 3]
    st, ct = np.sin(target.theta), np.cos(target.theta)
    ebc = np.exp(-1j * target.beta)
    a3p = st * c3 + ebc * ct * c4
    a4p = ct * c3 - ebc * st * c4
    return np.abs(a3p) ** 2, np.abs(a4p) ** 2


def entangled_coefficients(target: TargetSuperposition) -> tuple[complex, complex]:
    """Coefficients of |4'> on the two surface-local product states."""
    return complex(np.cos(target.theta)), complex(-np.sin(target.theta) * np.exp(1j * target.beta))


def entangled_representation(target: TargetSuperposition) -> str:
    """Render |4'> as a tensor-product superposition over the two surfaces."""
    c3, c4 = entangled_coefficients(target)
    pieces: list[tuple[str, str]] = []  # (sign, body)
    for coef, label in ((c3, "|n3⟩⊗|e3⟩"), (c4, "|n4⟩⊗|e4⟩")):
        if abs(coef) < 1e-12:
            continue
        if abs(coef.imag) < 1e-12:
            sign = "−" if coef.real < 0 else "+"
            mag = abs(coef.real)
            body = label if abs(mag - 1.0) < 1e-12 else f"{mag:g}·{label}"
        else:
            sign = "+"
            body = f"({coef.real:g}{coef.imag:+g}i)·{label}"
        pieces.append((sign, body))
    if not pieces:
        return "0"
    sign0, body0 = pieces[0]
    out = body0 if sign0 == "+" else f"−{body0}"
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
