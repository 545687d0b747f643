"""Analytic eigensystem of the five-level Hamiltonian.

The Hamiltonian has one null eigenvalue whose eigenvector is known in closed
form; the remaining four eigenvalues are the +/- square roots of the two
roots of a quadratic in lambda^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AccidentalNullSpace, DegenerateCase
from .pulse import RabiSet

#: Relative threshold (against the largest pairwise Rabi product) below which
#: dark-state components count as vanishing.
DEGENERACY_TOL = 1e-9


def dark_components(rabis: RabiSet):
    """Unnormalized dark-state components on levels (1, 3, 4).

    Works elementwise when the RabiSet holds arrays.
    """
    v1 = rabis.stokes4 * np.conj(rabis.branch3) - rabis.stokes3 * np.conj(rabis.branch4)
    v3 = np.conj(rabis.pump) * np.conj(rabis.branch4) - rabis.stokes4 * np.conj(rabis.control)
    v4 = rabis.stokes3 * np.conj(rabis.control) - np.conj(rabis.pump) * np.conj(rabis.branch3)
    return v1, v3, v4


def pair_scale(rabis: RabiSet):
    """Product of the two largest Rabi magnitudes (elementwise for arrays)."""
    mags = np.sort(np.stack([np.abs(x) for x in np.broadcast_arrays(*rabis.as_tuple())]), axis=0)
    return mags[-1] * mags[-2]


@dataclass(frozen=True, eq=False)
class NullEigenvector:
    """Normalized dark state; components 2 and 5 are exactly zero.

    `normalization` is the Euclidean magnitude of the unnormalized
    component vector.
    """

    components: np.ndarray
    normalization: float


@dataclass(frozen=True, eq=False)
class DressedSpectrum:
    null_state: NullEigenvector
    nonzero_eigenvalues: np.ndarray
    total_rabi_square: float


def null_eigenvector(rabis: RabiSet, tol: float = DEGENERACY_TOL) -> NullEigenvector:
    """Closed-form null eigenvector, phase-fixed to a real positive leading entry.

    Raises DegenerateCase when all three components vanish (relative to the
    largest pairwise Rabi product) and AccidentalNullSpace when only the
    level-1 component does (extra null states; no adiabatic connection to
    the initial level).
    """
    v1, v3, v4 = dark_components(rabis)
    thr = tol * pair_scale(rabis)
    if abs(v1) <= thr and abs(v3) <= thr and abs(v4) <= thr:
        raise DegenerateCase("all dark-state components vanish")
    if abs(v1) <= thr:
        raise AccidentalNullSpace(
            "Stokes/branching cross products coincide; dark state detaches from level 1"
        )
    norm = float(np.sqrt(abs(v1) ** 2 + abs(v3) ** 2 + abs(v4) ** 2))
    comps = np.array([v1, 0.0, v3, v4, 0.0], dtype=complex) / norm
    lead = np.argmax(np.abs(comps))
    comps *= np.exp(-1j * np.angle(comps[lead]))
    return NullEigenvector(components=comps, normalization=norm)


def eigenvalue_squares(rabis: RabiSet):
    """Roots (x_minus, x_plus) of x^2 - x*Omega^2 + D = 0, where x = lambda^2.

    D is the squared magnitude sum of the three dark-state components; the
    smaller root is recovered via the product of roots for stability.
    """
    o2 = rabis.total_square()
    v1, v3, v4 = dark_components(rabis)
    d = abs(v1) ** 2 + abs(v3) ** 2 + abs(v4) ** 2
    disc = max(o2 * o2 - 4.0 * d, 0.0)
    x_plus = 0.5 * (o2 + np.sqrt(disc))
    x_minus = d / x_plus if x_plus > 0 else 0.0
    return float(x_minus), float(x_plus)


def nonzero_eigenvalues(
    rabis: RabiSet, tol: float = DEGENERACY_TOL, strict: bool = True
) -> np.ndarray:
    """The four non-null eigenvalues, sorted ascending.

    With `strict`, raises AccidentalNullSpace when the smaller lambda^2 root
    is zero within tolerance (extra null states) and DegenerateCase when all
    couplings vanish.  `strict=False` returns the +/-sqrt pattern regardless,
    including the degenerate +/-0 pairs.
    """
    o2 = rabis.total_square()
    x_minus, x_plus = eigenvalue_squares(rabis)
    if strict:
        if o2 == 0.0:
            raise DegenerateCase("all Rabi frequencies vanish")
        if x_minus <= tol * o2:
            raise AccidentalNullSpace("an eigenvalue pair collapses onto the null space")
    lo, hi = np.sqrt(x_minus), np.sqrt(x_plus)
    return np.array([-hi, -lo, lo, hi])


def node_residual(rabis: RabiSet, level: int) -> float:
    """Dimensionless violation of the dark-state node condition on level 3 or 4.

    The raw cross-product residual is normalized by the product of the two
    largest Rabi magnitudes, making it invariant under overall field scaling.
    """
    if level not in (3, 4):
        raise ValueError(f"node level must be 3 or 4, got {level}")
    _, v3, v4 = dark_components(rabis)
    scale = pair_scale(rabis)
    if scale == 0.0:
        return 0.0
    return float(abs(v3 if level == 3 else v4) / scale)


def dressed_spectrum(rabis: RabiSet, tol: float = DEGENERACY_TOL) -> DressedSpectrum:
    return DressedSpectrum(
        null_state=null_eigenvector(rabis, tol),
        nonzero_eigenvalues=nonzero_eigenvalues(rabis, tol),
        total_rabi_square=float(rabis.total_square()),
    )
