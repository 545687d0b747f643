"""Time propagation of the five-level amplitudes and adiabaticity diagnostics.

Fixed-step classical RK4 on i dpsi/dt = H(t) psi with automatic step halving
until every final population is stable to the convergence tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import AccidentalNullSpace, GridTooCoarse, IndeterminateBranching
from .pulse import PulseEnvelope, RabiSet, peak_rabi_quadrature, pulses_by_role, rabi_set
from .spectrum import dark_components, eigenvalue_squares
from .system import FiveLevelSystem, couplings_accidental

#: population change between successive halvings accepted as converged
CONVERGENCE_TOL = 1e-8
MAX_REFINEMENTS = 4
_CHUNK = 8192  # integration steps per vectorized Hamiltonian block


@dataclass(frozen=True)
class TimeGrid:
    """Uniform integration grid; `step` is an upper bound on the spacing used."""

    t_start: float
    t_end: float
    step: float

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError("t_start must be smaller than t_end")
        if self.step <= 0:
            raise ValueError("step must be positive")
        if (self.t_end - self.t_start) / self.step < 10:
            raise ValueError("grid must resolve the window into at least 10 steps")

    @property
    def n_steps(self) -> int:
        return max(10, math.ceil((self.t_end - self.t_start) / self.step - 1e-9))

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_steps + 1)

    def refined(self) -> "TimeGrid":
        return TimeGrid(self.t_start, self.t_end, self.step / 2.0)


@dataclass(eq=False)
class Trajectory:
    """Amplitudes over a grid plus the convergence metadata of the run."""

    grid: TimeGrid
    times: np.ndarray
    amplitudes: np.ndarray
    step_used: float
    convergence_delta: float
    refinements: int

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norms(self) -> np.ndarray:
        return self.populations.sum(axis=1)

    @property
    def final_populations(self) -> np.ndarray:
        return self.populations[-1]


def default_grid(
    system: FiveLevelSystem, pulses: Iterable[PulseEnvelope], step: float | None = None
) -> TimeGrid:
    """Window of four max-widths around the pulse cluster.

    The default step resolves both the narrowest envelope (width/200) and the
    fastest Rabi oscillation (half a radian per step at the quadrature sum of
    the peak Rabi magnitudes).
    """
    by = pulses_by_role(pulses)
    centers = [p.center for p in by.values()]
    widths = [p.width for p in by.values()]
    t0 = min(centers) - 4.0 * max(widths)
    t1 = max(centers) + 4.0 * max(widths)
    if step is None:
        omega_hat = peak_rabi_quadrature(system, by.values())
        step = min(widths) / 200.0
        if omega_hat > 0:
            step = min(step, 0.5 / omega_hat)
    return TimeGrid(t0, t1, step)


def _hamiltonian_stack(
    system: FiveLevelSystem,
    pulses: Sequence[PulseEnvelope],
    times: np.ndarray,
    include_decay: bool,
) -> np.ndarray:
    r = rabi_set(system, pulses, times)
    h = np.zeros((len(times), 5, 5), dtype=complex)
    h[:, 0, 1] = r.pump
    h[:, 1, 0] = np.conj(r.pump)
    h[:, 0, 4] = r.control
    h[:, 4, 0] = np.conj(r.control)
    h[:, 1, 2] = r.stokes3
    h[:, 2, 1] = np.conj(r.stokes3)
    h[:, 1, 3] = r.stokes4
    h[:, 3, 1] = np.conj(r.stokes4)
    h[:, 2, 4] = r.branch3
    h[:, 4, 2] = np.conj(r.branch3)
    h[:, 3, 4] = r.branch4
    h[:, 4, 3] = np.conj(r.branch4)
    if include_decay:
        h[:, 2, 2] = -1j * system.decay_rate_3
        h[:, 3, 3] = -1j * system.decay_rate_4
    return h


def _integrate(
    system: FiveLevelSystem,
    pulses: Sequence[PulseEnvelope],
    psi0: np.ndarray,
    times: np.ndarray,
    include_decay: bool,
) -> np.ndarray:
    n = len(times) - 1
    h = (times[-1] - times[0]) / n
    out = np.empty((n + 1, 5), dtype=complex)
    psi = psi0.astype(complex)
    out[0] = psi
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        # Hamiltonians at step points and midpoints for this block
        th = times[start] + 0.5 * h * np.arange(2 * (stop - start) + 1)
        a = -1j * _hamiltonian_stack(system, pulses, th, include_decay)
        for i in range(stop - start):
            a0, am, a1 = a[2 * i], a[2 * i + 1], a[2 * i + 2]
            k1 = a0 @ psi
            k2 = am @ (psi + (0.5 * h) * k1)
            k3 = am @ (psi + (0.5 * h) * k2)
            k4 = a1 @ (psi + h * k3)
            psi = psi + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
            out[start + i + 1] = psi
    return out


def propagate(
    system: FiveLevelSystem,
    pulses: Iterable[PulseEnvelope],
    initial: np.ndarray | None = None,
    grid: TimeGrid | None = None,
    include_decay: bool = True,
    *,
    convergence_tol: float = CONVERGENCE_TOL,
    max_refinements: int = MAX_REFINEMENTS,
) -> Trajectory:
    """Propagate the amplitudes across the pulse sequence.

    Parameters
    ----------
    initial : normalized 5-vector; defaults to the initial level |1>.
    grid : integration window/step; defaults to `default_grid`.
    include_decay : include the -i*Gamma target-state terms.

    The step is halved (up to `max_refinements` times) until no final
    population moves by more than `convergence_tol` between halvings; the
    finer run of the accepted pair is returned.  Raises GridTooCoarse when
    the ladder is exhausted.
    """
    if max_refinements < 1:
        raise ValueError("max_refinements must be at least 1")
    pulses = list(pulses)
    by = pulses_by_role(pulses)
    ordered = [p for p in by.values()]
    if initial is None:
        initial = np.array([1.0, 0, 0, 0, 0], dtype=complex)
    else:
        initial = np.asarray(initial, dtype=complex)
        if initial.shape != (5,):
            raise ValueError("initial state must have 5 components")
        if abs(np.linalg.norm(initial) - 1.0) > 1e-9:
            raise ValueError("initial state must be normalized")
    if grid is None:
        grid = default_grid(system, ordered)

    g = grid
    times = g.times()
    amps = _integrate(system, ordered, initial, times, include_decay)
    prev_final = np.abs(amps[-1]) ** 2
    for r in range(1, max_refinements + 1):
        g = g.refined()
        times = g.times()
        amps = _integrate(system, ordered, initial, times, include_decay)
        final = np.abs(amps[-1]) ** 2
        delta = float(np.max(np.abs(final - prev_final)))
        if delta < convergence_tol:
            return Trajectory(
                grid=g,
                times=times,
                amplitudes=amps,
                step_used=float(times[1] - times[0]),
                convergence_delta=delta,
                refinements=r,
            )
        prev_final = final
    raise GridTooCoarse(
        f"final populations still move by {delta:.2e} after {max_refinements} refinements"
    )


def branching_ratio(trajectory: Trajectory, floor: float = 1e-15) -> float:
    """Final P4/P3; inf when P3 is numerically zero.

    Raises IndeterminateBranching when both targets end numerically empty.
    """
    p3 = float(trajectory.final_populations[2])
    p4 = float(trajectory.final_populations[3])
    if p3 < floor and p4 < floor:
        raise IndeterminateBranching("both target populations are numerically zero")
    if p3 < floor:
        return math.inf
    return p4 / p3


def _dark_track(
    system: FiveLevelSystem, pulses: Sequence[PulseEnvelope], times: np.ndarray
) -> np.ndarray:
    """Normalized dark-state vectors along the grid (smooth formula branch).

    Raises AccidentalNullSpace for systems whose Stokes/branching dipole
    cross products coincide at a nonzero value; rows where the formula vector
    vanishes (all envelope products underflow, or too few couplings) are
    returned as NaN.
    """
    cross_scale = max(
        system.d24.magnitude * system.d35.magnitude,
        system.d23.magnitude * system.d45.magnitude,
    )
    if cross_scale > 0 and couplings_accidental(system):
        raise AccidentalNullSpace(
            "Stokes/branching cross products coincide; the dark state is not unique"
        )
    r = rabi_set(system, pulses, times)
    v1, v3, v4 = dark_components(r)
    vecs = np.zeros((len(times), 5), dtype=complex)
    vecs[:, 0] = v1
    vecs[:, 2] = v3
    vecs[:, 3] = v4
    norms = np.linalg.norm(vecs, axis=1)
    ok = norms > 0
    vecs[ok] /= norms[ok, None]
    vecs[~ok] = np.nan
    return vecs


def null_state_fidelity(
    system: FiveLevelSystem, pulses: Iterable[PulseEnvelope], trajectory: Trajectory
) -> np.ndarray:
    """|<dark(t)|psi(t)>|^2 along the trajectory (not renormalized under decay)."""
    pulses = list(pulses)
    vecs = _dark_track(system, pulses, trajectory.times)
    return np.abs(np.sum(np.conj(vecs) * trajectory.amplitudes, axis=1)) ** 2


def perturbative_yield(
    system: FiveLevelSystem,
    pulses: Iterable[PulseEnvelope],
    grid: TimeGrid | None = None,
    level: int = 3,
) -> float:
    """First-order decay yield 2*Gamma * integral of the dark-state weight.

    Integrates |<dark(t)|level>|^2 by the trapezoid rule at grid resolution;
    exact zero when the design has placed a node on `level`.
    """
    if level not in (3, 4):
        raise ValueError(f"level must be 3 or 4, got {level}")
    pulses = list(pulses)
    if grid is None:
        grid = default_grid(system, pulses)
    gamma = system.decay_rate_3 if level == 3 else system.decay_rate_4
    times = grid.times()
    vecs = _dark_track(system, pulses, times)
    weight = np.abs(vecs[:, level - 1]) ** 2
    weight = np.nan_to_num(weight, nan=0.0)
    return float(2.0 * gamma * np.trapezoid(weight, times))


def channel_yields(system: FiveLevelSystem, trajectory: Trajectory) -> tuple[float, float]:
    """Accumulated decay yields (2*Gamma_k * integral P_k dt) for levels 3 and 4.

    With only the target states decaying these add up to the trajectory's
    total norm loss.
    """
    p = trajectory.populations
    y3 = 2.0 * system.decay_rate_3 * float(np.trapezoid(p[:, 2], trajectory.times))
    y4 = 2.0 * system.decay_rate_4 * float(np.trapezoid(p[:, 3], trajectory.times))
    return y3, y4


@dataclass(eq=False)
class AdiabaticityReport:
    """Spectral gap to the dark state and its rate-of-change coupling ratio."""

    times: np.ndarray
    gap: np.ndarray
    coupling_ratio: np.ndarray

    @property
    def min_gap(self) -> float:
        return float(np.min(self.gap))

    @property
    def max_coupling_ratio(self) -> float:
        return float(np.max(self.coupling_ratio))


def adiabaticity_report(
    system: FiveLevelSystem,
    pulses: Iterable[PulseEnvelope],
    grid: TimeGrid | None = None,
    tol: float = 1e-9,
) -> AdiabaticityReport:
    """Per-step gap and dark-state rotation speed over the window.

    The gap is the smallest nonzero eigenvalue magnitude; eigenvalue pairs
    that collapse onto the null space (within `tol` of the total Rabi square)
    are excluded, so a single-coupling configuration reports that coupling's
    magnitude.  The coupling ratio is ||d(dark)/dt|| / gap with the dark
    state phase-aligned between steps.
    """
    pulses = list(pulses)
    if grid is None:
        grid = default_grid(system, pulses)
    times = grid.times()
    r = rabi_set(system, pulses, times)
    o2 = r.total_square()
    v1, v3, v4 = dark_components(r)
    d = np.abs(v1) ** 2 + np.abs(v3) ** 2 + np.abs(v4) ** 2
    disc = np.maximum(o2 * o2 - 4.0 * d, 0.0)
    x_plus = 0.5 * (o2 + np.sqrt(disc))
    with np.errstate(divide="ignore", invalid="ignore"):
        x_minus = np.where(x_plus > 0, d / np.where(x_plus > 0, x_plus, 1.0), 0.0)
    gap = np.where(x_minus > tol * o2, np.sqrt(x_minus), np.sqrt(x_plus))

    vecs = _dark_track(system, pulses, times)
    finite = np.all(np.isfinite(vecs), axis=1)
    for i in range(1, len(times)):
        if not (finite[i] and finite[i - 1]):
            continue
        ov = np.vdot(vecs[i - 1], vecs[i])
        if np.abs(ov) > 0:
            vecs[i] *= np.exp(-1j * np.angle(ov))
    dv = np.gradient(vecs, times, axis=0)
    speed = np.linalg.norm(dv, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(gap > 0, speed / np.where(gap > 0, gap, 1.0), np.inf)
    return AdiabaticityReport(times=times, gap=gap, coupling_ratio=ratio)
