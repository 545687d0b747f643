"""Experiment configuration files: INI sections, complex values as "re+imi".

Two input styles are accepted.  The "peak Rabi" style states the six
couplings as complex peak Omega*T values in [system] (pulse amplitudes are
then implied); the "dipole" style states [dipole.jk] magnitude/phase pairs
and per-pulse field amplitudes.  Serialization always emits the dipole
style, which round-trips exactly.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .pulse import RABI_UNIT_FIELD, DipoleCoupling, PulseEnvelope, PulseRole
from .superposition import TargetSuperposition
from .system import FiveLevelSystem

_EDGES = ("12", "23", "24", "35", "45", "15")
_RABI_KEYS = {
    "rabi_pump": "pump",
    "rabi_stokes3": "stokes3",
    "rabi_stokes4": "stokes4",
    "rabi_branch3": "branch3",
    "rabi_branch4": "branch4",
    "rabi_control": "control",
}
_ROLES = ("pump", "stokes", "branching", "control")


def parse_complex(text: str) -> complex:
    """Parse "re+imi" (also plain "re" or "imi") into a complex number."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ConfigError("empty complex value")
    if "j" in s or "J" in s:
        raise ConfigError(f"complex values use 'i', got {text!r}")
    try:
        return complex(s.replace("i", "j").replace("I", "j"))
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex value {text!r}") from exc


def format_complex(z: complex) -> str:
    """Format a complex number in the "re+imi" config style."""
    re, im = float(z.real), float(z.imag)
    if im == 0.0:
        return repr(re)
    if re == 0.0:
        return f"{im!r}i"
    sign = "+" if im > 0 else "-"
    return f"{re!r}{sign}{abs(im)!r}i"


@dataclass(frozen=True)
class GridSpec:
    """Partial grid override; unset fields fall back to the defaults."""

    start: float | None = None
    end: float | None = None
    step: float | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    system: FiveLevelSystem
    pump: PulseEnvelope
    stokes: PulseEnvelope
    branching: PulseEnvelope
    control: PulseEnvelope | None
    solve_control: bool
    target: int | TargetSuperposition
    grid: GridSpec | None = None
    output_stem: str | None = None

    def pulses(self) -> list[PulseEnvelope]:
        if self.control is None:
            raise ConfigError("control pulse not set; run the design step first")
        return [self.pump, self.stokes, self.branching, self.control]


class _Sections:
    """Typed access to configparser sections with field-level diagnostics."""

    def __init__(self, cp: configparser.ConfigParser):
        self.cp = cp
        self.seen: set[str] = set()

    def has(self, section: str) -> bool:
        return self.cp.has_section(section)

    def take(self, section: str) -> dict[str, str]:
        self.seen.add(section)
        if not self.cp.has_section(section):
            raise ConfigError(f"missing section [{section}]")
        return dict(self.cp.items(section))

    def take_optional(self, section: str) -> dict[str, str] | None:
        if not self.cp.has_section(section):
            return None
        return self.take(section)

    def check_no_strays(self):
        strays = [s for s in self.cp.sections() if s not in self.seen]
        if strays:
            raise ConfigError(f"unknown section(s): {', '.join(f'[{s}]' for s in strays)}")


def _get_float(values: dict[str, str], section: str, key: str, default=None) -> float:
    if key not in values:
        if default is not None:
            return default
        raise ConfigError(f"[{section}] is missing key '{key}'")
    raw = values.pop(key)
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: cannot parse float {raw!r}") from exc


def _check_empty(values: dict[str, str], section: str):
    if values:
        raise ConfigError(f"[{section}] has unknown key(s): {', '.join(sorted(values))}")


def _parse_pulse(
    values: dict[str, str], section: str, role: PulseRole, amplitude: float | None
) -> PulseEnvelope:
    center = _get_float(values, section, "center")
    width = _get_float(values, section, "width")
    phase = _get_float(values, section, "phase", default=0.0)
    if amplitude is None:
        amplitude = _get_float(values, section, "amplitude")
    elif "amplitude" in values:
        raise ConfigError(
            f"[{section}] amplitude is implied by the rabi_* values; remove it"
        )
    _check_empty(values, section)
    try:
        return PulseEnvelope(role=role, peak_amplitude=amplitude, center=center,
                             width=width, phase=phase)
    except ValueError as exc:
        raise ConfigError(f"[{section}]: {exc}") from exc


def parse_config(text: str, name: str = "config") -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text, source=name)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    sec = _Sections(cp)

    sysvals = sec.take("system")
    gamma3 = _get_float(sysvals, "system", "gamma3", default=0.0)
    gamma4 = _get_float(sysvals, "system", "gamma4", default=0.0)
    rabi_style = any(k in sysvals for k in _RABI_KEYS)

    solve_control = False
    if rabi_style:
        peaks: dict[str, complex | None] = {}
        for key, field in _RABI_KEYS.items():
            if key not in sysvals:
                raise ConfigError(f"[system] is missing key '{key}'")
            raw = sysvals.pop(key).strip()
            if field == "control" and raw.lower() == "solve":
                peaks[field] = None
                solve_control = True
            else:
                peaks[field] = parse_complex(raw)
        _check_empty(sysvals, "system")
        system = FiveLevelSystem.from_peak_rabis(
            pump=peaks["pump"],
            stokes3=peaks["stokes3"],
            stokes4=peaks["stokes4"],
            branch3=peaks["branch3"],
            branch4=peaks["branch4"],
            control=peaks["control"],
            decay_rate_3=gamma3,
            decay_rate_4=gamma4,
        )
        implied: float | None = RABI_UNIT_FIELD
    else:
        _check_empty(sysvals, "system")
        couplings = []
        for edge in _EDGES:
            section = f"dipole.{edge}"
            vals = sec.take(section)
            mag = _get_float(vals, section, "magnitude")
            phase = _get_float(vals, section, "phase", default=0.0)
            _check_empty(vals, section)
            try:
                couplings.append(DipoleCoupling(int(edge[0]), int(edge[1]), mag, phase))
            except ValueError as exc:
                raise ConfigError(f"[{section}]: {exc}") from exc
        system = FiveLevelSystem.from_couplings(couplings, gamma3, gamma4)
        implied = None

    pulses: dict[str, PulseEnvelope | None] = {}
    for role_name in _ROLES:
        section = f"pulse.{role_name}"
        role = PulseRole(role_name)
        if role is PulseRole.CONTROL:
            vals = sec.take_optional(section)
            if vals is None:
                pulses[role_name] = None
                solve_control = True
                continue
            if vals.pop("solve", "").strip().lower() in ("true", "yes", "on", "1"):
                _check_empty(vals, section)
                pulses[role_name] = None
                solve_control = True
                continue
            if solve_control:
                raise ConfigError(
                    "[system] rabi_control = solve conflicts with an explicit [pulse.control]"
                )
            pulses[role_name] = _parse_pulse(vals, section, role, implied)
        else:
            vals = sec.take(section)
            pulses[role_name] = _parse_pulse(vals, section, role, implied)

    tvals = sec.take("target")
    suppress = tvals.pop("suppress", "").strip().lower()
    if suppress in ("3", "4"):
        if "theta" in tvals or "beta" in tvals:
            raise ConfigError("[target] theta/beta only apply to suppress = superposition")
        target: int | TargetSuperposition = int(suppress)
    elif suppress == "superposition":
        theta = _get_float(tvals, "target", "theta")
        beta = _get_float(tvals, "target", "beta")
        target = TargetSuperposition(theta=theta, beta=beta)
    else:
        raise ConfigError("[target] suppress must be 3, 4, or superposition")
    _check_empty(tvals, "target")

    grid = None
    gvals = sec.take_optional("grid")
    if gvals is not None:
        start = _get_float(gvals, "grid", "start") if "start" in gvals else None
        end = _get_float(gvals, "grid", "end") if "end" in gvals else None
        step = _get_float(gvals, "grid", "step") if "step" in gvals else None
        _check_empty(gvals, "grid")
        grid = GridSpec(start=start, end=end, step=step)

    output_stem = None
    ovals = sec.take_optional("output")
    if ovals is not None:
        output_stem = ovals.pop("stem", None)
        _check_empty(ovals, "output")

    sec.check_no_strays()
    return ExperimentConfig(
        name=name,
        system=system,
        pump=pulses["pump"],
        stokes=pulses["stokes"],
        branching=pulses["branching"],
        control=pulses["control"],
        solve_control=solve_control,
        target=target,
        grid=grid,
        output_stem=output_stem,
    )


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), name=path.stem)


def to_ini(config: ExperimentConfig) -> str:
    """Canonical dipole-style serialization; parse_config inverts it exactly."""
    out = io.StringIO()
    w = out.write
    w("[system]\n")
    w(f"gamma3 = {config.system.decay_rate_3!r}\n")
    w(f"gamma4 = {config.system.decay_rate_4!r}\n\n")
    for edge in _EDGES:
        dip = getattr(config.system, f"d{edge}")
        w(f"[dipole.{edge}]\n")
        w(f"magnitude = {dip.magnitude!r}\n")
        w(f"phase = {dip.phase!r}\n\n")
    for role_name in _ROLES:
        pulse = getattr(config, role_name)
        w(f"[pulse.{role_name}]\n")
        if pulse is None:
            w("solve = true\n\n")
            continue
        w(f"amplitude = {pulse.peak_amplitude!r}\n")
        w(f"center = {pulse.center!r}\n")
        w(f"width = {pulse.width!r}\n")
        w(f"phase = {pulse.phase!r}\n\n")
    w("[target]\n")
    if isinstance(config.target, TargetSuperposition):
        w("suppress = superposition\n")
        w(f"theta = {config.target.theta!r}\n")
        w(f"beta = {config.target.beta!r}\n\n")
    else:
        w(f"suppress = {config.target}\n\n")
    if config.grid is not None:
        w("[grid]\n")
        for key in ("start", "end", "step"):
            value = getattr(config.grid, key)
            if value is not None:
                w(f"{key} = {value!r}\n")
        w("\n")
    if config.output_stem is not None:
        w("[output]\n")
        w(f"stem = {config.output_stem}\n")
    return out.getvalue().rstrip("\n") + "\n"
