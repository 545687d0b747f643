"""Command-line experiment runner: simulate, design, spectrum, reproduce."""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, GridSpec, format_complex, load_config
from .design import (
    DesignProblem,
    check_restriction,
    control_peak_rabi,
    design_control_pulse,
    residual_series,
)
from .errors import ConfigError, DegenerateCase, StirapError
from .presets import PRESETS
from .propagate import (
    TimeGrid,
    branching_ratio,
    channel_yields,
    default_grid,
    null_state_fidelity,
    propagate,
)
from .pulse import peak_rabi_quadrature, rabi_set
from .spectrum import node_residual, null_eigenvector, nonzero_eigenvalues
from .superposition import TargetSuperposition, project_onto_targets, rotated_system
from .system import build_hamiltonian

_MAX_CSV_ROWS = 4001


def _resolve_grid(config: ExperimentConfig, system, pulses, step_flag: float | None) -> TimeGrid:
    base = default_grid(system, pulses)
    spec = config.grid or GridSpec()
    start = spec.start if spec.start is not None else base.t_start
    end = spec.end if spec.end is not None else base.t_end
    step = step_flag if step_flag is not None else (
        spec.step if spec.step is not None else base.step
    )
    return TimeGrid(start, end, step)


def _apply_decay_flag(system, decay: str | None):
    if decay == "off":
        return system.without_decay()
    return system


def _solved_config(config: ExperimentConfig) -> tuple[ExperimentConfig, dict | None]:
    """Solve the control pulse when the config asks for it."""
    if not config.solve_control:
        return config, None
    problem = DesignProblem(
        system=config.system,
        pump=config.pump,
        stokes=config.stokes,
        branching=config.branching,
        suppressed_target=config.target,
    )
    solution = design_control_pulse(problem)
    solved = replace(config, control=solution.control, solve_control=False)
    report = _design_report(config, solution)
    return solved, report


def _design_report(config: ExperimentConfig, solution) -> dict:
    control = solution.control
    report = {
        "control": {
            "field_amplitude": control.peak_amplitude,
            "phase": control.phase,
            "center": control.center,
            "width": control.width,
        },
        "peak_rabi": format_complex(control_peak_rabi(config.system, control)),
        "residual_report": solution.residual_report,
        "restriction_ok": solution.restriction_ok,
    }
    if config.control is not None:
        report["provided_peak_rabi"] = format_complex(
            control_peak_rabi(config.system, config.control)
        )
    return report


def _summary(config, system, pulses, traj, include_decay) -> tuple[dict, np.ndarray, dict]:
    pops = traj.populations
    fid = null_state_fidelity(system, pulses, traj)
    superpos = isinstance(config.target, TargetSuperposition)
    extra_columns: dict[str, np.ndarray] = {}
    summary: dict = {
        "name": config.name,
        "grid": {
            "t_start": traj.grid.t_start,
            "t_end": traj.grid.t_end,
            "step_used": traj.step_used,
            "refinements": traj.refinements,
            "convergence_delta": traj.convergence_delta,
        },
        "final": {f"P{k+1}": float(pops[-1, k]) for k in range(5)},
        "final_norm": float(traj.norms[-1]),
        "max_transient": {
            "P2": float(pops[:, 1].max()),
            "P3": float(pops[:, 2].max()),
            "P5": float(pops[:, 4].max()),
        },
        "min_fidelity": float(np.nanmin(fid)),
    }
    try:
        ratio = branching_ratio(traj)
        summary["branching_ratio"] = "inf" if math.isinf(ratio) else float(ratio)
    except StirapError:
        summary["branching_ratio"] = "indeterminate"

    if superpos:
        work = rotated_system(system, config.target)
        level = 3
        p3p, p4p = project_onto_targets(traj.amplitudes, config.target)
        extra_columns["P3p"] = p3p
        extra_columns["P4p"] = p4p
        summary["superposition"] = {
            "theta": config.target.theta,
            "beta": config.target.beta,
            "final_P3p": float(p3p[-1]),
            "final_P4p": float(p4p[-1]),
            "max_P3p": float(p3p.max()),
        }
    else:
        work = system
        level = config.target
    summary["max_node_residual"] = float(
        residual_series(work, pulses, traj.times, level).max()
    )
    if include_decay and (system.decay_rate_3 > 0 or system.decay_rate_4 > 0):
        y3, y4 = channel_yields(system, traj)
        summary["decay"] = {
            "gamma3": system.decay_rate_3,
            "gamma4": system.decay_rate_4,
            "yield3": y3,
            "yield4": y4,
        }
    return summary, fid, extra_columns


def _write_csv(path: Path, traj, fid, extra_columns: dict[str, np.ndarray]):
    n = len(traj.times)
    stride = max(1, math.ceil((n - 1) / (_MAX_CSV_ROWS - 1))) if n > 1 else 1
    idx = list(range(0, n, stride))
    if idx[-1] != n - 1:
        idx.append(n - 1)
    header = "t,P1,P2,P3,P4,P5,fidelity"
    names = list(extra_columns)
    if names:
        header += "," + ",".join(names)
    pops = traj.populations
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for i in idx:
            row = [traj.times[i], *pops[i], fid[i]]
            row.extend(extra_columns[name][i] for name in names)
            fh.write(",".join(f"{x:.12e}" for x in row) + "\n")


def _write_plot_script(path: Path, csv_name: str, extra_names: list[str]):
    cols = [("P1", 2), ("P2", 3), ("P3", 4), ("P4", 5), ("P5", 6), ("fidelity", 7)]
    cols += [(name, 8 + i) for i, name in enumerate(extra_names)]
    lines = [
        "set datafile separator ','",
        "set xlabel 't  (units of T)'",
        "set ylabel 'population'",
        "set key outside",
        "plot \\",
    ]
    plot_parts = [
        f"  '{csv_name}' using 1:{col} with lines title '{name}'" for name, col in cols
    ]
    lines.append(", \\\n".join(plot_parts))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _run_simulate(config: ExperimentConfig, args) -> dict:
    system = _apply_decay_flag(config.system, getattr(args, "decay", None))
    include_decay = getattr(args, "decay", None) != "off"
    if not check_restriction(system, config.target):
        raise StirapError(
            "restriction check failed: dipole ratios coincide for the requested target"
        )
    config, design_report = _solved_config(config)
    pulses = config.pulses()
    grid = _resolve_grid(config, system, pulses, getattr(args, "grid_step", None))
    traj = propagate(system, pulses, grid=grid, include_decay=include_decay)
    summary, fid, extra = _summary(config, system, pulses, traj, include_decay)
    if design_report is not None:
        summary["design"] = design_report

    out_dir = Path(getattr(args, "out", None) or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = config.output_stem or config.name
    csv_path = out_dir / f"{stem}.csv"
    _write_csv(csv_path, traj, fid, extra)
    summary_path = out_dir / f"{stem}_summary.json"
    summary_path.write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if getattr(args, "emit_plot", False):
        _write_plot_script(out_dir / f"{stem}.gp", csv_path.name, list(extra))
    return summary


def _cmd_simulate(args) -> int:
    config = load_config(args.config)
    summary = _run_simulate(config, args)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def _cmd_design(args) -> int:
    config = load_config(args.config)
    problem = DesignProblem(
        system=config.system,
        pump=config.pump,
        stokes=config.stokes,
        branching=config.branching,
        suppressed_target=config.target,
    )
    solution = design_control_pulse(problem)
    report = _design_report(config, solution)
    print(json.dumps(report, indent=2, sort_keys=True))
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = config.output_stem or config.name
        (out_dir / f"{stem}_design.json").write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return 0


def _cmd_spectrum(args) -> int:
    config = load_config(args.config)
    config, _ = _solved_config(config)
    t = args.time
    rabis = rabi_set(config.system, config.pulses(), t)
    report: dict = {"time": t, "total_rabi_square": float(rabis.total_square())}
    peak = peak_rabi_quadrature(config.system, config.pulses())
    if math.sqrt(report["total_rabi_square"]) <= 1e-9 * peak:
        report["degenerate"] = True
        report["message"] = "all Rabi frequencies below tolerance at this time"
        print(json.dumps(report, indent=2, sort_keys=True))
        return 0
    try:
        null = null_eigenvector(rabis)
        eigs = nonzero_eigenvalues(rabis)
    except DegenerateCase as exc:
        report["degenerate"] = True
        report["message"] = str(exc)
        print(json.dumps(report, indent=2, sort_keys=True))
        return 0
    report["degenerate"] = False
    all_eigs = sorted([float(eigs[0]), float(eigs[1]), 0.0, float(eigs[2]), float(eigs[3])])
    report["eigenvalues"] = all_eigs
    report["null_vector"] = [[float(c.real), float(c.imag)] for c in null.components]
    report["node_residual_level3"] = node_residual(rabis, 3)
    report["node_residual_level4"] = node_residual(rabis, 4)
    # cross-check against a dense eigensolver on the assembled matrix
    h = build_hamiltonian(config.system, rabis, include_decay=False)
    report["oracle_max_eigenvalue_gap"] = float(
        np.max(np.abs(np.sort(np.linalg.eigvalsh(h)) - np.asarray(all_eigs)))
    )
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def _reproduce_one(name: str, out: str | None, grid_step, decay, emit_plot) -> dict:
    ns = argparse.Namespace(out=out, grid_step=grid_step, decay=decay, emit_plot=emit_plot)
    return _run_simulate(PRESETS[name], ns)


def _cmd_reproduce(args) -> int:
    names = list(args.presets)
    if names == ["all"]:
        names = list(PRESETS)
    unknown = [n for n in names if n not in PRESETS]
    if unknown:
        raise ConfigError(f"unknown preset(s): {', '.join(unknown)}")
    jobs = max(1, args.jobs)
    results: dict[str, dict] = {}
    if jobs == 1 or len(names) == 1:
        for name in names:
            results[name] = _reproduce_one(name, args.out, args.grid_step, args.decay,
                                           args.emit_plot)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {
                name: pool.submit(
                    _reproduce_one, name, args.out, args.grid_step, args.decay, args.emit_plot
                )
                for name in names
            }
            for name in names:
                results[name] = futures[name].result()
    for name in names:
        s = results[name]
        line = (
            f"{name}: final P4={s['final']['P4']:.5f} max P3={s['max_transient']['P3']:.3e} "
            f"max P2={s['max_transient']['P2']:.3e} max P5={s['max_transient']['P5']:.3e}"
        )
        if "superposition" in s:
            line += (
                f" final P4'={s['superposition']['final_P4p']:.5f}"
                f" max P3'={s['superposition']['max_P3p']:.3e}"
            )
        if "decay" in s:
            line += f" yield3={s['decay']['yield3']:.3e} yield4={s['decay']['yield4']:.4f}"
        print(line)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stirap5",
        description="Five-level four-pulse dark-state transfer: design and simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config_required=True):
        if config_required:
            p.add_argument("--config", required=True, help="experiment config file (INI)")
        p.add_argument("--out", default=None, help="output directory (default: cwd)")

    p_sim = sub.add_parser("simulate", help="propagate a configured experiment")
    add_common(p_sim)
    p_sim.add_argument("--grid-step", type=float, default=None, dest="grid_step")
    p_sim.add_argument("--decay", choices=("on", "off"), default="on")
    p_sim.add_argument("--emit-plot", action="store_true", dest="emit_plot")
    p_sim.set_defaults(func=_cmd_simulate)

    p_des = sub.add_parser("design", help="solve the control pulse for a config")
    add_common(p_des)
    p_des.set_defaults(func=_cmd_design)

    p_spec = sub.add_parser("spectrum", help="eigensystem report at one time")
    add_common(p_spec)
    p_spec.add_argument("--time", type=float, required=True)
    p_spec.set_defaults(func=_cmd_spectrum)

    p_rep = sub.add_parser("reproduce", help="run bundled preset scenarios")
    p_rep.add_argument("presets", nargs="+",
                       help=f"preset names ({', '.join(PRESETS)}) or 'all'")
    p_rep.add_argument("--out", default=None)
    p_rep.add_argument("--grid-step", type=float, default=None, dest="grid_step")
    p_rep.add_argument("--decay", choices=("on", "off"), default="on")
    p_rep.add_argument("--emit-plot", action="store_true", dest="emit_plot")
    p_rep.add_argument("--jobs", type=int, default=1)
    p_rep.set_defaults(func=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    except StirapError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(json.dumps({"error": "FileNotFound", "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
