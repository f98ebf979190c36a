"""Command-line interface: plan trajectories, verify saved solutions.

``flatplan plan <config> -o <dir>`` runs the staged pipeline and writes
trajectory.csv, coeffs.json, report.json, and (unless --no-plots) one SVG
per plotted quantity with the three stage curves overlaid against the
bounds.  ``flatplan verify <config> <coeffs>`` re-checks a saved solution
against the true bounds and exits nonzero if it violates them.

Exit codes: 0 success / verified feasible, 1 verified infeasible,
2 configuration problems, 3 state-infeasible problem, 4 static-torque
premise violation, 5 internal solver failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from .basis import BasisSpec
from .dynamics import joint_torques
from .model import ConfigError
from .planner import (ConstraintReport, GravityPremiseError, PlanResult,
                      PlanningError, PlanningProblem, StateInfeasibleError,
                      constraint_report, plan, problem_from_config)
from .svgplot import Panel, Series, render_panels
from .trajectory import TimeScaledTrajectory, sample_states

__all__ = ["main", "cmd_plan", "cmd_verify"]

_STAGE_COLORS = {"lp": "#1f77b4", "feas": "#ff7f0e", "opt": "#2ca02c"}


def _run_id(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _error_report(outdir: Path | None, config: dict | None, code: int,
                  kind: str, message: str) -> None:
    if outdir is None:
        return
    outdir.mkdir(parents=True, exist_ok=True)
    _write_json(outdir / "report.json", {
        "run_id": _run_id(config) if config is not None else None,
        "status": "error",
        "error": {"exit_code": code, "kind": kind, "message": message},
        "config": config,
    })


def _trajectory_csv(path: Path, traj: TimeScaledTrajectory, problem:
                    PlanningProblem, samples: int) -> None:
    ts = np.linspace(0.0, traj.t_f, samples)
    q, qd, qdd = sample_states(traj, ts)
    tau = np.stack([joint_torques(problem.model, q[i], qd[i], qdd[i])
                    for i in range(samples)])
    n = problem.model.n
    header = (["t"]
              + [f"q_{i+1}" for i in range(n)]
              + [f"qd_{i+1}" for i in range(n)]
              + [f"qdd_{i+1}" for i in range(n)]
              + [f"tau_{i+1}" for i in range(n)])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(samples):
            row = np.concatenate([[ts[i]], q[i], qd[i], qdd[i], tau[i]])
            fh.write(",".join(f"{v:.16e}" for v in row) + "\n")


def _basis_dict(spec: BasisSpec) -> dict:
    out = {"type": spec.family, "m": spec.m}
    if spec.family == "bspline":
        out["order"] = spec.k
        out["knots"] = spec.knots.tolist()
    return out


def _coeffs_json(path: Path, result: PlanResult, run_id: str) -> None:
    stages = {}
    for name, traj in (("lp", result.stage_lp), ("feas", result.stage_feas),
                       ("opt", result.stage_opt)):
        stages[name] = {"A": traj.A.tolist(), "t_f": traj.t_f}
    _write_json(path, {"run_id": run_id,
                       "basis": _basis_dict(result.stage_opt.spec),
                       "stages": stages})


def _report_json(path: Path, result: PlanResult, run_id: str,
                 config: dict) -> None:
    payload = {
        "run_id": run_id,
        "status": result.status,
        "stages": {
            "lp": {"t_f": result.stage_lp.t_f,
                   "report": result.report_lp.as_dict()},
            "feas": {"t_f": result.stage_feas.t_f,
                     "report": result.report_feas.as_dict()},
            "opt": {"t_f": result.stage_opt.t_f,
                    "report": result.report_opt.as_dict()},
        },
        "nlp": None if result.nlp is None else {
            "status": result.nlp.status,
            "objective": result.nlp.objective,
            "iterations": result.nlp.log,
        },
        "line_search": {
            "t_f_feas": result.line_search.t_f_feas,
            "trials": [[t, v] for t, v in result.line_search.trials],
        },
        "lp": {"status": result.lp_solution.status,
               "objective": result.lp_solution.objective,
               "iterations": result.lp_solution.iterations},
        "timings": result.timings,
        "config": config,
        "error": None,
    }
    _write_json(path, payload)


def _stage_plots(outdir: Path, result: PlanResult,
                 problem: PlanningProblem, samples: int = 400) -> None:
    n = problem.model.n
    lim = problem.limits
    curves = {}
    for name, traj in (("lp", result.stage_lp), ("feas", result.stage_feas),
                       ("opt", result.stage_opt)):
        ts = np.linspace(0.0, traj.t_f, samples)
        q, qd, qdd = sample_states(traj, ts)
        tau = np.stack([joint_torques(problem.model, q[i], qd[i], qdd[i])
                        for i in range(samples)])
        curves[name] = (ts, q, qd, tau)
    quantities = (
        ("angles.svg", "Joint angles", "q", 1, lim.q_lb, lim.q_ub, "rad"),
        ("velocities.svg", "Joint velocities", "qd", 2, lim.qd_lb, lim.qd_ub,
         "rad/s"),
        ("torques.svg", "Joint torques", "tau", 3, lim.tau_lb, lim.tau_ub,
         "N m"),
    )
    for fname, title, sym, col, lb, ub, unit in quantities:
        panels = []
        for j in range(n):
            series = [Series(stage, curves[stage][0], curves[stage][col][:, j],
                             _STAGE_COLORS[stage])
                      for stage in ("lp", "feas", "opt")]
            panels.append(Panel(ylabel=f"{sym}_{j+1} [{unit}]", series=series,
                                hlines=(lb[j], ub[j])))
        (outdir / fname).write_text(
            render_panels(panels, title, "t [s]"), encoding="utf-8")


def _print_report(report: ConstraintReport) -> None:
    print(f"dense samples: {report.dense_n}")
    print(f"boundary residual: {report.boundary_residual:.3e}")
    for family in ("position", "velocity", "torque"):
        worst = report.worst_by_family(family)
        flag = "ok" if worst <= 1e-6 else "VIOLATED"
        print(f"{family:9s} max violation {worst:.3e}  [{flag}]")
    for e in report.entries:
        if e.max_violation > 1e-6:
            print(f"  {e.family} joint {e.joint}: {e.max_violation:.3e} "
                  f"at s={e.at_s:.4f} ({e.count} samples)")


def cmd_plan(args) -> int:
    outdir = Path(args.output)
    try:
        config = _read_json(args.config)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        _error_report(outdir, None, 2, "config", str(exc))
        return 2
    try:
        problem = problem_from_config(config)
    except ConfigError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        _error_report(outdir, config, 2, "config", str(exc))
        return 2

    run_id = _run_id(config)
    try:
        result = plan(problem)
    except StateInfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _error_report(outdir, config, 3, "state_infeasible", str(exc))
        return 3
    except GravityPremiseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _error_report(outdir, config, 4, "gravity_premise", str(exc))
        return 4
    except PlanningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _error_report(outdir, config, 5, "solver", str(exc))
        return 5

    outdir.mkdir(parents=True, exist_ok=True)
    _trajectory_csv(outdir / "trajectory.csv", result.stage_opt, problem,
                    args.samples)
    _coeffs_json(outdir / "coeffs.json", result, run_id)
    _report_json(outdir / "report.json", result, run_id, config)
    if not args.no_plots:
        _stage_plots(outdir, result, problem)

    t_lp, t_feas, t_opt = result.t_f_values
    print(f"run {run_id}: {result.status}")
    print(f"t_f  relaxed={t_lp:.6f}  dilated={t_feas:.6f}  "
          f"refined={t_opt:.6f} s")
    print(f"final max violation (true bounds): "
          f"{result.report_opt.max_violation:.3e}")
    return 0


def cmd_verify(args) -> int:
    try:
        config = _read_json(args.config)
        coeffs = _read_json(args.coeffs)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return 2
    try:
        problem = problem_from_config(config)
        bdoc = coeffs["basis"]
        if bdoc["type"] == "polynomial":
            spec = BasisSpec.polynomial(int(bdoc["m"]))
        else:
            spec = BasisSpec.bspline(k=int(bdoc["order"]), m=int(bdoc["m"]),
                                     knots=np.asarray(bdoc["knots"], dtype=float))
        stage = coeffs["stages"][args.stage] if "stages" in coeffs else coeffs
        traj = TimeScaledTrajectory(A=np.asarray(stage["A"], dtype=float),
                                    spec=spec, t_f=float(stage["t_f"]))
    except (KeyError, TypeError, ValueError, ConfigError) as exc:
        print(f"error: malformed input: {exc}", file=sys.stderr)
        return 2
    report = constraint_report(traj, problem, dense_n=args.dense)
    _print_report(report)
    return 0 if report.feasible(1e-6) else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="flatplan",
        description="Rest-to-rest manipulator trajectory planning under "
                    "joint, velocity, and torque limits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="run the staged planner")
    p_plan.add_argument("config", help="JSON problem configuration")
    p_plan.add_argument("-o", "--output", required=True,
                        help="output directory")
    p_plan.add_argument("--no-plots", action="store_true",
                        help="skip SVG plot generation")
    p_plan.add_argument("--samples", type=int, default=1000,
                        help="rows in trajectory.csv (default 1000)")
    p_plan.set_defaults(func=cmd_plan)

    p_verify = sub.add_parser("verify", help="re-check saved coefficients")
    p_verify.add_argument("config", help="JSON problem configuration")
    p_verify.add_argument("coeffs", help="coeffs.json from a plan run")
    p_verify.add_argument("--stage", default="opt",
                          choices=["lp", "feas", "opt"],
                          help="stage to verify (default opt)")
    p_verify.add_argument("--dense", type=int, default=1000,
                          help="verification sample count")
    p_verify.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
