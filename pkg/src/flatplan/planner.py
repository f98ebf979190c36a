"""Staged rest-to-rest planning: state-feasible LP, time dilation, NLP.

The pipeline produces three named solutions:

* stage_lp    -- time-optimal under sampled/hull state constraints only;
                 typically violates torque bounds somewhere.
* stage_feas  -- same coefficient matrix with the final time stretched until
                 every sampled torque fits inside margin-tightened bounds.
                 Stretching works whenever the static (gravity) torque along
                 the path sits strictly inside the bounds, because the
                 dynamic part of the torque decays as 1/t_f^2 while position
                 rows ignore t_f and velocity windows widen with it.
* stage_opt   -- the NLP refinement started from stage_feas, which by
                 construction never hands the solver an infeasible point.

Torque checks inside the pipeline use bounds tightened by a small relative
margin so the refinement has room to move; reported results are always
verified against the true bounds.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import ad
from .basis import BasisSpec, LinearConstraintSet, eval_basis_many
from .dynamics import joint_torques, scaled_joint_torques
from .lp import LPSolution, build_time_optimal_lp, solve_lp
from .model import ConfigError, RobotModel, load_robot
from .nlp import InfeasibleStartError, NlpProblem, NlpResult, solve_nlp
from .trajectory import (BoundaryConditions, TimeScaledTrajectory,
                         boundary_constraint_rows, sample_states)

__all__ = [
    "Limits",
    "SolverSettings",
    "CostSpec",
    "PlanningProblem",
    "PlanResult",
    "PremiseCheck",
    "LineSearchResult",
    "ConstraintReport",
    "PlanningError",
    "StateInfeasibleError",
    "GravityPremiseError",
    "check_gravity_premise",
    "line_search_tf",
    "constraint_report",
    "plan",
    "problem_from_config",
]


class PlanningError(RuntimeError):
    """Base class for planner failures."""


class StateInfeasibleError(PlanningError):
    """The state-constraint relaxation has no solution."""

    def __init__(self, message: str, certificate: float | None = None):
        super().__init__(message)
        self.certificate = certificate


class GravityPremiseError(PlanningError):
    """Static torque along the candidate path leaves the torque bounds."""

    def __init__(self, message: str, margins: np.ndarray):
        super().__init__(message)
        self.margins = margins


@dataclass(frozen=True)
class Limits:
    """Box limits on joint angle, joint velocity, and torque."""

    q_lb: np.ndarray
    q_ub: np.ndarray
    qd_lb: np.ndarray
    qd_ub: np.ndarray
    tau_lb: np.ndarray
    tau_ub: np.ndarray

    def __post_init__(self):
        n = None
        for name in ("q_lb", "q_ub", "qd_lb", "qd_ub", "tau_lb", "tau_ub"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 1 or not np.all(np.isfinite(arr)):
                raise ValueError(f"limit vector '{name}' must be finite 1-D")
            if n is None:
                n = arr.size
            elif arr.size != n:
                raise ValueError("limit vectors must share one length")
            object.__setattr__(self, name, arr)
        for lo, hi, what in ((self.q_lb, self.q_ub, "position"),
                             (self.qd_lb, self.qd_ub, "velocity"),
                             (self.tau_lb, self.tau_ub, "torque")):
            if np.any(lo > hi):
                raise ValueError(f"{what} limits are inverted")

    @property
    def n(self) -> int:
        return self.q_lb.size

    def tightened_torque(self, margin: float) -> tuple[np.ndarray, np.ndarray]:
        """Torque bounds shrunk by a relative margin of their magnitude."""
        return (self.tau_lb + margin * np.abs(self.tau_lb),
                self.tau_ub - margin * np.abs(self.tau_ub))


@dataclass(frozen=True)
class SolverSettings:
    n_samples: int = 24
    torque_margin: float = 0.02
    t_min: float = 1e-2
    line_search_gamma: float = 1.5
    bisection_steps: int = 20
    expansion_cap: float = 1e4
    premise_density: int = 10
    constraint_mode: str = "sampled"  # or "hull" (B-spline only)
    nlp_max_iter: int = 200
    feas_tol: float = 1e-8
    step_tol: float = 1e-8
    trust_init: float = 1.0
    dense_report_samples: int = 1000
    lp_max_iter: int | None = None


@dataclass(frozen=True)
class CostSpec:
    kind: str = "time"  # or "fixed_time_effort"
    t_f: float | None = None

    def __post_init__(self):
        if self.kind not in ("time", "fixed_time_effort"):
            raise ValueError(f"unknown cost kind '{self.kind}'")
        if self.kind == "fixed_time_effort" and (self.t_f is None or self.t_f <= 0):
            raise ValueError("fixed_time_effort cost needs a positive t_f")


@dataclass(frozen=True)
class PlanningProblem:
    model: RobotModel
    spec: BasisSpec
    bc: BoundaryConditions
    limits: Limits
    cost: CostSpec = field(default_factory=CostSpec)
    settings: SolverSettings = field(default_factory=SolverSettings)

    def __post_init__(self):
        n = self.model.n
        if self.bc.n != n or self.limits.n != n:
            raise ValueError("boundary/limit vectors must match the joint count")
        for point, name in ((self.bc.q0, "q0"), (self.bc.qf, "qf")):
            if np.any(point < self.limits.q_lb) or np.any(point > self.limits.q_ub):
                raise ValueError(f"boundary point {name} lies outside the "
                                 "position limits")
        if self.cost.kind == "time" and not self.bc.rest_to_rest:
            raise ValueError("free final-time planning requires rest-to-rest "
                             "boundary rates (qd0 = qdf = 0)")
        if self.settings.constraint_mode == "hull" and self.spec.family != "bspline":
            raise ValueError("hull constraint mode requires a B-spline basis")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.settings.n_samples)

    @property
    def check_grid(self) -> np.ndarray:
        """Denser grid (premise_density x the solver intervals) that contains
        the solver grid, used for premise/line-search/filter torque checks."""
        n = self.settings.premise_density * (self.settings.n_samples - 1) + 1
        return np.linspace(0.0, 1.0, n)


@dataclass(frozen=True)
class PremiseCheck:
    holds: bool
    margins: np.ndarray  # per joint, min distance of G to either bound


@dataclass(frozen=True)
class LineSearchResult:
    t_f_feas: float
    trials: list[tuple[float, float]]  # (t_f, max torque violation)


@dataclass(frozen=True)
class FamilyViolation:
    family: str
    joint: int
    max_violation: float
    at_s: float
    count: int

    def as_dict(self) -> dict:
        return {"family": self.family, "joint": self.joint,
                "max_violation": self.max_violation, "at_s": self.at_s,
                "count": self.count}


@dataclass(frozen=True)
class ConstraintReport:
    """Dense verification of a trajectory against TRUE bounds.

    ``max_violation``/``feasible`` cover the bound families (position,
    velocity, torque); the boundary-condition residual is reported alongside
    so externally produced trajectories can be bound-checked against a
    problem whose endpoints they were never meant to hit.
    """

    entries: list[FamilyViolation]
    boundary_residual: float
    dense_n: int

    @property
    def max_violation(self) -> float:
        return max((e.max_violation for e in self.entries), default=0.0)

    def feasible(self, tol: float = 1e-6) -> bool:
        return self.max_violation <= tol

    def worst_by_family(self, family: str) -> float:
        return max((e.max_violation for e in self.entries
                    if e.family == family), default=0.0)

    def as_dict(self) -> dict:
        return {"dense_n": self.dense_n,
                "boundary_residual": self.boundary_residual,
                "max_violation": self.max_violation,
                "entries": [e.as_dict() for e in self.entries]}


@dataclass(frozen=True)
class PlanResult:
    stage_lp: TimeScaledTrajectory
    stage_feas: TimeScaledTrajectory
    stage_opt: TimeScaledTrajectory
    report_lp: ConstraintReport
    report_feas: ConstraintReport
    report_opt: ConstraintReport
    status: str  # "ok" or "ok_nlp_fallback"
    nlp: NlpResult | None
    line_search: LineSearchResult
    lp_solution: LPSolution
    timings: dict

    @property
    def t_f_values(self) -> tuple[float, float, float]:
        return (self.stage_lp.t_f, self.stage_feas.t_f, self.stage_opt.t_f)


# ---------------------------------------------------------------------------
# Pipeline pieces
# ---------------------------------------------------------------------------

def _grid_curves(A: np.ndarray, spec: BasisSpec, s: np.ndarray):
    B0 = eval_basis_many(spec, s, 0)
    B1 = eval_basis_many(spec, s, 1)
    B2 = eval_basis_many(spec, s, 2)
    return B0 @ A.T, B1 @ A.T, B2 @ A.T


def _torque_rows(model: RobotModel, q, qp, qpp, t_f) -> np.ndarray:
    """Torque at every grid point, shape (N, n)."""
    return np.stack([
        scaled_joint_torques(model, q[i], qp[i], qpp[i], t_f)
        for i in range(q.shape[0])
    ])


def check_gravity_premise(A: np.ndarray, spec: BasisSpec, model: RobotModel,
                          tau_lb, tau_ub, dense_n: int = 240) -> PremiseCheck:
    """Is the static torque along A b(s) strictly inside the bounds?

    Evaluated on a dense parameter grid; the returned per-joint margin is
    the smallest distance of G(A b(s)) to either bound (negative when the
    premise fails).
    """
    tau_lb = np.asarray(tau_lb, dtype=float)
    tau_ub = np.asarray(tau_ub, dtype=float)
    s = np.linspace(0.0, 1.0, dense_n)
    q = eval_basis_many(spec, s, 0) @ A.T
    zero = np.zeros(model.n)
    margins = np.full(model.n, np.inf)
    for i in range(s.size):
        g = joint_torques(model, q[i], zero, zero)
        margins = np.minimum(margins, np.minimum(g - tau_lb, tau_ub - g))
    return PremiseCheck(holds=bool(np.all(margins > 0.0)), margins=margins)


def line_search_tf(A: np.ndarray, spec: BasisSpec, model: RobotModel,
                   limits: Limits, t_f0: float, grid: np.ndarray,
                   settings: SolverSettings | None = None) -> LineSearchResult:
    """Smallest-found t_f >= t_f0 whose sampled torques fit the tightened bounds.

    Geometric expansion by the line-search factor until feasible, then
    bisection between the last infeasible and first feasible values.  The
    check also covers the velocity bound on the supplied grid (which may be
    denser than the one the relaxation used): position rows do not involve
    t_f, and both the velocity and the non-gravity torque terms shrink as
    t_f grows, so feasibility is monotone along the search.  Termination is
    guaranteed when the static-torque premise holds; the expansion cap is
    defensive.
    """
    settings = settings or SolverSettings()
    lb, ub = limits.tightened_torque(settings.torque_margin)
    q, qp, qpp = _grid_curves(A, spec, np.asarray(grid, dtype=float))

    def max_violation(t_f: float) -> float:
        tau = _torque_rows(model, q, qp, qpp, t_f)
        worst = float(np.maximum(lb - tau, tau - ub).max())
        qd = qp / t_f
        worst = max(worst, float(np.maximum(limits.qd_lb - qd,
                                            qd - limits.qd_ub).max()))
        return worst

    trials: list[tuple[float, float]] = []
    v0 = max_violation(t_f0)
    trials.append((t_f0, v0))
    if v0 <= 0.0:
        return LineSearchResult(t_f_feas=t_f0, trials=trials)

    lo, hi = t_f0, t_f0
    cap = settings.expansion_cap * t_f0
    while True:
        hi *= settings.line_search_gamma
        if hi > cap:
            premise = check_gravity_premise(A, spec, model, lb, ub)
            raise PlanningError(
                f"final-time expansion exceeded its cap ({cap:.3g} s) without "
                f"reaching torque feasibility; static-torque margins "
                f"{np.array2string(premise.margins, precision=4)}")
        v = max_violation(hi)
        trials.append((hi, v))
        if v <= 0.0:
            break
        lo = hi
    for _ in range(settings.bisection_steps):
        mid = 0.5 * (lo + hi)
        v = max_violation(mid)
        trials.append((mid, v))
        if v <= 0.0:
            hi = mid
        else:
            lo = mid
    return LineSearchResult(t_f_feas=hi, trials=trials)


def constraint_report(traj: TimeScaledTrajectory, problem: PlanningProblem,
                      dense_n: int | None = None) -> ConstraintReport:
    """Dense check of position, velocity, torque against TRUE bounds."""
    dense_n = dense_n or problem.settings.dense_report_samples
    lim = problem.limits
    ts = np.linspace(0.0, traj.t_f, dense_n)
    q, qd, qdd = sample_states(traj, ts)
    tau = np.stack([
        joint_torques(problem.model, q[i], qd[i], qdd[i])
        for i in range(dense_n)
    ])
    s = ts / traj.t_f
    entries = []
    for family, vals, lo, hi in (("position", q, lim.q_lb, lim.q_ub),
                                 ("velocity", qd, lim.qd_lb, lim.qd_ub),
                                 ("torque", tau, lim.tau_lb, lim.tau_ub)):
        excess = np.maximum(lo[None, :] - vals, vals - hi[None, :])
        for j in range(lim.n):
            col = excess[:, j]
            worst = int(np.argmax(col))
            entries.append(FamilyViolation(
                family=family, joint=j + 1,
                max_violation=float(max(col[worst], 0.0)),
                at_s=float(s[worst]),
                count=int(np.count_nonzero(col > 0.0))))
    bc = problem.bc
    b_res = max(
        float(np.max(np.abs(q[0] - bc.q0))),
        float(np.max(np.abs(q[-1] - bc.qf))),
        float(np.max(np.abs(qd[0] - bc.qd0))),
        float(np.max(np.abs(qd[-1] - bc.qdf))),
    )
    return ConstraintReport(entries=entries, boundary_residual=b_res,
                            dense_n=dense_n)


def _nlp_problem(problem: PlanningProblem) -> NlpProblem:
    """Assemble the refinement problem over x = (vec(A), t_f)."""
    model, spec, bc = problem.model, problem.spec, problem.bc
    st = problem.settings
    n, m = model.n, spec.m
    dim = n * m + 1
    grid = problem.grid
    B0 = eval_basis_many(spec, grid, 0)
    B1 = eval_basis_many(spec, grid, 1)
    B2 = eval_basis_many(spec, grid, 2)
    N = grid.size

    lp_shell = build_time_optimal_lp(spec, bc, problem.limits, grid,
                                     t_min=st.t_min, mode=st.constraint_mode)
    lb_t, ub_t = problem.limits.tightened_torque(st.torque_margin)

    def torque_stack(x):
        A = x[: n * m].reshape((n, m))
        t_f = x[-1]
        rows = []
        for i in range(N):
            rows.append(scaled_joint_torques(model, A @ B0[i], A @ B1[i],
                                             A @ B2[i], t_f))
        return ad.concat(rows)

    # Accept-filter guard: tightened torque plus true state bounds on the
    # dense check grid, so accepted iterates cannot ride into the gaps
    # between the solver samples.
    cg = problem.check_grid
    G0 = eval_basis_many(spec, cg, 0)
    G1 = eval_basis_many(spec, cg, 1)
    G2 = eval_basis_many(spec, cg, 2)
    lim = problem.limits

    def guard_stack(x):
        A = x[: n * m].reshape((n, m))
        t_f = x[-1]
        q, qp, qpp = G0 @ A.T, G1 @ A.T, G2 @ A.T
        tau = np.concatenate([
            scaled_joint_torques(model, q[i], qp[i], qpp[i], t_f)
            for i in range(cg.size)
        ])
        return np.concatenate([tau, q.ravel(), (qp / t_f).ravel()])

    # State guard bounds carry a hair of slack (well under the reporting
    # tolerance) so vertex solutions that brush a bound between their own
    # sample points are not spuriously refused as starting points.
    cushion = 1e-7
    guard_lo = np.concatenate([np.tile(lb_t, cg.size),
                               np.tile(lim.q_lb - cushion, cg.size),
                               np.tile(lim.qd_lb - cushion, cg.size)])
    guard_hi = np.concatenate([np.tile(ub_t, cg.size),
                               np.tile(lim.q_ub + cushion, cg.size),
                               np.tile(lim.qd_ub + cushion, cg.size)])

    if problem.cost.kind == "time":
        def objective(x):
            return x[-1]
        lower = lp_shell.lower
        upper = lp_shell.upper
    else:
        def objective(x):
            tau = torque_stack(x)
            return ad.dot(tau, tau)
        lower = lp_shell.lower.copy()
        upper = lp_shell.upper.copy()
        lower[-1] = upper[-1] = problem.cost.t_f

    return NlpProblem(
        dim=dim,
        objective=objective,
        equalities=lp_shell.equalities,
        lin_ineq=lp_shell.inequalities,
        nl_ineq=torque_stack,
        nl_lo=np.tile(lb_t, N),
        nl_hi=np.tile(ub_t, N),
        guard=guard_stack,
        guard_lo=guard_lo,
        guard_hi=guard_hi,
        lower=lower,
        upper=upper,
        feas_tol=st.feas_tol,
        step_tol=st.step_tol,
        max_iter=st.nlp_max_iter,
        trust_init=st.trust_init,
    )


def plan(problem: PlanningProblem) -> PlanResult:
    """Run the full three-stage pipeline.

    Raises :class:`StateInfeasibleError` when the state relaxation is
    infeasible and :class:`GravityPremiseError` when static torque along the
    relaxed solution leaves the (tightened) torque bounds.  An NLP that
    cannot improve simply returns the dilated solution; by construction the
    refinement never starts infeasible.
    """
    st = problem.settings
    timings: dict[str, float] = {}
    grid = problem.grid

    t0 = time.perf_counter()
    lp_prob = build_time_optimal_lp(problem.spec, problem.bc, problem.limits,
                                    grid, t_min=st.t_min,
                                    mode=st.constraint_mode)
    if problem.cost.kind == "fixed_time_effort":
        lower = lp_prob.lower.copy()
        upper = lp_prob.upper.copy()
        lower[-1] = upper[-1] = problem.cost.t_f
        lp_prob = replace(lp_prob, lower=lower, upper=upper)
    lp_sol = solve_lp(lp_prob, max_iter=st.lp_max_iter)
    timings["lp"] = time.perf_counter() - t0
    if lp_sol.status == "infeasible":
        raise StateInfeasibleError(
            f"state-infeasible problem (phase-1 certificate "
            f"{lp_sol.infeasibility:.3e})", certificate=lp_sol.infeasibility)
    if lp_sol.status != "optimal":
        raise PlanningError(f"state-constraint relaxation failed: "
                            f"{lp_sol.status} ({lp_sol.message})")
    stage_lp = TimeScaledTrajectory(A=lp_sol.A, spec=problem.spec,
                                    t_f=lp_sol.t_f)

    t0 = time.perf_counter()
    lb_t, ub_t = problem.limits.tightened_torque(st.torque_margin)
    check_grid = problem.check_grid
    if problem.cost.kind == "time":
        premise = check_gravity_premise(
            stage_lp.A, problem.spec, problem.model, lb_t, ub_t,
            dense_n=check_grid.size)
        if not premise.holds:
            raise GravityPremiseError(
                "static torque along the relaxed path leaves the tightened "
                "torque bounds (per-joint margins "
                f"{np.array2string(premise.margins, precision=4)})",
                margins=premise.margins)
        search = line_search_tf(stage_lp.A, problem.spec, problem.model,
                                problem.limits, stage_lp.t_f, check_grid, st)
    else:
        q, qp, qpp = _grid_curves(stage_lp.A, problem.spec, check_grid)
        tau = _torque_rows(problem.model, q, qp, qpp, stage_lp.t_f)
        v = float(np.maximum(lb_t - tau, tau - ub_t).max())
        if v > 0.0:
            raise PlanningError(
                f"fixed final time {problem.cost.t_f} s is torque-infeasible "
                f"for the state-feasible solution (violation {v:.3e})")
        search = LineSearchResult(t_f_feas=stage_lp.t_f,
                                  trials=[(stage_lp.t_f, v)])
    timings["line_search"] = time.perf_counter() - t0
    stage_feas = TimeScaledTrajectory(A=stage_lp.A, spec=problem.spec,
                                      t_f=search.t_f_feas)

    t0 = time.perf_counter()
    nlp_prob = _nlp_problem(problem)
    x0 = np.concatenate([stage_feas.A.ravel(), [stage_feas.t_f]])
    status = "ok"
    nlp_res: NlpResult | None
    try:
        nlp_res = solve_nlp(nlp_prob, x0)
        x_best = nlp_res.x_best
    except InfeasibleStartError as exc:  # unreachable via this pipeline
        status = "ok_nlp_fallback"
        nlp_res = None
        x_best = x0
    timings["nlp"] = time.perf_counter() - t0
    n, m = problem.model.n, problem.spec.m
    stage_opt = TimeScaledTrajectory(A=x_best[: n * m].reshape(n, m),
                                     spec=problem.spec, t_f=float(x_best[-1]))

    t0 = time.perf_counter()
    report_lp = constraint_report(stage_lp, problem)
    report_feas = constraint_report(stage_feas, problem)
    report_opt = constraint_report(stage_opt, problem)
    timings["reports"] = time.perf_counter() - t0

    return PlanResult(stage_lp=stage_lp, stage_feas=stage_feas,
                      stage_opt=stage_opt, report_lp=report_lp,
                      report_feas=report_feas, report_opt=report_opt,
                      status=status, nlp=nlp_res, line_search=search,
                      lp_solution=lp_sol, timings=timings)


# ---------------------------------------------------------------------------
# Configuration ingestion
# ---------------------------------------------------------------------------

def _limits_from_config(doc: dict, n: int) -> Limits:
    def grab(key):
        if key not in doc:
            raise ConfigError(f"missing field 'limits.{key}'")
        arr = np.asarray(doc[key], dtype=float)
        if arr.shape != (n,):
            raise ConfigError(f"field 'limits.{key}' must have length {n}")
        return arr
    return Limits(q_lb=grab("q_min"), q_ub=grab("q_max"),
                  qd_lb=grab("qd_min"), qd_ub=grab("qd_max"),
                  tau_lb=grab("tau_min"), tau_ub=grab("tau_max"))


def _basis_from_config(doc: dict) -> BasisSpec:
    kind = doc.get("type")
    if kind == "polynomial":
        if "m" not in doc:
            raise ConfigError("missing field 'basis.m'")
        return BasisSpec.polynomial(int(doc["m"]))
    if kind == "bspline":
        for key in ("m", "order"):
            if key not in doc:
                raise ConfigError(f"missing field 'basis.{key}'")
        knots = doc.get("knots")
        return BasisSpec.bspline(k=int(doc["order"]), m=int(doc["m"]),
                                 knots=None if knots is None
                                 else np.asarray(knots, dtype=float))
    raise ConfigError(f"unknown basis type '{kind}'")


def _settings_from_config(doc: dict) -> SolverSettings:
    known = {
        "N": "n_samples",
        "torque_margin": "torque_margin",
        "t_min": "t_min",
        "line_search_gamma": "line_search_gamma",
        "bisection_steps": "bisection_steps",
        "expansion_cap": "expansion_cap",
        "premise_density": "premise_density",
        "constraint_mode": "constraint_mode",
        "nlp_max_iter": "nlp_max_iter",
        "feas_tol": "feas_tol",
        "step_tol": "step_tol",
        "trust_init": "trust_init",
        "dense_report_samples": "dense_report_samples",
        "lp_max_iter": "lp_max_iter",
    }
    kwargs = {}
    for key, value in doc.items():
        if key not in known:
            raise ConfigError(f"unknown solver option '{key}'")
        kwargs[known[key]] = value
    for int_key in ("n_samples", "bisection_steps", "premise_density",
                    "nlp_max_iter", "dense_report_samples", "lp_max_iter"):
        if kwargs.get(int_key) is not None:
            kwargs[int_key] = int(kwargs[int_key])
    return SolverSettings(**kwargs)


def problem_from_config(doc: dict) -> PlanningProblem:
    """Build a PlanningProblem from a parsed configuration document."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    for key in ("robot", "limits", "boundary", "basis"):
        if key not in doc:
            raise ConfigError(f"missing top-level section '{key}'")
    model = load_robot(doc["robot"])
    n = model.n
    bdoc = doc["boundary"]
    vecs = {}
    for key in ("q0", "qd0", "qf", "qdf"):
        if key not in bdoc:
            raise ConfigError(f"missing field 'boundary.{key}'")
        arr = np.asarray(bdoc[key], dtype=float)
        if arr.shape != (n,):
            raise ConfigError(f"field 'boundary.{key}' must have length {n}")
        vecs[key] = arr
    try:
        limits = _limits_from_config(doc["limits"], n)
        bc = BoundaryConditions(**vecs)
        spec = _basis_from_config(doc["basis"])
        settings = _settings_from_config(doc.get("solver", {}))
        cdoc = doc.get("cost", {"type": "time"})
        cost = CostSpec(kind=cdoc.get("type", "time"), t_f=cdoc.get("t_f"))
        return PlanningProblem(model=model, spec=spec, bc=bc, limits=limits,
                               cost=cost, settings=settings)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
