"""Feasible-point-preserving NLP refinement by sequential linearization.

The solver improves a feasible starting point without ever leaving the
feasible set: at each iterate it linearizes the nonlinear inequality rows
with the exact forward-mode Jacobian, solves a trust-region LP step with the
in-package simplex, and accepts the trial point only if the true nonlinear
constraints still hold and the true objective strictly decreased.  Rejected
steps shrink the trust region; accepted ones expand it.  Every accepted
iterate is therefore feasible and the objective sequence is non-increasing,
which is the contract the staged planner relies on.

Starting from an infeasible point is a caller bug and is refused outright.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ad
from .basis import LinearConstraintSet
from .lp import LinearProgram, solve_lp

__all__ = [
    "NlpProblem",
    "NlpResult",
    "InfeasibleStartError",
    "solve_nlp",
]


class InfeasibleStartError(ValueError):
    """The initial point violates the constraints beyond tolerance."""


@dataclass(frozen=True)
class NlpProblem:
    """Smooth objective plus linear rows and bounded nonlinear rows.

    ``objective`` and ``nl_ineq`` must be generic compositions: called with
    a plain vector they return plain values, called with a seeded
    :class:`~flatplan.ad.Dual` they return Dual values, which is how the
    solver obtains exact gradients and Jacobians.

    ``guard`` rows, when present, participate in feasibility checks (the
    start test and the accept filter) but are never linearized; they let a
    caller enforce a denser sampling of a semi-infinite constraint than the
    rows the step LP works with.
    """

    dim: int
    objective: Callable
    equalities: LinearConstraintSet
    lin_ineq: LinearConstraintSet
    nl_ineq: Callable | None = None
    nl_lo: np.ndarray = field(default_factory=lambda: np.zeros(0))
    nl_hi: np.ndarray = field(default_factory=lambda: np.zeros(0))
    guard: Callable | None = None  # extra rows checked in the accept filter only
    guard_lo: np.ndarray = field(default_factory=lambda: np.zeros(0))
    guard_hi: np.ndarray = field(default_factory=lambda: np.zeros(0))
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    feas_tol: float = 1e-8
    step_tol: float = 1e-8
    max_iter: int = 200
    trust_init: float = 1.0
    trust_min: float = 1e-10
    trust_max: float = 1e3

    def var_lower(self) -> np.ndarray:
        return np.full(self.dim, -np.inf) if self.lower is None else self.lower

    def var_upper(self) -> np.ndarray:
        return np.full(self.dim, np.inf) if self.upper is None else self.upper

    @staticmethod
    def _range_violation(vals, lo, hi) -> float:
        vals = np.asarray(vals, dtype=float)
        if not vals.size:
            return 0.0
        below = np.where(np.isfinite(lo), lo - vals, -np.inf)
        above = np.where(np.isfinite(hi), vals - hi, -np.inf)
        return float(np.maximum(below, above).max())

    def max_violation(self, x: np.ndarray) -> float:
        worst = max(self.equalities.max_violation(x),
                    self.lin_ineq.max_violation(x))
        if self.nl_ineq is not None:
            worst = max(worst, self._range_violation(self.nl_ineq(x),
                                                     self.nl_lo, self.nl_hi))
        if self.guard is not None:
            worst = max(worst, self._range_violation(self.guard(x),
                                                     self.guard_lo, self.guard_hi))
        lb, ub = self.var_lower(), self.var_upper()
        worst = max(worst,
                    float(np.max(np.maximum(0.0, lb - x), initial=0.0)),
                    float(np.max(np.maximum(0.0, x - ub), initial=0.0)))
        return max(worst, 0.0)


@dataclass(frozen=True)
class NlpResult:
    x_best: np.ndarray
    objective: float
    status: str  # improved | no_improvement | iteration_cap
    log: list[dict]


def _subproblem(problem: NlpProblem, x: np.ndarray, g: np.ndarray,
                nl_vals: np.ndarray, nl_jac: np.ndarray,
                radius: float) -> LinearProgram:
    """Trust-region LP over the step delta = x_trial - x."""
    dim = problem.dim
    eq = problem.equalities
    eq_rows = LinearConstraintSet(dim, eq.coef, eq.lo - eq.coef @ x,
                                  eq.hi - eq.coef @ x)
    li = problem.lin_ineq
    parts = [LinearConstraintSet(dim, li.coef, li.lo - li.coef @ x,
                                 li.hi - li.coef @ x)]
    if nl_vals.size:
        parts.append(LinearConstraintSet(dim, nl_jac,
                                         problem.nl_lo - nl_vals,
                                         problem.nl_hi - nl_vals))
    ineq = LinearConstraintSet.concat(parts)
    lower = np.maximum(problem.var_lower() - x, -radius)
    upper = np.minimum(problem.var_upper() - x, radius)
    return LinearProgram(n=1, m=dim - 1, c=g, equalities=eq_rows,
                         inequalities=ineq, lower=lower, upper=upper)


def solve_nlp(problem: NlpProblem, x0: np.ndarray) -> NlpResult:
    """Monotone-feasible refinement of a feasible start.

    Deterministic for identical inputs.  Raises
    :class:`InfeasibleStartError` if x0 violates any constraint beyond
    ``feas_tol``; otherwise the returned point is feasible and its objective
    does not exceed the starting objective.
    """
    x = np.array(x0, dtype=float)
    v0 = problem.max_violation(x)
    if v0 > problem.feas_tol:
        raise InfeasibleStartError(
            f"initial point violates constraints by {v0:.3e} "
            f"(tolerance {problem.feas_tol:.1e})")
    f = float(ad.value(problem.objective(x)))
    f_start = f
    radius = problem.trust_init
    log = [{"iteration": 0, "objective": f, "max_violation": v0,
            "step_norm": 0.0}]
    status = "no_improvement"
    hit_cap = False

    for it in range(1, problem.max_iter + 1):
        g = ad.gradient(problem.objective, x)
        if problem.nl_ineq is not None:
            nl_vals, nl_jac = ad.value_and_jacobian(problem.nl_ineq, x)
        else:
            nl_vals = np.zeros(0)
            nl_jac = np.zeros((0, problem.dim))
        sub = _subproblem(problem, x, g, nl_vals, nl_jac, radius)
        step_sol = solve_lp(sub)
        if step_sol.status != "optimal":
            radius *= 0.5
            if radius < problem.trust_min:
                break
            continue
        delta = step_sol.x
        step_norm = float(np.max(np.abs(delta)))
        predicted = float(g @ delta)
        if step_norm <= problem.step_tol or predicted >= -1e-14:
            break
        x_trial = x + delta
        f_trial = float(ad.value(problem.objective(x_trial)))
        v_trial = problem.max_violation(x_trial)
        if v_trial <= problem.feas_tol and f_trial < f - 1e-12 * max(1.0, abs(f)):
            x = x_trial
            f = f_trial
            radius = min(radius * 2.0, problem.trust_max)
            log.append({"iteration": it, "objective": f,
                        "max_violation": v_trial, "step_norm": step_norm})
        else:
            radius *= 0.5
            if radius < problem.trust_min:
                break
        if it == problem.max_iter:
            hit_cap = True

    if f < f_start - 1e-12 * max(1.0, abs(f_start)):
        status = "iteration_cap" if hit_cap else "improved"
    elif hit_cap:
        status = "iteration_cap"
    return NlpResult(x_best=x, objective=f, status=status, log=log)
