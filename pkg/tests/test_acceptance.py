"""Acceptance suite: one test per release criterion, one PASS line each.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
lines; each test also asserts, so a plain pytest run is authoritative.
"""

import json
import time
from pathlib import Path

import numpy as np
import pytest

from oracles import twolink_config, twolink_torque
from flatplan import ad
from flatplan.basis import (BasisSpec, eval_basis, eval_basis_many,
                            hull_bounds_position, hull_bounds_velocity)
from flatplan.dynamics import (JointState, ScaledJointState, gravity_torque,
                               inverse_dynamics, joint_torques,
                               scaled_joint_torques, time_scaled_torque)
from flatplan.lp import solve_lp
from flatplan.model import load_robot
from flatplan.planner import (Limits, PlanningProblem, SolverSettings,
                              constraint_report, plan, problem_from_config)
from flatplan.trajectory import BoundaryConditions

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def record(criterion: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {criterion}: {detail}"


def test_criterion_1_dynamics_oracle(twolink):
    start = time.perf_counter()
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(1000):
        q = rng.uniform(-np.pi, np.pi, 2)
        qd = rng.uniform(-5, 5, 2)
        qdd = rng.uniform(-10, 10, 2)
        tau = inverse_dynamics(twolink, JointState(q=q, qd=qd, qdd=qdd))
        ref = twolink_torque(q, qd, qdd)
        worst = max(worst, np.max(np.abs(tau - ref))
                    / max(1.0, np.max(np.abs(ref))))
    elapsed = time.perf_counter() - start
    record(1, worst <= 1e-9 and elapsed < 5.0,
           f"max rel err {worst:.2e}, {elapsed:.2f} s")


def test_criterion_2_time_scaling_consistency(twolink):
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(100):
        q = rng.uniform(-np.pi, np.pi, 2)
        qp = rng.uniform(-3, 3, 2)
        qpp = rng.uniform(-6, 6, 2)
        t_f = 10 ** rng.uniform(-1, 2)
        a = time_scaled_torque(twolink, ScaledJointState(q, qp, qpp, t_f))
        b = inverse_dynamics(twolink, JointState(q=q, qd=qp / t_f,
                                                 qdd=qpp / t_f ** 2))
        worst = max(worst, np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b))))
    record(2, worst <= 1e-10, f"max rel err {worst:.2e}")


def test_criterion_3_gravity_limit_slope(twolink):
    rng = np.random.default_rng(103)
    A = rng.normal(scale=0.8, size=(2, 6))
    spec = BasisSpec.polynomial(6)
    tfs = np.array([1.0, 10.0, 100.0, 1000.0])
    worst_dev = 0.0
    for s in (0.15, 0.4, 0.65, 0.9):
        q = A @ eval_basis(spec, s, 0)
        qp = A @ eval_basis(spec, s, 1)
        qpp = A @ eval_basis(spec, s, 2)
        g = gravity_torque(twolink, q)
        res = [np.max(np.abs(time_scaled_torque(
            twolink, ScaledJointState(q, qp, qpp, t)) - g)) for t in tfs]
        slope = np.polyfit(np.log10(tfs), np.log10(res), 1)[0]
        worst_dev = max(worst_dev, abs(slope + 2.0))
    record(3, worst_dev <= 0.01, f"max |slope + 2| = {worst_dev:.2e}")


def test_criterion_4_hull_sufficiency():
    rng = np.random.default_rng(104)
    s_dense = np.linspace(0.0, 1.0, 10_000)
    basis_cache: dict[tuple[int, int], tuple] = {}
    worst = 0.0
    pou_worst = 0.0
    for _ in range(500):
        k = int(rng.integers(3, 10))
        m = int(rng.integers(k, 25))
        n = int(rng.integers(1, 4))
        if (k, m) not in basis_cache:
            spec = BasisSpec.bspline(k=k, m=m)
            basis_cache[(k, m)] = (spec,
                                   eval_basis_many(spec, s_dense, 0),
                                   eval_basis_many(spec, s_dense, 1))
        spec, B0, B1 = basis_cache[(k, m)]
        pou_worst = max(pou_worst, np.max(np.abs(B0.sum(axis=1) - 1.0)))
        assert np.allclose(B0[0], np.eye(m)[0], atol=1e-14)
        assert np.allclose(B0[-1], np.eye(m)[m - 1], atol=1e-14)

        q_lb = -rng.uniform(0.3, 2.5, n)
        q_ub = rng.uniform(0.3, 2.5, n)
        qd_lb = -rng.uniform(0.3, 3.0, n)
        qd_ub = rng.uniform(0.3, 3.0, n)
        A = rng.uniform(q_lb[:, None], q_ub[:, None], (n, m))
        gaps = spec.knots[k:m + k - 1] - spec.knots[1:m]
        d = (k - 1) * np.diff(A, axis=1) / gaps[None, :]
        t_f = float(np.max(np.where(d > 0, d / qd_ub[:, None],
                                    d / qd_lb[:, None]), initial=1e-6)
                    * rng.uniform(1.0, 2.0) + 1e-9)
        x = np.concatenate([A.ravel(), [t_f]])
        assert hull_bounds_position(spec, q_lb, q_ub).max_violation(x) <= 1e-10
        assert hull_bounds_velocity(spec, qd_lb, qd_ub).max_violation(x) <= 1e-9

        curve = B0 @ A.T
        rate = B1 @ A.T / t_f
        worst = max(worst,
                    float(np.max(q_lb - curve.min(axis=0), initial=0.0)),
                    float(np.max(curve.max(axis=0) - q_ub, initial=0.0)),
                    float(np.max(qd_lb - rate.min(axis=0), initial=0.0)),
                    float(np.max(rate.max(axis=0) - qd_ub, initial=0.0)))
    record(4, worst <= 1e-10 and pou_worst <= 1e-12,
           f"dense excess {worst:.2e}, partition-of-unity {pou_worst:.2e}")


def test_criterion_5_ad_gradient(twolink):
    spec = BasisSpec.polynomial(10)
    grid = np.linspace(0, 1, 24)
    B = [eval_basis_many(spec, grid, d) for d in range(3)]
    n, m = 2, 10

    def objective(x):
        A = x[: n * m].reshape((n, m))
        t_f = x[-1]
        total = None
        for i in range(grid.size):
            tau = scaled_joint_torques(twolink, A @ B[0][i], A @ B[1][i],
                                       A @ B[2][i], t_f)
            term = ad.dot(tau, tau)
            total = term if total is None else total + term
        return total

    rng = np.random.default_rng(105)
    h = 1e-6
    worst = 0.0
    for _ in range(20):
        x0 = np.concatenate([rng.normal(scale=0.5, size=n * m),
                             [10 ** rng.uniform(-0.2, 0.7)]])
        g = ad.gradient(objective, x0)
        fd = np.zeros_like(g)
        for i in range(x0.size):
            xp, xm = x0.copy(), x0.copy()
            xp[i] += h
            xm[i] -= h
            fd[i] = (objective(xp) - objective(xm)) / (2 * h)
        worst = max(worst, np.max(np.abs(g - fd)) / max(1.0, np.max(np.abs(g))))
    record(5, worst <= 1e-6, f"max rel err vs central differences {worst:.2e}")


def test_criterion_6_lp_solver():
    from test_lp import small_lp
    inf = np.inf
    ok = True
    details = []

    lp = small_lp([-1, -1], ineq_rows=[[1, 2], [1, 0]], ineq_lo=[-inf, -inf],
                  ineq_hi=[4, 2], lower=[0, 0])
    sol = solve_lp(lp)
    ok &= sol.status == "optimal" and abs(sol.objective + 3.0) < 1e-9
    resub = max(lp.equalities.max_violation(sol.x),
                lp.inequalities.max_violation(sol.x))
    ok &= resub <= 1e-8
    details.append(f"textbook obj {sol.objective:.9f}")

    lp_deg = small_lp([-1, 0], ineq_rows=[[1, 0], [1, 1]],
                      ineq_lo=[-inf, -inf], ineq_hi=[1, 1], lower=[0, 0])
    sol_deg = solve_lp(lp_deg)
    ok &= sol_deg.status == "optimal" and abs(sol_deg.objective + 1.0) < 1e-9
    details.append("degenerate vertex ok")

    lp_inf = small_lp([1, 0], ineq_rows=[[1, 0], [1, 0]], ineq_lo=[2, -inf],
                      ineq_hi=[inf, 1], lower=[0, 0])
    sol_inf = solve_lp(lp_inf)
    ok &= sol_inf.status == "infeasible" and sol_inf.infeasibility > 0.5
    details.append(f"infeasibility certificate {sol_inf.infeasibility:.3f}")

    lp_eq = small_lp([1, 1], eq_rows=[[1, 1]], eq_rhs=[1], lower=[0, 0])
    ok &= abs(solve_lp(lp_eq).objective - 1.0) < 1e-10

    first = solve_lp(lp)
    for _ in range(10):
        again = solve_lp(lp)
        ok &= np.array_equal(again.x, first.x)
    details.append("deterministic x10")
    record(6, bool(ok), "; ".join(details))


def test_criterion_7_two_link_reproduction():
    start = time.perf_counter()
    with open(CONFIGS / "two_link.json") as fh:
        problem = problem_from_config(json.load(fh))
    result = plan(problem)
    elapsed = time.perf_counter() - start

    t_lp, t_feas, t_opt = result.t_f_values
    lp_grid_report = constraint_report(result.stage_lp, problem,
                                       dense_n=problem.settings.n_samples)
    lp_state_ok = (lp_grid_report.worst_by_family("position") <= 1e-8
                   and lp_grid_report.worst_by_family("velocity") <= 1e-8)
    lp_torque_fails = result.report_lp.worst_by_family("torque") > 1e-6
    feas_ok = (result.report_feas.feasible(1e-6)
               and result.report_feas.boundary_residual <= 1e-6
               and result.report_feas.dense_n == 1000)
    opt_ok = (result.report_opt.feasible(1e-6)
              and result.report_opt.boundary_residual <= 1e-6)
    ordering = t_lp <= t_opt + 1e-9 and t_opt < t_feas
    ok = (lp_state_ok and lp_torque_fails and feas_ok and opt_ok
          and ordering and elapsed < 60.0)
    record(7, ok,
           f"t_f {t_lp:.4f} <= {t_opt:.4f} < {t_feas:.4f}; relaxed-stage "
           f"torque excess {result.report_lp.worst_by_family('torque'):.2f}; "
           f"{elapsed:.1f} s")


def test_criterion_8_six_dof_scalability():
    start = time.perf_counter()
    with open(CONFIGS / "six_dof_generic.json") as fh:
        problem = problem_from_config(json.load(fh))
    result = plan(problem)
    elapsed = time.perf_counter() - start

    rng = np.random.default_rng(108)
    q = rng.uniform(-1, 1, 6)
    qd = rng.uniform(-1, 1, 6)
    qdd = rng.uniform(-1, 1, 6)
    best = np.inf
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(50):
            joint_torques(problem.model, q, qd, qdd)
        best = min(best, (time.perf_counter() - t0) / 50)
    ok = (problem.spec.k == 9 and problem.spec.m == 24
          and result.report_feas.feasible(1e-6)
          and result.report_opt.feasible(1e-6)
          and best < 1e-3 and elapsed < 600.0)
    record(8, ok, f"pipeline {elapsed:.1f} s; inverse dynamics "
                  f"{best * 1e6:.0f} us/eval; t_f {result.t_f_values}")


def test_criterion_9_feasibility_safety(twolink):
    rng = np.random.default_rng(109)
    successes = 0
    failures = []
    for trial in range(50):
        qf = rng.uniform(-0.9 * np.pi, 0.9 * np.pi, 2)
        tau_scale = rng.uniform(1.0, 1.5)
        qd_scale = rng.uniform(0.7, 1.3)
        problem = PlanningProblem(
            model=twolink, spec=BasisSpec.polynomial(10),
            bc=BoundaryConditions(q0=[0.0, 0.0], qd0=[0.0, 0.0], qf=qf,
                                  qdf=[0.0, 0.0]),
            limits=Limits(q_lb=[-np.pi, -np.pi], q_ub=[np.pi, np.pi],
                          qd_lb=np.array([-4.0, -1.5]) * qd_scale,
                          qd_ub=np.array([4.0, 1.5]) * qd_scale,
                          tau_lb=np.array([-19.6, -6.0]) * tau_scale,
                          tau_ub=np.array([19.6, 6.0]) * tau_scale),
            settings=SolverSettings(nlp_max_iter=40),
        )
        try:
            result = plan(problem)
        except Exception as exc:  # any raise is a failed trial
            failures.append((trial, f"{type(exc).__name__}: {exc}"))
            continue
        if (result.report_opt.feasible(1e-6)
                and result.report_opt.boundary_residual <= 1e-6):
            successes += 1
        else:
            failures.append((trial, f"violation "
                             f"{result.report_opt.max_violation:.2e}"))
    record(9, successes == 50, f"{successes}/50 feasible plans"
           + (f"; first failure {failures[0]}" if failures else ""))
