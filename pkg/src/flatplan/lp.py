"""Time-optimal state-constrained linear program and a dense simplex solver.

The decision vector is the flattened coefficient matrix followed by the
final time: x = (a_11..a_1m, ..., a_n1..a_nm, t_f), dimension n*m + 1.  The
time-optimal relaxation minimizes t_f subject to the boundary equality rows
and either sampled state inequalities on a finite grid or, for B-splines,
the convex-hull constraint families, all of which are jointly linear in
(A, t_f).

The solver is a self-contained dense two-phase simplex with bounded
variables (nonbasic variables may sit at either bound, and two-sided rows
become a single equality with a range-bounded slack).  Pivoting uses
largest-reduced-cost selection with a switch to Bland's rule after a run of
degenerate steps, so it terminates and is bit-deterministic.  Optimal
answers are re-checked by substitution into the original rows before being
reported; anything that fails verification is returned as an explicit
failure status, never as a wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import (BasisSpec, LinearConstraintSet, hull_bounds_position,
                    hull_bounds_velocity)
from .trajectory import BoundaryConditions, boundary_constraint_rows

__all__ = [
    "LinearProgram",
    "LPSolution",
    "build_time_optimal_lp",
    "solve_lp",
    "dump_lp",
]

_FEAS_TOL = 1e-8


@dataclass(frozen=True)
class LinearProgram:
    """min c @ x subject to rows and variable bounds (layout n*m + 1)."""

    n: int
    m: int
    c: np.ndarray
    equalities: LinearConstraintSet
    inequalities: LinearConstraintSet
    lower: np.ndarray
    upper: np.ndarray

    @property
    def dim(self) -> int:
        return self.n * self.m + 1


@dataclass(frozen=True)
class LPSolution:
    status: str  # optimal | infeasible | unbounded | iteration_limit | failed
    x: np.ndarray | None = None
    A: np.ndarray | None = None
    t_f: float | None = None
    objective: float | None = None
    infeasibility: float | None = None  # phase-1 optimum when infeasible
    iterations: int = 0
    message: str = ""


def build_time_optimal_lp(spec: BasisSpec, bc: BoundaryConditions, limits,
                          grid: np.ndarray, t_min: float = 1e-2,
                          mode: str = "sampled") -> LinearProgram:
    """Assemble the min-t_f relaxation without torque rows.

    ``mode="sampled"`` enforces position/velocity boxes at the grid points;
    ``mode="hull"`` (B-spline only) replaces them with the convex-hull
    constraint families, which cover all of [0, 1].
    """
    n, m = bc.n, spec.m
    dim = n * m + 1
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2 or np.any(grid < 0.0) or np.any(grid > 1.0):
        raise ValueError("sample grid needs at least two points inside [0, 1]")
    for lb, ub, name in ((limits.q_lb, limits.q_ub, "position"),
                         (limits.qd_lb, limits.qd_ub, "velocity")):
        if np.any(np.asarray(lb) > np.asarray(ub)):
            raise ValueError(f"{name} limits are inverted")

    equalities = boundary_constraint_rows(spec, bc)

    if mode == "hull":
        ineq = LinearConstraintSet.concat([
            hull_bounds_position(spec, limits.q_lb, limits.q_ub),
            hull_bounds_velocity(spec, limits.qd_lb, limits.qd_ub),
        ])
    elif mode == "sampled":
        from .basis import eval_basis_many
        B0 = eval_basis_many(spec, grid, 0)
        B1 = eval_basis_many(spec, grid, 1)
        rows, lo, hi = [], [], []
        for si in range(grid.size):
            for i in range(n):
                row = np.zeros(dim)
                row[i * m:(i + 1) * m] = B0[si]
                rows.append(row)
                lo.append(limits.q_lb[i])
                hi.append(limits.q_ub[i])
        for si in range(grid.size):
            for i in range(n):
                base = np.zeros(dim)
                base[i * m:(i + 1) * m] = B1[si]
                upper = base.copy()
                upper[-1] = -limits.qd_ub[i]
                rows.append(upper)
                lo.append(-np.inf)
                hi.append(0.0)
                lower_row = base.copy()
                lower_row[-1] = -limits.qd_lb[i]
                rows.append(lower_row)
                lo.append(0.0)
                hi.append(np.inf)
        ineq = LinearConstraintSet(dim, np.stack(rows), np.array(lo), np.array(hi))
    else:
        raise ValueError(f"unknown constraint mode '{mode}'")

    c = np.zeros(dim)
    c[-1] = 1.0
    lower = np.full(dim, -np.inf)
    lower[-1] = t_min
    upper = np.full(dim, np.inf)
    return LinearProgram(n=n, m=m, c=c, equalities=equalities,
                         inequalities=ineq, lower=lower, upper=upper)


def dump_lp(lp: LinearProgram) -> str:
    """Plain-text tableau for eyeballing or external cross-checking."""
    out = [f"minimize {np.array2string(lp.c, max_line_width=10**9)}"]
    out.append(f"variables: {lp.dim} (A is {lp.n} x {lp.m}, then t_f)")
    for name, cs in (("equality", lp.equalities), ("inequality", lp.inequalities)):
        out.append(f"{name} rows: {cs.n_rows}")
        for r in range(cs.n_rows):
            coefs = np.array2string(cs.coef[r], max_line_width=10**9)
            out.append(f"  {cs.lo[r]:.17g} <= {coefs} <= {cs.hi[r]:.17g}")
    out.append("bounds:")
    for j in range(lp.dim):
        out.append(f"  {lp.lower[j]:.17g} <= x[{j}] <= {lp.upper[j]:.17g}")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# Bounded-variable two-phase simplex
# ---------------------------------------------------------------------------

_PIVOT_TOL = 1e-9
_COST_TOL = 1e-9
_STEP_TOL = 1e-10
_DEGENERATE_RUN = 40


class _Tableau:
    """Dense simplex state over 0 <= u <= ub with equality rows T u = b."""

    def __init__(self, T: np.ndarray, ub: np.ndarray,
                 basis: np.ndarray, xB: np.ndarray):
        self.T = T
        self.ub = ub
        self.basis = basis
        self.xB = xB
        self.at_upper = np.zeros(T.shape[1], dtype=bool)
        self.iterations = 0

    def reduced_costs(self, c: np.ndarray) -> np.ndarray:
        # Valid because basic columns of T stay unit through every pivot.
        z = c.astype(float).copy()
        for r, j in enumerate(self.basis):
            cj = c[j]
            if cj != 0.0:
                z -= cj * self.T[r]
        return z

    def solution(self, ncols: int) -> np.ndarray:
        u = np.where(self.at_upper[:ncols],
                     np.where(np.isfinite(self.ub[:ncols]), self.ub[:ncols], 0.0),
                     0.0)
        for r, j in enumerate(self.basis):
            if j < ncols:
                u[j] = self.xB[r]
        return u

    def run(self, c: np.ndarray, max_iter: int, allowed: np.ndarray) -> str:
        z = self.reduced_costs(c)
        in_basis = np.zeros(self.T.shape[1], dtype=bool)
        in_basis[self.basis] = True
        degenerate_run = 0
        while self.iterations < max_iter:
            eligible = ~in_basis & allowed & (
                (~self.at_upper & (z < -_COST_TOL))
                | (self.at_upper & (z > _COST_TOL)))
            idx = np.nonzero(eligible)[0]
            if idx.size == 0:
                return "optimal"
            if degenerate_run >= _DEGENERATE_RUN:
                e = int(idx[0])  # Bland: lowest index breaks cycles
            else:
                e = int(idx[np.argmax(np.abs(z[idx]))])
            sign = -1.0 if self.at_upper[e] else 1.0
            col = sign * self.T[:, e]

            # Ratio test: basic vars stay in [0, ub]; entering respects its range.
            t_best = self.ub[e] if np.isfinite(self.ub[e]) else np.inf
            r_best = -1
            hit_upper = False
            for r in range(self.T.shape[0]):
                cr = col[r]
                if cr > _PIVOT_TOL:
                    t = self.xB[r] / cr
                    to_upper = False
                elif cr < -_PIVOT_TOL and np.isfinite(self.ub[self.basis[r]]):
                    t = (self.ub[self.basis[r]] - self.xB[r]) / (-cr)
                    to_upper = True
                else:
                    continue
                if t < t_best - 1e-12 or (t < t_best + 1e-12 and r_best >= 0
                                          and abs(cr) > abs(col[r_best])):
                    t_best = t
                    r_best = r
                    hit_upper = to_upper
            if not np.isfinite(t_best):
                return "unbounded"
            self.iterations += 1
            degenerate_run = 0 if t_best > _STEP_TOL else degenerate_run + 1

            if r_best < 0:
                # Bound flip: entering traverses its whole range.
                self.xB -= col * t_best
                self.at_upper[e] = ~self.at_upper[e]
                continue

            leaving = self.basis[r_best]
            self.xB -= col * t_best
            enter_val = t_best if sign > 0 else self.ub[e] - t_best
            piv = self.T[r_best, e]
            self.T[r_best] /= piv
            factors = self.T[:, e].copy()
            factors[r_best] = 0.0
            self.T -= np.outer(factors, self.T[r_best])
            ze = z[e]
            if ze != 0.0:
                z -= ze * self.T[r_best]
            self.xB[r_best] = enter_val
            self.basis[r_best] = e
            in_basis[leaving] = False
            in_basis[e] = True
            self.at_upper[leaving] = hit_upper
            self.at_upper[e] = False
        return "iteration_limit"


def _standardize(lp: LinearProgram):
    """Rewrite as min c_u @ u, T u = b, 0 <= u <= ub, recording the map back."""
    dim = lp.dim
    rows_list = [lp.equalities.coef, lp.inequalities.coef]
    lo_list = [lp.equalities.lo, lp.inequalities.lo]
    hi_list = [lp.equalities.hi, lp.inequalities.hi]
    A = np.vstack(rows_list)
    row_lo = np.concatenate(lo_list)
    row_hi = np.concatenate(hi_list)

    # Variable substitutions: x = shift + S u with u >= 0 (S has +-1 entries).
    col_var, col_sign, col_ub = [], [], []
    shift = np.zeros(dim)
    for j in range(dim):
        lo, hi = lp.lower[j], lp.upper[j]
        if np.isinf(lo) and np.isinf(hi):
            col_var += [j, j]
            col_sign += [1.0, -1.0]
            col_ub += [np.inf, np.inf]
        elif np.isfinite(lo):
            shift[j] = lo
            col_var.append(j)
            col_sign.append(1.0)
            col_ub.append(hi - lo if np.isfinite(hi) else np.inf)
        else:  # lo = -inf, hi finite: x = hi - u
            shift[j] = hi
            col_var.append(j)
            col_sign.append(-1.0)
            col_ub.append(np.inf)
    nvar_cols = len(col_var)
    S = np.zeros((dim, nvar_cols))
    S[col_var, np.arange(nvar_cols)] = col_sign

    A_u = A @ S
    base = A @ shift
    c_u = S.T @ lp.c
    obj_shift = float(lp.c @ shift)

    # One slack per inequality row; two-sided rows get a range-bounded slack.
    n_rows = A.shape[0]
    slack_cols = []
    slack_ub = []
    b = np.zeros(n_rows)
    for r in range(n_rows):
        lo_r, hi_r = row_lo[r] - base[r], row_hi[r] - base[r]
        if row_lo[r] == row_hi[r]:
            b[r] = lo_r
            continue
        if np.isfinite(hi_r) and np.isfinite(lo_r):
            slack_cols.append((r, 1.0))
            slack_ub.append(hi_r - lo_r)
            b[r] = hi_r
        elif np.isfinite(hi_r):
            slack_cols.append((r, 1.0))
            slack_ub.append(np.inf)
            b[r] = hi_r
        else:
            slack_cols.append((r, -1.0))
            slack_ub.append(np.inf)
            b[r] = lo_r
    n_slack = len(slack_cols)
    Sl = np.zeros((n_rows, n_slack))
    for k, (r, sg) in enumerate(slack_cols):
        Sl[r, k] = sg

    T = np.hstack([A_u, Sl])
    ub = np.concatenate([np.array(col_ub, dtype=float),
                         np.array(slack_ub, dtype=float)])
    c_full = np.concatenate([c_u, np.zeros(n_slack)])
    return T, b, ub, c_full, S, shift, obj_shift, nvar_cols


def solve_lp(lp: LinearProgram, max_iter: int | None = None) -> LPSolution:
    """Two-phase simplex; deterministic, with certificates re-checked.

    Optimal solutions satisfy every original row and bound within 1e-8
    (verified by substitution before returning).  Infeasible outcomes carry
    the positive phase-1 optimum as a certificate.
    """
    T, b, ub, c_full, S, shift, obj_shift, nvar_cols = _standardize(lp)
    n_rows, n_cols = T.shape
    if max_iter is None:
        max_iter = max(2000, 60 * (n_rows + n_cols))

    # Flip rows negative on the right-hand side so b >= 0.
    neg = b < 0.0
    T[neg] *= -1.0
    b = np.abs(b)

    # Starting basis: unit +1 columns where the slack can carry b, otherwise
    # fresh artificial columns with phase-1 cost.
    basis = np.full(n_rows, -1, dtype=int)
    for j in range(n_cols):
        colnz = np.nonzero(T[:, j])[0]
        if colnz.size == 1:
            r = colnz[0]
            if basis[r] < 0 and T[r, j] == 1.0 and b[r] <= ub[j]:
                basis[r] = j
    art_rows = np.nonzero(basis < 0)[0]
    n_art = art_rows.size
    if n_art:
        Art = np.zeros((n_rows, n_art))
        for k, r in enumerate(art_rows):
            Art[r, k] = 1.0
            basis[r] = n_cols + k
        T = np.hstack([T, Art])
        ub = np.concatenate([ub, np.full(n_art, np.inf)])
    tab = _Tableau(T, ub, basis, b.copy())

    if n_art:
        c1 = np.zeros(T.shape[1])
        c1[n_cols:] = 1.0
        allowed = np.ones(T.shape[1], dtype=bool)
        status = tab.run(c1, max_iter, allowed)
        if status == "iteration_limit":
            return LPSolution(status="iteration_limit", iterations=tab.iterations,
                              message="phase 1 hit the iteration cap")
        p1_obj = float(sum(tab.xB[r] for r in range(n_rows)
                           if tab.basis[r] >= n_cols))
        if p1_obj > 1e-7:
            return LPSolution(status="infeasible", infeasibility=p1_obj,
                              iterations=tab.iterations,
                              message="phase-1 optimum is positive")
        # Drive leftover artificials out of the basis (degenerate pivots),
        # dropping rows that turn out to be redundant.
        keep = np.ones(n_rows, dtype=bool)
        for r in range(n_rows):
            if tab.basis[r] < n_cols:
                continue
            piv_candidates = np.nonzero(np.abs(tab.T[r, :n_cols]) > _PIVOT_TOL)[0]
            if piv_candidates.size == 0:
                keep[r] = False
                continue
            e = int(piv_candidates[0])
            piv = tab.T[r, e]
            tab.T[r] /= piv
            factors = tab.T[:, e].copy()
            factors[r] = 0.0
            tab.T -= np.outer(factors, tab.T[r])
            tab.basis[r] = e
            tab.xB[r] = 0.0
            tab.at_upper[e] = False
        tab.T = tab.T[keep][:, :n_cols]
        tab.xB = tab.xB[keep]
        tab.basis = tab.basis[keep]
        tab.at_upper = tab.at_upper[:n_cols]
        tab.ub = tab.ub[:n_cols]
        n_rows = tab.T.shape[0]

    allowed = np.ones(tab.T.shape[1], dtype=bool)
    status = tab.run(c_full, max_iter, allowed)
    if status == "unbounded":
        return LPSolution(status="unbounded", iterations=tab.iterations,
                          message="objective decreases without bound")
    if status == "iteration_limit":
        return LPSolution(status="iteration_limit", iterations=tab.iterations,
                          message="phase 2 hit the iteration cap")

    u = tab.solution(c_full.size)
    x = shift + S @ u[:nvar_cols]
    objective = float(lp.c @ x)

    # Certificate: the answer must satisfy what the caller asked for.
    worst = max(lp.equalities.max_violation(x), lp.inequalities.max_violation(x))
    lb_viol = np.max(np.maximum(0.0, lp.lower - x)) if lp.dim else 0.0
    ub_viol = np.max(np.maximum(0.0, x - lp.upper)) if lp.dim else 0.0
    worst = max(worst, float(lb_viol), float(ub_viol))
    if worst > _FEAS_TOL:
        return LPSolution(status="failed", iterations=tab.iterations,
                          message=f"verification failed: residual {worst:.3e}")
    A_mat = x[: lp.n * lp.m].reshape(lp.n, lp.m).copy()
    return LPSolution(status="optimal", x=x, A=A_mat, t_f=float(x[-1]),
                      objective=objective, iterations=tab.iterations)
