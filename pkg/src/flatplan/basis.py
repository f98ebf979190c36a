"""Basis families on s in [0, 1] and B-spline convex-hull constraint rows.

Two families parameterize trajectories: raw monomials s^(j-1), and clamped
B-splines of order k evaluated by the Cox-de Boor recursion.  B-spline
derivatives come from the exact lowering formula

    b'_{i,k}(s) = (k-1) [ b_{i,k-1}(s)/(v_{i+k-1}-v_i)
                          - b_{i+1,k-1}(s)/(v_{i+k}-v_{i+1}) ]

applied once for the first and twice for the second derivative, with 0/0
terms from repeated knots defined as 0.

Because a B-spline curve lies in the convex hull of its control points, box
bounds on the coefficient matrix imply box bounds on the curve everywhere,
and box bounds on the derivative control points

    d_j = (k-1) (a_{j+1} - a_j) / (v_{j+k} - v_{j+1})

imply bounds on the curve derivative.  These give finite linear constraint
sets that are sufficient (possibly conservative) for the semi-infinite
position and velocity bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BasisSpec",
    "LinearConstraintSet",
    "UnsupportedBasis",
    "clamped_knots",
    "eval_basis",
    "eval_basis_many",
    "hull_bounds_position",
    "hull_bounds_velocity",
]


class UnsupportedBasis(ValueError):
    """The requested operation does not exist for this basis family."""


def clamped_knots(k: int, m: int) -> np.ndarray:
    """Clamped-uniform knot vector of length m + k.

    First k entries 0, last k entries 1, interior uniformly spaced.
    """
    if m < k:
        raise ValueError(f"need at least m = k basis functions, got m={m} < k={k}")
    interior = np.linspace(0.0, 1.0, m - k + 2)[1:-1]
    return np.concatenate([np.zeros(k), interior, np.ones(k)])


@dataclass(frozen=True)
class BasisSpec:
    """Basis family with m functions; B-splines carry order k and knots."""

    family: str
    m: int
    k: int = 0
    knots: np.ndarray | None = None

    def __post_init__(self):
        if self.family == "polynomial":
            if self.m < 4:
                raise ValueError("polynomial basis needs m >= 4 to satisfy "
                                 "the four boundary rows per joint")
        elif self.family == "bspline":
            if self.k < 3:
                raise ValueError("B-spline order k must be >= 3 so the "
                                 "second derivative exists")
            if self.m < self.k:
                raise ValueError(f"B-spline needs m >= k, got m={self.m} < k={self.k}")
            knots = self.knots
            if knots is None:
                knots = clamped_knots(self.k, self.m)
            knots = np.asarray(knots, dtype=float)
            if knots.shape != (self.m + self.k,):
                raise ValueError(f"knot vector must have length m + k = "
                                 f"{self.m + self.k}, got {knots.shape}")
            if np.any(np.diff(knots) < 0):
                raise ValueError("knot vector must be non-decreasing")
            if np.any(knots[: self.k] != 0.0) or np.any(knots[-self.k:] != 1.0):
                raise ValueError("knot vector must be clamped: first k knots "
                                 "0 and last k knots 1")
            object.__setattr__(self, "knots", knots)
        else:
            raise ValueError(f"unknown basis family '{self.family}'")

    @staticmethod
    def polynomial(m: int) -> "BasisSpec":
        return BasisSpec(family="polynomial", m=m)

    @staticmethod
    def bspline(k: int, m: int, knots=None) -> "BasisSpec":
        return BasisSpec(family="bspline", m=m, k=k, knots=knots)


def _check_domain(s: np.ndarray):
    if np.any(s < 0.0) or np.any(s > 1.0):
        raise ValueError("basis evaluation requires s in [0, 1]")


def _poly_many(m: int, s: np.ndarray, deriv: int) -> np.ndarray:
    out = np.zeros((s.size, m))
    for j in range(m):
        e = j - deriv
        if e < 0:
            continue
        coef = 1.0
        for r in range(deriv):
            coef *= j - r
        if e == 0:
            out[:, j] = coef
        else:
            out[:, j] = coef * s ** e
    return out


def _bspline_orders(knots: np.ndarray, k: int, s: np.ndarray) -> list[np.ndarray]:
    """Cox-de Boor table: entry [ord-1] holds all order-`ord` functions.

    Order-1 functions are half-open interval indicators; the last interval
    of positive length also claims s = 1 so the right endpoint evaluates.
    """
    n_knots = knots.size
    nz = np.nonzero(np.diff(knots) > 0)[0]
    last = nz[-1] if nz.size else 0
    cols = []
    for i in range(n_knots - 1):
        ind = (knots[i] <= s) & (s < knots[i + 1])
        if i == last:
            ind = ind | (s == knots[-1])
        cols.append(ind.astype(float))
    table = [np.stack(cols, axis=-1)]
    for order in range(2, k + 1):
        prev = table[-1]
        cnt = n_knots - order
        cur = np.zeros(s.shape + (cnt,))
        for i in range(cnt):
            d1 = knots[i + order - 1] - knots[i]
            if d1 > 0:
                cur[..., i] += (s - knots[i]) / d1 * prev[..., i]
            d2 = knots[i + order] - knots[i + 1]
            if d2 > 0:
                cur[..., i] += (knots[i + order] - s) / d2 * prev[..., i + 1]
        table.append(cur)
    return table


def _bspline_deriv_weights(knots: np.ndarray, order: int, lower: np.ndarray) -> np.ndarray:
    """Apply the derivative formula once: order-`order` deriv from order-1 lower table."""
    cnt = knots.size - order
    out = np.zeros(lower.shape[:-1] + (cnt,))
    for i in range(cnt):
        d1 = knots[i + order - 1] - knots[i]
        if d1 > 0:
            out[..., i] += (order - 1) / d1 * lower[..., i]
        d2 = knots[i + order] - knots[i + 1]
        if d2 > 0:
            out[..., i] -= (order - 1) / d2 * lower[..., i + 1]
    return out


def eval_basis_many(spec: BasisSpec, s, deriv: int = 0) -> np.ndarray:
    """Evaluate all m basis functions (or a derivative) at an array of s."""
    if deriv not in (0, 1, 2):
        raise ValueError("deriv must be 0, 1, or 2")
    s = np.atleast_1d(np.asarray(s, dtype=float))
    _check_domain(s)
    if spec.family == "polynomial":
        return _poly_many(spec.m, s, deriv)
    knots, k, m = spec.knots, spec.k, spec.m
    # Build functions of order k - deriv, then lift back to order k with the
    # derivative lowering formula once per requested derivative.
    vals = _bspline_orders(knots, k - deriv, s)[-1]
    for order in range(k - deriv + 1, k + 1):
        vals = _bspline_deriv_weights(knots, order, vals)
    return vals[..., :m]


def eval_basis(spec: BasisSpec, s: float, deriv: int = 0) -> np.ndarray:
    """Basis vector b(s), b'(s), or b''(s) at a single parameter value."""
    return eval_basis_many(spec, float(s), deriv)[0]


@dataclass(frozen=True)
class LinearConstraintSet:
    """Affine rows lo <= coef @ x <= hi over a flattened decision vector.

    The decision layout is row-major A followed by t_f (dim = n*m + 1).
    Rows with lo == hi are equalities; +-inf marks one-sided rows.
    """

    dim: int
    coef: np.ndarray = field(repr=False)
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        coef = np.atleast_2d(np.asarray(self.coef, dtype=float))
        if coef.size == 0:
            coef = coef.reshape(0, self.dim)
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if coef.shape[1] != self.dim or lo.shape != (coef.shape[0],) \
                or hi.shape != (coef.shape[0],):
            raise ValueError("inconsistent constraint-set dimensions")
        if not np.all(np.isfinite(coef)):
            raise ValueError("constraint coefficients must be finite")
        if np.any(lo > hi):
            raise ValueError("constraint has lower bound above upper bound")
        object.__setattr__(self, "coef", coef)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def n_rows(self) -> int:
        return self.coef.shape[0]

    @staticmethod
    def empty(dim: int) -> "LinearConstraintSet":
        return LinearConstraintSet(dim, np.zeros((0, dim)), np.zeros(0), np.zeros(0))

    @staticmethod
    def concat(sets: list["LinearConstraintSet"]) -> "LinearConstraintSet":
        if not sets:
            raise ValueError("cannot concatenate zero constraint sets")
        dim = sets[0].dim
        if any(s.dim != dim for s in sets):
            raise ValueError("constraint sets have mismatched dimensions")
        return LinearConstraintSet(
            dim,
            np.vstack([s.coef for s in sets]),
            np.concatenate([s.lo for s in sets]),
            np.concatenate([s.hi for s in sets]),
        )

    def violation(self, x: np.ndarray) -> np.ndarray:
        """Per-row violation amount (0 where satisfied)."""
        vals = self.coef @ np.asarray(x, dtype=float)
        below = np.where(np.isfinite(self.lo), self.lo - vals, -np.inf)
        above = np.where(np.isfinite(self.hi), vals - self.hi, -np.inf)
        return np.maximum(0.0, np.maximum(below, above))

    def max_violation(self, x: np.ndarray) -> float:
        v = self.violation(x)
        return float(v.max()) if v.size else 0.0


def hull_bounds_position(spec: BasisSpec, q_lb, q_ub) -> LinearConstraintSet:
    """Box rows on every coefficient: sufficient for the position bounds.

    If every control point of joint i lies in [q_lb_i, q_ub_i], the whole
    curve does, by the convex hull property.  Only B-splines have it.
    """
    if spec.family != "bspline":
        raise UnsupportedBasis("position hull constraints need a B-spline "
                               "basis; fall back to sampled constraints")
    q_lb = np.asarray(q_lb, dtype=float)
    q_ub = np.asarray(q_ub, dtype=float)
    if np.any(q_lb > q_ub):
        raise ValueError("position bounds are inverted")
    n = q_lb.size
    m = spec.m
    dim = n * m + 1
    rows = np.zeros((n * m, dim))
    lo = np.zeros(n * m)
    hi = np.zeros(n * m)
    r = 0
    for i in range(n):
        for j in range(m):
            rows[r, i * m + j] = 1.0
            lo[r] = q_lb[i]
            hi[r] = q_ub[i]
            r += 1
    return LinearConstraintSet(dim, rows, lo, hi)


def hull_bounds_velocity(spec: BasisSpec, qd_lb, qd_ub) -> LinearConstraintSet:
    """Derivative control-point rows, jointly linear in A and t_f.

    For each joint i and adjacent coefficient pair j, the derivative control
    point d_ij = (k-1)(a_{i,j+1} - a_{i,j})/(v_{j+k} - v_{j+1}) must lie in
    [t_f qd_lb_i, t_f qd_ub_i]; written one-sided so the t_f coefficient can
    differ per side.  Zero-length knot gaps contribute no row because the
    matching derivative basis term vanishes identically.
    """
    if spec.family != "bspline":
        raise UnsupportedBasis("velocity hull constraints need a B-spline "
                               "basis; fall back to sampled constraints")
    qd_lb = np.asarray(qd_lb, dtype=float)
    qd_ub = np.asarray(qd_ub, dtype=float)
    if np.any(qd_lb > qd_ub):
        raise ValueError("velocity bounds are inverted")
    n = qd_lb.size
    m, k, knots = spec.m, spec.k, spec.knots
    dim = n * m + 1
    rows, lo, hi = [], [], []
    for j in range(m - 1):
        gap = knots[j + k] - knots[j + 1]
        if gap <= 0.0:
            continue
        w = (k - 1) / gap
        for i in range(n):
            base = np.zeros(dim)
            base[i * m + j] = -w
            base[i * m + j + 1] = w
            upper = base.copy()
            upper[-1] = -qd_ub[i]
            rows.append(upper)
            lo.append(-np.inf)
            hi.append(0.0)
            lower = base.copy()
            lower[-1] = -qd_lb[i]
            rows.append(lower)
            lo.append(0.0)
            hi.append(np.inf)
    if not rows:
        return LinearConstraintSet.empty(dim)
    return LinearConstraintSet(dim, np.stack(rows), np.array(lo), np.array(hi))
