"""Forward-mode automatic differentiation with vector-seeded dual numbers.

A :class:`Dual` carries a value array together with the derivative of every
entry with respect to ``d`` seed directions (the derivative array has one
extra trailing axis of length ``d``).  Seeding the full decision vector with
the identity therefore yields exact gradients and Jacobians of any function
composed from the overloaded operations, in a single forward pass.

The torque pipeline is polynomial/trigonometric in its inputs, so the chain
rule through these overloads is exact up to floating-point rounding; nothing
here is a finite-difference estimate.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Dual",
    "sin",
    "cos",
    "exp",
    "sqrt",
    "value",
    "stack",
    "concat",
    "block",
    "dot",
    "seed",
    "gradient",
    "value_and_jacobian",
]


def _parts(x):
    """Return (value, derivative-or-None) for a Dual or a constant."""
    if isinstance(x, Dual):
        return x.val, x.dot
    return np.asarray(x, dtype=float), None


class Dual:
    """Value plus directional derivatives against a fixed seed basis.

    ``val`` has an arbitrary array shape S; ``dot`` has shape S + (d,) where
    d is the number of seed directions.  Arithmetic follows the exact chain
    rule per operation; mixing with plain scalars/ndarrays treats them as
    constants (zero derivative).
    """

    # Let reflected operators win over ndarray so `ndarray op Dual` works.
    __array_ufunc__ = None

    __slots__ = ("val", "dot")

    def __init__(self, val, dot):
        self.val = np.asarray(val, dtype=float)
        self.dot = np.asarray(dot, dtype=float)

    @property
    def nseeds(self) -> int:
        return self.dot.shape[-1]

    # -- elementwise arithmetic ------------------------------------------

    def _dot_as(self, shape):
        """Derivative array broadcast to a target value shape."""
        if shape == self.val.shape:
            return self.dot
        return np.broadcast_to(self.dot, shape + (self.nseeds,)).copy()

    def __add__(self, other):
        ov, od = _parts(other)
        val = self.val + ov
        if od is None:
            return Dual(val, self._dot_as(val.shape))
        return Dual(val, self.dot + od)

    __radd__ = __add__

    def __sub__(self, other):
        ov, od = _parts(other)
        val = self.val - ov
        if od is None:
            return Dual(val, self._dot_as(val.shape))
        return Dual(val, self.dot - od)

    def __rsub__(self, other):
        ov, _ = _parts(other)
        return Dual(ov - self.val, -self.dot)

    def __neg__(self):
        return Dual(-self.val, -self.dot)

    def __mul__(self, other):
        ov, od = _parts(other)
        dot = self.dot * ov[..., None]
        if od is not None:
            dot = dot + self.val[..., None] * od
        return Dual(self.val * ov, dot)

    __rmul__ = __mul__

    def __truediv__(self, other):
        ov, od = _parts(other)
        val = self.val / ov
        dot = self.dot / ov[..., None]
        if od is not None:
            dot = dot - val[..., None] * od / ov[..., None]
        return Dual(val, dot)

    def __rtruediv__(self, other):
        ov, _ = _parts(other)
        val = ov / self.val
        return Dual(val, -val[..., None] * self.dot / self.val[..., None])

    def __pow__(self, p):
        if not isinstance(p, (int, np.integer)):
            raise TypeError("Dual ** only supports integer exponents")
        if p == 0:
            return Dual(np.ones_like(self.val), np.zeros_like(self.dot))
        return Dual(self.val ** p, (p * self.val ** (p - 1))[..., None] * self.dot)

    # -- structural operations -------------------------------------------

    def __getitem__(self, idx):
        return Dual(self.val[idx], self.dot[idx])

    def __len__(self):
        return len(self.val)

    def reshape(self, shape):
        return Dual(self.val.reshape(shape),
                    self.dot.reshape(tuple(shape) + (self.nseeds,)))

    @property
    def T(self):
        if self.val.ndim != 2:
            raise ValueError("transpose defined for 2-D values only")
        return Dual(self.val.T, np.swapaxes(self.dot, 0, 1))

    def __matmul__(self, other):
        ov, od = _parts(other)
        return _matmul(self.val, self.dot, ov, od)

    def __rmatmul__(self, other):
        ov, od = _parts(other)
        return _matmul(ov, od, self.val, self.dot)

    # -- transcendental ----------------------------------------------------

    def sin(self):
        return Dual(np.sin(self.val), np.cos(self.val)[..., None] * self.dot)

    def cos(self):
        return Dual(np.cos(self.val), -np.sin(self.val)[..., None] * self.dot)

    def exp(self):
        v = np.exp(self.val)
        return Dual(v, v[..., None] * self.dot)

    def sqrt(self):
        v = np.sqrt(self.val)
        return Dual(v, 0.5 / v[..., None] * self.dot)

    def __repr__(self):
        return f"Dual(val={self.val!r}, nseeds={self.nseeds})"


def _matmul(av, ad_, bv, bd):
    """Chain rule for a @ b with 1-D or 2-D operand values."""
    val = av @ bv
    case = (av.ndim, bv.ndim)
    if case == (2, 2):
        dot = 0.0
        if ad_ is not None:
            dot = np.einsum("ikd,kj->ijd", ad_, bv)
        if bd is not None:
            dot = dot + np.einsum("ik,kjd->ijd", av, bd)
    elif case == (2, 1):
        dot = 0.0
        if ad_ is not None:
            dot = np.einsum("ijd,j->id", ad_, bv)
        if bd is not None:
            dot = dot + av @ bd
    elif case == (1, 2):
        dot = 0.0
        if ad_ is not None:
            dot = np.einsum("nd,nm->md", ad_, bv)
        if bd is not None:
            dot = dot + np.einsum("n,nmd->md", av, bd)
    elif case == (1, 1):
        dot = 0.0
        if ad_ is not None:
            dot = np.einsum("nd,n->d", ad_, bv)
        if bd is not None:
            dot = dot + av @ bd
    else:
        raise ValueError(f"matmul not supported for value ndim {case}")
    return Dual(val, dot)


# -- generic math entry points (dispatch on Dual vs plain arrays) ----------

def sin(x):
    return x.sin() if isinstance(x, Dual) else np.sin(x)


def cos(x):
    return x.cos() if isinstance(x, Dual) else np.cos(x)


def exp(x):
    return x.exp() if isinstance(x, Dual) else np.exp(x)


def sqrt(x):
    return x.sqrt() if isinstance(x, Dual) else np.sqrt(x)


def value(x):
    """Strip derivatives: plain value array of a Dual or constant."""
    return x.val if isinstance(x, Dual) else np.asarray(x, dtype=float)


def dot(a, b):
    """Inner product of two 1-D operands, either of which may be Dual."""
    if isinstance(a, Dual) or isinstance(b, Dual):
        av, ad_ = _parts(a)
        bv, bd = _parts(b)
        return _matmul(av, ad_, bv, bd)
    return np.asarray(a) @ np.asarray(b)


def _nseeds(items):
    for x in items:
        if isinstance(x, Dual):
            return x.nseeds
    return None


def stack(items):
    """Stack scalars or equal-shape arrays along a new leading axis."""
    d = _nseeds(items)
    if d is None:
        return np.stack([np.asarray(x, dtype=float) for x in items])
    vals, dots = [], []
    for x in items:
        v, dt = _parts(x)
        vals.append(v)
        dots.append(dt if dt is not None else np.zeros(v.shape + (d,)))
    return Dual(np.stack(vals), np.stack(dots))


def concat(items):
    """Concatenate 1-D operands along axis 0."""
    d = _nseeds(items)
    if d is None:
        return np.concatenate([np.asarray(x, dtype=float) for x in items])
    vals, dots = [], []
    for x in items:
        v, dt = _parts(x)
        vals.append(v)
        dots.append(dt if dt is not None else np.zeros(v.shape + (d,)))
    return Dual(np.concatenate(vals), np.concatenate(dots))


def block(rows):
    """Assemble a 2-D matrix from a grid of 2-D blocks (Dual-aware)."""
    d = _nseeds([x for row in rows for x in row])
    if d is None:
        return np.block([[np.asarray(x, dtype=float) for x in row] for row in rows])
    vrows, drows = [], []
    for row in rows:
        vs, ds = [], []
        for x in row:
            v, dt = _parts(x)
            vs.append(v)
            ds.append(dt if dt is not None else np.zeros(v.shape + (d,)))
        vrows.append(np.concatenate(vs, axis=1))
        drows.append(np.concatenate(ds, axis=1))
    return Dual(np.concatenate(vrows, axis=0), np.concatenate(drows, axis=0))


def seed(x: np.ndarray) -> Dual:
    """Lift a 1-D vector into a Dual seeded with the identity basis."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("seed expects a 1-D decision vector")
    return Dual(x, np.eye(x.size))


def gradient(f, x: np.ndarray) -> np.ndarray:
    """Exact gradient of a scalar-valued composition at ``x``."""
    y = f(seed(x))
    if not isinstance(y, Dual):
        return np.zeros(np.asarray(x).size)
    if y.val.ndim != 0:
        raise ValueError("gradient expects a scalar-valued function")
    return np.array(y.dot, dtype=float)


def value_and_jacobian(f, x: np.ndarray):
    """Value and Jacobian of a vector-valued composition at ``x``."""
    y = f(seed(x))
    if not isinstance(y, Dual):
        v = np.asarray(y, dtype=float)
        return v, np.zeros(v.shape + (np.asarray(x).size,))
    return np.array(y.val, dtype=float), np.array(y.dot, dtype=float)
