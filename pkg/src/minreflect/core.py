"""Shared domain types and elementary matrix/vector utilities.

State vectors are represented throughout as plain 1-D float64 numpy
arrays (the same representation carries initial conditions, drift
rates, jump sizes and reflection amounts). Non-negativity is enforced
by the contexts that require it, not by the representation, because
pre-reflection vectors legitimately carry negative entries.
"""

from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .errors import (
    NegativeEntryError,
    NoConvergenceError,
    NonSquareError,
    NonzeroDiagonalError,
)

__all__ = [
    "ReflectionMatrix",
    "JumpEvent",
    "validate_reflection_matrix",
    "spectral_radius",
    "negative_part",
    "as_vector",
]


def as_vector(x, n: int | None = None, name: str = "vector") -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float64 array of optional length ``n``."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise ValueError(f"{name} must have length {n}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must have finite entries")
    return v


@dataclass(frozen=True)
class ReflectionMatrix:
    """Non-negative routing matrix with zero diagonal.

    Entry ``q[i, j]`` is the amount firm i must contribute per unit of
    firm j's reflection push. The matrix is stored read-only so
    instances can be shared freely between tasks.
    """

    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise NonSquareError(f"routing matrix must be square, got shape {q.shape}")
        if not np.all(np.isfinite(q)):
            raise ValueError("routing matrix must have finite entries")
        if np.any(q < 0):
            i, j = np.argwhere(q < 0)[0]
            raise NegativeEntryError(f"negative entry q[{i},{j}] = {q[i, j]}")
        if np.any(np.diag(q) != 0):
            i = int(np.flatnonzero(np.diag(q))[0])
            raise NonzeroDiagonalError(f"nonzero diagonal entry q[{i},{i}] = {q[i, i]}")
        q = q.copy()
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @cached_property
    def i_minus_q(self) -> np.ndarray:
        m = np.eye(self.n) - self.q
        m.setflags(write=False)
        return m


@dataclass(frozen=True)
class JumpEvent:
    """One jump of the driving process: time ``t`` and jump vector ``dz``.

    Zero jump vectors are rejected; they should be filtered (or merged)
    by the caller before building a path.
    """

    t: float
    dz: np.ndarray

    def __post_init__(self):
        if not (math.isfinite(self.t) and self.t >= 0):
            raise ValueError(f"event time must be finite and >= 0, got {self.t}")
        dz = as_vector(self.dz, name="dz")
        if not np.any(dz != 0):
            raise ValueError("jump vector must have at least one nonzero entry")
        dz = dz.copy()
        dz.setflags(write=False)
        object.__setattr__(self, "dz", dz)


def validate_reflection_matrix(q) -> ReflectionMatrix:
    """Validate a square, non-negative, zero-diagonal routing matrix.

    Raises:
        NonSquareError: dimensions mismatch.
        NegativeEntryError: some entry is negative.
        NonzeroDiagonalError: some diagonal entry is nonzero.
    """
    return ReflectionMatrix(np.asarray(q, dtype=float))


def negative_part(a: float) -> float:
    """Return (a)_- = -min(0, a), the magnitude of the negative part."""
    a = float(a)
    if not math.isfinite(a):
        raise ValueError(f"expected a finite number, got {a}")
    return -a if a < 0.0 else 0.0


def spectral_radius(rm: ReflectionMatrix, tol: float = 1e-10, max_iter: int = 100_000) -> float:
    """Perron root of the routing matrix by power iteration.

    Iterates on Q + I rather than Q: zero-diagonal non-negative matrices
    are typically periodic (any 2x2 with q12,q21 > 0 cycles with period
    two), where the unshifted iteration oscillates forever. The shift
    leaves the Perron vector unchanged and adds exactly 1 to every
    eigenvalue, so the root of Q is recovered by subtracting 1. Each
    sweep brackets the root by the Collatz-Wielandt ratio interval
    [min_i (Mv)_i/v_i, max_i (Mv)_i/v_i], which is valid for every
    non-negative M and strictly positive v, so the returned midpoint is
    within ``tol`` of the root with no conditioning caveats.

    Raises:
        NoConvergenceError: the bracket did not shrink to ``tol`` within
            ``max_iter`` iterations (nearly-defective roots, e.g.
            strictly triangular Q, tighten only arithmetically).
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    n = rm.n
    m = rm.q + np.eye(n)
    v = np.full(n, 1.0 / n)
    for it in range(max_iter):
        w = m @ v  # strictly positive: diag(M) >= 1
        ratios = w / v
        lo = float(ratios.min())
        hi = float(ratios.max())
        if hi - lo <= tol:
            return 0.5 * (lo + hi) - 1.0
        v = w / float(w.sum())
    raise NoConvergenceError(
        f"power iteration did not converge in {max_iter} iterations (tol={tol})",
        iterations=max_iter,
    )
