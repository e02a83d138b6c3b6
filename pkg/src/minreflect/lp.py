"""Dense two-phase simplex for small linear programs.

Solves ``minimize c.x subject to A.x >= b, x >= 0`` on a dense tableau
with Bland's anti-cycling rule. Infeasibility is certified by the
Phase-I dual vector y, which satisfies y >= 0, (y^T A)_j <= eps for
every column j, and y^T b > eps (the Farkas alternative for this
constraint geometry). When the rows of A include explicit
non-negativity rows, the certificate restricted to the remaining rows
is the cone witness used by the reflection layer.

Intended scale: a few dozen variables and constraints; every pivot
recomputes the full tableau row operations.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NumericalBreakdownError

__all__ = ["LpProblem", "LpStatus", "LpResult", "solve_lp", "DEFAULT_EPS"]

DEFAULT_EPS = 1e-9


@dataclass(frozen=True)
class LpProblem:
    """Data of ``minimize c.x subject to A.x >= b, x >= 0``."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        c = np.asarray(self.c, dtype=float).reshape(-1)
        if a.shape != (b.shape[0], c.shape[0]):
            raise ValueError(
                f"inconsistent dimensions: A is {a.shape}, b has {b.shape[0]}, c has {c.shape[0]}"
            )
        for name, arr in (("A", a), ("b", b), ("c", c)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must have finite entries")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def k(self) -> int:
        return self.a.shape[1]


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpResult:
    """Outcome of a solve: a basic optimal point, a Farkas certificate,
    or an unboundedness flag."""

    status: LpStatus
    x: np.ndarray | None = None
    objective: float | None = None
    certificate: np.ndarray | None = None


def _bland_entering(tableau: np.ndarray, n_enterable: int, eps: float) -> int:
    """Smallest-index enterable column with reduced cost < -eps, else -1."""
    red = tableau[-1, :n_enterable]
    neg = np.flatnonzero(red < -eps)
    return int(neg[0]) if neg.size else -1


def _bland_leaving(tableau: np.ndarray, basis: list[int], col: int, eps: float) -> int:
    """Minimum-ratio row; ties broken by smallest basic variable index."""
    m = tableau.shape[0] - 1
    best_row = -1
    best_ratio = np.inf
    for i in range(m):
        piv = tableau[i, col]
        if piv > eps:
            ratio = tableau[i, -1] / piv
            if ratio < best_ratio or (ratio == best_ratio and basis[i] < basis[best_row]):
                best_ratio = ratio
                best_row = i
    return best_row


def _pivot(tableau: np.ndarray, basis: list[int], row: int, col: int, eps: float) -> None:
    piv = tableau[row, col]
    if abs(piv) <= eps:
        raise NumericalBreakdownError(
            f"pivot magnitude {piv!r} below tolerance {eps} in tableau row {row}", row=row
        )
    tableau[row] /= piv
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])
    # exact unit column, guarding against residual round-off
    tableau[:, col] = 0.0
    tableau[row, col] = 1.0
    basis[row] = col


def _run_phase(tableau, basis, n_enterable, eps, phase) -> str:
    while True:
        col = _bland_entering(tableau, n_enterable, eps)
        if col < 0:
            return "optimal"
        row = _bland_leaving(tableau, basis, col, eps)
        if row < 0:
            if phase == 1:
                # Phase I is bounded below by zero, so a missing leaving row
                # can only come from pivots degraded below tolerance.
                raise NumericalBreakdownError(
                    f"phase-I ratio test found no pivot above {eps} in column {col}",
                    row=None,
                )
            return "unbounded"
        _pivot(tableau, basis, row, col, eps)


def solve_lp(problem: LpProblem, eps: float = DEFAULT_EPS) -> LpResult:
    """Two-phase simplex with Bland's rule.

    Phase I minimizes the artificial-variable sum and, when that
    minimum is positive, returns its dual vector as the infeasibility
    certificate; Phase II optimizes c.x over the feasible basis.

    Raises:
        NumericalBreakdownError: pivots fell below ``eps`` in an
            inconsistent pattern (with the offending row index).
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    m, k = problem.m, problem.k

    # Row orientation: rows with b <= 0 are negated so every tableau rhs is
    # non-negative; their surplus column then starts basic and no artificial
    # variable is needed.
    sigma = np.where(problem.b > 0, 1.0, -1.0)
    rows = sigma[:, None] * problem.a
    rhs = sigma * problem.b
    art_rows = np.flatnonzero(sigma > 0)
    n_art = art_rows.size

    # columns: [x (k) | surplus (m) | artificial (n_art) | rhs]
    n_cols = k + m + n_art + 1
    tableau = np.zeros((m + 1, n_cols))
    tableau[:m, :k] = rows
    tableau[np.arange(m), k + np.arange(m)] = -sigma
    tableau[art_rows, k + m + np.arange(n_art)] = 1.0
    tableau[:m, -1] = rhs

    basis: list[int] = [0] * m
    for i in range(m):
        basis[i] = k + i if sigma[i] < 0 else 0
    for j, i in enumerate(art_rows):
        basis[i] = k + m + j

    # Phase I objective: artificial sum, reduced for the starting basis.
    tableau[-1, k + m : k + m + n_art] = 1.0
    for i in art_rows:
        tableau[-1] -= tableau[i]

    _run_phase(tableau, basis, n_enterable=k + m, eps=eps, phase=1)

    infeasibility = -tableau[-1, -1]
    if infeasibility > eps:
        # Certificate: the reduced cost of surplus column i equals
        # sigma_i * yhat_i, which is exactly the dual weight of the
        # original (un-negated) row i.
        y = np.maximum(tableau[-1, k : k + m].copy(), 0.0)
        return LpResult(status=LpStatus.INFEASIBLE, certificate=y)

    # Drive basic artificials (necessarily at value zero) out of the basis;
    # rows that cannot be pivoted are redundant and are dropped.
    keep = np.ones(m, dtype=bool)
    for i in range(m):
        if basis[i] >= k + m:
            cols = np.flatnonzero(np.abs(tableau[i, : k + m]) > eps)
            if cols.size:
                _pivot(tableau, basis, i, int(cols[0]), eps)
            else:
                keep[i] = False
    if not np.all(keep):
        tableau = np.vstack([tableau[:m][keep], tableau[-1]])
        basis = [bv for bv, kp in zip(basis, keep) if kp]

    # Phase II objective (artificial columns stay locked out of entering).
    tableau[-1] = 0.0
    tableau[-1, :k] = problem.c
    for i, bv in enumerate(basis):
        if bv < k and problem.c[bv] != 0.0:
            tableau[-1] -= problem.c[bv] * tableau[i]

    status = _run_phase(tableau, basis, n_enterable=k + m, eps=eps, phase=2)
    if status == "unbounded":
        return LpResult(status=LpStatus.UNBOUNDED)

    x = np.zeros(k)
    for i, bv in enumerate(basis):
        if bv < k:
            x[bv] = tableau[i, -1]
    np.maximum(x, 0.0, out=x)
    return LpResult(status=LpStatus.OPTIMAL, x=x, objective=float(problem.c @ x))
