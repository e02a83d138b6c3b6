"""Continuability tests and minimal reflection jumps.

A pre-reflection state y = X_- - dZ can be pushed back into the
non-negative orthant iff y lies in the dual cone C* of
C = {u >= 0 : u^T (I - Q) <= 0}. Membership, the componentwise-minimal
jump and the Farkas witness are computed from the linear program

    minimize 1.dl  subject to  dl >= 0, (I - Q) dl >= -y,

solved in closed form for one and two firms (the only shapes that occur
in the hot simulation loop) and by the two-phase simplex for n >= 3.
The monotone operator route (``gamma_operator`` / ``least_fixed_point``)
converges to the same jump from below and serves as an independent
cross-check rather than the production path.
"""

from dataclasses import dataclass

import numpy as np

from .core import ReflectionMatrix, as_vector, negative_part
from .errors import DimensionError, NoConvergenceError
from .lp import DEFAULT_EPS, LpProblem, LpResult, LpStatus, solve_lp

__all__ = [
    "ConeTest",
    "MinimalJump",
    "jump_increment_1d",
    "dual_cone_generators_2d",
    "in_dual_cone",
    "minimal_jump",
    "minimal_jump_lp_problem",
    "gamma_operator",
    "least_fixed_point",
]


@dataclass(frozen=True)
class ConeTest:
    """Dual-cone membership, with a cone witness u when the test fails.

    A failing test carries u in C with u.y < 0, certifying y outside C*.
    """

    member: bool
    witness: np.ndarray | None = None


@dataclass(frozen=True)
class MinimalJump:
    """Either the componentwise-minimal reflection jump or a witness
    proving no feasible jump exists."""

    dl: np.ndarray | None = None
    witness: np.ndarray | None = None

    @property
    def feasible(self) -> bool:
        return self.dl is not None


def jump_increment_1d(x_minus: float, dy: float) -> float:
    """Jump of the one-dimensional reflection: (x_minus + dy)_-."""
    if x_minus < 0:
        raise ValueError(f"x_minus must be a reflected (non-negative) state, got {x_minus}")
    return negative_part(x_minus + dy)


def dual_cone_generators_2d(rm: ReflectionMatrix):
    """Generators of C for two firms, or None when C = {0}.

    For q12*q21 >= 1 the cone C is spanned by (1, q12) and (q21, 1), and
    y lies in C* iff y1 + q12*y2 >= 0 and q21*y1 + y2 >= 0. For
    q12*q21 < 1 the cone degenerates to the origin and C* is the whole
    plane.

    Raises:
        DimensionError: the matrix is not 2x2.
    """
    if rm.n != 2:
        raise DimensionError(f"generator geometry requires n=2, got n={rm.n}")
    q12 = rm.q[0, 1]
    q21 = rm.q[1, 0]
    if q12 * q21 < 1.0:
        return None
    return np.array([1.0, q12]), np.array([q21, 1.0])


def minimal_jump_lp_problem(rm: ReflectionMatrix, y: np.ndarray) -> LpProblem:
    """The jump LP with the non-negativity rows made explicit, so the
    Farkas certificate decomposes as y = [u, v] with v = -u^T (I - Q)."""
    n = rm.n
    a = np.vstack([rm.i_minus_q, np.eye(n)])
    b = np.concatenate([-y, np.zeros(n)])
    return LpProblem(a=a, b=b, c=np.ones(n))


def _jump_2d(q12: float, q21: float, y1: float, y2: float, eps: float):
    """Closed-form minimal jump for two firms.

    Complementarity leaves four candidate supports; the feasible one
    with smallest support is the componentwise minimum. Returns
    ``(dl1, dl2, None)`` or ``(None, None, (u1, u2))`` with u the cone
    witness.
    """
    neg1 = y1 < -eps
    neg2 = y2 < -eps
    if not neg1 and not neg2:
        return 0.0, 0.0, None
    if neg1 and not neg2:
        a = -y1
        if y2 - q21 * a >= -eps:
            return a, 0.0, None
        det = 1.0 - q12 * q21
        if det > 0.0:
            return (-y1 - q12 * y2) / det, (-y2 - q21 * y1) / det, None
        return None, None, (q21, 1.0)
    if neg2 and not neg1:
        b = -y2
        if y1 - q12 * b >= -eps:
            return 0.0, b, None
        det = 1.0 - q12 * q21
        if det > 0.0:
            return (-y1 - q12 * y2) / det, (-y2 - q21 * y1) / det, None
        return None, None, (1.0, q12)
    det = 1.0 - q12 * q21
    if det > 0.0:
        return (-y1 - q12 * y2) / det, (-y2 - q21 * y1) / det, None
    return None, None, (1.0, q12)


def minimal_jump(rm: ReflectionMatrix, y, eps: float = DEFAULT_EPS) -> MinimalJump:
    """Componentwise-minimal non-negative jump dl with y + (I-Q).dl >= 0.

    Returns the unique minimal jump when y is in C*, otherwise a cone
    witness u (u >= 0, u^T (I-Q) <= eps, u.y < -eps). A non-negative y
    short-circuits to the zero jump.
    """
    y = as_vector(y, n=rm.n, name="y")
    n = rm.n
    if np.all(y >= 0.0):
        return MinimalJump(dl=np.zeros(n))
    if n == 1:
        return MinimalJump(dl=np.array([negative_part(y[0])]))
    if n == 2:
        dl1, dl2, witness = _jump_2d(rm.q[0, 1], rm.q[1, 0], y[0], y[1], eps)
        if witness is not None:
            return MinimalJump(witness=np.asarray(witness))
        return MinimalJump(dl=np.array([dl1, dl2]))
    result: LpResult = solve_lp(minimal_jump_lp_problem(rm, y), eps=eps)
    if result.status is LpStatus.INFEASIBLE:
        return MinimalJump(witness=result.certificate[:n].copy())
    if result.status is LpStatus.OPTIMAL:
        return MinimalJump(dl=result.x)
    raise NoConvergenceError("jump LP reported unbounded; objective is bounded below by 0")


def in_dual_cone(rm: ReflectionMatrix, y, eps: float = DEFAULT_EPS) -> ConeTest:
    """Membership of y in the dual cone C*, certified either way.

    Member exactly when the jump LP is feasible; a failing test returns
    the witness u extracted from the Farkas certificate.
    """
    jump = minimal_jump(rm, y, eps=eps)
    if jump.feasible:
        return ConeTest(member=True)
    return ConeTest(member=False, witness=jump.witness)


def gamma_operator(rm: ReflectionMatrix, y, z) -> np.ndarray:
    """One application of the monotone jump operator.

    Component i maps z to (y_i - sum_{j != i} q_ij z_j)_-. The operator
    is order preserving on the non-negative orthant and its least fixed
    point (when y is in C*) is the minimal jump.
    """
    y = as_vector(y, n=rm.n, name="y")
    z = as_vector(z, n=rm.n, name="z")
    if np.any(z < 0):
        raise ValueError("z must be componentwise non-negative")
    return np.maximum(0.0, rm.q @ z - y)


def least_fixed_point(
    rm: ReflectionMatrix,
    y,
    tol: float = 1e-12,
    max_iter: int = 1_000_000,
) -> np.ndarray:
    """Minimal jump by iterating the monotone operator from zero.

    The orbit is componentwise non-decreasing; on feasible input it is
    bounded by the minimal jump and converges to it, on infeasible
    input it grows without bound and the iteration aborts once the
    sup-norm exceeds 1e6 * (1 + ||y||_inf).

    Raises:
        NoConvergenceError: with ``diverged=True`` when the divergence
            bound is exceeded (the input is outside C*), otherwise when
            ``max_iter`` iterations did not reach ``tol``.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    y = as_vector(y, n=rm.n, name="y")
    q = rm.q
    bound = 1e6 * (1.0 + float(np.max(np.abs(y)))) if y.size else 1e6
    z = np.zeros(rm.n)
    for it in range(max_iter):
        z_next = np.maximum(0.0, q @ z - y)
        if float(np.max(np.abs(z_next - z))) <= tol:
            return z_next
        if float(np.max(z_next)) > bound:
            raise NoConvergenceError(
                f"iterate norm exceeded {bound:g} after {it + 1} steps; "
                "the input is not continuable",
                iterations=it + 1,
                diverged=True,
            )
        z = z_next
    raise NoConvergenceError(
        f"fixed-point iteration did not reach tol={tol} in {max_iter} iterations",
        iterations=max_iter,
    )
