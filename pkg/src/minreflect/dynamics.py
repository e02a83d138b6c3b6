"""Event-driven construction of reflected and unreflected paths.

Between jumps the drift is non-negative, so states evolve affinely and
are computed exactly at event times; there is no time discretization.
The reflected solver applies the minimal jump at each event and stops
at the first event whose pre-reflection state leaves the dual cone,
which becomes the breakdown time tau*.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .core import JumpEvent, ReflectionMatrix, as_vector
from .errors import DimensionError, InvalidPathError
from .lp import DEFAULT_EPS
from .reflect import _jump_2d, minimal_jump

__all__ = [
    "DrivingPath",
    "JumpRecord",
    "ReflectedSolution",
    "UnreflectedSolution",
    "solve_reflected",
    "solve_unreflected",
    "solution_to_csv",
]

# Post-jump coordinates that are algebraically zero come out of the jump
# solve with round-off of this size at most; anything below it is left
# alone so real constraint violations stay visible.
_ZERO_SNAP = 1e-12


@dataclass(frozen=True)
class DrivingPath:
    """Initial state, drift rates and a finite sorted jump skeleton.

    ``times`` is the strictly increasing vector of event times in
    [0, horizon] (an event at time 0 is allowed and applies to the
    pre-initial state) and ``jumps[k]`` is the driving jump vector of
    event k. ``from_events`` accepts JumpEvent objects instead.
    """

    x0: np.ndarray
    c: np.ndarray
    times: np.ndarray
    jumps: np.ndarray
    horizon: float
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        x0 = np.asarray(self.x0, dtype=float)
        c = np.asarray(self.c, dtype=float)
        times = np.asarray(self.times, dtype=float)
        jumps = np.asarray(self.jumps, dtype=float)
        if jumps.size == 0:
            jumps = jumps.reshape(0, x0.shape[0] if x0.ndim == 1 else 0)
        if self.validate:
            self._check(x0, c, times, jumps, float(self.horizon))
        for name, arr in (("x0", x0), ("c", c), ("times", times), ("jumps", jumps)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "horizon", float(self.horizon))

    @staticmethod
    def _check(x0, c, times, jumps, horizon):
        x0 = as_vector(x0, name="x0")
        c = as_vector(c, n=x0.shape[0], name="c")
        if np.any(x0 < 0):
            raise InvalidPathError("x0 must be componentwise non-negative")
        if np.any(c < 0):
            raise InvalidPathError("drift rates c must be componentwise non-negative")
        if not (np.isfinite(horizon) and horizon >= 0):
            raise InvalidPathError(f"horizon must be finite and >= 0, got {horizon}")
        if times.ndim != 1 or jumps.ndim != 2 or jumps.shape != (times.shape[0], x0.shape[0]):
            raise InvalidPathError(
                f"times/jumps shapes {times.shape}/{jumps.shape} do not match "
                f"{x0.shape[0]} coordinates"
            )
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(jumps))):
            raise InvalidPathError("event times and jumps must be finite")
        if times.size:
            if times[0] < 0 or times[-1] > horizon:
                raise InvalidPathError("event times must lie in [0, horizon]")
            if np.any(np.diff(times) <= 0):
                raise InvalidPathError(
                    "event times must be strictly increasing; merge simultaneous events first"
                )
            if np.any(np.all(jumps == 0, axis=1)):
                k = int(np.flatnonzero(np.all(jumps == 0, axis=1))[0])
                raise InvalidPathError(f"event {k} has a zero jump vector; filter zero jumps")

    @classmethod
    def from_events(cls, x0, c, events, horizon) -> "DrivingPath":
        x0 = as_vector(x0, name="x0")
        times = np.array([e.t for e in events], dtype=float)
        jumps = (
            np.array([e.dz for e in events], dtype=float)
            if events
            else np.zeros((0, x0.shape[0]))
        )
        return cls(x0=x0, c=c, times=times, jumps=jumps, horizon=horizon)

    @property
    def n(self) -> int:
        return self.x0.shape[0]

    @cached_property
    def events(self) -> tuple[JumpEvent, ...]:
        return tuple(JumpEvent(float(t), dz) for t, dz in zip(self.times, self.jumps))


@dataclass(frozen=True)
class JumpRecord:
    """State of one event: pre-reflection vector, applied jump, post
    state and cumulative reflection."""

    t: float
    x_pre: np.ndarray
    dl: np.ndarray
    x_post: np.ndarray
    l_cum: np.ndarray


@dataclass(frozen=True)
class ReflectedSolution:
    """Minimal reflected path up to the horizon or the breakdown time.

    When ``tau_star`` is set it equals the time of the last record,
    whose ``x_pre`` lies outside the dual cone (that record keeps
    dl = 0 and x_post = x_pre as evidence; all earlier records have
    non-negative post states). ``final_state`` is the state at the
    horizon, or the left limit just before the failing jump when the
    path breaks down.
    """

    records: tuple[JumpRecord, ...]
    tau_star: float | None
    witness: np.ndarray | None
    final_state: np.ndarray
    l_final: np.ndarray


@dataclass(frozen=True)
class UnreflectedSolution:
    """Per-coordinate free evolution and first-passage ruin times.

    ``ruin_times[i]`` is the first event time at which coordinate i is
    <= 0 after the jump (exact zero counts as ruin), or None within the
    horizon. An initial coordinate equal to zero is ruined at time 0.
    """

    times: np.ndarray
    x_pre: np.ndarray
    x_post: np.ndarray
    ruin_times: tuple[float | None, ...]
    final_state: np.ndarray


def solve_unreflected(path: DrivingPath) -> UnreflectedSolution:
    """Evolve every coordinate independently with no reflection."""
    x0, c, times, jumps = path.x0, path.c, path.times, path.jumps
    n = path.n
    if times.size:
        cum = np.cumsum(jumps, axis=0)
        x_post = x0 + c * times[:, None] - cum
        x_pre = x_post + jumps
        final_state = x0 + c * path.horizon - cum[-1]
    else:
        x_post = np.zeros((0, n))
        x_pre = np.zeros((0, n))
        final_state = x0 + c * path.horizon
    ruin: list[float | None] = []
    for i in range(n):
        if x0[i] <= 0.0:
            ruin.append(0.0)
            continue
        hits = np.flatnonzero(x_post[:, i] <= 0.0)
        ruin.append(float(times[hits[0]]) if hits.size else None)
    return UnreflectedSolution(
        times=times, x_pre=x_pre, x_post=x_post, ruin_times=tuple(ruin), final_state=final_state
    )


def _solve_reflected_2d(rm, path, eps, keep_records):
    """Scalar-arithmetic engine for two firms (the Monte Carlo hot loop)."""
    q12 = float(rm.q[0, 1])
    q21 = float(rm.q[1, 0])
    x1 = float(path.x0[0])
    x2 = float(path.x0[1])
    c1 = float(path.c[0])
    c2 = float(path.c[1])
    l1 = 0.0
    l2 = 0.0
    t_prev = 0.0
    records: list[JumpRecord] | None = [] if keep_records else None
    times = path.times.tolist()
    d1s = path.jumps[:, 0].tolist() if path.times.size else []
    d2s = path.jumps[:, 1].tolist() if path.times.size else []

    for t, d1, d2 in zip(times, d1s, d2s):
        dt = t - t_prev
        m1 = x1 + c1 * dt
        m2 = x2 + c2 * dt
        y1 = m1 - d1
        y2 = m2 - d2
        t_prev = t
        if y1 >= 0.0 and y2 >= 0.0:
            x1, x2 = y1, y2
            if keep_records:
                records.append(
                    JumpRecord(
                        t,
                        np.array([y1, y2]),
                        np.zeros(2),
                        np.array([y1, y2]),
                        np.array([l1, l2]),
                    )
                )
            continue
        dl1, dl2, witness = _jump_2d(q12, q21, y1, y2, eps)
        if witness is not None:
            if keep_records:
                records.append(
                    JumpRecord(
                        t,
                        np.array([y1, y2]),
                        np.zeros(2),
                        np.array([y1, y2]),
                        np.array([l1, l2]),
                    )
                )
            return ReflectedSolution(
                records=tuple(records) if keep_records else (),
                tau_star=t,
                witness=np.asarray(witness),
                final_state=np.array([m1, m2]),
                l_final=np.array([l1, l2]),
            )
        x1 = y1 + dl1 - q12 * dl2
        x2 = y2 - q21 * dl1 + dl2
        if -_ZERO_SNAP < x1 < 0.0:
            x1 = 0.0
        if -_ZERO_SNAP < x2 < 0.0:
            x2 = 0.0
        l1 += dl1
        l2 += dl2
        if keep_records:
            records.append(
                JumpRecord(
                    t,
                    np.array([y1, y2]),
                    np.array([dl1, dl2]),
                    np.array([x1, x2]),
                    np.array([l1, l2]),
                )
            )

    final_state = np.array(
        [x1 + c1 * (path.horizon - t_prev), x2 + c2 * (path.horizon - t_prev)]
    )
    return ReflectedSolution(
        records=tuple(records) if keep_records else (),
        tau_star=None,
        witness=None,
        final_state=final_state,
        l_final=np.array([l1, l2]),
    )


def _solve_reflected_general(rm, path, eps, keep_records):
    """Vector engine for any number of firms."""
    n = rm.n
    imq = rm.i_minus_q
    x = path.x0.astype(float)
    c = path.c
    l_cum = np.zeros(n)
    t_prev = 0.0
    records: list[JumpRecord] | None = [] if keep_records else None

    for idx in range(path.times.shape[0]):
        t = float(path.times[idx])
        x_minus = x + c * (t - t_prev)
        x_pre = x_minus - path.jumps[idx]
        t_prev = t
        if np.all(x_pre >= 0.0):
            x = x_pre
            if keep_records:
                records.append(JumpRecord(t, x_pre, np.zeros(n), x_pre, l_cum.copy()))
            continue
        jump = minimal_jump(rm, x_pre, eps=eps)
        if not jump.feasible:
            if keep_records:
                records.append(JumpRecord(t, x_pre, np.zeros(n), x_pre, l_cum.copy()))
            return ReflectedSolution(
                records=tuple(records) if keep_records else (),
                tau_star=t,
                witness=jump.witness,
                final_state=x_minus,
                l_final=l_cum,
            )
        dl = jump.dl
        x_post = x_pre + imq @ dl
        x_post[(x_post < 0.0) & (x_post > -_ZERO_SNAP)] = 0.0
        l_cum = l_cum + dl
        if keep_records:
            records.append(JumpRecord(t, x_pre, dl, x_post, l_cum.copy()))
        x = x_post

    final_state = x + c * (path.horizon - t_prev)
    return ReflectedSolution(
        records=tuple(records) if keep_records else (),
        tau_star=None,
        witness=None,
        final_state=final_state,
        l_final=l_cum,
    )


def solve_reflected(
    rm: ReflectionMatrix,
    path: DrivingPath,
    eps: float = DEFAULT_EPS,
    keep_records: bool = True,
) -> ReflectedSolution:
    """Unique minimal reflected solution along the given driving path.

    Walks the events in order, testing each pre-reflection state for
    dual-cone membership and applying the minimal jump; the first
    non-member state sets tau* and stops the construction. Set
    ``keep_records=False`` to skip per-event records (Monte Carlo use).
    """
    if path.n != rm.n:
        raise DimensionError(f"path has {path.n} coordinates but the matrix has {rm.n}")
    if rm.n == 2:
        return _solve_reflected_2d(rm, path, eps, keep_records)
    return _solve_reflected_general(rm, path, eps, keep_records)


def solution_to_csv(solution, file) -> None:
    """Write the documented per-coordinate event log.

    Columns: ``t,i,x_pre_i,dl_i,x_post_i,l_cum_i`` with firm index i
    starting at 1. Works for reflected and unreflected solutions (the
    latter has zero reflection columns).
    """
    if isinstance(file, (str, bytes)) or hasattr(file, "__fspath__"):
        with open(file, "w", newline="\n") as handle:
            solution_to_csv(solution, handle)
            return
    file.write("t,i,x_pre_i,dl_i,x_post_i,l_cum_i\n")
    for t, x_pre, dl, x_post, l_cum in _iter_rows(solution):
        for i in range(x_pre.shape[0]):
            file.write(
                f"{t:.10g},{i + 1},{x_pre[i]:.10g},{dl[i]:.10g},"
                f"{x_post[i]:.10g},{l_cum[i]:.10g}\n"
            )


def _iter_rows(solution):
    if isinstance(solution, ReflectedSolution):
        for rec in solution.records:
            yield rec.t, rec.x_pre, rec.dl, rec.x_post, rec.l_cum
    elif isinstance(solution, UnreflectedSolution):
        zero = np.zeros(solution.x_pre.shape[1] if solution.x_pre.size else 0)
        for k in range(solution.times.shape[0]):
            yield float(solution.times[k]), solution.x_pre[k], zero, solution.x_post[k], zero
    else:
        raise TypeError(f"unsupported solution type {type(solution).__name__}")
