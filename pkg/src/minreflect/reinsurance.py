"""Two-firm reinsurance model with common-shock compound-Poisson claims.

Each trial draws one driving path and evaluates it twice: the firms in
isolation (first-passage ruin times T1, T2) and the reflected system
with routing q12 = q21 = 1 + alpha (breakdown time tau*). Sharing the
path across the two systems mirrors the coupled comparison the model is
built for and doubles as common-random-numbers variance reduction.

Per-trial random streams are Philox counter-based generators derived
from (seed, trial_index), so results are bit-identical under any degree
of parallelism.
"""

from dataclasses import dataclass
from enum import Enum
import math
import multiprocessing
import os

import numpy as np
from scipy.integrate import quad

from .core import ReflectionMatrix
from .dynamics import DrivingPath, solve_reflected, solve_unreflected

__all__ = [
    "ScenarioConfig",
    "TrialOutcome",
    "RuinCurves",
    "Region",
    "CURVE_NAMES",
    "CSV_HEADER",
    "trial_rng",
    "sample_driving",
    "run_trial",
    "ruin_curves",
    "initial_intensity",
    "wilson_half_width",
    "curves_to_csv",
]

Z95 = 1.959963984540054  # two-sided 95% normal quantile

CURVE_NAMES = ("t1", "t2", "both", "either", "tau")

CSV_HEADER = "t,p_t1,ci_t1,p_t2,ci_t2,p_both,ci_both,p_either,ci_either,p_tau,ci_tau"


def _pair(value, name):
    pair = tuple(float(v) for v in value)
    if len(pair) != 2:
        raise ValueError(f"{name} must have exactly 2 entries, got {len(pair)}")
    if not all(math.isfinite(v) for v in pair):
        raise ValueError(f"{name} must be finite")
    return pair


@dataclass(frozen=True)
class ScenarioConfig:
    """Model parameters, Monte Carlo size and the master seed.

    ``lam`` holds the three Poisson intensities (firm-1 only, firm-2
    only, common shock); ``claim_rate`` holds the exponential rates of
    the two claim-size distributions; ``alpha`` is the transfer
    friction, giving q12 = q21 = 1 + alpha.
    """

    x0: tuple[float, float]
    c: tuple[float, float]
    lam: tuple[float, float, float]
    claim_rate: tuple[float, float]
    alpha: float
    horizon: float
    n_trials: int
    seed: int
    grid_points: int = 501

    def __post_init__(self):
        object.__setattr__(self, "x0", _pair(self.x0, "x0"))
        object.__setattr__(self, "c", _pair(self.c, "c"))
        object.__setattr__(self, "claim_rate", _pair(self.claim_rate, "claim_rate"))
        lam = tuple(float(v) for v in self.lam)
        if len(lam) != 3:
            raise ValueError(f"lambda must have exactly 3 entries, got {len(lam)}")
        object.__setattr__(self, "lam", lam)
        if any(v <= 0 for v in self.x0):
            raise ValueError(f"x0 must be positive, got {self.x0}")
        if any(v < 0 for v in self.c):
            raise ValueError(f"premium rates c must be non-negative, got {self.c}")
        if any(v < 0 for v in lam) or not all(math.isfinite(v) for v in lam):
            raise ValueError(f"lambda entries must be finite and non-negative, got {lam}")
        if any(v <= 0 for v in self.claim_rate):
            raise ValueError(f"claim_rate must be positive, got {self.claim_rate}")
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if not (math.isfinite(self.horizon) and self.horizon >= 0):
            raise ValueError(f"horizon must be finite and >= 0, got {self.horizon}")
        if int(self.n_trials) < 1:
            raise ValueError(f"n_trials must be >= 1, got {self.n_trials}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if int(self.grid_points) < 2:
            raise ValueError(f"grid_points must be >= 2, got {self.grid_points}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "horizon", float(self.horizon))
        object.__setattr__(self, "n_trials", int(self.n_trials))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "grid_points", int(self.grid_points))

    def reflection_matrix(self) -> ReflectionMatrix:
        q = 1.0 + self.alpha
        return ReflectionMatrix(np.array([[0.0, q], [q, 0.0]]))

    def to_dict(self) -> dict:
        return {
            "x0": list(self.x0),
            "c": list(self.c),
            "lambda": list(self.lam),
            "claim_rate": list(self.claim_rate),
            "alpha": self.alpha,
            "horizon": self.horizon,
            "n_trials": self.n_trials,
            "seed": self.seed,
            "grid_points": self.grid_points,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        if not isinstance(data, dict):
            raise ValueError(f"config must be a JSON object, got {type(data).__name__}")
        fields = {
            "x0",
            "c",
            "lambda",
            "claim_rate",
            "alpha",
            "horizon",
            "n_trials",
            "seed",
            "grid_points",
        }
        unknown = set(data) - fields
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        missing = fields - set(data) - {"grid_points"}
        if missing:
            raise ValueError(f"missing config fields: {sorted(missing)}")
        kwargs = {
            "x0": data["x0"],
            "c": data["c"],
            "lam": data["lambda"],
            "claim_rate": data["claim_rate"],
            "alpha": data["alpha"],
            "horizon": data["horizon"],
            "n_trials": data["n_trials"],
            "seed": data["seed"],
        }
        if "grid_points" in data:
            kwargs["grid_points"] = data["grid_points"]
        return cls(**kwargs)


@dataclass(frozen=True)
class TrialOutcome:
    """Censored-at-horizon outcome times of one coupled trial."""

    t1: float | None
    t2: float | None
    tau_star: float | None


@dataclass(frozen=True)
class RuinCurves:
    """Empirical CDF estimates with 95% Wilson half-widths.

    ``probs`` and ``half_widths`` are keyed by CURVE_NAMES: the two
    single-firm ruin curves, the both-firms and either-firm
    combinations, and the reflected-system breakdown curve.
    """

    grid: np.ndarray
    probs: dict[str, np.ndarray]
    half_widths: dict[str, np.ndarray]
    n_trials: int


class Region(str, Enum):
    """Ruin-event combination whose initial slope is requested.

    Each name corresponds to the event that the single-jump state
    x0 - dZ exits the matching region: H1/H2 are the single-firm
    half-planes, INTERSECTION is simultaneous ruin of both firms (exit
    from the union of half-planes), UNION is ruin of at least one firm
    (exit from the intersection), DUAL_CONE is breakdown of the
    reflected system (exit from C*).
    """

    H1 = "h1"
    H2 = "h2"
    UNION = "union"
    INTERSECTION = "intersection"
    DUAL_CONE = "dual-cone"


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Counter-based Philox stream for one trial, derived from
    (seed, trial_index) independently of execution order."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(trial_index,))
    return np.random.Generator(np.random.Philox(ss))


def sample_driving(rng: np.random.Generator, config: ScenarioConfig) -> DrivingPath:
    """Draw one driving path by superposition sampling.

    Inter-arrival times are Exponential(lam1+lam2+lam3); each event's
    type is categorical with weights lam_k, producing a claim on firm 1,
    firm 2, or both (fresh independent exponential sizes either way).
    Events are truncated at the horizon.
    """
    lam_total = sum(config.lam)
    horizon = config.horizon
    x0 = np.array(config.x0)
    c = np.array(config.c)
    if lam_total == 0.0 or horizon == 0.0:
        return DrivingPath(
            x0=x0, c=c, times=np.zeros(0), jumps=np.zeros((0, 2)), horizon=horizon,
            validate=False,
        )

    mean_count = lam_total * horizon
    block = max(16, int(mean_count + 4.0 * math.sqrt(mean_count)) + 1)
    gaps = rng.exponential(1.0 / lam_total, size=block)
    times = np.cumsum(gaps)
    while times[-1] <= horizon:
        gaps = rng.exponential(1.0 / lam_total, size=block)
        times = np.concatenate([times, times[-1] + np.cumsum(gaps)])
    times = times[times <= horizon]
    n_events = times.shape[0]

    cuts = np.array([config.lam[0], config.lam[0] + config.lam[1]]) / lam_total
    kinds = np.searchsorted(cuts, rng.random(n_events), side="right")
    y1 = rng.exponential(1.0 / config.claim_rate[0], size=n_events)
    y2 = rng.exponential(1.0 / config.claim_rate[1], size=n_events)
    jumps = np.zeros((n_events, 2))
    jumps[:, 0] = np.where(kinds != 1, y1, 0.0)
    jumps[:, 1] = np.where(kinds != 0, y2, 0.0)
    return DrivingPath(x0=x0, c=c, times=times, jumps=jumps, horizon=horizon, validate=False)


def run_trial(
    rng: np.random.Generator,
    config: ScenarioConfig,
    _rm: ReflectionMatrix | None = None,
) -> TrialOutcome:
    """One coupled trial: a single driving path feeds both the isolated
    firms (T1, T2) and the reflected system (tau*)."""
    path = sample_driving(rng, config)
    unreflected = solve_unreflected(path)
    t1, t2 = unreflected.ruin_times
    rm = _rm if _rm is not None else config.reflection_matrix()
    reflected = solve_reflected(rm, path, keep_records=False)
    return TrialOutcome(t1=t1, t2=t2, tau_star=reflected.tau_star)


def _trial_batch(args) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Run trials [start, stop); absent outcomes are encoded as NaN."""
    config_dict, start, stop = args
    config = ScenarioConfig.from_dict(config_dict)
    rm = config.reflection_matrix()
    size = stop - start
    t1 = np.full(size, np.nan)
    t2 = np.full(size, np.nan)
    tau = np.full(size, np.nan)
    for k in range(start, stop):
        outcome = run_trial(trial_rng(config.seed, k), config, _rm=rm)
        if outcome.t1 is not None:
            t1[k - start] = outcome.t1
        if outcome.t2 is not None:
            t2[k - start] = outcome.t2
        if outcome.tau_star is not None:
            tau[k - start] = outcome.tau_star
    return t1, t2, tau


def run_trial_times(
    config: ScenarioConfig, n_jobs: int | None = None, progress=None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Outcome times of all trials in trial order (NaN = censored).

    The result is independent of ``n_jobs``: trial k always consumes
    the stream derived from (seed, k), and batches are concatenated in
    index order.
    """
    n = config.n_trials
    if n_jobs is None:
        n_jobs = os.cpu_count() or 1
    n_jobs = max(1, min(n_jobs, n))
    chunk = max(1, min(2048, -(-n // (4 * n_jobs))))
    bounds = [(s, min(s + chunk, n)) for s in range(0, n, chunk)]
    args = [(config.to_dict(), s, e) for s, e in bounds]

    parts: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []
    done = 0
    if n_jobs == 1:
        for a in args:
            parts.append(_trial_batch(a))
            done += a[2] - a[1]
            if progress is not None:
                progress(done, n)
    else:
        with multiprocessing.Pool(processes=n_jobs) as pool:
            for (s, e), part in zip(bounds, pool.imap(_trial_batch, args)):
                parts.append(part)
                done += e - s
                if progress is not None:
                    progress(done, n)
    t1 = np.concatenate([p[0] for p in parts])
    t2 = np.concatenate([p[1] for p in parts])
    tau = np.concatenate([p[2] for p in parts])
    return t1, t2, tau


def wilson_half_width(count, n, z: float = Z95):
    """Half-width of the 95% Wilson score interval for count/n."""
    count = np.asarray(count, dtype=float)
    p = count / n
    z2n = z * z / n
    return z * np.sqrt(p * (1.0 - p) / n + z2n / (4.0 * n)) / (1.0 + z2n)


def _cdf_counts(values: np.ndarray, grid: np.ndarray) -> np.ndarray:
    finite = np.sort(values[np.isfinite(values)])
    return np.searchsorted(finite, grid, side="right")


def ruin_curves(
    config: ScenarioConfig, n_jobs: int | None = None, progress=None
) -> RuinCurves:
    """Monte Carlo estimates of the five ruin/breakdown CDFs.

    Runs ``config.n_trials`` independent trials and evaluates the
    empirical frequencies on a uniform grid over [0, horizon], with
    pointwise 95% Wilson half-widths. Deterministic for a fixed seed
    regardless of ``n_jobs``.
    """
    t1, t2, tau = run_trial_times(config, n_jobs=n_jobs, progress=progress)
    both = np.where(np.isfinite(t1) & np.isfinite(t2), np.maximum(t1, t2), np.nan)
    either = np.fmin(t1, t2)  # fmin propagates the finite operand
    grid = np.linspace(0.0, config.horizon, config.grid_points)
    n = config.n_trials
    probs: dict[str, np.ndarray] = {}
    half_widths: dict[str, np.ndarray] = {}
    for name, values in zip(CURVE_NAMES, (t1, t2, both, either, tau)):
        counts = _cdf_counts(values, grid)
        probs[name] = counts / n
        half_widths[name] = wilson_half_width(counts, n)
    return RuinCurves(grid=grid, probs=probs, half_widths=half_widths, n_trials=n)


def curves_to_csv(curves: RuinCurves, file) -> None:
    """Write the documented ruin-curves CSV (10 significant digits)."""
    if isinstance(file, (str, bytes)) or hasattr(file, "__fspath__"):
        with open(file, "w", newline="\n") as handle:
            curves_to_csv(curves, handle)
            return
    file.write(CSV_HEADER + "\n")
    for g in range(curves.grid.shape[0]):
        cells = [f"{curves.grid[g]:.10g}"]
        for name in CURVE_NAMES:
            cells.append(f"{curves.probs[name][g]:.10g}")
            cells.append(f"{curves.half_widths[name][g]:.10g}")
        file.write(",".join(cells) + "\n")


def _exit_probability_common_shock(config: ScenarioConfig, quad_tol: float) -> float:
    """P(x0 - (Y1, Y2) leaves the dual cone) for a common shock.

    Conditional on Y1 = y the exit threshold for Y2 is piecewise linear
    with a kink at x01 and a root at y0 = x01 + x02/q21; beyond y0 the
    state is outside the cone regardless of Y2. The y-integral is done
    by adaptive quadrature against the Exp(r1) density.
    """
    q12 = q21 = 1.0 + config.alpha
    r1, r2 = config.claim_rate
    x01, x02 = config.x0
    y0 = x01 + x02 / q21

    def threshold(y: float) -> float:
        gap = x01 - y
        return x02 + (gap / q12 if gap >= 0.0 else q21 * gap)

    def integrand(y: float) -> float:
        return r1 * math.exp(-r1 * y) * math.exp(-r2 * threshold(y))

    inner, _ = quad(
        integrand, 0.0, y0, points=[min(x01, y0)], epsabs=quad_tol, epsrel=quad_tol, limit=200
    )
    return inner + math.exp(-r1 * y0)


def initial_intensity(region, config: ScenarioConfig, quad_tol: float = 1e-10) -> float:
    """Initial slope of the chosen ruin-probability curve.

    Sums lam_k * P(x0 - dZ_k exits the region tied to the event): the
    half-plane and union/intersection cases have closed-form
    exponential tails; the dual-cone case uses the two-firm generator
    inequalities, with adaptive quadrature for the common-shock term.
    """
    region = Region(region)
    lam1, lam2, lam3 = config.lam
    r1, r2 = config.claim_rate
    x01, x02 = config.x0
    tail1 = math.exp(-r1 * x01)  # P(Y1 >= x01)
    tail2 = math.exp(-r2 * x02)
    if region is Region.H1:
        return (lam1 + lam3) * tail1
    if region is Region.H2:
        return (lam2 + lam3) * tail2
    if region is Region.INTERSECTION:
        # Both firms at once: only a common shock can do it at time 0.
        return lam3 * tail1 * tail2
    if region is Region.UNION:
        return lam1 * tail1 + lam2 * tail2 + lam3 * (tail1 + tail2 - tail1 * tail2)
    q12 = q21 = 1.0 + config.alpha
    theta1 = x01 + min(q12 * x02, x02 / q21)
    theta2 = x02 + min(q21 * x01, x01 / q12)
    out = lam1 * math.exp(-r1 * theta1) + lam2 * math.exp(-r2 * theta2)
    if lam3 > 0.0:
        out += lam3 * _exit_probability_common_shock(config, quad_tol)
    return out
