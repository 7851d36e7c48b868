"""Monte Carlo simulation of the random-graph jamming process.

Three equivalent routes to the jamming limit of a blockaded gas on a G(n, p)
random graph:

* the fast *recursion* path, sampling only the unaffected-count chain
  ``U_{m+1} = U_m - 1 - Binomial(U_m - 1, p)``;
* the *explicit graph* path, materializing the edge set and running random
  sequential activation (the excited set is then a maximal independent set);
* the *timed* path, which adds exponential holding times
  ``T_m - T_{m-1} ~ Exp(rate * U_{m-1})``.

An exact enumerator over all graphs and activation orders (``n <= 6``) and
an exact dynamic program over the recursion law serve as test oracles.
Every simulator is deterministic given an :class:`RngSpec`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import _kernels
from ._parallel import map_trials
from ._rng import DYNAMICS, REALIZATION, RngSpec
from .analytics import ModelParams

__all__ = [
    "RngSpec",
    "JamOutcome",
    "TimedTrajectory",
    "ExplicitGraphResult",
    "simulate_recursion_jamming",
    "simulate_explicit_graph",
    "simulate_timed",
    "simulate_unconditional",
    "enumerate_exact",
    "jam_count_distribution",
    "run_jamming_trials",
    "accumulate_unaffected_moments",
]


@dataclass(frozen=True)
class JamOutcome:
    """Result of one jamming run.

    ``x_inf`` is the final excitation count, ``n_realized`` the population
    the trial actually used, and ``trajectory`` (optional) the unaffected
    counts ``U_0 .. U_tau`` (so ``x_inf == len(trajectory) - 1``).
    """

    x_inf: int
    n_realized: int
    trajectory: np.ndarray | None = None


@dataclass(frozen=True)
class TimedTrajectory:
    """Event-time view of one run: arrays over m = 0 .. tau.

    ``times[0] == 0`` (activation instant), ``times`` strictly increasing,
    ``unaffected`` strictly decreasing to 0, and the excitation count after
    event m is m itself.
    """

    times: np.ndarray
    unaffected: np.ndarray
    rate: float

    @property
    def x_inf(self) -> int:
        return len(self.times) - 1

    def counts_at(self, t_grid) -> np.ndarray:
        """Excitation counts X(t) on a grid of times (inf allowed)."""
        t = np.asarray(t_grid, dtype=float)
        if np.any(t < 0):
            raise ValueError("t_grid entries must be >= 0")
        if np.any(np.diff(t) < 0):
            raise ValueError("t_grid must be sorted ascending")
        return np.searchsorted(self.times[1:], t, side="right")


@dataclass(frozen=True)
class ExplicitGraphResult:
    """Explicit-graph run with the realized graph attached (for audits)."""

    outcome: JamOutcome
    excited: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray


def simulate_recursion_jamming(
    params: ModelParams, rng: RngSpec, keep_trajectory: bool = False
) -> JamOutcome:
    """Sample one jamming limit through the unaffected-count recursion."""
    x_inf, traj = _kernels.recursion_jam(
        rng.bit_generator(DYNAMICS), params.n, params.p, keep_trajectory
    )
    return JamOutcome(x_inf, params.n, traj)


def simulate_explicit_graph(
    params: ModelParams, rng: RngSpec, return_graph: bool = False
):
    """Materialize a G(n, p) graph and run random sequential activation.

    The graph is drawn on the trial's realization stream, the activation
    order on its dynamics stream.  With ``return_graph`` the realized
    adjacency and excited set are attached for property checks.
    """
    indptr, indices = _kernels.er_adjacency(
        rng.bit_generator(REALIZATION), params.n, params.p
    )
    x_inf, excited, traj = _kernels.rsa_jam(
        rng.bit_generator(DYNAMICS), indptr, indices, return_graph
    )
    outcome = JamOutcome(x_inf, params.n, traj)
    if return_graph:
        return ExplicitGraphResult(outcome, excited, indptr, indices)
    return outcome


def simulate_timed(params: ModelParams, rate: float, rng: RngSpec) -> TimedTrajectory:
    """Recursion-path run with exponential clocks at the given rate."""
    times, unaff = _kernels.recursion_jam_timed(
        rng.bit_generator(DYNAMICS), params.n, params.p, rate
    )
    return TimedTrajectory(times, unaff, rate)


def simulate_unconditional(rho_v: float, c: float, rng: RngSpec) -> JamOutcome:
    """Jamming run with a Poisson(rho_v) population and fixed mean degree c.

    Draws ``N ~ Poisson(rho_v)`` on the realization stream, then runs the
    recursion with ``p = min(1, c / N)``.  An empty draw returns x_inf = 0.
    """
    if rho_v <= 0:
        raise ValueError("rho_v must be > 0")
    if c <= 0:
        raise ValueError("c must be > 0")
    n = int(rng.generator(REALIZATION).poisson(rho_v))
    if n == 0:
        return JamOutcome(0, 0)
    p = min(1.0, c / n)
    x_inf, _ = _kernels.recursion_jam(rng.bit_generator(DYNAMICS), n, p, False)
    return JamOutcome(x_inf, n)


_ENUM_MAX_N = 6


@lru_cache(maxsize=None)
def _graph_pmf_table(n: int):
    """Per-graph jam-count pmfs for all 2^(n choose 2) labeled graphs.

    For each graph, the pmf of the final excitation count under uniformly
    random sequential activation is computed by a memoized recursion over
    unaffected-set bitmasks.
    """
    pairs = list(combinations(range(n), 2))
    n_graphs = 1 << len(pairs)
    gidx = np.arange(n_graphs, dtype=np.int64)
    # per-graph bitmask of {v} union neighbors(v)
    block = np.tile(1 << np.arange(n, dtype=np.int64), (n_graphs, 1))
    for b, (i, j) in enumerate(pairs):
        has = (gidx >> b) & 1
        block[:, i] |= has << j
        block[:, j] |= has << i
    edge_counts = np.zeros(n_graphs, dtype=np.int64)
    for b in range(len(pairs)):
        edge_counts += (gidx >> b) & 1
    full = (1 << n) - 1
    pmf = np.zeros((n_graphs, full + 1, n + 1))
    pmf[:, 0, 0] = 1.0
    for mask in range(1, full + 1):
        members = [v for v in range(n) if (mask >> v) & 1]
        acc = np.zeros((n_graphs, n + 1))
        for v in members:
            child = mask & ~block[:, v]
            acc[:, 1:] += pmf[gidx, child, :n]
        pmf[:, mask] = acc / len(members)
    return edge_counts, pmf[:, full].copy()


def enumerate_exact(n: int, p: float) -> np.ndarray:
    """Exact law of the jam count X(inf) by exhaustive graph enumeration.

    Sums over all 2^(n choose 2) edge configurations weighted by
    ``p^edges (1-p)^missing`` and over all activation orders weighted by the
    uniform-choice probabilities.  Limited to ``n <= 6``.

    Returns the pmf over 0 .. n (index = excitation count).
    """
    if not 1 <= n <= _ENUM_MAX_N:
        raise ValueError(f"n must be in [1, {_ENUM_MAX_N}]")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p!r} outside [0, 1]")
    edge_counts, pmfs = _graph_pmf_table(n)
    m = n * (n - 1) // 2
    if p == 0.0:
        weights = (edge_counts == 0).astype(float)
    elif p == 1.0:
        weights = (edge_counts == m).astype(float)
    else:
        weights = np.exp(
            edge_counts * math.log(p) + (m - edge_counts) * math.log1p(-p)
        )
    return weights @ pmfs


def jam_count_distribution(n: int, p: float) -> np.ndarray:
    """Exact law of the jam count from the recursion, for any n.

    Dynamic program over the unaffected-count distribution with binomial
    transition rows; the first-passage mass at 0 after m steps is P[X = m].
    Cost O(n^2) memory, O(n^3) time; intended as an oracle for moderate n.
    """
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p!r} outside [0, 1]")
    from scipy.stats import binom

    transition = np.zeros((n + 1, n + 1))
    for u in range(1, n + 1):
        j = np.arange(u)
        transition[u, :u] = binom.pmf(u - 1 - j, u - 1, p)
    alive = np.zeros(n + 1)
    alive[n] = 1.0
    pmf = np.zeros(n + 1)
    for m in range(1, n + 1):
        alive = alive @ transition
        pmf[m] = alive[0]
        alive[0] = 0.0
    return pmf


def run_jamming_trials(
    params: ModelParams | None,
    trials: int,
    master_seed: int,
    method: str = "recursion",
    rho_v: float | None = None,
    c: float | None = None,
    rate: float | None = None,
    t_grid=None,
    workers: int = 1,
):
    """Run independent jamming trials; results are ordered by trial index.

    method "recursion" or "graph" uses ``params``; "unconditional" uses
    ``(rho_v, c)``; "timed" uses ``params`` with ``rate`` and returns counts
    on ``t_grid``.  Returns ``(n_realized, x_inf)`` int64 arrays, except for
    "timed" where it returns ``(n_realized, counts)`` with one row per trial.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")

    if method == "timed":
        if rate is None or t_grid is None:
            raise ValueError("timed method requires rate and t_grid")
        grid = np.asarray(t_grid, dtype=float)

        def one_timed(trial):
            traj = simulate_timed(params, rate, RngSpec(master_seed, trial))
            return params.n, traj.counts_at(grid)

        rows = map_trials(one_timed, trials, workers)
        n_realized = np.array([r[0] for r in rows], dtype=np.int64)
        counts = np.vstack([r[1] for r in rows])
        return n_realized, counts

    if method == "recursion":
        def one(trial):
            out = simulate_recursion_jamming(params, RngSpec(master_seed, trial))
            return out.n_realized, out.x_inf
    elif method == "graph":
        def one(trial):
            out = simulate_explicit_graph(params, RngSpec(master_seed, trial))
            return out.n_realized, out.x_inf
    elif method == "unconditional":
        if rho_v is None or c is None:
            raise ValueError("unconditional method requires rho_v and c")

        def one(trial):
            out = simulate_unconditional(rho_v, c, RngSpec(master_seed, trial))
            return out.n_realized, out.x_inf
    else:
        raise ValueError(f"unknown method {method!r}")

    rows = map_trials(one, trials, workers)
    arr = np.asarray(rows, dtype=np.int64)
    return arr[:, 0], arr[:, 1]


def accumulate_unaffected_moments(
    params: ModelParams, trials: int, master_seed: int, m_max: int, workers: int = 1
):
    """Sample mean and variance of U_m for m = 0 .. m_max over many trials.

    Trials that jam before ``m_max`` contribute zeros beyond their jam point
    (the chain is frozen at 0), so compare against closed forms only where
    the jam probability is negligible.  Returns ``(mean, variance)`` arrays
    of length ``m_max + 1`` (variance with the unbiased 1/(trials-1) factor).
    """
    if trials < 2:
        raise ValueError("trials must be >= 2")

    def one(trial):
        _, traj = _kernels.recursion_jam(
            RngSpec(master_seed, trial).bit_generator(DYNAMICS),
            params.n,
            params.p,
            True,
        )
        return traj

    sums = np.zeros(m_max + 1)
    sumsq = np.zeros(m_max + 1)
    for traj in map_trials(one, trials, workers):
        u = traj[: m_max + 1].astype(float)
        k = len(u)
        sums[:k] += u
        sumsq[:k] += u * u
    mean = sums / trials
    variance = (sumsq - trials * mean * mean) / (trials - 1)
    return mean, np.maximum(variance, 0.0)
