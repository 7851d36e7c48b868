"""Continuum random sequential adsorption in a box.

Points are placed uniformly at random (fixed count or Poisson), neighbors
are pairs within the blockade radius under periodic or open boundaries, and
uniformly random sequential activation with neighbor blocking runs to the
jammed state.  Used to quantify how well the position-free random-graph
predictions approximate a genuinely spatial process.

The quasi-2D slab geometry is modeled as a 2D point process with areal
density ``rho * h`` and in-plane disk blockade; full 3D distances in a thin
box are available as a sensitivity option (``dimension="3d"``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._parallel import map_trials
from ._rng import DYNAMICS, REALIZATION, RngSpec
from .graphsim import JamOutcome, TimedTrajectory

__all__ = [
    "SpatialConfig",
    "PointSet",
    "Adjacency",
    "sample_points",
    "neighbor_graph",
    "simulate_rsa",
    "simulate_rsa_timed",
    "run_spatial_trials",
]

DIMENSIONS = ("2d", "slab", "3d")
BOUNDARIES = ("periodic", "open")


@dataclass(frozen=True)
class SpatialConfig:
    """Box geometry and population mode for spatial RSA.

    dimension
        "2d": areal density over an l x w box with 2D distances.
        "slab": thin-slab reduction; volumetric density, thickness ``height``,
        2D in-plane distances (areal density ``density * height``).
        "3d": volumetric density with full 3D distances in an l x w x h box.
    population
        "poisson" draws N ~ Poisson(density * volume); "fixed" places exactly
        ``fixed_n`` points.
    """

    dimension: str
    length: float
    width: float
    density: float
    radius: float
    height: float | None = None
    boundary: str = "periodic"
    population: str = "poisson"
    fixed_n: int | None = None

    def __post_init__(self):
        if self.dimension not in DIMENSIONS:
            raise ValueError(f"dimension must be one of {DIMENSIONS}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")
        if self.length <= 0 or self.width <= 0:
            raise ValueError("box lengths must be > 0")
        if self.dimension in ("slab", "3d"):
            if self.height is None or self.height <= 0:
                raise ValueError(f"{self.dimension} geometry requires height > 0")
        if self.density < 0:
            raise ValueError("density must be >= 0")
        if self.radius <= 0:
            raise ValueError("radius must be > 0")
        if self.boundary == "periodic" and not (
            self.radius < 0.5 * min(self.length, self.width)
        ):
            raise ValueError("periodic boundaries require radius < min(l, w) / 2")
        if self.population == "fixed":
            if self.fixed_n is None or self.fixed_n < 0:
                raise ValueError("fixed population requires fixed_n >= 0")
        elif self.population != "poisson":
            raise ValueError("population must be 'poisson' or 'fixed'")

    @property
    def ndim(self) -> int:
        return 3 if self.dimension == "3d" else 2

    @property
    def box(self) -> np.ndarray:
        if self.ndim == 3:
            return np.array([self.length, self.width, self.height])
        return np.array([self.length, self.width])

    @property
    def mean_count(self) -> float:
        """Expected population rho * V (areal rho * A for pure 2D)."""
        area = self.length * self.width
        if self.dimension == "2d":
            return self.density * area
        return self.density * area * self.height


@dataclass(frozen=True)
class PointSet:
    positions: np.ndarray
    box: np.ndarray
    boundary: str

    def __post_init__(self):
        if np.any(self.positions < 0) or np.any(self.positions >= self.box):
            raise ValueError("positions must lie inside the box")

    def __len__(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class Adjacency:
    """Symmetric neighbor structure in CSR form, rows sorted ascending."""

    indptr: np.ndarray
    indices: np.ndarray

    def __len__(self) -> int:
        return len(self.indptr) - 1

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)


def sample_points(config: SpatialConfig, rng: RngSpec) -> PointSet:
    """Place the trial's points uniformly in the box (realization stream)."""
    gen = rng.generator(REALIZATION)
    if config.population == "fixed":
        n = config.fixed_n
    else:
        n = int(gen.poisson(config.mean_count))
    positions = gen.random((n, config.ndim)) * config.box
    return PointSet(positions, config.box, config.boundary)


def neighbor_graph(points: PointSet, radius: float) -> Adjacency:
    """Pairs within ``radius`` (inclusive), boundary-aware.

    Periodic distances use the minimum image per axis; the compiled backend
    scans a uniform grid with cell edge >= radius, which requires
    ``radius < min(box)/2`` for periodic boxes.
    """
    if radius <= 0:
        raise ValueError("radius must be > 0")
    periodic = points.boundary == "periodic"
    if periodic and not radius < 0.5 * min(points.box[:2]):
        raise ValueError("periodic boundaries require radius < min(l, w) / 2")
    indptr, indices = _kernels.build_adjacency(
        np.ascontiguousarray(points.positions, dtype=np.float64),
        np.ascontiguousarray(points.box, dtype=np.float64),
        radius,
        periodic,
    )
    return Adjacency(indptr, indices)


def simulate_rsa(
    points: PointSet, adjacency: Adjacency, rng: RngSpec, return_excited: bool = False
):
    """Random sequential activation over a realized point set.

    Returns a :class:`JamOutcome`; with ``return_excited`` also the excited
    mask, which is a maximal independent set of the geometric graph.
    """
    if len(adjacency) != len(points):
        raise ValueError("adjacency and point set sizes differ")
    x_inf, excited, traj = _kernels.rsa_jam(
        rng.bit_generator(DYNAMICS), adjacency.indptr, adjacency.indices, True
    )
    outcome = JamOutcome(x_inf, len(points), traj)
    if return_excited:
        return outcome, excited
    return outcome


def simulate_rsa_timed(
    points: PointSet,
    adjacency: Adjacency,
    rate: float,
    rng: RngSpec,
    return_excited: bool = False,
):
    """Timed RSA: the same jump chain with Exp(rate * U) holding times."""
    if len(adjacency) != len(points):
        raise ValueError("adjacency and point set sizes differ")
    times, unaff, excited = _kernels.rsa_jam_timed(
        rng.bit_generator(DYNAMICS), adjacency.indptr, adjacency.indices, rate
    )
    traj = TimedTrajectory(times, unaff, rate)
    if return_excited:
        return traj, excited
    return traj


def run_spatial_trials(
    config: SpatialConfig,
    trials: int,
    master_seed: int,
    workers: int = 1,
    rate: float | None = None,
    t_grid=None,
    collect_points: bool = False,
):
    """Independent spatial RSA trials, ordered by trial index.

    Untimed: returns ``(n_realized, x_inf)`` arrays.  With ``rate`` and
    ``t_grid``: returns ``(n_realized, counts)`` with one row per trial.
    With ``collect_points`` a list of ``(positions, excited)`` per trial is
    appended to the return tuple (audit output; memory scales with trials).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    timed = rate is not None
    grid = None if t_grid is None else np.asarray(t_grid, dtype=float)
    if timed and grid is None:
        raise ValueError("timed runs require t_grid")

    def one(trial):
        spec = RngSpec(master_seed, trial)
        points = sample_points(config, spec)
        adjacency = neighbor_graph(points, config.radius)
        if timed:
            traj, excited = simulate_rsa_timed(
                points, adjacency, rate, spec, return_excited=True
            )
            row = traj.counts_at(grid)
        else:
            outcome, excited = simulate_rsa(points, adjacency, spec, return_excited=True)
            row = outcome.x_inf
        pts = (points.positions, excited) if collect_points else None
        return len(points), row, pts

    rows = map_trials(one, trials, workers)
    n_realized = np.array([r[0] for r in rows], dtype=np.int64)
    if timed:
        counts = np.vstack([r[1] for r in rows])
    else:
        counts = np.array([r[1] for r in rows], dtype=np.int64)
    if collect_points:
        return n_realized, counts, [r[2] for r in rows]
    return n_realized, counts


def mean_neighbor_estimate(config: SpatialConfig, trials: int, master_seed: int) -> float:
    """Average neighbor degree over Poisson configurations (consistency check
    against the geometric mean neighbor count)."""
    total_deg = 0
    total_pts = 0
    for trial in range(trials):
        spec = RngSpec(master_seed, trial)
        points = sample_points(config, spec)
        if len(points) == 0:
            continue
        adjacency = neighbor_graph(points, config.radius)
        total_deg += int(adjacency.degrees.sum())
        total_pts += len(points)
    if total_pts == 0:
        return math.nan
    return total_deg / total_pts
