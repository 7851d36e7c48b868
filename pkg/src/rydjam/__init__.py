"""rydjam: jamming limits of blockaded excitation processes.

Closed-form statistics (exact recursion moments, fluid limits, Mandel Q,
detector transforms), Monte Carlo simulators for the random-graph and
spatial versions of the process, sample estimators, and model fitting.

The hot simulation kernels run in a compiled extension when available and
fall back to pure Python otherwise; see ``rydjam.backend()``.
"""

from ._kernels import BACKEND as _BACKEND
from ._rng import RngSpec
from .analytics import (
    BlockadeGeometry,
    DetectorModel,
    JamStats,
    ModelParams,
    conditional_jam_stats,
    detector_transform,
    exact_unaffected_moments,
    fluid_limits,
    jam_fraction,
    lattice_neighbor_count,
    mean_excitation_curve,
    neighbors_from_geometry,
    unconditional_jam_stats,
)
from .fitting import FitResult, FitSpec, TimeSeries, fit, model_mean
from .graphsim import (
    JamOutcome,
    TimedTrajectory,
    enumerate_exact,
    simulate_explicit_graph,
    simulate_recursion_jamming,
    simulate_timed,
    simulate_unconditional,
)
from .spatial import SpatialConfig, neighbor_graph, sample_points, simulate_rsa
from .stats import make_histogram, overlay_curve, summarize, thin_detector

__version__ = "0.1.0"


def backend() -> str:
    """Active kernel backend: "compiled" or "python"."""
    return _BACKEND
