"""Least-squares fitting of the detected mean-excitation curve.

The model for the mean number of detected excitations after excitation
time t is

    y(t) = A * ln(1 + c - c * exp(-rate * t)) / c,

with amplitude ``A`` (detector efficiency times mean particle number),
mean neighbor count ``c``, and per-particle excitation rate ``rate``.
Fitting uses multi-start Nelder-Mead over log-parameters: the model is
nearly flat in ``c`` close to saturation, so the large dynamic range is
explored through a log-spaced grid of starts rather than gradients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.optimize import minimize

__all__ = ["TimeSeries", "FitSpec", "FitResult", "model_mean", "fit"]

PARAM_NAMES = ("rate", "c", "amplitude")

_RATE_STARTS = np.logspace(2, 6, 5)
_C_STARTS = np.logspace(-2, 4, 5)
_REL_SSE_TOL = 1e-10


def model_mean(t, rate: float, c: float, amplitude: float):
    """Mean detected count at time(s) t; 0 at t = 0, saturating at
    ``amplitude * ln(1+c)/c``.  The c -> 0 limit is ``A (1 - e^{-rate t})``."""
    if rate <= 0 or c <= 0 or amplitude <= 0:
        raise ValueError("rate, c, amplitude must all be > 0")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be >= 0")
    y = amplitude * np.log1p(c * -np.expm1(-rate * t_arr)) / c
    return float(y) if np.isscalar(t) or t_arr.ndim == 0 else y


@dataclass(frozen=True)
class TimeSeries:
    """(time, detected count) measurements with strictly increasing times."""

    t: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "y", y)
        if t.shape != y.shape or t.ndim != 1:
            raise ValueError("t and y must be 1-d arrays of equal length")
        if len(t) < 3:
            raise ValueError("need at least 3 points for a 2-parameter fit")
        if np.any(t < 0) or np.any(y < 0):
            raise ValueError("times and counts must be >= 0")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")


@dataclass(frozen=True)
class FitSpec:
    """Which of (rate, c, amplitude) to fit and what to pin.

    ``free`` and the keys of ``fixed`` must cover all three parameters.
    Optional ``initial`` values are added to the multi-start grid.
    ``weights`` (same length as the series) turn the objective into a
    weighted sum of squares; default is unweighted.
    """

    free: tuple = ("rate", "c")
    fixed: dict = field(default_factory=dict)
    initial: dict = field(default_factory=dict)
    weights: np.ndarray | None = None

    def __post_init__(self):
        free = tuple(self.free)
        object.__setattr__(self, "free", free)
        unknown = (set(free) | set(self.fixed) | set(self.initial)) - set(PARAM_NAMES)
        if unknown:
            raise ValueError(f"unknown parameter names: {sorted(unknown)}")
        if set(free) & set(self.fixed):
            raise ValueError("a parameter cannot be both free and fixed")
        if set(free) | set(self.fixed) != set(PARAM_NAMES):
            raise ValueError(f"free + fixed must cover {PARAM_NAMES}")
        if not free:
            raise ValueError("at least one parameter must be free")
        for name, value in self.fixed.items():
            if value <= 0:
                raise ValueError(f"fixed {name} must be > 0")


@dataclass(frozen=True)
class FitResult:
    rate: float
    c: float
    amplitude: float
    sse: float
    iterations: int
    converged: bool
    message: str = ""


def _starts_for(name: str, spec: FitSpec, series: TimeSeries):
    if name in spec.initial:
        extra = [float(spec.initial[name])]
    else:
        extra = []
    if name == "rate":
        return extra + list(_RATE_STARTS)
    if name == "c":
        return extra + list(_C_STARTS)
    # amplitude: saturation heuristic from the largest observed count
    y_max = float(series.y.max())
    return extra + [max(y_max, 1e-12) * k for k in (1.0, 2.0)]


def fit(series: TimeSeries, spec: FitSpec) -> FitResult:
    """Minimize the (weighted) SSE over the free parameters.

    Runs Nelder-Mead in log-parameter space from a log-grid of starting
    points, then restarts from the incumbent until a full round improves the
    SSE by less than 1e-10 relative; the converged flag reports whether that
    stall was reached.  Non-convergence returns the best point found.
    """
    t, y = series.t, series.y
    w = None
    if spec.weights is not None:
        w = np.asarray(spec.weights, dtype=float)
        if w.shape != y.shape or np.any(w < 0):
            raise ValueError("weights must be non-negative and match the series")

    if float(np.ptp(y)) == 0.0:
        params = dict(spec.fixed)
        for name in spec.free:
            params[name] = spec.initial.get(name, 1.0)
        return FitResult(
            params["rate"], params["c"], params["amplitude"],
            sse=float("nan"), iterations=0, converged=False,
            message="ill-posed: constant counts carry no rate information",
        )

    free = spec.free

    def unpack(theta):
        params = dict(spec.fixed)
        for name, val in zip(free, theta):
            params[name] = math.exp(val)
        return params

    def objective(theta):
        params = unpack(theta)
        if not all(np.isfinite(v) and v > 0 for v in params.values()):
            return float("inf")
        resid = y - model_mean(t, params["rate"], params["c"], params["amplitude"])
        if w is not None:
            return float(np.sum(w * resid * resid))
        return float(resid @ resid)

    start_values = [_starts_for(name, spec, series) for name in free]
    best = None
    iterations = 0
    for combo in product(*start_values):
        theta0 = np.log(np.asarray(combo, dtype=float))
        res = minimize(objective, theta0, method="Nelder-Mead",
                       options={"maxiter": 2000, "xatol": 1e-10, "fatol": 1e-14})
        iterations += res.nit
        cand = (res.fun, tuple(res.x))
        if best is None or cand < best:
            best = cand

    converged = False
    for _ in range(50):
        res = minimize(objective, np.asarray(best[1]), method="Nelder-Mead",
                       options={"maxiter": 4000, "xatol": 1e-12, "fatol": 1e-16})
        iterations += res.nit
        prev_sse = best[0]
        if res.fun < prev_sse:
            best = (res.fun, tuple(res.x))
        if prev_sse - best[0] <= _REL_SSE_TOL * max(prev_sse, 1e-300):
            converged = True
            break

    params = unpack(np.asarray(best[1]))
    return FitResult(
        params["rate"], params["c"], params["amplitude"],
        sse=float(best[0]), iterations=int(iterations), converged=converged,
        message="" if converged else "restart rounds kept improving",
    )
