"""Estimators for excitation-count samples.

Sample mean, unbiased variance, Mandel Q with jackknife uncertainty,
binomial detector thinning, and histogram generation with scaled normal or
Poisson overlay curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._rng import DYNAMICS, RngSpec

__all__ = [
    "SampleSummary",
    "Histogram",
    "summarize",
    "thin_detector",
    "make_histogram",
    "overlay_curve",
]


@dataclass(frozen=True)
class SampleSummary:
    """Moments of an integer sample.

    ``mandel_q = variance_unbiased / mean - 1`` when the mean is positive,
    else None.  ``se_q`` is the delete-1 jackknife standard error of Q (None
    when Q itself or any leave-one-out Q is undefined, or count < 3).
    """

    count: int
    mean: float
    variance_unbiased: float
    mandel_q: float | None
    se_mean: float
    se_q: float | None


def summarize(samples) -> SampleSummary:
    """Estimate mean, unbiased variance and Mandel Q from repeated trials."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError("need at least 2 samples")
    total = x.sum()
    mean = total / n
    ssq = float(x @ x)
    variance = (ssq - n * mean * mean) / (n - 1)
    variance = max(variance, 0.0)
    se_mean = math.sqrt(variance / n)
    if mean <= 0:
        return SampleSummary(n, mean, variance, None, se_mean, None)
    q = variance / mean - 1.0

    se_q = None
    if n >= 3:
        loo_mean = (total - x) / (n - 1)
        if np.all(loo_mean > 0):
            loo_var = (ssq - x * x - (n - 1) * loo_mean * loo_mean) / (n - 2)
            loo_q = np.maximum(loo_var, 0.0) / loo_mean - 1.0
            se_q = math.sqrt((n - 1) / n * np.sum((loo_q - loo_q.mean()) ** 2))
    return SampleSummary(n, mean, variance, q, se_mean, se_q)


def thin_detector(samples, eta: float, rng: RngSpec) -> np.ndarray:
    """Binomial thinning: each of the ``count`` excitations is kept w.p. eta.

    Thinning scales the Mandel Q of the sample by eta in expectation.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    counts = np.asarray(samples)
    if np.any(counts < 0):
        raise ValueError("counts must be >= 0")
    if eta == 1.0:
        return counts.astype(np.int64).copy()
    if eta == 0.0:
        return np.zeros(counts.shape, dtype=np.int64)
    return rng.generator(DYNAMICS).binomial(counts.astype(np.int64), eta)


@dataclass(frozen=True)
class Histogram:
    """Counts over contiguous bins [left, right) anchored at 0.

    ``scale`` is the overlay normalization factor n_s: overlay curves are
    scaled densities meant to be drawn over raw counts.
    """

    bin_width: float
    edges: np.ndarray
    counts: np.ndarray
    scale: float

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


def make_histogram(samples, bin_width: float = 1.0, scale: float | None = None) -> Histogram:
    """Histogram of integer samples with left-closed bins anchored at 0.

    ``scale`` defaults to the sample count, which makes a normal overlay
    integrate to the total number of counts.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be > 0")
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("no samples")
    if np.any(x < 0):
        raise ValueError("counts must be >= 0")
    n_bins = int(np.floor(x.max() / bin_width)) + 1
    edges = np.arange(n_bins + 1, dtype=float) * bin_width
    counts, _ = np.histogram(x, bins=edges)
    if scale is None:
        scale = float(x.size)
    elif scale <= 0:
        raise ValueError("scale must be > 0")
    return Histogram(bin_width, edges, counts, scale)


def overlay_curve(hist: Histogram, dist) -> np.ndarray:
    """Overlay values of a scipy.stats distribution at the bin centers.

    Continuous distributions (``pdf``) contribute ``n_s * width * pdf(x)``;
    discrete ones (``pmf``) contribute the pmf at the nearest integer, with
    half-integer centers resolving downward so a unit-width bin [k, k+1)
    overlays ``pmf(k)``.
    """
    centers = hist.centers
    if hasattr(dist, "pdf"):
        return hist.scale * hist.bin_width * dist.pdf(centers)
    return hist.scale * dist.pmf(np.ceil(centers - 0.5))
