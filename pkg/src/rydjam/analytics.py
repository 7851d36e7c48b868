"""Closed-form statistics of blockaded excitation processes.

A gas of excitable particles is modeled as a random graph in which each
pair of particles is independently connected ("blocked") with probability
``p``; excitations occur one at a time at uniformly random unaffected
particles and block their neighbors, until the system jams.  With ``c``
the mean neighbor count (``p = c/n``, or ``c = rho * V_b`` for a spatial
gas with blockade volume ``V_b``), the number of unaffected particles
after ``m`` excitations follows the recursion

    U_{m+1} = U_m - 1 - Binomial(U_m - 1, p),   U_0 = n,

whose exact moments, large-``n`` fluid limits, jamming-limit statistics,
Mandel Q parameter, time-dependent mean excitation curve, and detector
transforms are evaluated here in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModelParams",
    "BlockadeGeometry",
    "JamStats",
    "DetectorModel",
    "exact_unaffected_moments",
    "fluid_limits",
    "jam_fraction",
    "conditional_jam_stats",
    "unconditional_jam_stats",
    "mean_excitation_curve",
    "detector_transform",
    "neighbors_from_geometry",
    "lattice_neighbor_count",
    "volume_from_detected_mean",
]

GEOMETRY_SHAPES = ("sphere", "slab_cylinder", "square_lattice")


@dataclass(frozen=True)
class ModelParams:
    """Random-graph model of a blockaded gas.

    Exactly one of ``c`` (mean neighbor count) or ``p`` (pairwise blocking
    probability) may be given; the other is derived through ``p = c / n``.
    Passing both is allowed when they are consistent to 1e-12 relative.
    """

    n: int
    c: float | None = None
    p: float | None = None

    def __post_init__(self):
        if self.n < 0 or int(self.n) != self.n:
            raise ValueError("n must be a non-negative integer")
        object.__setattr__(self, "n", int(self.n))
        c, p = self.c, self.p
        if self.n == 0:
            c = 0.0 if c is None else float(c)
            p = 0.0 if p is None else float(p)
        elif p is None and c is None:
            raise ValueError("one of c or p is required")
        elif p is None:
            c = float(c)
            p = c / self.n
        elif c is None:
            p = float(p)
            c = p * self.n
        else:
            c, p = float(c), float(p)
            if abs(p * self.n - c) > 1e-12 * max(1.0, abs(c)):
                raise ValueError(
                    f"inconsistent parameters: p*n = {p * self.n!r} but c = {c!r}"
                )
        if c < 0:
            raise ValueError("c must be >= 0")
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"edge probability p = {p!r} outside [0, 1]")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class BlockadeGeometry:
    """Physical geometry sufficient to derive a mean neighbor count.

    shape
        ``"sphere"``: blockade ball of radius ``radius`` in a gas of
        volumetric density ``density`` (per m^3).
        ``"slab_cylinder"``: thin slab of thickness ``thickness``; the
        blockade region is a cylinder of radius ``radius`` through the slab.
        ``"square_lattice"``: particles on a square lattice with spacing
        ``spacing``; neighbors are lattice sites within ``radius``.
    """

    shape: str
    radius: float
    density: float | None = None
    thickness: float | None = None
    spacing: float | None = None

    def __post_init__(self):
        if self.shape not in GEOMETRY_SHAPES:
            raise ValueError(f"shape must be one of {GEOMETRY_SHAPES}")
        if self.radius <= 0:
            raise ValueError("radius must be > 0")
        if self.shape == "square_lattice":
            if self.spacing is None or self.spacing <= 0:
                raise ValueError("square_lattice requires spacing > 0")
        else:
            if self.density is None or self.density <= 0:
                raise ValueError(f"{self.shape} requires density > 0")
        if self.shape == "slab_cylinder" and (
            self.thickness is None or self.thickness <= 0
        ):
            raise ValueError("slab_cylinder requires thickness > 0")


@dataclass(frozen=True)
class JamStats:
    """Mean, variance and Mandel Q of an excitation count."""

    mean: float
    variance: float
    mandel_q: float

    def __post_init__(self):
        if self.variance < 0:
            raise ValueError("variance must be >= 0")

    @classmethod
    def from_mean_variance(cls, mean: float, variance: float) -> "JamStats":
        if mean <= 0:
            raise ValueError("mean must be > 0 to define a Mandel Q")
        return cls(mean, variance, variance / mean - 1.0)


@dataclass(frozen=True)
class DetectorModel:
    """Detector that registers each excitation independently with probability eta."""

    eta: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta must lie in [0, 1]")


def exact_unaffected_moments(n: int, p: float, m: int) -> tuple[float, float]:
    """Exact mean and variance of the unaffected count after m excitations.

    Solves the recursion ``U_{m+1} = U_m - 1 - Binomial(U_m - 1, p)`` with
    ``U_0 = n``.  With ``q = 1 - p``,

        E[U_m]   = q^m n - (q - q^{m+1}) / p,
        Var[U_m] = D (B D - (p-2) A - 2 B) / ((p-2) p),

    where ``D = 1 - q^m``, ``A = (n-1)p + 1`` and ``B = 1 - (n-1)(p-2)p``
    (the variance expression is an algebraically equivalent, cancellation-free
    rearrangement of the iterated moment recursion).  The ``p = 0`` limit is
    the deterministic ``(n - m, 0)``.

    The moment recursions extend formally past the stopping time of the
    physical process, where the variance expression turns negative; it is
    clamped at 0 there (the mean is returned as-is and goes negative).
    """
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")
    if m < 0 or int(m) != m:
        raise ValueError("m must be a non-negative integer")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p = {p!r} outside [0, 1]")
    if m == 0:
        return float(n), 0.0
    if p == 0.0:
        if m > n:
            raise ValueError("for p = 0 the recursion is undefined beyond m = n")
        return float(n - m), 0.0
    if p == 1.0:
        # the first excitation blocks everyone else
        return 0.0, 0.0
    log_q = math.log1p(-p)
    qm = math.exp(m * log_q)
    d = -math.expm1(m * log_q)  # 1 - (1-p)^m, no cancellation
    q = 1.0 - p
    mean = qm * n - q * d / p
    a = (n - 1) * p + 1.0
    b = 1.0 - (n - 1) * (p - 2.0) * p
    variance = d * (b * d - (p - 2.0) * a - 2.0 * b) / ((p - 2.0) * p)
    return mean, max(variance, 0.0)


def fluid_limits(c: float, f: float) -> tuple[float, float]:
    """Large-n limits u(f) = lim E[U_{[fn]}]/n and v(f) = lim Var[U_{[fn]}]/n.

    Under the scaling ``p = c/n``,

        u(f) = e^{-cf} - (1 - e^{-cf}) / c,
        v(f) = (1 - e^{-cf}) ((1 + 2c) e^{-cf} - 1) / (2c).
    """
    if c <= 0:
        raise ValueError("c must be > 0")
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"f = {f!r} outside [0, 1]")
    e = math.exp(-c * f)
    d = -math.expm1(-c * f)  # 1 - e^{-cf}
    u = e - d / c
    v = d * ((1.0 + 2.0 * c) * e - 1.0) / (2.0 * c)
    return u, v


def jam_fraction(c: float) -> float:
    """Fraction of particles excited at jamming: the root of u(f) = 0.

    In closed form ``f* = ln(1 + c) / c``; it tends to 1 as ``c -> 0``
    (no blockade, everything excites) and to 0 as ``c -> inf``.
    """
    if c <= 0:
        raise ValueError("c must be > 0")
    return math.log1p(c) / c


def conditional_jam_stats(n: int, c: float) -> JamStats:
    """Jamming-limit excitation statistics for exactly n particles.

    Large-n asymptotics: mean ``n ln(1+c)/c`` and variance
    ``n c / (2 (1+c)^2)``; the resulting Mandel Q,
    ``c^2 / (2 (1+c)^2 ln(1+c)) - 1``, does not depend on n.
    """
    if n < 1 or int(n) != n:
        raise ValueError("n must be a positive integer")
    if c <= 0:
        raise ValueError("c must be > 0")
    mean = n * math.log1p(c) / c
    variance = n * c / (2.0 * (1.0 + c) ** 2)
    return JamStats.from_mean_variance(mean, variance)


def unconditional_jam_stats(rho_v: float, c: float) -> JamStats:
    """Jamming-limit statistics when the particle number is Poisson(rho_v).

    Averaging the conditional law over ``N ~ Poisson(rho_v)`` gives mean
    ``rho_v ln(1+c)/c`` and variance
    ``(c / (2 (1+c)^2) + (ln(1+c)/c)^2) rho_v``; the Mandel Q again depends
    only on ``c`` and lies in (-1, 0), rising to 0 as ``c -> 0`` (Poisson
    statistics) and falling to -1 as ``c -> inf``.
    """
    if rho_v <= 0:
        raise ValueError("rho_v must be > 0")
    if c <= 0:
        raise ValueError("c must be > 0")
    fstar = math.log1p(c) / c
    mean = rho_v * fstar
    variance = (c / (2.0 * (1.0 + c) ** 2) + fstar * fstar) * rho_v
    return JamStats.from_mean_variance(mean, variance)


def mean_excitation_curve(c: float, rate: float, t):
    """Mean excited fraction x(t) when unaffected particles excite at ``rate``.

    Unique solution of ``dx/dt = rate * u(x)`` with ``x(0) = 0``:

        x(t) = ln(1 + c - c e^{-rate t}) / c.

    ``t`` may be a scalar or an array (entries >= 0, ``inf`` allowed and
    gives the jam fraction ``ln(1+c)/c``).
    """
    if c <= 0:
        raise ValueError("c must be > 0")
    if rate <= 0:
        raise ValueError("rate must be > 0")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be >= 0")
    x = np.log1p(c * -np.expm1(-rate * t_arr)) / c
    return float(x) if np.isscalar(t) or t_arr.ndim == 0 else x


def detector_transform(stats: JamStats, det: DetectorModel) -> JamStats:
    """Statistics of the detected count when each excitation is seen w.p. eta.

    Bernoulli thinning gives ``E[X_D] = eta E[X]`` and
    ``Var[X_D] = eta^2 Var[X] + eta (1 - eta) E[X]``, which collapse to the
    exact identity ``Q_D = eta Q``; the output Q is computed as that product.
    """
    eta = det.eta
    mean = eta * stats.mean
    variance = eta * eta * stats.variance + eta * (1.0 - eta) * stats.mean
    return JamStats(mean, variance, eta * stats.mandel_q)


def lattice_neighbor_count(radius_ratio: float) -> int:
    """Number of square-lattice points (i, j) with i^2 + j^2 <= radius_ratio^2.

    The count includes the origin; subtract one for the neighbor count of a
    lattice site.
    """
    if radius_ratio <= 0:
        raise ValueError("radius_ratio must be > 0")
    r2 = radius_ratio * radius_ratio
    count = 0
    for i in range(-int(math.floor(radius_ratio)), int(math.floor(radius_ratio)) + 1):
        rem = r2 - i * i
        if rem < 0:
            continue
        j = int(math.floor(math.sqrt(rem)))
        # guard against sqrt rounding at exact lattice radii
        while (j + 1) * (j + 1) <= rem:
            j += 1
        while j * j > rem:
            j -= 1
        count += 2 * j + 1
    return count


def neighbors_from_geometry(geom: BlockadeGeometry) -> float:
    """Mean neighbor count c implied by a physical blockade geometry.

    sphere: ``(4/3) pi rho r^3``; slab_cylinder: ``pi rho r^2 h``;
    square_lattice: lattice points within ``r``, excluding the site itself.
    """
    if geom.shape == "sphere":
        return (4.0 / 3.0) * math.pi * geom.density * geom.radius**3
    if geom.shape == "slab_cylinder":
        return math.pi * geom.density * geom.radius**2 * geom.thickness
    return float(lattice_neighbor_count(geom.radius / geom.spacing) - 1)


def volume_from_detected_mean(
    detected_mean: float, density: float, c: float, eta: float
) -> float:
    """Excitation volume inferred from a measured mean detected count.

    Inverts ``E[X_D] = eta rho V ln(1+c) / c`` for ``V``.
    """
    if detected_mean <= 0 or density <= 0 or c <= 0 or not 0 < eta <= 1:
        raise ValueError("detected_mean, density, c must be > 0 and 0 < eta <= 1")
    return c * detected_mean / (density * eta * math.log1p(c))
