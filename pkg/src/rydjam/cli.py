"""Command-line interface.

Subcommands: ``analytics``, ``simulate graph``, ``simulate spatial``,
``summarize``, ``histogram``, ``fit`` and ``reproduce <case>``.  Options may
also be supplied through a JSON config file (``--config``); explicit flags
override file values and unknown keys are rejected.  Exit codes: 0 success,
1 runtime failure, 2 configuration error.  ``RYDJAM_SEED`` overrides the
built-in default seed.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import json
from pathlib import Path

import numpy as np
from scipy import stats as sps

from . import analytics, fitting, graphsim, spatial, stats
from . import io as rio

DEFAULT_SEED = 12345
_SUPPRESS = argparse.SUPPRESS


class ConfigError(Exception):
    pass


def _default_seed() -> int:
    env = os.environ.get("RYDJAM_SEED", "").strip()
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"RYDJAM_SEED: must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _merge(args: argparse.Namespace, defaults: dict) -> dict:
    """defaults < config file < explicit flags; unknown config keys rejected."""
    provided = {k: v for k, v in vars(args).items() if k not in ("func", "config")}
    merged = dict(defaults)
    config_path = getattr(args, "config", None)
    if config_path is not None:
        try:
            loaded = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"config: cannot read {config_path} ({exc})") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON in {config_path} ({exc})") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config: top level must be a JSON object")
        for key, value in loaded.items():
            if key not in defaults:
                raise ConfigError(f"config: unknown key '{key}'")
            merged[key] = value
    merged.update(provided)
    return merged


def _require(cfg: dict, key: str, constraint, message: str):
    value = cfg.get(key)
    if value is None or not constraint(value):
        raise ConfigError(f"{key}: {message} (got {value!r})")
    return value


def _positive(cfg, key):
    return _require(cfg, key, lambda v: v > 0, "must be > 0")


def _positive_int(cfg, key):
    return int(_require(cfg, key, lambda v: int(v) == v and v >= 1, "must be >= 1"))


def _seed_of(cfg) -> int:
    seed = cfg.get("seed")
    return _default_seed() if seed is None else int(seed)


def _parse_grid(text) -> np.ndarray:
    if isinstance(text, (list, tuple)):
        vals = [float(v) for v in text]
    else:
        vals = [float(tok) for tok in str(text).split(",") if tok.strip()]
    grid = np.asarray(vals)
    if grid.size == 0 or np.any(grid < 0) or np.any(np.diff(grid) < 0):
        raise ConfigError("t_grid: must be a non-empty ascending list of times >= 0")
    return grid


# ---------------------------------------------------------------- analytics

ANALYTICS_DEFAULTS = {
    "n": None, "c": None, "p": None, "rho_v": None, "eta": None,
    "shape": None, "density": None, "radius": None, "thickness": None,
    "spacing": None, "out": None,
}


def cmd_analytics(args):
    cfg = _merge(args, ANALYTICS_DEFAULTS)
    c = cfg.get("c")
    if c is None and cfg.get("shape") is not None:
        geom = analytics.BlockadeGeometry(
            shape=cfg["shape"], radius=_positive(cfg, "radius"),
            density=cfg.get("density"), thickness=cfg.get("thickness"),
            spacing=cfg.get("spacing"),
        )
        c = analytics.neighbors_from_geometry(geom)
    if c is None and cfg.get("p") is not None and cfg.get("n") is not None:
        c = float(cfg["p"]) * int(cfg["n"])
    if c is None:
        raise ConfigError("c: must be given (directly, via p and n, or via a geometry)")
    if c <= 0:
        raise ConfigError("c: must be > 0")

    report = {"c": c, "fStar": analytics.jam_fraction(c)}
    cond = uncond = None
    if cfg.get("n") is not None:
        cond = analytics.conditional_jam_stats(_positive_int(cfg, "n"), c)
        report.update(condMean=cond.mean, condVar=cond.variance, condQ=cond.mandel_q)
    if cfg.get("rho_v") is not None:
        uncond = analytics.unconditional_jam_stats(_positive(cfg, "rho_v"), c)
        report.update(
            uncondMean=uncond.mean, uncondVar=uncond.variance, uncondQ=uncond.mandel_q
        )
    if cfg.get("eta") is not None:
        base = uncond if uncond is not None else cond
        if base is None:
            raise ConfigError("eta: needs n or rho_v to transform")
        det = analytics.detector_transform(base, analytics.DetectorModel(cfg["eta"]))
        report.update(
            detectedMean=det.mean, detectedVar=det.variance, detectedQ=det.mandel_q
        )
    rio.write_report(report, cfg.get("out"))
    return 0


# ----------------------------------------------------------------- simulate

SIM_GRAPH_DEFAULTS = {
    "n": None, "c": None, "p": None, "rho_v": None, "method": None,
    "trials": 1000, "seed": None, "workers": 1, "out": None,
    "rate": None, "t_grid": None,
}


def cmd_simulate_graph(args):
    cfg = _merge(args, SIM_GRAPH_DEFAULTS)
    trials = _positive_int(cfg, "trials")
    workers = _positive_int(cfg, "workers")
    seed = _seed_of(cfg)
    method = cfg.get("method")
    if method is None:
        method = "unconditional" if cfg.get("rho_v") is not None else "recursion"
    if method not in ("recursion", "graph", "unconditional", "timed"):
        raise ConfigError(f"method: unknown method {method!r}")
    if cfg.get("rate") is not None and method in ("recursion", "graph"):
        method = "timed"

    params = None
    rho_v = c = None
    if method == "unconditional":
        rho_v = _positive(cfg, "rho_v")
        c = _positive(cfg, "c")
    else:
        n = _positive_int(cfg, "n")
        if cfg.get("c") is not None and cfg["c"] < 0:
            raise ConfigError("c: must be > 0")
        try:
            params = analytics.ModelParams(n=n, c=cfg.get("c"), p=cfg.get("p"))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    if method == "timed":
        rate = _positive(cfg, "rate")
        grid = _parse_grid(_require(cfg, "t_grid", lambda v: v, "required for timed runs"))
        n_realized, counts = graphsim.run_jamming_trials(
            params, trials, seed, method="timed", rate=rate, t_grid=grid,
            workers=workers,
        )
        _write_timed(cfg.get("out"), grid, counts)
    else:
        n_realized, x_inf = graphsim.run_jamming_trials(
            params, trials, seed, method=method, rho_v=rho_v, c=c, workers=workers
        )
        _write_samples(cfg.get("out"), n_realized, x_inf)
    return 0


SIM_SPATIAL_DEFAULTS = {
    "dimension": "slab", "length": None, "width": None, "height": None,
    "density": None, "radius": None, "boundary": "periodic",
    "population": "poisson", "fixed_n": None,
    "trials": 1000, "seed": None, "workers": 1, "out": None,
    "rate": None, "t_grid": None, "dump_points": None,
}


def cmd_simulate_spatial(args):
    cfg = _merge(args, SIM_SPATIAL_DEFAULTS)
    trials = _positive_int(cfg, "trials")
    workers = _positive_int(cfg, "workers")
    seed = _seed_of(cfg)
    try:
        config = spatial.SpatialConfig(
            dimension=cfg["dimension"],
            length=_positive(cfg, "length"),
            width=_positive(cfg, "width"),
            height=cfg.get("height"),
            density=_require(cfg, "density", lambda v: v >= 0, "must be >= 0"),
            radius=_positive(cfg, "radius"),
            boundary=cfg["boundary"],
            population=cfg["population"],
            fixed_n=cfg.get("fixed_n"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    collect = cfg.get("dump_points") is not None
    if cfg.get("rate") is not None:
        rate = _positive(cfg, "rate")
        grid = _parse_grid(_require(cfg, "t_grid", lambda v: v, "required for timed runs"))
        result = spatial.run_spatial_trials(
            config, trials, seed, workers=workers, rate=rate, t_grid=grid,
            collect_points=collect,
        )
        n_realized, counts = result[0], result[1]
        _write_timed(cfg.get("out"), grid, counts)
    else:
        result = spatial.run_spatial_trials(
            config, trials, seed, workers=workers, collect_points=collect
        )
        n_realized, x_inf = result[0], result[1]
        _write_samples(cfg.get("out"), n_realized, x_inf)
    if collect:
        rio.write_points_dump(cfg["dump_points"], result[2])
    return 0


def _write_samples(out, n_realized, x_inf):
    if out is None:
        sys.stdout.write("trial,n_realized,x_inf\n")
        for trial, (n_r, x) in enumerate(zip(n_realized, x_inf)):
            sys.stdout.write(f"{trial},{int(n_r)},{int(x)}\n")
    else:
        rio.write_jam_samples(out, n_realized, x_inf)


def _write_timed(out, grid, counts):
    if out is None:
        sys.stdout.write("trial,t_seconds,x_t\n")
        for trial, row in enumerate(np.atleast_2d(counts)):
            for t, x in zip(grid, row):
                sys.stdout.write(f"{trial},{rio.format_float(t)},{int(x)}\n")
    else:
        rio.write_timed_samples(out, grid, counts)


# ---------------------------------------------------------------- summarize

SUMMARIZE_DEFAULTS = {"input": None, "out": None}


def cmd_summarize(args):
    cfg = _merge(args, SUMMARIZE_DEFAULTS)
    path = _require(cfg, "input", lambda v: v, "input CSV path required")
    _, x_inf = rio.read_jam_samples(path)
    summary = stats.summarize(x_inf)
    rio.write_report(
        {
            "count": summary.count,
            "mean": summary.mean,
            "varianceUnbiased": summary.variance_unbiased,
            "mandelQ": summary.mandel_q,
            "seMean": summary.se_mean,
            "seQ": summary.se_q,
        },
        cfg.get("out"),
    )
    return 0


# ---------------------------------------------------------------- histogram

HISTOGRAM_DEFAULTS = {
    "input": None, "out": None, "bin_width": 1.0, "scale": None,
    "normal_mean": None, "normal_var": None, "poisson_mean": None,
}


def cmd_histogram(args):
    cfg = _merge(args, HISTOGRAM_DEFAULTS)
    path = _require(cfg, "input", lambda v: v, "input CSV path required")
    if cfg["bin_width"] <= 0:
        raise ConfigError("bin_width: must be > 0")
    _, x_inf = rio.read_jam_samples(path)
    hist = stats.make_histogram(x_inf, cfg["bin_width"], cfg.get("scale"))
    summary = stats.summarize(x_inf)
    normal_mean = cfg.get("normal_mean")
    normal_var = cfg.get("normal_var")
    if normal_mean is None:
        normal_mean = summary.mean
    if normal_var is None:
        normal_var = summary.variance_unbiased
    poisson_mean = cfg.get("poisson_mean")
    if poisson_mean is None:
        poisson_mean = summary.mean
    if normal_var <= 0 or poisson_mean <= 0:
        raise ConfigError("normal_var/poisson_mean: must be > 0")
    normal_vals = stats.overlay_curve(hist, sps.norm(normal_mean, math.sqrt(normal_var)))
    poisson_vals = stats.overlay_curve(hist, sps.poisson(poisson_mean))
    out = cfg.get("out")
    if out is None:
        rows = ["bin_left,bin_right,count,normal_overlay,poisson_overlay"]
        for i in range(len(hist.counts)):
            rows.append(
                f"{rio.format_float(hist.edges[i])},{rio.format_float(hist.edges[i + 1])},"
                f"{int(hist.counts[i])},{rio.format_float(normal_vals[i])},"
                f"{rio.format_float(poisson_vals[i])}"
            )
        sys.stdout.write("\n".join(rows) + "\n")
    else:
        rio.write_histogram_csv(out, hist, normal_vals, poisson_vals)
    return 0


# ---------------------------------------------------------------------- fit

FIT_DEFAULTS = {
    "input": None, "out": None, "free": "rate,c",
    "fix": None, "init": None,
}


def _parse_assignments(pairs, what):
    result = {}
    if not pairs:
        return result
    if isinstance(pairs, dict):
        return {str(k): float(v) for k, v in pairs.items()}
    for item in pairs:
        if "=" not in item:
            raise ConfigError(f"{what}: expected name=value, got {item!r}")
        name, _, value = item.partition("=")
        try:
            result[name.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"{what}: bad value in {item!r}") from exc
    return result


def cmd_fit(args):
    cfg = _merge(args, FIT_DEFAULTS)
    path = _require(cfg, "input", lambda v: v, "input CSV path required")
    series = rio.read_timeseries(path)
    free = tuple(tok.strip() for tok in str(cfg["free"]).split(",") if tok.strip())
    fixed = _parse_assignments(cfg.get("fix"), "fix")
    initial = _parse_assignments(cfg.get("init"), "init")
    try:
        spec = fitting.FitSpec(free=free, fixed=fixed, initial=initial)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    result = fitting.fit(series, spec)
    rio.write_report(
        {
            "lambdaHz": result.rate,
            "c": result.c,
            "A": result.amplitude,
            "sse": result.sse,
            "iterations": result.iterations,
            "converged": result.converged,
        },
        cfg.get("out"),
    )
    return 0


# ---------------------------------------------------------------- reproduce

REPRODUCE_DEFAULTS = {"trials": None, "seed": None, "workers": 1, "out_dir": None}

FIG2_CONFIG = dict(
    dimension="slab", length=400e-6, width=400e-6, height=1e-6,
    density=5e15, radius=6.5e-6, boundary="periodic",
    population="fixed", fixed_n=800,
)
DENSE_CLOUD_DENSITY = 5e17
DENSE_CLOUD_RADIUS = 5e-6
DENSE_CLOUD_ETA = 0.4
DENSE_CLOUD_DETECTED_MEAN = 11.0
DENSE_CLOUD_SCALE = 315.0
LATTICE_GAS_SPACING = 532e-9
LATTICE_GAS_RADIUS = 1.905e-6


def _out_dir(cfg, name) -> Path:
    path = Path(cfg.get("out_dir") or f"reproduce-{name}")
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_reproduce(args):
    cfg = _merge(args, dict(REPRODUCE_DEFAULTS, case=None))
    case = cfg["case"]
    handlers = {
        "fig2": _reproduce_fig2,
        "fig3": _reproduce_fig3,
        "fig4": _reproduce_fig4,
        "petrosyan": _reproduce_petrosyan,
    }
    if case not in handlers:
        raise ConfigError(f"case: must be one of {sorted(handlers)}")
    return handlers[case](cfg)


def _reproduce_fig2(cfg):
    """Spatial RSA vs random-graph prediction on the magneto-optical-trap
    benchmark geometry (400x400x1 um box, r = 6.5 um, n = 800)."""
    out = _out_dir(cfg, "fig2")
    trials = cfg.get("trials") or 10000
    seed = _seed_of(cfg)
    config = spatial.SpatialConfig(**FIG2_CONFIG)
    c = analytics.neighbors_from_geometry(
        analytics.BlockadeGeometry(
            "slab_cylinder", radius=config.radius, density=config.density,
            thickness=config.height,
        )
    )
    er = analytics.conditional_jam_stats(config.fixed_n, c)
    n_realized, x_inf = spatial.run_spatial_trials(
        config, trials, seed, workers=int(cfg.get("workers") or 1)
    )
    rio.write_jam_samples(out / "samples.csv", n_realized, x_inf)
    summary = stats.summarize(x_inf)
    hist = stats.make_histogram(x_inf, 1.0)
    normal_vals = stats.overlay_curve(hist, sps.norm(er.mean, math.sqrt(er.variance)))
    poisson_vals = stats.overlay_curve(hist, sps.poisson(er.mean))
    rio.write_histogram_csv(out / "histogram.csv", hist, normal_vals, poisson_vals)
    report = {
        "c": c,
        "trials": trials,
        "erMean": er.mean,
        "erVar": er.variance,
        "erQ": er.mandel_q,
        "spatialMean": summary.mean,
        "spatialVar": summary.variance_unbiased,
        "spatialQ": summary.mandel_q,
        "meanOverestimatePct": 100.0 * (er.mean / summary.mean - 1.0),
        "varOverestimatePct": 100.0 * (er.variance / summary.variance_unbiased - 1.0),
        "qDifference": er.mandel_q - summary.mandel_q,
    }
    rio.write_report(report, out / "report.json")
    rio.write_report(report)
    return 0


def _reproduce_fig3(cfg):
    """Fit the detected mean-excitation model to the bundled digitized
    time series (see data/README.md for provenance)."""
    out = _out_dir(cfg, "fig3")
    series = rio.read_timeseries(_data_path("viteau_fig1a_digitized.csv"))
    spec = fitting.FitSpec(free=("rate", "c", "amplitude"))
    result = fitting.fit(series, spec)
    curve_t = np.linspace(0.0, float(series.t[-1]), 200)
    curve_y = fitting.model_mean(curve_t, result.rate, result.c, result.amplitude)
    with open(out / "fit_curve.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t_seconds,model_mean\n")
        for t, y in zip(curve_t, curve_y):
            fh.write(f"{rio.format_float(t)},{rio.format_float(y)}\n")
    report = {
        "lambdaHz": result.rate,
        "c": result.c,
        "A": result.amplitude,
        "sse": result.sse,
        "iterations": result.iterations,
        "converged": result.converged,
        "saturationMean": result.amplitude * math.log1p(result.c) / result.c,
    }
    rio.write_report(report, out / "report.json")
    rio.write_report(report)
    return 0


def _reproduce_fig4(cfg):
    """Detected-count histogram in the dense-cloud regime: infer the
    excitation volume from the measured detected mean, simulate, thin, and
    overlay the predicted normal and Poisson curves (scale n_s = 315)."""
    out = _out_dir(cfg, "fig4")
    trials = cfg.get("trials") or 100000
    seed = _seed_of(cfg)
    c = analytics.neighbors_from_geometry(
        analytics.BlockadeGeometry("sphere", radius=DENSE_CLOUD_RADIUS, density=DENSE_CLOUD_DENSITY)
    )
    volume = analytics.volume_from_detected_mean(
        DENSE_CLOUD_DETECTED_MEAN, DENSE_CLOUD_DENSITY, c, DENSE_CLOUD_ETA
    )
    rho_v = DENSE_CLOUD_DENSITY * volume
    jam = analytics.unconditional_jam_stats(rho_v, c)
    detected = analytics.detector_transform(jam, analytics.DetectorModel(DENSE_CLOUD_ETA))
    n_realized, x_inf = graphsim.run_jamming_trials(
        None, trials, seed, method="unconditional", rho_v=rho_v, c=c,
        workers=int(cfg.get("workers") or 1),
    )
    thinned = stats.thin_detector(x_inf, DENSE_CLOUD_ETA, graphsim.RngSpec(seed + 1))
    rio.write_jam_samples(out / "samples.csv", n_realized, thinned)
    hist = stats.make_histogram(thinned, 1.0, DENSE_CLOUD_SCALE)
    normal_vals = stats.overlay_curve(
        hist, sps.norm(detected.mean, math.sqrt(detected.variance))
    )
    poisson_vals = stats.overlay_curve(hist, sps.poisson(detected.mean))
    rio.write_histogram_csv(out / "histogram.csv", hist, normal_vals, poisson_vals)
    summary = stats.summarize(thinned)
    report = {
        "c": c,
        "volumeM3": volume,
        "rhoV": rho_v,
        "eta": DENSE_CLOUD_ETA,
        "scale": DENSE_CLOUD_SCALE,
        "predictedDetectedMean": detected.mean,
        "predictedDetectedVar": detected.variance,
        "predictedDetectedQ": detected.mandel_q,
        "sampleDetectedMean": summary.mean,
        "sampleDetectedVar": summary.variance_unbiased,
        "sampleDetectedQ": summary.mandel_q,
        "trials": trials,
    }
    rio.write_report(report, out / "report.json")
    rio.write_report(report)
    return 0


def _reproduce_petrosyan(cfg):
    """Mandel Q for a square-lattice gas with hard-disk blockade (a = 532 nm,
    r = 1.905 um): 36 blocked neighbors per site."""
    out = _out_dir(cfg, "petrosyan")
    points = analytics.lattice_neighbor_count(LATTICE_GAS_RADIUS / LATTICE_GAS_SPACING)
    c = float(points - 1)
    cond = analytics.conditional_jam_stats(10**6, c)
    report = {
        "latticePointsWithinRadius": points,
        "c": c,
        "jamFraction": analytics.jam_fraction(c),
        "condQ": cond.mandel_q,
    }
    rio.write_report(report, out / "report.json")
    rio.write_report(report)
    return 0


def _data_path(name: str) -> Path:
    return Path(__file__).resolve().parent / "data" / name


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydjam",
        description="Jamming limits of blockaded excitation processes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(p, *names, **kwargs):
        kwargs.setdefault("default", _SUPPRESS)
        p.add_argument(*names, **kwargs)

    p = sub.add_parser("analytics", help="closed-form statistics as JSON")
    add(p, "--n", type=int)
    add(p, "--c", type=float)
    add(p, "--p", type=float)
    add(p, "--rho-v", dest="rho_v", type=float)
    add(p, "--eta", type=float)
    add(p, "--shape", choices=analytics.GEOMETRY_SHAPES)
    add(p, "--density", type=float)
    add(p, "--radius", type=float)
    add(p, "--thickness", type=float)
    add(p, "--spacing", type=float)
    add(p, "--out")
    add(p, "--config")
    p.set_defaults(func=cmd_analytics)

    sim = sub.add_parser("simulate", help="Monte Carlo trials, CSV output")
    sim_sub = sim.add_subparsers(dest="simulate_kind", required=True)

    p = sim_sub.add_parser("graph", help="random-graph jamming trials")
    add(p, "--n", type=int)
    add(p, "--c", type=float)
    add(p, "--p", type=float)
    add(p, "--rho-v", dest="rho_v", type=float)
    add(p, "--method", choices=("recursion", "graph", "unconditional", "timed"))
    add(p, "--trials", type=int)
    add(p, "--seed", type=int)
    add(p, "--workers", type=int)
    add(p, "--rate", type=float)
    add(p, "--t-grid", dest="t_grid")
    add(p, "--out")
    add(p, "--config")
    p.set_defaults(func=cmd_simulate_graph)

    p = sim_sub.add_parser("spatial", help="spatial RSA trials")
    add(p, "--dimension", choices=spatial.DIMENSIONS)
    add(p, "--length", type=float)
    add(p, "--width", type=float)
    add(p, "--height", type=float)
    add(p, "--density", type=float)
    add(p, "--radius", type=float)
    add(p, "--boundary", choices=spatial.BOUNDARIES)
    add(p, "--population", choices=("poisson", "fixed"))
    add(p, "--fixed-n", dest="fixed_n", type=int)
    add(p, "--trials", type=int)
    add(p, "--seed", type=int)
    add(p, "--workers", type=int)
    add(p, "--rate", type=float)
    add(p, "--t-grid", dest="t_grid")
    add(p, "--dump-points", dest="dump_points")
    add(p, "--out")
    add(p, "--config")
    p.set_defaults(func=cmd_simulate_spatial)

    p = sub.add_parser("summarize", help="sample moments and Mandel Q as JSON")
    add(p, "--input")
    add(p, "--out")
    add(p, "--config")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("histogram", help="histogram CSV with overlay curves")
    add(p, "--input")
    add(p, "--bin-width", dest="bin_width", type=float)
    add(p, "--scale", type=float)
    add(p, "--normal-mean", dest="normal_mean", type=float)
    add(p, "--normal-var", dest="normal_var", type=float)
    add(p, "--poisson-mean", dest="poisson_mean", type=float)
    add(p, "--out")
    add(p, "--config")
    p.set_defaults(func=cmd_histogram)

    p = sub.add_parser("fit", help="fit the detected mean-excitation model")
    add(p, "--input")
    add(p, "--free")
    add(p, "--fix", action="append")
    add(p, "--init", action="append")
    add(p, "--out")
    add(p, "--config")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("reproduce", help="bundled benchmark parameter sets")
    p.add_argument("case", choices=("fig2", "fig3", "fig4", "petrosyan"))
    add(p, "--trials", type=int)
    add(p, "--seed", type=int)
    add(p, "--workers", type=int)
    add(p, "--out-dir", dest="out_dir")
    add(p, "--config")
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"rydjam: config error: {exc}", file=sys.stderr)
        return 2
    except rio.DataFormatError as exc:
        print(f"rydjam: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"rydjam: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
