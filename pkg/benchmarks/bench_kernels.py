#!/usr/bin/env python3
"""Benchmark: compiled kernels vs the pure-Python fallback.

Runs the three hot per-trial kernels on representative workloads and prints
trials/second for each backend plus the speedup.  Both backends consume
identical random streams, so the work is the same by construction.

Usage:
    python3 benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

import numpy as np

from rydjam._kernels import available_backends, get_backend
from rydjam._rng import DYNAMICS, REALIZATION, RngSpec


def time_trials(fn, trials):
    start = time.perf_counter()
    for trial in range(trials):
        fn(trial)
    return time.perf_counter() - start


def bench_recursion(impl, trials, n=800, p=0.00083):
    def one(trial):
        impl.recursion_jam(RngSpec(1, trial).bit_generator(DYNAMICS), n, p, True)

    return time_trials(one, trials)


def bench_er_graph(impl, trials, n=2000, c=5.0):
    p = c / n

    def one(trial):
        spec = RngSpec(2, trial)
        indptr, indices = impl.er_adjacency(spec.bit_generator(REALIZATION), n, p)
        impl.rsa_jam(spec.bit_generator(DYNAMICS), indptr, indices, False)

    return time_trials(one, trials)


def bench_spatial(impl, trials, n=800):
    box = np.array([400e-6, 400e-6])
    radius = 6.5e-6

    def one(trial):
        spec = RngSpec(3, trial)
        positions = spec.generator(REALIZATION).random((n, 2)) * box
        indptr, indices = impl.build_adjacency(positions, box, radius, True)
        impl.rsa_jam(spec.bit_generator(DYNAMICS), indptr, indices, False)

    return time_trials(one, trials)


BENCHES = [
    ("recursion jam (n=800, c=0.664)", bench_recursion, 2000),
    ("ER graph build + activation (n=2000, c=5)", bench_er_graph, 300),
    ("spatial sample + cells + activation (n=800)", bench_spatial, 300),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="quarter-size runs")
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    header = f"{'benchmark':<45} " + "".join(f"{b:>16}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, bench, trials in BENCHES:
        if args.quick:
            trials //= 4
        rates = []
        for backend in backends:
            elapsed = bench(get_backend(backend), trials)
            rates.append(trials / elapsed)
        row = f"{name:<45} " + "".join(f"{r:>12.0f}/s " for r in rates)
        if len(rates) == 2:
            row += f"{rates[0] / rates[1]:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
