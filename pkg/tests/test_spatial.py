"""Spatial RSA tests.

The brute-force distance oracle below is written independently of the
package's adjacency builder (plain double loop over pairs).
"""

import math

import numpy as np
import pytest

from rydjam import RngSpec
from rydjam import analytics as an
from rydjam import spatial as sp

FIG2 = dict(
    dimension="slab", length=400e-6, width=400e-6, height=1e-6,
    density=5e15, radius=6.5e-6, boundary="periodic",
    population="fixed", fixed_n=800,
)


def brute_neighbors(positions, box, radius, periodic):
    """Independent O(n^2) oracle: sets of neighbor pairs."""
    n = len(positions)
    pairs = set()
    for i in range(n):
        for j in range(i + 1, n):
            d2 = 0.0
            for a in range(positions.shape[1]):
                dx = abs(positions[i, a] - positions[j, a])
                if periodic:
                    dx = min(dx, box[a] - dx)
                d2 += dx * dx
            if d2 <= radius * radius:
                pairs.add((i, j))
    return pairs


def csr_pairs(adjacency):
    pairs = set()
    for i in range(len(adjacency)):
        for j in adjacency.indices[adjacency.indptr[i] : adjacency.indptr[i + 1]]:
            if i < j:
                pairs.add((i, int(j)))
    return pairs


def make_points(positions, box, boundary="periodic"):
    return sp.PointSet(np.asarray(positions, float), np.asarray(box, float), boundary)


class TestConfigValidation:
    def test_periodic_half_box_rule(self):
        with pytest.raises(ValueError, match="radius"):
            sp.SpatialConfig(
                dimension="2d", length=1e-5, width=1e-5, density=1.0,
                radius=6e-6, boundary="periodic",
            )

    def test_slab_requires_height(self):
        with pytest.raises(ValueError, match="height"):
            sp.SpatialConfig(
                dimension="slab", length=1e-4, width=1e-4, density=1.0, radius=1e-6
            )

    def test_fixed_requires_count(self):
        with pytest.raises(ValueError, match="fixed_n"):
            sp.SpatialConfig(
                dimension="2d", length=1.0, width=1.0, density=1.0,
                radius=0.1, population="fixed",
            )

    def test_mean_count_fig2(self):
        config = sp.SpatialConfig(**FIG2)
        assert config.mean_count == pytest.approx(800.0, rel=1e-12)


class TestSamplePoints:
    def test_fixed_count_inside_box(self):
        config = sp.SpatialConfig(**FIG2)
        points = sp.sample_points(config, RngSpec(1))
        assert len(points) == 800
        assert points.positions.shape == (800, 2)
        assert np.all(points.positions >= 0)
        assert np.all(points.positions < config.box)

    def test_poisson_population_moments(self):
        config = sp.SpatialConfig(**{**FIG2, "population": "poisson", "fixed_n": None})
        draws = np.array(
            [len(sp.sample_points(config, RngSpec(7, k))) for k in range(3000)]
        )
        se = draws.std(ddof=1) / math.sqrt(len(draws))
        assert abs(draws.mean() - 800.0) <= 4 * se
        # Poisson: variance equals the mean
        var = draws.var(ddof=1)
        se_var = var * math.sqrt(2.0 / len(draws))
        assert abs(var - 800.0) <= 4 * se_var

    def test_zero_density_empty(self):
        config = sp.SpatialConfig(
            dimension="2d", length=1.0, width=1.0, density=0.0, radius=0.1
        )
        assert len(sp.sample_points(config, RngSpec(3))) == 0


class TestNeighborGraph:
    def test_threshold_inclusive_window(self):
        r = 1.0
        points = make_points([[0.0, 0.0], [0.99 * r, 0.0]], [10.0, 10.0])
        adj = sp.neighbor_graph(points, r)
        assert csr_pairs(adj) == {(0, 1)}
        points = make_points([[0.0, 0.0], [1.01 * r, 0.0]], [10.0, 10.0])
        assert csr_pairs(sp.neighbor_graph(points, r)) == set()

    def test_periodic_wrap(self):
        # 1 um apart across the 400 um periodic seam
        points = make_points(
            [[0.5e-6, 10e-6], [399.5e-6, 10e-6]], [400e-6, 400e-6]
        )
        adj = sp.neighbor_graph(points, 6.5e-6)
        assert csr_pairs(adj) == {(0, 1)}

    def test_open_boundary_no_wrap(self):
        points = make_points(
            [[0.5e-6, 10e-6], [399.5e-6, 10e-6]], [400e-6, 400e-6], boundary="open"
        )
        assert csr_pairs(sp.neighbor_graph(points, 6.5e-6)) == set()

    def test_brute_force_oracle_random_instances(self):
        rng = np.random.Generator(np.random.PCG64(2024))
        for case in range(100):
            dim = 2 if case % 3 else 3
            n = int(rng.integers(2, 120 if dim == 3 else 300))
            box = np.array([4.0, 5.0, 3.0][:dim]) * (1.0 + rng.random(dim))
            periodic = bool(case % 2)
            radius = float(rng.uniform(0.05, 0.45)) * min(box[:2])
            positions = rng.random((n, dim)) * box
            points = sp.PointSet(positions, box, "periodic" if periodic else "open")
            adj = sp.neighbor_graph(points, radius)
            assert csr_pairs(adj) == brute_neighbors(positions, box, radius, periodic)
            # symmetry and sortedness of the CSR structure
            assert np.all(np.diff(adj.indptr) >= 0)
            for i in range(n):
                row = adj.indices[adj.indptr[i] : adj.indptr[i + 1]]
                assert np.all(np.diff(row) > 0)

    def test_periodic_half_box_rejected(self):
        points = make_points([[0.1, 0.1]], [1.0, 1.0])
        with pytest.raises(ValueError):
            sp.neighbor_graph(points, 0.6)


class TestSimulateRsa:
    def test_clique_single_excitation(self):
        positions = np.array([[0.1, 0.1], [0.12, 0.1], [0.1, 0.12], [0.11, 0.11]])
        points = make_points(positions, [1.0, 1.0])
        adj = sp.neighbor_graph(points, 0.1)
        out = sp.simulate_rsa(points, adj, RngSpec(5))
        assert out.x_inf == 1

    def test_isolated_points_all_excite(self):
        positions = np.array([[0.1, 0.1], [0.5, 0.5], [0.9, 0.9], [0.1, 0.9]])
        points = make_points(positions, [1.0, 1.0])
        adj = sp.neighbor_graph(points, 0.05)
        out = sp.simulate_rsa(points, adj, RngSpec(5))
        assert out.x_inf == 4

    @pytest.mark.parametrize("seed", range(5))
    def test_jammed_state_is_maximal_independent(self, seed):
        config = sp.SpatialConfig(
            dimension="2d", length=20.0, width=15.0, density=2.0,
            radius=1.0, boundary="periodic",
        )
        spec = RngSpec(88, seed)
        points = sp.sample_points(config, spec)
        adj = sp.neighbor_graph(points, config.radius)
        out, excited = sp.simulate_rsa(points, adj, spec, return_excited=True)
        assert excited.sum() == out.x_inf
        pairs = brute_neighbors(points.positions, points.box, config.radius, True)
        blocked_ok = np.zeros(len(points), dtype=bool)
        for i, j in pairs:
            assert not (excited[i] and excited[j])
            if excited[i]:
                blocked_ok[j] = True
            if excited[j]:
                blocked_ok[i] = True
        assert np.all(blocked_ok | excited)

    def test_translation_invariance(self):
        config = sp.SpatialConfig(**{**FIG2, "fixed_n": 300})
        spec = RngSpec(17, 0)
        points = sp.sample_points(config, spec)
        adj = sp.neighbor_graph(points, config.radius)
        shift = np.array([123.4e-6, 77.7e-6])
        shifted = sp.PointSet(
            (points.positions + shift) % points.box, points.box, points.boundary
        )
        adj_shifted = sp.neighbor_graph(shifted, config.radius)
        assert sorted(adj.degrees) == sorted(adj_shifted.degrees)
        out = sp.simulate_rsa(points, adj, spec)
        out_shifted = sp.simulate_rsa(shifted, adj_shifted, spec)
        assert out.x_inf == out_shifted.x_inf

    def test_geometry_consistency_mean_degree(self):
        config = sp.SpatialConfig(**{**FIG2, "population": "poisson", "fixed_n": None})
        c_geom = an.neighbors_from_geometry(
            an.BlockadeGeometry(
                "slab_cylinder", radius=config.radius, density=config.density,
                thickness=config.height,
            )
        )
        estimate = sp.mean_neighbor_estimate(config, trials=60, master_seed=40)
        assert estimate == pytest.approx(c_geom, rel=0.02)


class TestSimulateRsaTimed:
    def test_single_point_exponential(self):
        rate = 2.0
        box = np.array([1.0, 1.0])
        t1 = []
        for k in range(20_000):
            spec = RngSpec(640, k)
            points = make_points([[0.5, 0.5]], box)
            adj = sp.neighbor_graph(points, 0.1)
            traj = sp.simulate_rsa_timed(points, adj, rate, spec)
            t1.append(traj.times[1])
        t1 = np.array(t1)
        se = t1.std(ddof=1) / math.sqrt(len(t1))
        assert abs(t1.mean() - 1.0 / rate) <= 4 * se

    def test_grid_zero(self):
        config = sp.SpatialConfig(**{**FIG2, "fixed_n": 50})
        spec = RngSpec(3)
        points = sp.sample_points(config, spec)
        adj = sp.neighbor_graph(points, config.radius)
        traj = sp.simulate_rsa_timed(points, adj, 1.0, spec)
        assert traj.counts_at([0.0])[0] == 0

    def test_tracks_fluid_curve(self):
        config = sp.SpatialConfig(**FIG2)
        rate = 1.0
        grid = np.array([2.0, 4.0, 8.0])
        c = an.neighbors_from_geometry(
            an.BlockadeGeometry(
                "slab_cylinder", radius=config.radius, density=config.density,
                thickness=config.height,
            )
        )
        _, counts = sp.run_spatial_trials(
            config, 300, 4040, rate=rate, t_grid=grid
        )
        reference = an.mean_excitation_curve(c, rate, grid)
        empirical = counts.mean(axis=0) / 800.0
        # loose band: the spatial process is not the random-graph process
        assert np.all(np.abs(empirical / reference - 1.0) <= 0.05)


class TestRunSpatialTrials:
    def test_workers_identical(self):
        config = sp.SpatialConfig(**{**FIG2, "fixed_n": 100})
        a = sp.run_spatial_trials(config, 60, 5, workers=1)
        b = sp.run_spatial_trials(config, 60, 5, workers=6)
        assert np.array_equal(a[0], b[0])
        assert np.array_equal(a[1], b[1])

    def test_collect_points(self):
        config = sp.SpatialConfig(**{**FIG2, "fixed_n": 20})
        n_r, x, dumps = sp.run_spatial_trials(config, 3, 9, collect_points=True)
        assert len(dumps) == 3
        positions, excited = dumps[0]
        assert positions.shape == (20, 2)
        assert excited.sum() == x[0]
