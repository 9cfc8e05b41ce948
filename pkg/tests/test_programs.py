import numpy as np
import pytest

from latentgraph.engine import run_layers
from latentgraph.graphs import build_graph
from latentgraph.programs import (DistanceTable, ScaleParams, bellman_ford_halt,
                                  bellman_ford_program, distance_state_halt,
                                  edge_length_readout, final_readout, inf_sentinel,
                                  landmark_matrix_from_state, landmark_matrix_program,
                                  stationary_halt, stationary_program)
from latentgraph.numerics import classical_mds
from latentgraph.synthetic import LandmarkSet, make_node_features

from helpers import lazy_walk_matrix, random_strongly_connected


def run_stationary(g, L, lazy=True):
    X = make_node_features(g, LandmarkSet(np.empty(0, dtype=np.int64)))
    return run_layers(g, X, stationary_program(L, lazy=lazy))


class TestStationaryProgram:
    def test_three_cycle_uniform(self):
        g = build_graph(3, [(0, 1), (1, 2), (2, 0)])
        for L in (1, 5, 40):
            H = run_stationary(g, L)
            assert np.array_equal(H[:, 2], np.ones(3))

    def test_undirected_path_degree_proportional(self):
        g = build_graph(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
        H = run_stationary(g, 60)
        assert np.abs(H[:, 2] - [0.75, 1.5, 0.75]).max() < 1e-9

    def test_matches_dense_matrix_power(self, rng):
        g = random_strongly_connected(24, seed=3)
        T = lazy_walk_matrix(g)
        x = np.ones(g.n)
        for L in (1, 2, 7):
            expect = np.linalg.matrix_power(T, L) @ x
            H = run_stationary(g, L)
            assert np.abs(H[:, 2] - expect).max() < 1e-12

    def test_plain_operator_behind_flag(self):
        g = random_strongly_connected(15, seed=4)
        R = np.zeros((g.n, g.n))
        for v in range(g.n):
            for u in g.in_neighbors(v):
                R[v, u] = 1.0 / g.out_degree[u]
        H = run_stationary(g, 3, lazy=False)
        expect = np.linalg.matrix_power(R, 3) @ np.ones(g.n)
        assert np.abs(H[:, 2] - expect).max() < 1e-12

    def test_mass_conserved_every_layer(self):
        g = random_strongly_connected(30, seed=5)
        X = make_node_features(g, LandmarkSet(np.empty(0, dtype=np.int64)))
        layers = stationary_program(25)
        H = X
        for i, layer in enumerate(layers):
            H = run_layers(g, H, [layer])
            assert abs(H[:, 2].sum() - g.n) < 1e-9 * g.n

    def test_dangling_node_raises(self):
        g = build_graph(2, [(0, 1)])  # node 1 has out-degree 0
        with pytest.raises(RuntimeError, match="dangling"):
            run_stationary(g, 2)

    def test_halt_stops_at_tolerance(self):
        g = random_strongly_connected(20, seed=6)
        X = make_node_features(g, LandmarkSet(np.empty(0, dtype=np.int64)))
        H, used = run_layers(g, X, stationary_program(500),
                             halt=stationary_halt(1e-10), return_info=True)
        assert used < 500


class TestEdgeLengthReadout:
    def test_direct_formula(self):
        value = edge_length_readout(16, 1000, 1.0, ScaleParams(kappa=1.0, dim=2))
        assert value == pytest.approx((16 / 1000) ** 0.25, abs=1e-15)
        assert value == pytest.approx(0.355656, abs=1e-6)

    def test_linear_in_kappa(self, rng):
        for _ in range(5):
            deg = float(rng.integers(1, 50))
            stat = float(rng.uniform(0.1, 5.0))
            one = edge_length_readout(deg, 777, stat, ScaleParams(kappa=1.0, dim=3))
            two = edge_length_readout(deg, 777, stat, ScaleParams(kappa=2.0, dim=3))
            assert two == pytest.approx(2.0 * one, rel=1e-15)

    def test_unit_case(self):
        assert edge_length_readout(1, 1, 1.0, ScaleParams(kappa=1.0, dim=1)) == 1.0

    def test_nonpositive_stationary(self):
        with pytest.raises(ValueError, match="not positive"):
            edge_length_readout(3, 10, 0.0, ScaleParams(kappa=1.0, dim=2))

    def test_vectorized(self):
        out = edge_length_readout(np.array([16.0, 16.0]), 1000, np.array([1.0, 1.0]),
                                  ScaleParams(kappa=1.0, dim=2))
        assert out.shape == (2,)


def run_bf(g, landmarks, lengths):
    X = make_node_features(g, landmarks)[:, 2:]
    m = landmarks.m
    H = run_layers(g, X, bellman_ford_program(m, g.n, lengths), halt=bellman_ford_halt(m))
    return H[:, m:]


class TestBellmanFordProgram:
    def test_single_path(self):
        g = build_graph(3, [(0, 1), (1, 2)])
        d = run_bf(g, LandmarkSet(np.array([0])), np.array([1.0, 2.0, 5.0]))
        assert np.array_equal(d[:, 0], [0.0, 1.0, 3.0])

    def test_self_distance_zero_only_at_landmark(self):
        g = random_strongly_connected(20, seed=7)
        landmarks = LandmarkSet(np.array([2, 9, 17]))
        d = run_bf(g, landmarks, np.full(20, 0.3))
        for i, u in enumerate(landmarks.ids):
            assert d[u, i] == 0.0
            others = np.delete(d[:, i], u)
            assert (others > 0).all()

    def test_min_of_parallel_routes(self):
        # two routes 0->1->3 (5) and 0->2->3 (4)
        g = build_graph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
        d = run_bf(g, LandmarkSet(np.array([0])), np.array([2.0, 3.0, 2.0, 1.0]))
        assert d[3, 0] == 4.0

    def test_unreachable_is_sentinel(self):
        g = build_graph(3, [(1, 0), (1, 2)])  # nothing reaches node 1
        lengths = np.array([1.0, 1.0, 1.0])
        d = run_bf(g, LandmarkSet(np.array([0])), lengths)
        inf = inf_sentinel(3, lengths)
        assert d[1, 0] == inf
        assert d[2, 0] == inf

    def test_monotone_nonincreasing_across_layers(self, rng):
        g = random_strongly_connected(25, seed=8)
        landmarks = LandmarkSet(np.array([0, 5]))
        lengths = rng.uniform(0.5, 2.0, 25)
        X = make_node_features(g, landmarks)[:, 2:]
        layers = bellman_ford_program(2, g.n, lengths)
        H = run_layers(g, X, [layers[0]])
        prev = H[:, 2:].copy()
        for layer in layers[1:6]:
            H = run_layers(g, H, [layer])
            cur = H[:, 2:]
            assert (cur <= prev + 1e-15).all()
            prev = cur.copy()

    def test_nonpositive_length_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            bellman_ford_program(1, 3, np.array([1.0, 0.0, 1.0]))


def run_landmark_matrix(g, landmarks, lengths):
    m = landmarks.m
    X = make_node_features(g, landmarks)[:, 2:]
    H = run_layers(g, X, bellman_ford_program(m, g.n, lengths), halt=bellman_ford_halt(m))
    inf = inf_sentinel(g.n, lengths)
    init, relay = landmark_matrix_program(m, inf)
    H2 = run_layers(g, H, [init] + [relay] * (g.n - 2), halt=distance_state_halt(2 * m))
    return H2, inf


class TestLandmarkMatrixProgram:
    def test_single_landmark(self):
        g = build_graph(3, [(0, 1), (1, 2), (2, 0)])
        H2, _ = run_landmark_matrix(g, LandmarkSet(np.array([1])), np.ones(3))
        D = landmark_matrix_from_state(H2, 1)
        assert np.array_equal(D, [[0.0]])

    def test_three_cycle_directed_asymmetry(self):
        # hand enumeration: d(0->1) = 1 (one arc), d(1->0) = 2 (through node 2)
        g = build_graph(3, [(0, 1), (1, 2), (2, 0)])
        H2, _ = run_landmark_matrix(g, LandmarkSet(np.array([0, 1])), np.ones(3))
        D = landmark_matrix_from_state(H2, 2)
        assert np.array_equal(D, [[0.0, 1.0], [2.0, 0.0]])

    def test_every_node_agrees_when_strongly_connected(self, rng):
        g = random_strongly_connected(18, seed=9)
        landmarks = LandmarkSet(np.array([1, 6, 11]))
        lengths = rng.uniform(0.5, 1.5, 18)
        H2, _ = run_landmark_matrix(g, landmarks, lengths)
        blocks = H2[:, 2 * 3:].reshape(18, 3, 3)
        assert np.array_equal(blocks, np.broadcast_to(blocks[0], blocks.shape))

    def test_disconnected_cross_entries_are_sentinel(self):
        g = build_graph(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
        lengths = np.ones(4)
        H2, inf = run_landmark_matrix(g, LandmarkSet(np.array([0, 2])), lengths)
        D = landmark_matrix_from_state(H2, 2)
        assert D[0, 1] == inf and D[1, 0] == inf
        assert D[0, 0] == 0.0 and D[1, 1] == 0.0


class TestDistanceTable:
    def test_triangle_inequality_when_strongly_connected(self, rng):
        g = random_strongly_connected(30, seed=10)
        landmarks = LandmarkSet(np.array([0, 9, 20]))
        lengths = rng.uniform(0.2, 1.0, 30)
        H2, inf = run_landmark_matrix(g, landmarks, lengths)
        per_node = H2[:, 3:6]
        D = landmark_matrix_from_state(H2, 3)
        table = DistanceTable(per_node=per_node, landmark_matrix=D, inf_value=inf)
        # d(u_i -> v) <= d(u_i -> u_j) + d(u_j -> v)
        for i in range(3):
            for j in range(3):
                assert (per_node[:, i] <= D[i, j] + per_node[:, j] + 1e-9).all()
        assert table.inf_count() == 0

    def test_negative_entries_rejected(self):
        with pytest.raises(ValueError):
            DistanceTable(per_node=np.array([[-1.0]]), landmark_matrix=np.zeros((1, 1)),
                          inf_value=10.0)

    def test_nonzero_diagonal_rejected(self):
        with pytest.raises(ValueError):
            DistanceTable(per_node=np.zeros((2, 1)), landmark_matrix=np.array([[1.0]]),
                          inf_value=10.0)


class TestFinalReadout:
    def setup_method(self):
        rng = np.random.default_rng(11)
        pts = rng.standard_normal((5, 2))
        diff = pts[:, None, :] - pts[None, :, :]
        self.D = np.sqrt((diff ** 2).sum(-1))

    def test_landmark_gets_own_row(self):
        coords = classical_mds(self.D, 2)
        out = final_readout(self.D, np.zeros(5), is_landmark=3, dim=2)
        assert np.array_equal(out, coords[3])

    def test_non_landmark_gets_argmin_row(self):
        coords = classical_mds(self.D, 2)
        out = final_readout(self.D, np.array([2.0, 1.0, 5.0, 4.0, 9.0]),
                            is_landmark=None, dim=2)
        assert np.array_equal(out, coords[1])

    def test_tie_goes_to_lowest_index(self):
        coords = classical_mds(self.D, 2)
        out = final_readout(self.D, np.array([1.0, 1.0, 5.0, 4.0, 9.0]),
                            is_landmark=None, dim=2)
        assert np.array_equal(out, coords[0])

    def test_unreachable_node_raises(self):
        with pytest.raises(RuntimeError, match="unreachable"):
            final_readout(self.D, np.full(5, 100.0), is_landmark=None, dim=2,
                          inf_value=100.0)

    def test_dim_bound(self):
        with pytest.raises(ValueError):
            final_readout(self.D, np.zeros(5), is_landmark=None, dim=5)
