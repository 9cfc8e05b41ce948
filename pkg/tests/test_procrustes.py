import numpy as np
import pytest

from latentgraph.procrustes import d_g, procrustes_align, scaled_procrustes

from helpers import grid_procrustes_oracle, random_orthogonal


class TestProcrustesAlign:
    def test_self_alignment_zero_residual(self, rng):
        X = rng.standard_normal((20, 3))
        res = procrustes_align(X, X)
        assert res.residual < 1e-14
        assert np.abs(res.rotation.T @ res.rotation - np.eye(3)).max() < 1e-10

    def test_rotated_square_recovered(self):
        X = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        rot90 = np.array([[0.0, 1.0], [-1.0, 0.0]])  # +90 degrees as row convention
        Y = X @ rot90
        res = procrustes_align(X, Y)
        assert res.residual <= 1e-12
        # the fitted map undoes the rotation
        assert np.allclose(res.rotation, rot90.T, atol=1e-9)

    def test_matches_grid_oracle(self, rng):
        X = rng.standard_normal((100, 2))
        Y = rng.standard_normal((100, 2))
        res = procrustes_align(X, Y)
        assert abs(res.residual - grid_procrustes_oracle(X, Y)) < 1e-6

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            procrustes_align(np.zeros((3, 2)), np.zeros((4, 2)))

    def test_worst_case_bound(self, rng):
        for _ in range(10):
            X = rng.standard_normal((15, 2))
            Y = rng.standard_normal((15, 2))
            Xc = X - X.mean(0)
            Yc = Y - Y.mean(0)
            bound = (np.sum(Xc ** 2) + np.sum(Yc ** 2)) / 15
            assert procrustes_align(X, Y).residual <= bound + 1e-12


class TestDg:
    def test_invariance_to_rigid_motion(self, rng):
        X = rng.standard_normal((25, 3))
        Q = random_orthogonal(3, rng)
        t = rng.standard_normal(3)
        assert d_g(X, X @ Q + t) <= 1e-10

    def test_collinear_case_value(self):
        # derived with the rotation-grid oracle: stretching a centered segment
        # of half-length 0.5 to half-length 1 leaves residual 2*(0.5)^2/2 = 0.25
        X = np.array([[0.0, 0.0], [1.0, 0.0]])
        Y = np.array([[0.0, 0.0], [2.0, 0.0]])
        val = d_g(X, Y)
        assert val == pytest.approx(0.25, abs=1e-12)
        assert abs(val - grid_procrustes_oracle(X, Y)) < 1e-6

    def test_zero_argument_gives_centered_variance(self, rng):
        X = rng.standard_normal((30, 2))
        Xc = X - X.mean(0)
        assert d_g(X, np.zeros_like(X)) == pytest.approx(np.sum(Xc ** 2) / 30, rel=1e-12)

    def test_symmetry(self, rng):
        for _ in range(5):
            X = rng.standard_normal((12, 2))
            Y = rng.standard_normal((12, 2))
            assert abs(d_g(X, Y) - d_g(Y, X)) < 1e-10

    def test_sqrt_triangle_inequality(self, rng):
        for _ in range(20):
            X, Y, Z = (rng.standard_normal((10, 2)) for _ in range(3))
            lhs = np.sqrt(d_g(X, Z))
            rhs = np.sqrt(d_g(X, Y)) + np.sqrt(d_g(Y, Z))
            assert lhs <= rhs + 1e-10


class TestScaledProcrustes:
    def test_recovers_scale_three(self, rng):
        X = rng.standard_normal((20, 2))
        res = scaled_procrustes(X, X / 3.0)
        assert res.scale == pytest.approx(3.0, rel=1e-12)
        assert res.residual <= 1e-12

    def test_rotated_and_halved(self, rng):
        X = rng.standard_normal((20, 2))
        Q = random_orthogonal(2, rng)
        res = scaled_procrustes(X, 0.5 * (X @ Q))
        assert res.scale == pytest.approx(2.0, rel=1e-10)

    def test_never_worse_than_unscaled(self, rng):
        for _ in range(10):
            X = rng.standard_normal((15, 3))
            Y = rng.standard_normal((15, 3))
            assert scaled_procrustes(X, Y).residual <= d_g(X, Y) + 1e-12

    def test_degenerate_reference(self):
        with pytest.raises(ValueError, match="degenerate"):
            scaled_procrustes(np.random.default_rng(0).standard_normal((5, 2)),
                              np.ones((5, 2)))
