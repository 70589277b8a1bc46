import numpy as np
import pytest

from ricci_stiefel.portrait import (PLANAR_COLUMNS, SIGMA_COLUMNS, TRIANGLE_COLUMNS, chart,
                                    equilibrium_chart_point, planar_rows, projected_field,
                                    sigma_rows, triangle_rows)


def _col(rows, columns, name):
    k = columns.index(name)
    return np.array([r[k] for r in rows], dtype=float)


class TestTriangle:
    def test_on_simplex(self):
        rows = triangle_rows(4, 40)
        s = sum(_col(rows, TRIANGLE_COLUMNS, c) for c in ("x1", "x2", "x3"))
        assert np.max(np.abs(s - 1)) <= 1e-12

    def test_row_count(self):
        # interior lattice points of the simplex
        assert len(triangle_rows(3, 10)) == 36

    def test_projection_tangent(self):
        rows = triangle_rows(5, 20)
        v = sum(_col(rows, TRIANGLE_COLUMNS, c) for c in ("v1", "v2", "v3"))
        assert np.max(np.abs(v)) < 1e-12

    def test_centroid_n3_is_rest_point(self):
        rows = triangle_rows(3, 51)
        x1 = _col(rows, TRIANGLE_COLUMNS, "x1")
        x2 = _col(rows, TRIANGLE_COLUMNS, "x2")
        k = int(np.argmin(np.abs(x1 - 1 / 3) + np.abs(x2 - 1 / 3)))
        assert all(abs(rows[k][TRIANGLE_COLUMNS.index(c)]) < 1e-15 for c in ("v1", "v2", "v3"))

    def test_no_rest_point_at_centroid_n4(self):
        v = projected_field(4, (1 / 3, 1 / 3, 1 / 3))
        assert np.max(np.abs(v)) > 1e-3

    @pytest.mark.parametrize("n", [3, 4, 7])
    def test_evaluation_order(self, n):
        rng = np.random.default_rng(n)
        for _ in range(100):
            x = rng.uniform(0.05, 5.0, 3)
            a = projected_field(n, x)
            b = projected_field(n, x / x.sum())
            assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, np.max(np.abs(a)))

    def test_chart_vertices(self):
        assert chart((1, 0, 0)) == (0, 0)
        assert chart((0, 1, 0)) == (1, 0)
        assert chart((0, 0, 1)) == pytest.approx((0.5, np.sqrt(3) / 2))

    def test_flags(self):
        rows = triangle_rows(4, 30)
        inside = _col(rows, TRIANGLE_COLUMNS, "inside")
        assert 0 < inside.sum() < len(rows)
        for name in ("sgn_p1", "sgn_S", "sgn_r1"):
            assert set(_col(rows, TRIANGLE_COLUMNS, name)) <= {-1, 0, 1}

    def test_equilibrium_chart_point(self):
        assert sum(equilibrium_chart_point(4)) == pytest.approx(1.0)

    def test_grid_too_small(self):
        with pytest.raises(ValueError):
            triangle_rows(4, 2)


class TestPlanar:
    def test_shape(self):
        rows = planar_rows(4, 7)
        assert len(rows) == 49 and len(rows[0]) == len(PLANAR_COLUMNS)

    def test_volume_level(self):
        rows = planar_rows(5, 5)
        for x1, x2, x3, *_ in rows:
            assert x1 ** 3 * x2 ** 3 * x3 == pytest.approx(1.0, rel=1e-12)


class TestSigma:
    def test_common_point(self):
        rows = sigma_rows(4, 200, 1.0)
        g1 = {tuple(r[2:]) for r in rows if r[0] == "gamma1"}
        g2 = {tuple(r[2:]) for r in rows if r[0] == "gamma2"}
        common = g1 & g2
        assert len(common) == 1
        p = 0.25 ** 0.2
        assert next(iter(common)) == pytest.approx((p, p, 4 * p), rel=1e-14)

    def test_curves_present(self):
        names = {r[0] for r in sigma_rows(5, 10)}
        assert names == {"pi1", "pi2", "gamma1", "gamma2", "I1", "I2", "I3"}

    def test_on_level(self):
        for r in sigma_rows(6, 20, 2.0):
            x1, x2, x3 = r[2:]
            assert x1 ** 4 * x2 ** 4 * x3 == pytest.approx(2.0, rel=1e-12)
        assert len(SIGMA_COLUMNS) == 5
