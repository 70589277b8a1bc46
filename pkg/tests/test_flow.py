from fractions import Fraction as F

import numpy as np
import pytest

from ricci_stiefel.flow import (Classification, char_poly_at_equilibrium, equilibrium_spectrum,
                                jacobian, planar_equilibrium_data, planar_field,
                                planar_sigma_closed, plane_coordinates, plane_rates,
                                reduced_flow_general, vector_field, vector_field_composed)
from ricci_stiefel.geometry import einstein_point


def _vec(f):
    return tuple(f)


class TestReducedFlowGeneral:
    def test_equal_curvatures(self):
        out = reduced_flow_general((1, 1, 1), (F(2), F(2), F(2)), (F(1), F(3), F(5)))
        assert out == [0, 0, 0]

    def test_direct(self):
        out = reduced_flow_general((1, 1, 1), (F(1), F(0), F(0)), (F(1), F(1), F(1)))
        assert out == [F(-4, 3), F(2, 3), F(2, 3)]


class TestVectorField:
    def test_n4_on_plane(self):
        assert _vec(vector_field(4, (F(2), F(1), F(1)))) == (F(-1, 2), F(0), F(1, 2))

    def test_n3_112(self):
        assert _vec(vector_field(3, (F(1), F(1), F(2)))) == (F(1, 3), F(1, 3), F(-4, 3))

    def test_equilibrium(self):
        assert _vec(vector_field(4, (F(1), F(1), F(4, 3)))) == (0, 0, 0)

    def test_degree_zero_example(self):
        x = (F(1), F(2), F(3))
        assert _vec(vector_field(5, x)) == _vec(vector_field(5, tuple(2 * v for v in x)))

    @pytest.mark.parametrize("u,v", [(F(1), F(1)), (F(2), F(5)), (F(7, 3), F(1, 4))])
    def test_n3_on_pi3(self, u, v):
        f = vector_field(3, (u, v, u + v))
        assert f.f1 == F(2, 3) * u / (u + v)
        assert f.f2 == F(2, 3) * v / (u + v)
        assert f.f1 + f.f2 - f.f3 == 2

    @pytest.mark.parametrize("u,v", [(F(1), F(1)), (F(3), F(1, 2))])
    def test_einstein_sign_of_cross_term(self, u, v):
        # the +2(n-2)[...] sign: zero at the Einstein point, flux 2/(n-2) on Pi_1
        n = 6
        kappa = F(2 * (n - 2), n - 1)
        assert _vec(vector_field(n, (F(1), F(1), kappa))) == (0, 0, 0)
        f = vector_field(n, (u + v, u, v))
        assert -f.f1 + f.f2 + f.f3 == F(2, n - 2)

    @pytest.mark.parametrize("n", [3, 4, 7, 12])
    def test_matches_composition_exactly(self, n):
        for x in [(F(1), F(2), F(3)), (F(7, 5), F(1, 9), F(2)), (F(3), F(3), F(1, 7))]:
            assert _vec(vector_field(n, x)) == _vec(vector_field_composed(n, x))


class TestJacobian:
    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_against_finite_differences(self, n):
        x = np.array([0.8, 1.3, 0.6])
        j = jacobian(n, x)
        h = 1e-6
        for k in range(3):
            e = np.zeros(3)
            e[k] = h
            fd = (vector_field(n, x + e).as_array() - vector_field(n, x - e).as_array()) / (2 * h)
            assert np.allclose(j[:, k], fd, rtol=1e-7, atol=1e-9)

    def test_exact_euler_identity(self):
        x = (F(2), F(3), F(5))
        j = jacobian(5, x)
        assert all(sum(j[i, k] * x[k] for k in range(3)) == 0 for i in range(3))


class TestEquilibrium:
    def test_n3(self):
        rep = equilibrium_spectrum(3, 1.0)
        assert sorted(rep.eigenvalues) == pytest.approx([-1.0, -1.0, 0.0])
        assert rep.classification is Classification.STABLE_NODE
        assert rep.Eu is None

    def test_n4(self):
        rep = equilibrium_spectrum(4, 1.0)
        assert rep.eigenvalues[0] == pytest.approx(0.25)
        assert rep.eigenvalues[1] == pytest.approx(-1.0)
        assert rep.classification is Classification.SADDLE
        es = np.array(rep.Es[0], dtype=float)
        assert np.allclose(es / es[0], [1, 1, -16 / 3])

    def test_n5_q2(self):
        rep = equilibrium_spectrum(5, 2.0)
        assert rep.eigenvalues[0] == pytest.approx(5 / 18, rel=1e-14)
        assert rep.eigenvalues[1] == pytest.approx(-0.5, rel=1e-14)
        _, _, x0 = einstein_point(5, 2.0 ** 7 * 1.5)
        num = np.sort(np.linalg.eigvals(jacobian(5, x0)).real)
        assert num == pytest.approx(sorted(rep.eigenvalues), abs=1e-12)

    @pytest.mark.parametrize("n", [3, 4, 5, 9])
    def test_eigenvectors(self, n):
        kappa, q, x0 = einstein_point(n, 1.0)
        rep = equilibrium_spectrum(n, q)
        j = jacobian(n, x0)
        pairs = [(rep.eigenvalues[1], v) for v in rep.Es] + [(0.0, rep.Ec)]
        if rep.Eu is not None:
            pairs.append((rep.eigenvalues[0], rep.Eu))
        for lam, v in pairs:
            v = np.array(v, dtype=float)
            assert np.allclose(j @ v, lam * v, atol=1e-12)

    def test_char_poly(self):
        assert char_poly_at_equilibrium(4, 1.0) == pytest.approx((0.75, -0.25, 0.0))
        assert char_poly_at_equilibrium(3, 1.0) == pytest.approx((2.0, 1.0, 0.0))


class TestPlanar:
    def test_n3_equilibrium(self):
        assert planar_field(3, 1.0, 1.0) == pytest.approx((0.0, 0.0), abs=1e-15)

    def test_n4_unit(self):
        assert planar_field(4, 1.0, 1.0) == pytest.approx((-0.05, -0.05), rel=1e-13)

    def test_n4_equilibrium(self):
        q0 = 0.75 ** 0.2
        assert max(abs(v) for v in planar_field(4, q0, q0)) < 1e-12

    def test_data_n3(self):
        rep = planar_equilibrium_data(3, 1.0)
        assert (rep.delta, rep.rho, rep.sigma) == pytest.approx((1.0, -2.0, 0.0), abs=1e-14)
        assert rep.classification is Classification.STABLE_NODE

    def test_data_n4(self):
        rep = planar_equilibrium_data(4, 1.0)
        assert (rep.delta, rep.rho, rep.sigma) == pytest.approx((-0.25, -0.75, 25 / 16))
        assert rep.classification is Classification.SADDLE
        assert planar_sigma_closed(4, 1.0) == pytest.approx(25 / 16)


class TestPlaneRates:
    @pytest.mark.parametrize("n", [3, 4, 8])
    def test_match_field(self, n):
        x = (0.9, 1.7, 0.4)
        f = vector_field(n, x).as_array()
        want = (-f[0] + f[1] + f[2], f[0] - f[1] + f[2], f[0] + f[1] - f[2])
        assert plane_rates(n, x) == pytest.approx(want, rel=1e-12)

    def test_coordinates(self):
        assert plane_coordinates((2, 1, 1)) == (0, 2, 2)
