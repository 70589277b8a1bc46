from fractions import Fraction as F

import pytest

from ricci_stiefel.exactpoly import (EndpointRootError, RationalPoly, Verdict, alpha_constants,
                                     count_roots, discriminant, discriminant_p, f_value,
                                     fg_values, g_squared, p_nu, resultant, sturm_chain,
                                     verify_positivity)


def P(*coeffs):
    return RationalPoly(coeffs)


class TestRationalPoly:
    def test_trailing_zeros(self):
        assert P(1, 2, 0, 0).degree == 1

    def test_divmod(self):
        a = P(-1, 0, 0, 1)
        b = P(-1, 1)
        q, r = a.divmod(b)
        assert q == P(1, 1, 1) and r.is_zero
        assert q * b + r == a

    def test_from_roots(self):
        p = RationalPoly.from_roots([F(1, 3), F(1, 2)])
        assert p(F(1, 3)) == 0 and p(F(1, 2)) == 0 and p.lc == 1

    def test_resultant_common_root(self):
        assert resultant(P(-1, 1), P(-1, 0, 1)) == 0

    def test_discriminant_quadratic(self):
        # b^2 - 4ac for x^2 + 3x + 1
        assert discriminant(P(1, 3, 1)) == 5


class TestSturm:
    def test_simple_chain(self):
        chain = sturm_chain(P(-1, 0, 1))
        assert [p.coeffs for p in chain] == [P(-1, 0, 1).coeffs, P(0, 2).coeffs, P(1).coeffs]

    def test_quartic_chain_degrees(self):
        chain = sturm_chain(p_nu(4))
        assert [p.degree for p in chain] == [4, 3, 2, 1, 0]
        assert chain.squarefree

    def test_repeated_root(self):
        chain = sturm_chain(RationalPoly.from_roots([1, 1]))
        assert not chain.squarefree
        assert len(chain) == 2

    def test_count(self):
        assert count_roots(sturm_chain(P(-1, 0, 1)), 0, 2) == 1
        p = RationalPoly.from_roots([F(1, 3), F(1, 2)])
        assert count_roots(sturm_chain(p), 0, 1) == 2

    def test_endpoint_root(self):
        with pytest.raises(EndpointRootError):
            count_roots(sturm_chain(P(-1, 0, 1)), 0, 1)

    def test_quartic_n4(self):
        chain = sturm_chain(p_nu(4))
        assert count_roots(chain, 0, 1) == 0
        assert chain.sign_changes(0) == chain.sign_changes(1)


class TestQuartic:
    def test_n4_coeffs(self):
        assert p_nu(4) == P(32, -172, 321, -172, 32)

    def test_n3(self):
        assert p_nu(3) == P(4, -16, 24, -16, 4)

    def test_p0(self):
        assert p_nu(5)(0) == 108

    def test_p1_n4(self):
        assert p_nu(4)(1) == 41 == alpha_constants(4)[4]

    @pytest.mark.parametrize("n", [4, 5, 11, 40])
    def test_is_f2_minus_g2(self, n):
        for nu in (F(1, 7 * n), F(1, 3 * n), F(1, 2 * n - 4)):
            assert f_value(n, nu) ** 2 - g_squared(n, nu) == p_nu(n)(nu)

    def test_fg_n4(self):
        assert fg_values(4, F(1, 4)) == pytest.approx((21 / 8, 5 / 8), rel=1e-15)
        assert F(21, 8) ** 2 - F(5, 8) ** 2 == F(13, 2) == p_nu(4)(F(1, 4))

    def test_fg_n5(self):
        f, g = fg_values(5, F(1, 6))
        assert f - g > 0

    def test_nu_domain(self):
        with pytest.raises(ValueError):
            f_value(4, F(1, 2))


class TestSturmEndpointValues:
    """Chain values at 0 and 1 against closed forms in n."""

    @pytest.mark.parametrize("n", [4, 5, 6, 10, 37])
    def test_at_zero(self, n):
        a1, a2, a3, a4, a5, _ = alpha_constants(n)
        chain = list(sturm_chain(p_nu(n)))
        assert chain[0](0) == 4 * (n - 2) ** 3
        assert chain[1](0) == -2 * (n - 2) * a1
        assert chain[2](0) == F((n - 1) * (5 * n - 9) * (n - 3) ** 2 * (5 * n * n - 18 * n + 17),
                                16 * (n - 2))
        assert chain[3](0) == 32 * (n - 1) * (n - 2) ** 2 * (n - 3) * (4 * n * n - 13 * n + 11) \
            * F(a1 * a2, a3 ** 2)
        assert chain[4](0) == F((n - 1) ** 6 * (n - 2) * (n - 3) ** 3, 16) * F(a3, a4) ** 2 * a5

    @pytest.mark.parametrize("n", [4, 5, 6, 10, 37])
    def test_at_one(self, n):
        _, _, a3, _, a5, a6 = alpha_constants(n)
        chain = list(sturm_chain(p_nu(n)))
        assert chain[0](1) == (n - 3) ** 3 * a5
        assert chain[1](1) == 2 * (n - 3) ** 3 * a5
        # the third member carries (n-3)^3, one power more than the (n-3)^2
        # one might expect by analogy with its value at 0
        assert chain[2](1) == -F((n - 1) * (n - 3) ** 3 * (5 * n * n - 18 * n + 17) * a5,
                                 16 * (n - 2) ** 2)
        assert chain[3](1) == -32 * (n - 1) * (n - 2) * (n - 3) ** 2 \
            * (4 * n * n - 13 * n + 11) * F(a5 * a6, a3 ** 2)

    @pytest.mark.parametrize("n", [4, 5, 100])
    def test_sign_pattern(self, n):
        chain = sturm_chain(p_nu(n))
        assert chain.signs(0) == (1, -1, 1, 1, 1)
        assert chain.signs(1) == (1, 1, -1, -1, 1)


class TestDiscriminant:
    def test_n3_zero(self):
        rep = discriminant_p(3)
        assert rep.closed_form == 0 and rep.resultant == 0 and rep.ratio is None

    def test_n4(self):
        rep = discriminant_p(4)
        assert rep.closed_form == 16 * 3 ** 10 * 23 ** 2 * 41
        assert rep.resultant > 0

    @pytest.mark.parametrize("n", [5, 10, 31])
    def test_ratio_constant(self, n):
        assert discriminant_p(n).ratio == discriminant_p(4).ratio


class TestVerifyPositivity:
    def test_n4(self):
        rep = verify_positivity(4)
        assert rep.verdict is Verdict.POSITIVE_ON_INTERVAL
        assert rep.roots_in_unit_interval == 0
        assert rep.sign_changes_at_0 == rep.sign_changes_at_1 == 2

    def test_n3(self):
        rep = verify_positivity(3)
        assert rep.verdict is Verdict.DEGENERATE
        assert not rep.discriminant_nonzero

    def test_n100(self):
        assert verify_positivity(100).verdict is Verdict.POSITIVE_ON_INTERVAL

    def test_n3_positive_on_interval(self):
        p = p_nu(3)
        assert all(p(F(k, 40)) > 0 for k in range(1, 21))
