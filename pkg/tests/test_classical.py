from fractions import Fraction

import mpmath
import pytest

from wtwist import classical_limit as cl
from wtwist.coeff import ParamPoint

CFG = cl.LimitConfig()


def test_c_slope():
    assert cl.verify_c_slope(CFG).ok


@pytest.mark.parametrize("i,j", [(1, 1), (1, 2), (2, 2)])
def test_f_slopes_rank_two(i, j):
    assert cl.verify_beta_expansion(i, j, 2, 8, CFG).ok


def test_poisson_coefficient_by_hand():
    # C_{1,1} at N = 1, m = 1: [1]([1] - [0]) / ([2] - [1])
    q = mpmath.mpf(1) / 3

    def qi(n):
        return (q ** n - q ** -n) / (q - 1 / q)

    want = qi(1) * (qi(1) - qi(0)) / (qi(2) - qi(1))
    assert mpmath.almosteq(cl.poisson_C(1, 1, 1, 1, q), want, 1e-40)


@pytest.mark.parametrize("i,j", [(1, 1), (1, 2), (2, 2)])
def test_support_image(i, j):
    assert cl.verify_poisson_bracket_shape(i, j, 2, CFG).ok
    assert cl.support_image(i, j, 2) == {Fraction(s) for s in cl.poisson_support_set(i, j, 2)}


def test_second_order_residual_scales():
    r = cl.residual_ratio(1, 2, 2, 1, CFG)
    assert 3.5 < r < 4.5


def test_float_engine_matches_exact():
    p = ParamPoint(Fraction(2, 3), Fraction(1, 5), 2)
    assert cl.float_matches_exact(1, 2, p, 8).ok


def test_squared_convention_fails():
    alt = cl.LimitConfig(convention="x^2r")
    assert not cl.verify_c_slope(alt).ok
    assert not cl.verify_beta_expansion(1, 1, 2, 2, alt).ok
    assert cl.support_image(1, 1, 2, "x^2r") != cl.poisson_support_set(1, 1, 2)
