from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wtwist.coeff import (DivisionByZero, InvalidParamPoint, ParamPoint, b_matrix, c_const, i_matrix, identity,
                          invert, kappa, matmul, param_points, parse_seed, q_int)
from conftest import param_point

X = Fraction(4, 9)   # u = 2/3
T = Fraction(1, 5)   # x^r


def qi(X_):
    return (X_ - 1 / X_) / (X - 1 / X)


def test_q_integers_by_hand(p1):
    assert q_int(3, p1) == qi(X ** 3) == Fraction(8113, 1296)
    assert q_int(3, p1, 1) == qi(T * X ** 3)
    assert q_int(Fraction(1, 2), p1) == qi(Fraction(2, 3))


def test_c_and_kappa_by_hand(p1):
    assert c_const(p1) == qi(T) * qi(T / X) * (X - 1 / X) == Fraction(-7656, 1625)
    assert kappa(p1) == qi(T / Fraction(2, 3)) / qi(Fraction(2, 3)) == Fraction(91, 25)


def test_b_matrix_rank_two(p2):
    d = (X ** 2 - X ** -2) / (X - 1 / X)   # [2m]/[m] at m = 1
    assert b_matrix(1, p2).entries == ((d, -1), (-1, d - 1))
    assert b_matrix(0, p2).entries == ((2, -1), (-1, 1))


def test_inverse_frozen(p2):
    assert i_matrix(1, p2) == ((Fraction(2196, 4621), Fraction(1296, 4621)),
                               (Fraction(1296, 4621), Fraction(3492, 4621)))


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_inverse_closed_form_all_small_modes(N):
    for p in param_points(N):
        for m in range(-10, 11):
            assert matmul(b_matrix(m, p).entries, i_matrix(m, p)) == identity(N)


@given(param_point(st.integers(1, 4)), st.integers(-12, 12))
def test_inverse_property(p, m):
    assert i_matrix(m, p) == invert(b_matrix(m, p).entries)


@given(param_point(st.integers(1, 4)), st.integers(1, 8))
def test_b_symmetric_and_even(p, m):
    B = b_matrix(m, p)
    assert B.entries == b_matrix(-m, p).entries
    assert all(B[i, j] == B[j, i] for i in range(1, p.N + 1) for j in range(1, p.N + 1))


@pytest.mark.parametrize("u,t", [(1, Fraction(1, 5)), (Fraction(2, 3), 0), (Fraction(1, 2), Fraction(1, 4))])
def test_invalid_points(u, t):
    with pytest.raises(InvalidParamPoint):
        ParamPoint(u, t, 1)


def test_invalid_rank():
    with pytest.raises(InvalidParamPoint):
        ParamPoint(Fraction(2, 3), Fraction(1, 5), 0)


def test_parse_seed():
    assert parse_seed("2/3,1/5") == (Fraction(2, 3), Fraction(1, 5))
    assert parse_seed("2/3:1/5") == (Fraction(2, 3), Fraction(1, 5))
    with pytest.raises(ValueError):
        parse_seed("2/3")


def test_fallback_replaces_bad_seed():
    pts = param_points(1, [(Fraction(1, 2), Fraction(1, 4)), (Fraction(2, 3), Fraction(1, 5))], count=2)
    assert len(pts) == 2 and pts[0].u == Fraction(2, 3)


def test_singular_inverse():
    with pytest.raises(DivisionByZero):
        invert(((1, 2), (2, 4)))
