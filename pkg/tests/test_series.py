from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wtwist.series import (DeltaSum, HigherOrderPole, PowerSeries, RationalFn, delta_at, delta_coeff,
                           delta_rational, expansion_difference, f_series, two_sided_difference)
from conftest import param_point

coeffs = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=1, max_size=8)


def naive_mul(a, b, order):
    return [sum(a[k] * b[n - k] for k in range(n + 1)) for n in range(order + 1)]


@given(coeffs, coeffs)
def test_mul_matches_naive_convolution(a, b):
    order = 7
    A, B = PowerSeries(a, 0, order), PowerSeries(b, 0, order)
    assert [(A * B)[n] for n in range(order + 1)] == naive_mul([A[n] for n in range(8)], [B[n] for n in range(8)],
                                                               order)


@given(coeffs)
def test_exp_log_roundtrip(a):
    S = PowerSeries([0] + a, 0, 8)
    assert S.exp().log() == S


@given(coeffs.filter(lambda c: c[0] != 0))
def test_inverse(a):
    S = PowerSeries(a, 0, 8)
    assert S * S.inverse() == PowerSeries.one(8)


def test_delta_scalar_by_hand(p1):
    x, xr = Fraction(4, 9), Fraction(1, 5)
    want = (1 - xr ** 2 / x) * (1 - x / xr ** 2) / ((1 - x) * (1 - 1 / x))
    assert delta_at(0, p1) == want == Fraction(8281, 625)


def test_delta_coeff():
    assert [delta_coeff(1, n) for n in (-2, 0, 3)] == [1, 1, 1]
    assert [delta_coeff(2, n) for n in (0, 1, 4)] == [1, 2, 5]


def test_delta_expansion_difference(p1):
    got = expansion_difference(delta_rational(p1), p1, allow_higher=False)
    want = DeltaSum()
    want.add((0, -1), 1, Fraction(-7656, 1625))
    want.add((0, 1), 1, Fraction(7656, 1625))
    assert got == want


def test_double_pole_rejected(p1):
    R = RationalFn.linear((0, 1), -2)
    with pytest.raises(HigherOrderPole):
        expansion_difference(R, p1, allow_higher=False)


@given(param_point(1))
def test_residue_and_coefficient_routes_agree(p):
    R = delta_rational(p) * delta_rational(p, 3)
    ds = expansion_difference(R, p)
    two = two_sided_difference(R, p, 6)
    assert {n: ds.coefficient(n, p) for n in range(-6, 7) if ds.coefficient(n, p)} == two


def test_f11_first_coefficient_by_hand(p1):
    # N = 1: -c (x - 1/x) / ([2] - [1])
    x = Fraction(4, 9)
    c = Fraction(-7656, 1625)
    assert f_series(1, 1, p1, 3)[1] == -c * (x - 1 / x) / (x + 1 / x - 1) == Fraction(-7656, 1525)


def test_f_frozen(p2):
    f = f_series(1, 2, p2, 2)
    assert [f[0], f[1], f[2]] == [1, Fraction(-275616, 115525), Fraction(1634871293801856, 19195343623407025)]


@given(param_point(st.integers(1, 3)), st.integers(1, 7), st.integers(1, 7))
def test_f_symmetric(p, i, j):
    assert f_series(i, j, p, 6) == f_series(j, i, p, 6)
