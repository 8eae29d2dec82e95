import pytest
from hypothesis import given
from hypothesis import strategies as st

from wtwist import identities as idt
from wtwist.coeff import param_points
from conftest import param_point


@pytest.mark.parametrize("s", [None, -5, -4, -3, -1, 1, 3, 4, 5])
def test_delta_differences(s, p2):
    assert idt.verify_delta_difference(s, p2).ok


@given(param_point(st.integers(1, 3)), st.sampled_from([None, -3, 1, 5]))
def test_delta_differences_property(p, s):
    assert idt.verify_delta_difference(s, p, window=6).ok


def test_delta_difference_weights(p1):
    ds = idt.delta_difference_expected(None, p1)
    assert sorted(ds.terms) == [((0, -1), 1), ((0, 1), 1)]


@pytest.mark.parametrize("N", [1, 2, 3])
def test_fusion_families(N):
    p = param_points(N)[0]
    order = 12 if N == 3 else 20
    bad = [r.identity for r in (idt.verify_fusion_f(c, p, order) for c in idt.fusion_f_cases(N)) if not r.ok]
    assert not bad


def test_family_counts():
    kinds = {}
    for c in idt.fusion_f_cases(2):
        kinds[c[0]] = kinds.get(c[0], 0) + 1
    assert kinds == {"product": 10, "delta correction": 4, "top level": 5, "dual level": 3, "period": 5,
                     "raise": 32, "add": 20, "trade": 40}


def test_dual_level_fails_below_diagonal(p1):
    # f_{i,j} = f_{i,2N+1-j} is only true for i <= j
    r = idt.verify_fusion_f(("dual level", 2, 1), p1, 6)
    assert not r.ok and "z^1" in r.witness


def test_product_needs_level_shifts(p2):
    # without the x^(-i-1+2k) shifts the product over levels is wrong
    lhs = idt._f(2, 2, p2, 6)
    assert lhs != idt._prod([idt._f(1, 2, p2, 6)] * 2, 6)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_f11_theta_ratio(N):
    assert all(r.ok for r in idt.verify_f11_theta_ratio(param_points(N)[0], 12))


@given(param_point(st.integers(1, 3)))
def test_f11_first_coefficient(p):
    assert idt.verify_f_log_term(p).ok


@given(param_point(st.integers(1, 2)), st.integers(1, 5), st.integers(1, 5))
def test_f_symmetry(p, i, j):
    assert idt.verify_f_symmetry(i, j, p, 8).ok
