from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wtwist.coeff import kappa, param_points
from wtwist.currents import (build_T, d_coeff, duality_constant, labels, sort_labels, verify_d_ratio,
                             verify_duality, verify_fusion_lambda, verify_product_collapse, verify_subset_duality)
from wtwist.series import delta_at
from conftest import param_point


def test_labels_order():
    assert labels(2) == [1, 2, 0, -2, -1]
    assert sort_labels([-1, 0, 2], 2) == (2, 0, -1)


def test_current_sizes(p2):
    # T_i has one monomial per i-subset of the 2N+1 labels
    assert [len(build_T(i, p2).terms) for i in range(6)] == [1, 5, 10, 10, 5, 1]


def test_d_coefficients(p2):
    assert d_coeff((1, 2), p2) == 1
    # (1, 1bar) at positions 1 and 3 of (1, 0, 1bar): Delta(x^(2(3-1+1-3)))
    assert d_coeff((1, 0, -1), p2) == delta_at(0, p2)


def test_duality_constants_frozen(p2):
    assert duality_constant(2, p2) == kappa(p2) == Fraction(91, 25)
    assert duality_constant(1, p2) == Fraction(-2502383, 296875)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_duality_all_levels(N):
    for p in param_points(N):
        for i in range(N + 1):
            assert verify_duality(i, p).ok


@pytest.mark.parametrize("N", [1, 2, 3])
def test_product_collapse_and_lambda_fusion(N):
    p = param_points(N)[0]
    assert verify_product_collapse(p).ok
    assert all(r.ok for r in verify_fusion_lambda(p))


def test_wrong_duality_constant_fails(p2):
    assert not verify_duality(1, p2, 2 * duality_constant(1, p2)).ok


@given(param_point(st.integers(1, 3)), st.data())
def test_subset_identities(p, data):
    labs = labels(p.N)
    A = data.draw(st.lists(st.sampled_from(labs), unique=True, max_size=len(labs)))
    assert verify_subset_duality(A, p).ok
    if len(A) <= p.N:
        assert verify_d_ratio(A, p).ok


def test_d_ratio_outside_its_range(p1):
    # the ratio identity is about subsets of size at most N
    assert not verify_d_ratio([1, 0], p1).ok
