import pytest
from hypothesis import given
from hypothesis import strategies as st

from wtwist import screening as sc
from wtwist.coeff import param_points
from wtwist.currents import labels
from conftest import param_point


@pytest.mark.parametrize("N", [1, 2, 3])
def test_commutator_decomposition(N):
    for p in param_points(N):
        for k in range(1, N + 1):
            assert all(r.ok for r in sc.verify_commutator_form(k, p))


@pytest.mark.parametrize("N", [1, 2, 3])
def test_two_point_closed_forms(N):
    p = param_points(N)[0]
    for k in range(1, N + 1):
        for a in labels(N):
            assert sc.verify_lambda_s_closed_form(a, k, p).ok


def test_exchange_weights_frozen(p2):
    # Lambda_1 S_1 carries a single delta at x^(-r+1) with weight x^(-2r+2) - 1
    (d,) = sc.lambda_s_delta_terms(1, 1, p2)
    assert d.support == (-1, 1)
    assert d.weight == p2.xr(-2, 2) - 1


def test_middle_label_pairs_with_top_screening(p2):
    terms = sc.lambda_s_delta_terms(0, 2, p2)
    assert len(terms) == 2 and terms[0].weight == -terms[1].weight


def test_scaled_weights_fail(p2):
    assert not sc.verify_lambda_s(1, 1, p2, 2).ok


@pytest.mark.parametrize("N", [1, 2, 3])
def test_recursion_reduction(N):
    for p in param_points(N):
        assert all(r.ok for r in sc.verify_recursion_reduction(p))


def test_certificate_smallest_k(p2):
    # k = 0 works unless m = 0, where the prefactor x^m - x^-m vanishes
    cert = sc.recursion_certificate(p2)
    assert len(cert) == 2 * 21
    assert all(k == (1 if m == 0 else 0) for (j, m), k in cert.items())


@pytest.mark.parametrize("N", [1, 2, 3])
def test_screening_exchange(N):
    p = param_points(N)[0]
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            r = sc.verify_screening_exchange(i, j, p)
            assert r.ok, r.witness


def test_printed_bracket_fails_same_index(p2):
    # [u] with x^(u^2/r - 2u) does not reproduce the same-index exchange
    assert not sc.verify_screening_exchange(1, 1, p2, u_coeff=2).ok


@given(param_point(st.integers(1, 2)))
def test_residue_vanishes_property(p):
    for k in range(1, p.N + 1):
        assert sc.verify_residue_vanishes(k, p).ok


@pytest.mark.parametrize("N", [1, 2, 3])
def test_integral_powers(N):
    p = param_points(N)[0]
    assert all(sc.s_power_integral(i, n, p) for i in range(1, N + 1) for n in range(-3, 4))
