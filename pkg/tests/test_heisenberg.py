from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from wtwist.coeff import b_matrix
from wtwist.heisenberg import build_A, build_S, contraction, fundamental_kernel, kernel
from conftest import param_point


def test_kernel_by_hand(p1):
    x, xr = Fraction(4, 9), Fraction(1, 5)

    def qi(X):
        return (X - 1 / X) / (x - 1 / x)

    want = qi(xr) * qi(xr / x) * b_matrix(1, p1)[1, 1] * (x - 1 / x) ** 2
    assert kernel(1, 1, 1, p1) == want == Fraction(19459, 1350)


@given(param_point(st.integers(1, 3)), st.integers(1, 6))
def test_kernel_symmetric(p, m):
    N = p.N
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            assert kernel(i, j, m, p) == kernel(j, i, m, p)


@given(param_point(st.integers(1, 3)), st.integers(1, 6))
def test_kernel_factorizes(p, m):
    assert kernel(1, 1, m, p) == fundamental_kernel(m, p) * b_matrix(m, p)[1, 1]


def test_aa_contraction_frozen(p1):
    c = contraction(build_A(1, p1), build_A(1, p1), p1, 3)
    assert c.xexp.is_zero and c.zexp.is_zero
    assert [c.series()[n] for n in range(4)] == [1, Fraction(19459, 1350), Fraction(15556609519, 43740000),
                                                 Fraction(12583690919934079, 1417176000000)]


def test_aa_first_coefficient_is_kernel(p2):
    c = contraction(build_A(1, p2), build_A(1, p2), p2, 2)
    assert c.series()[1] == kernel(1, 1, 1, p2) == Fraction(30943, 1350)


def test_screening_contraction_has_z_power(p1):
    c = contraction(build_S(1, p1), build_S(1, p1), p1, 2)
    assert not c.zexp.is_zero
