from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wtwist import fock_oracle as fo
from wtwist.coeff import param_points
from wtwist.verify_quadratic import _merge, assemble_lhs, assemble_rhs, level_two_correction


@pytest.fixture(scope="module")
def oracle2(p2):
    return fo.Oracle(p2, 4)


def test_colored_partitions():
    assert fo.colored_partition_counts(1, 5) == [1, 1, 2, 3, 5, 7]
    assert fo.colored_partition_counts(2, 4) == [1, 2, 5, 10, 20]
    b = fo.FockBasis.build(2, 4)
    assert [b.count(d) for d in range(5)] == [1, 2, 5, 10, 20]


def test_window():
    b = fo.FockBasis.build(1, 4)
    assert len(b.window(2)) == 1 + 1 + 2


@pytest.mark.parametrize("k", [0, 1, 2])
def test_rank_one_suite(k):
    res = fo.run_fock_suite(param_points(1)[k], 4, 2)
    assert all(r.ok for r in res), [r for r in res if not r.ok]


def test_rank_two_suite(p2):
    res = fo.run_fock_suite(p2, 4, 2)
    assert all(r.ok for r in res), [r for r in res if not r.ok]


def test_flipped_f_coefficient_detected(oracle2, p2):
    lhs = assemble_lhs(1, 1, p2).classes
    r = fo.oracle_check_quadratic(oracle2, 1, 1, 1, 0, lhs, "flip", lambda l, c: -c if l == 1 else c)
    assert not r.ok


def test_level_two_oracle_agrees_with_engine(oracle2, p2):
    lhs = assemble_lhs(2, 2, p2).classes
    assert fo.oracle_quadratic_sweep(oracle2, 2, 2, lhs, "engine", 1).ok


def test_level_two_oracle_rejects_stated_relation(oracle2, p2):
    assert not fo.oracle_quadratic_sweep(oracle2, 2, 2, assemble_rhs(2, 2, p2), "stated", 1).ok


def test_level_two_oracle_accepts_corrected_relation(oracle2, p2):
    full = assemble_rhs(2, 2, p2)
    for k, cls in level_two_correction(p2).items():
        for fp, poly in cls.items():
            _merge(full, k[1], {fp: poly}, Fraction(1))
    assert fo.oracle_quadratic_sweep(oracle2, 2, 2, full, "corrected", 1).ok


def test_dump_format(oracle2):
    M = oracle2.t_mode(1, 1)
    lines = M.dump().splitlines()
    assert lines
    for line in lines:
        r, c, num, den = line.split()
        assert int(den) > 0 and int(r) >= 0 and int(c) >= 0
    assert fo.dump_basis(oracle2.basis).startswith("0 \n")


small = st.fractions(min_value=-3, max_value=3, max_denominator=5)


@given(st.lists(small, min_size=16, max_size=16), st.lists(small, min_size=16, max_size=16))
def test_matrix_algebra(a, b):
    basis = fo.FockBasis.build(1, 2)
    sts = basis.states
    n = len(sts)
    assert n == 4

    def mat(v):
        return fo.FockMatrix(basis, {s: {t: v[n * i + j] for j, t in enumerate(sts) if v[n * i + j]}
                                     for i, s in enumerate(sts)})

    A, B = mat(a), mat(b)
    I = fo.identity(basis)
    assert (A @ I).restricted(sts) == A.restricted(sts)
    assert ((A + B) @ A).restricted(sts) == ((A @ A) + (B @ A)).restricted(sts)
    assert (A - A).restricted(sts) == {}
