"""Acceptance criteria 1-10, one PASS/FAIL line each (printed in the terminal summary)."""
import time

import pytest

from conftest import ACCEPTANCE_LINES
from wtwist import fock_oracle as fo
from wtwist import identities as idt
from wtwist.classical_limit import LimitConfig
from wtwist.coeff import b_matrix, i_matrix, identity, matmul, param_points
from wtwist.fixtures import check_all, entries
from wtwist.suites import SUITES, SuiteOptions, catalog, classical_checks, quadratic_pairs
from wtwist.verify_quadratic import (fusion_cases, verify_fusion_T, verify_rank_one_relation, verify_quadratic)


def flatten(out):
    return out if isinstance(out, list) else [out]


def run_checks(checks):
    res = []
    for c in checks:
        if not c.control:
            res += flatten(c.fn())
    return res


def record(n, title, ok, detail, seconds, budget=None):
    over = budget is not None and seconds > budget
    status = "PASS" if ok and not over else "FAIL"
    extra = f"; over the {budget:g} s budget" if over else ""
    ACCEPTANCE_LINES[n] = f"criterion {n:2d} {status}  {title}: {detail} ({seconds:.1f} s{extra})"
    print(ACCEPTANCE_LINES[n])
    return ok and not over


def failures(res):
    return [r for r in res if not r.ok]


def test_criterion_01_contraction_tables():
    t0 = time.perf_counter()
    res = []
    for p in param_points(3):
        res += check_all(p, 30)
    ids = {r.eid for r in res}
    bad = failures(res)
    ok = not bad and ids == {e["id"] for e in entries()}
    assert record(1, "contraction tables to order 30", ok,
                  f"{len(res) - len(bad)}/{len(res)} entry instances, {len(ids)} table entries, N=3, 3 points",
                  time.perf_counter() - t0, 10)


def test_criterion_02_matrix_inverse():
    pts = [p for N in (1, 2, 3, 4) for p in param_points(N)]
    t0 = time.perf_counter()
    bad = [(p.N, m) for p in pts for m in range(-10, 11)
           if matmul(b_matrix(m, p).entries, i_matrix(m, p)) != identity(p.N)]
    assert record(2, "B(m) I(m) = 1", not bad, f"N <= 4, |m| <= 10, 3 points, {len(bad)} failures",
                  time.perf_counter() - t0, 1)


def test_criterion_03_delta_and_f_identities():
    t0 = time.perf_counter()
    res = []
    scope = [(p, 30) for p in param_points(1)] + [(param_points(2)[0], 30)]
    for p, order in scope:
        res.append(idt.verify_delta_difference(None, p))
        res += [idt.verify_delta_difference(s, p) for s in range(-5, 6) if s not in (0, 2, -2)]
        res += [idt.verify_fusion_f(c, p, order) for c in idt.fusion_f_cases(p.N)]
        res += idt.verify_f11_theta_ratio(p, 20)
    bad = failures(res)
    assert record(3, "Delta expansion differences, f fusion families, f11 theta ratio", not bad,
                  f"{len(res) - len(bad)}/{len(res)} checks; N=1 at 3 points and N=2 at one point, order 30",
                  time.perf_counter() - t0, 30)


def test_criterion_04_duality():
    t0 = time.perf_counter()
    res = []
    for N in (1, 2, 3, 4):
        res += run_checks(catalog(["duality"], param_points(N), SuiteOptions(subset_samples=20)))
    bad = failures(res)
    assert record(4, "duality and subset identities", not bad,
                  f"{len(res) - len(bad)}/{len(res)} checks, N=1..4, 3 points, 20 random subsets per point",
                  time.perf_counter() - t0, 60)


@pytest.mark.xfail(strict=True, reason="the stated right hand side misses terms for i >= 2; see the decisions ledger")
def test_criterion_05_quadratic_relations():
    t0 = time.perf_counter()
    passed, failed = [], []
    for N in (1, 2, 3):
        for p in param_points(N):
            for i, j in quadratic_pairs(N):
                r = verify_quadratic(i, j, p)
                (passed if r.ok else failed).append((N, i, j, r.witness))
    rank_one = [verify_rank_one_relation(p) for p in param_points(1)]
    first = all(i == 1 for _, i, _, _ in passed) and not [f for f in failed if f[1] == 1]
    pairs = sorted({(N, i, j) for N, i, j, _ in failed})
    detail = (f"{len(passed)}/{len(passed) + len(failed)} pass; every (1,j) and the rank one relation pass"
              if first and all(r.ok for r in rank_one) else "unexpected failure at i = 1")
    detail += f"; fails at (N,i,j) in {pairs}: extra supports +-(2N-j+i+1-2l), l=1..i-1, missing on the right"
    ok = not failed and all(r.ok for r in rank_one)
    assert record(5, "quadratic relations", ok, detail, time.perf_counter() - t0, 600)


def test_criterion_06_T_fusion():
    t0 = time.perf_counter()
    res = [verify_fusion_T(*c, p) for N in (1, 2) for p in param_points(N) for c in fusion_cases(N)]
    bad = failures(res)
    assert record(6, "T-current fusion", not bad, f"{len(res) - len(bad)}/{len(res)} cases, N=1,2, 3 points",
                  time.perf_counter() - t0, 120)


def test_criterion_07_screening():
    t0 = time.perf_counter()
    res = []
    for N in (1, 2, 3):
        res += run_checks(catalog(["screening"], param_points(N)))
    bad = failures(res)
    assert record(7, "screening commutators, residues, recursion certificate, exchange", not bad,
                  f"{len(res) - len(bad)}/{len(res)} checks, N=1..3, 3 points", time.perf_counter() - t0, 120)


def test_criterion_08_fock_oracle():
    t0 = time.perf_counter()
    res = []
    for N in (1, 2):
        for p in param_points(N):
            res += fo.run_fock_suite(p, 4, 2)
    bad = failures(res)
    assert record(8, "Fock oracle cross-check", not bad,
                  f"{len(res) - len(bad)}/{len(res)} checks, N=1,2, D=4, |m1|,|m2| <= 2, 3 points",
                  time.perf_counter() - t0, 300)


def test_criterion_09_classical_limit():
    t0 = time.perf_counter()
    res = run_checks(classical_checks(SuiteOptions(classical_N=2, classical_m_max=8)))
    bad = failures(res)
    cfg = LimitConfig()
    assert record(9, "classical limit", not bad and cfg.prec >= 200 and cfg.tol <= 1e-6,
                  f"{len(res) - len(bad)}/{len(res)} checks, N=2, m <= 8, prec {cfg.prec} bits, tol {cfg.tol:g}",
                  time.perf_counter() - t0, 60)


def test_criterion_10_negative_controls():
    t0 = time.perf_counter()
    seen, res = set(), []
    for c in catalog(list(SUITES), param_points(2)[:1]):
        if c.control:
            seen.add(c.suite)
            res.append(c.fn())
    bad = failures(res)
    ok = not bad and seen == set(SUITES)
    assert record(10, "negative controls", ok,
                  f"{len(res) - len(bad)}/{len(res)} perturbations detected across {len(seen)} suites",
                  time.perf_counter() - t0)
