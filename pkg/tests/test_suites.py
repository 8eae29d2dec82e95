import pytest

from wtwist.coeff import param_points
from wtwist.suites import SUITES, SuiteOptions, catalog, negative_control, random_subsets
from wtwist.report import CheckResult


def controls(suite, N):
    return [c for c in catalog([suite], param_points(N)[:1], SuiteOptions()) if c.control]


@pytest.mark.parametrize("suite", SUITES)
def test_every_suite_has_a_detected_control(suite):
    cs = controls(suite, 2)
    assert cs
    for c in cs:
        r = c.fn()
        assert r.ok, r.witness


def test_fixture_control_rank_one():
    (c,) = controls("fixtures", 1)
    assert c.fn().ok


def test_negative_control_reports_undetected():
    r = negative_control("x", lambda: CheckResult("y", True))()
    assert not r.ok and r.kind == "ControlNotDetected"


def test_catalog_is_deterministic():
    pts = param_points(2)
    a = [(c.suite, c.identity) for c in catalog(["duality", "quadratic"], pts)]
    b = [(c.suite, c.identity) for c in catalog(["duality", "quadratic"], pts)]
    assert a == b and len(a) == len(set((s, i, k) for k, (s, i) in enumerate(a)))


def test_random_subsets_reproducible():
    assert random_subsets(3, 20, 0) == random_subsets(3, 20, 0)
    assert all(len(A) <= 3 for A in random_subsets(3, 20, 1, 3))


def test_unknown_suite():
    with pytest.raises(ValueError):
        catalog(["nope"], param_points(1))
