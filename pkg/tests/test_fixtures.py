import pytest

from wtwist.coeff import param_points
from wtwist.fixtures import check_all, check_entry, entries, entry, index_pairs, lookup, variant


def test_table_shape():
    es = entries()
    assert len(es) == 25
    assert len({e["id"] for e in es}) == 25


@pytest.mark.parametrize("N", [1, 2, 3])
def test_all_entries_at_every_seed(N):
    for p in param_points(N):
        bad = [(r.eid, r.pair, r.witness) for r in check_all(p, 30) if not r.ok]
        assert not bad


def test_every_entry_is_exercised():
    seen = set()
    for N in (1, 2, 3):
        for e in entries():
            if index_pairs(e, N):
                seen.add(e["id"])
    assert seen == {e["id"] for e in entries()}


def test_lookup_relation(p2):
    assert lookup("A", 1, "A", 1, 2)["id"] == "AA/same"
    assert lookup("A", 2, "A", 2, 2)["id"] == "AA/same_N"
    assert lookup("A", 1, "A", 2, 2)["id"] == "AA/adjacent"


@pytest.mark.parametrize("eid", ["SS/same_N", "SA/same"])
def test_printed_variant_differs(eid, p3):
    # the oscillators disagree with the printed closed form of these two entries
    e = variant(entry(eid), True)
    assert not all(r.ok for r in check_entry(e, p3, order=6))
    assert all(r.ok for r in check_entry(entry(eid), p3, order=6))


def test_mutated_delta_power_is_caught(p2):
    e = dict(entry("AA/same"))
    e["delta"] = [[1, 0], [-1, -1]]
    assert not all(r.ok for r in check_entry(e, p2, order=6))
