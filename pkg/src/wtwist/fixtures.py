"""Golden two-point-function tables and their reproduction from the oscillators."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterator

from .coeff import ParamPoint
from .heisenberg import build_A, build_S, build_Y, contraction
from .qproducts import QProduct
from .series import PowerSeries, RExp, RationalFn, delta_product, f_series, key, pochhammer_series

BUILDERS = {"A": build_A, "S": build_S, "Y": build_Y}
S_NOME = (2, Fraction(0))  # x^(2r)


@lru_cache(maxsize=None)
def load_table() -> dict:
    text = resources.files("wtwist").joinpath("data/contractions.json").read_text()
    return json.loads(text)


def entries() -> list[dict]:
    return load_table()["entries"]


def entry(eid: str) -> dict:
    for e in entries():
        if e["id"] == eid:
            return e
    raise KeyError(eid)


def variant(e: dict, printed: bool) -> dict:
    if not printed:
        return e
    if "printed" not in e:
        raise KeyError(f"{e['id']} has no printed variant")
    out = dict(e)
    out.update(e["printed"])
    return out


def index_pairs(e: dict, N: int) -> list[tuple[int, int]]:
    rel = e["relation"]
    rng = range(1, N + 1)
    if rel == "same":
        return [(i, i) for i in rng if i < N]
    if rel == "same_N":
        return [(N, N)]
    if rel == "adjacent":
        return [(i, j) for i in rng for j in rng if abs(i - j) == 1]
    if rel == "far":
        return [(i, j) for i in rng for j in rng if abs(i - j) >= 2]
    # Y tables: the Y operator always carries index 1
    if rel == "first":
        return [(1, 1)]
    if rel == "other":
        if e["left"] == "Y":
            return [(1, j) for j in rng if j >= 2]
        return [(i, 1) for i in rng if i >= 2]
    raise ValueError(rel)


def relation_of(left: str, i: int, right: str, j: int, N: int) -> str:
    if "Y" in (left, right):
        other = j if left == "Y" else i
        return "first" if other == 1 else "other"
    if i == j:
        return "same_N" if i == N else "same"
    return "adjacent" if abs(i - j) == 1 else "far"


def lookup(left: str, i: int, right: str, j: int, N: int, printed: bool = False) -> dict:
    rel = relation_of(left, i, right, j, N)
    e = entry(f"{left}{right}/{rel}")
    return variant(e, printed) if printed and "printed" in e else e


def prefactor_exp(e: dict) -> RExp:
    a, b = e.get("prefactor", [0, 0])
    return RExp(a, b)


def zpow_exp(e: dict) -> RExp:
    c, d = e.get("zpow", [0, 0])
    return RExp(0, c, d)


def rational_part(e: dict) -> RationalFn:
    """Finite part of the closed form (rational and Delta factors, no prefactor)."""
    R = RationalFn.make(1, 0, {key(a, b): n for a, b, n in e.get("rational", [])})
    for s, n in e.get("delta", []):
        R = R * delta_product([s]) ** n
    return R


def is_rational(e: dict) -> bool:
    return not e.get("poch") and not e.get("f11")


def closed_form_series(e: dict, p: ParamPoint, order: int) -> PowerSeries:
    out = rational_part(e).expand_inside(p, order)
    pq = p.xr(*S_NOME)
    for a, b, n in e.get("poch", []):
        base = pochhammer_series(p.xr(a, b), pq, order, 1 if n > 0 else -1)
        for _ in range(abs(n)):
            out = out * base
    f = e.get("f11", 0)
    if f:
        out = out * f_series(1, 1, p, order).power(f)
    return out


def closed_form_qproduct(e: dict, p: ParamPoint) -> QProduct:
    """w-dependent part as a q-product over the nome x^(2r) (z power in wexp)."""
    if e.get("f11"):
        raise ValueError("f11 entries are not q-products over x^(2r)")
    q = QProduct.rational(S_NOME, rational_part(e))
    for a, b, n in e.get("poch", []):
        q = q * QProduct.poch(S_NOME, (a, b), 1, n)
    return q


@dataclass
class FixtureResult:
    eid: str
    pair: tuple[int, int]
    ok: bool
    witness: str = ""


def check_entry(e: dict, p: ParamPoint, pairs=None, order: int | None = None) -> Iterator[FixtureResult]:
    order = p.z_order if order is None else order
    for i, j in (index_pairs(e, p.N) if pairs is None else pairs):
        V = BUILDERS[e["left"]](i)
        W = BUILDERS[e["right"]](j)
        c = contraction(V, W, p, order)
        if c.xexp != prefactor_exp(e):
            yield FixtureResult(e["id"], (i, j), False, f"x prefactor {c.xexp} != {prefactor_exp(e)}")
            continue
        if c.zexp != zpow_exp(e):
            yield FixtureResult(e["id"], (i, j), False, f"z power {c.zexp} != {zpow_exp(e)}")
            continue
        got = c.series()
        want = closed_form_series(e, p, order)
        bad = next((n for n in range(order + 1) if got[n] != want[n]), None)
        if bad is not None:
            yield FixtureResult(e["id"], (i, j), False,
                                f"coefficient of w^{bad}: oscillators {got[bad]} vs table {want[bad]}")
        else:
            yield FixtureResult(e["id"], (i, j), True)


def check_all(p: ParamPoint, order: int | None = None, printed: bool = False) -> list[FixtureResult]:
    out = []
    for e in entries():
        out.extend(check_entry(variant(e, printed and "printed" in e), p, order=order))
    return out
