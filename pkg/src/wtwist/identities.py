"""Scalar identities of Delta and the structure functions f_{i,j}.

Everything here is exact: Delta identities go through the residue decomposition
and are also compared coefficientwise against the two expansions; f identities
are compared as truncated power series in z.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .coeff import ParamPoint, c_const
from .qproducts import QProduct
from .report import CheckResult
from .series import (DeltaSum, PowerSeries, RationalFn, delta_at, delta_product, delta_rational,
                     expansion_difference, f_series, key, key_add, two_sided_difference)


# ---------------------------------------------------------------------------
# Delta


def _delta_sum_series(ds: DeltaSum, p: ParamPoint, window: int) -> dict[int, Fraction]:
    return {n: v for n in range(-window, window + 1) if (v := ds.coefficient(n, p))}


def delta_difference_expected(s, p: ParamPoint) -> DeltaSum:
    """Delta(w)Delta(x^s w) inside minus outside, s not in {0, +-2}; s = None for Delta alone."""
    c = c_const(p)
    out = DeltaSum()
    if s is None:
        out.add((0, -1), 1, c)
        out.add((0, 1), 1, -c)
        return out
    a, b = delta_at(s + 1, p), delta_at(s - 1, p)
    out.add((0, -1), 1, c * a)
    out.add((0, s + 1), 1, -c * a)
    out.add((0, s - 1), 1, c * b)
    out.add((0, 1), 1, -c * b)
    return out


def verify_delta_difference(s, p: ParamPoint, window: int = 12) -> CheckResult:
    """Residue route and coefficient route against the closed two- or four-term form."""
    R = delta_rational(p) if s is None else delta_product([0, s])
    name = "Delta difference" if s is None else f"Delta product difference (s={s})"
    want = delta_difference_expected(s, p)
    got = expansion_difference(R, p, allow_higher=False)
    if got != want:
        return CheckResult(name, False, f"residues {got.terms} vs {want.terms}", "WeightMismatch")
    coeffs = two_sided_difference(R, p, window)
    if coeffs != _delta_sum_series(want, p, window):
        return CheckResult(name, False, "coefficientwise difference disagrees", "SeriesMismatch")
    return CheckResult(name, True, f"{len(want.terms)} delta terms, coefficients to |n| <= {window}")


# ---------------------------------------------------------------------------
# f fusion


@lru_cache(maxsize=4096)
def _f(i: int, j: int, p: ParamPoint, order: int, shift=0) -> PowerSeries:
    """f_{i,j}(x^shift z)."""
    if shift:
        return _f(i, j, p, order).subs_scale(p.xpow(shift))
    return f_series(i, j, p, order)


@lru_cache(maxsize=4096)
def _D(shift, p: ParamPoint, order: int) -> PowerSeries:
    """Delta(x^shift z)."""
    return delta_rational(p, shift).expand_inside(p, order)


def _prod(series: list, order: int) -> PowerSeries:
    out = PowerSeries.one(order)
    for s in series:
        out = out * s
    return out


def _series_check(name: str, lhs: PowerSeries, rhs: PowerSeries, order: int) -> CheckResult:
    for n in range(order + 1):
        if lhs[n] != rhs[n]:
            return CheckResult(name, False, f"first difference at z^{n}: {lhs[n]} vs {rhs[n]}", "SeriesMismatch")
    return CheckResult(name, True, f"order {order}")


def fusion_f_cases(N: int) -> list[tuple]:
    """(family, args) for every instance checked at rank N."""
    top = 2 * N + 1
    out: list[tuple] = []
    for i in range(1, top):
        for j in range(i, top):
            out.append(("product", i, j))
    for i in range(2, top + 1):
        out.append(("delta correction", i))
    for i in range(1, top + 1):
        out.append(("top level", i))
    for j in range(1, N + 1):
        for i in range(1, j + 1):
            out.append(("dual level", i, j))
    for j in range(1, top + 1):
        out.append(("period", j))
    for sg in (1, -1):
        for i in range(1, top):
            for j in range(1, top):
                out.append(("raise", i, j, sg))
        for i in range(1, top):
            for j in range(1, top - i + 1):
                out.append(("add", i, j, sg))
        for i in range(1, top):
            for j in range(1, top):
                for k in range(1 - j, i):
                    if k and i + j <= top:
                        out.append(("trade", i, j, k, sg))
    return out


def verify_fusion_f(case: tuple, p: ParamPoint, order: int = 30) -> CheckResult:
    kind, *a = case
    o = order
    N = p.N
    if kind == "product":
        # f_{i,j}(z) = prod_k f_{1,j}(x^(-i-1+2k) z), i <= j
        i, j = a
        lhs = _f(i, j, p, o)
        rhs = _prod([_f(1, j, p, o, -i - 1 + 2 * k) for k in range(1, i + 1)], o)
        name = f"f product over levels (i={i},j={j})"
    elif kind == "delta correction":
        i, = a
        lhs = _f(1, i, p, o) * _prod([_D(-i + 2 * k, p, o) for k in range(1, i)], o)
        rhs = _prod([_f(1, 1, p, o, -i - 1 + 2 * k) for k in range(1, i + 1)], o)
        name = f"f Delta correction (i={i})"
    elif kind == "top level":
        i, = a
        lhs = _f(i, 2 * N + 1, p, o)
        rhs = _prod([_D(-i - 1 + 2 * k, p, o) for k in range(1, i + 1)], o)
        name = f"f at the top level (i={i})"
    elif kind == "dual level":
        i, j = a
        lhs = _f(i, j, p, o)
        rhs = _f(i, 2 * N + 1 - j, p, o)
        name = f"f dual level (i={i},j={j})"
    elif kind == "period":
        j, = a
        lhs = _f(1, j, p, o) * _f(1, j, p, o, 2 * N + 1)
        rhs = _D(j, p, o) * _D(2 * N + 1 - j, p, o)
        name = f"f period product (j={j})"
    elif kind == "raise":
        i, j, sg = a
        lhs = _f(1, i, p, o) * _f(j, i, p, o, sg * (j + 1))
        rhs = _f(j + 1, i, p, o, sg * j)
        if i <= j:
            rhs = rhs * _D(sg * i, p, o)
        name = f"f level raise (i={i},j={j},{'+' if sg > 0 else '-'})"
    elif kind == "add":
        i, j, sg = a
        lhs = _f(1, i, p, o) * _f(1, j, p, o, sg * (i + j))
        rhs = _f(1, i + j, p, o, sg * j) * _D(sg * i, p, o)
        name = f"f level sum (i={i},j={j},{'+' if sg > 0 else '-'})"
    elif kind == "trade":
        i, j, k, sg = a
        lhs = _f(1, i, p, o) * _f(1, j, p, o, sg * (i - j - 2 * k))
        rhs = _f(1, i - k, p, o, -sg * k) * _f(1, j + k, p, o, sg * (i - j - k))
        name = f"f level trade (i={i},j={j},k={k},{'+' if sg > 0 else '-'})"
    else:
        raise ValueError(kind)
    return _series_check(name, lhs, rhs, o)


# ---------------------------------------------------------------------------
# theta ratio of f_{1,1}


def f11_qproduct(N: int) -> QProduct:
    """f_{1,1} as a product of (x^k w; x^(4N+2))_inf powers."""
    per = (0, 4 * N + 2)
    A = [((2, -1), 1), ((0, -1), -1), ((0, 1), -1), ((-2, 1), 1)]
    Y = [((0, 1), 1), ((0, 2 * N), 1), ((0, 2 * N + 2), -1), ((0, 4 * N + 1), -1)]
    powers: dict = {}
    for ka, ea in A:
        for ky, ey in Y:
            k = key_add(key(*ka), key(*ky))
            powers[k] = powers.get(k, 0) + ea * ey
    out = QProduct.unit(per)
    for k, e in sorted(powers.items()):
        if e:
            out = out * QProduct.poch(per, k, 1, e)
    return out


def theta_ratio_rhs(N: int) -> QProduct:
    per = (0, 4 * N + 2)
    args = [(0, 2), (0, 2 * N - 1), (-2, 4 * N + 2), (2, 4 * N), (2, 2 * N + 1), (-2, 2 * N + 3)]
    out = QProduct.rational(per, RationalFn.make(-1, 1))
    for a in args:
        out = out * QProduct.theta(per, a, 1) / QProduct.theta(per, a, -1)
    return out


def verify_f11_theta_ratio(p: ParamPoint, order: int = 20) -> list[CheckResult]:
    """Product form of f_{1,1} against its series, then f_{1,1}(1/z)/f_{1,1}(z) as a theta quotient."""
    F = f11_qproduct(p.N)
    ser = _series_check("f11 infinite product form", F.side_series(p, 1, order), f_series(1, 1, p, order), order)
    diff = (F.reflect(p) / F).difference(theta_ratio_rhs(p.N), p)
    sym = CheckResult("f11 theta ratio", not diff, "; ".join(diff) or "exact after normalization",
                      "" if not diff else "WeightMismatch")
    return [ser, sym]


def verify_f_symmetry(i: int, j: int, p: ParamPoint, order: int = 30) -> CheckResult:
    return _series_check(f"f symmetry (i={i},j={j})", _f(i, j, p, order), _f(j, i, p, order), order)


def verify_f_log_term(p: ParamPoint) -> CheckResult:
    """w^1 coefficient of f_{1,1} from the m = 1 exponent term alone."""
    x, t, N = p.x, p.t, p.N

    def br(X):
        return (X - 1 / X) / (x - 1 / x)

    want = -br(t / x) * br(t) * (x - 1 / x) ** 2 * br(x) * (br(x ** N) - br(x ** (N - 1))) \
        / (br(x) * (br(x ** (N + 1)) - br(x ** N)))
    got = f_series(1, 1, p, 2)[1]
    return CheckResult("f11 first coefficient", got == want, f"{got} vs {want}")
