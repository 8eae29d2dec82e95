"""Quadratic relations of the W-currents checked class by class through residues.

For monomials A of T_i and B of T_j the product f_{i,j}(w) <A(z1) B(z2)> is a
finite product of Delta factors g_AB(w).  The reversed ordering gives the same
rational function expanded at w = infinity, so the left hand side of a
quadratic relation is the inside-minus-outside expansion of sum d_A d_B g_AB,
one normal-ordered operator :A(z1) B(z2): at a time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .coeff import ParamPoint, c_const, kappa
from .currents import (WCurrent, build_T, collect, fingerprint,
                       label_name, monomial_operator, rank, shift_fingerprint, _phase)
from .heisenberg import contraction
from .report import CheckResult
from .series import (DeltaSum, RationalFn, delta_at, delta_product, expansion_difference, f_series, key,
                     laurent_at)

# ---------------------------------------------------------------------------
# pair factors


def pair_shifts(a: int, b: int, N: int) -> tuple[int, ...]:
    """Shifts s with f_{1,1}(w) <Lambda_a(z1) Lambda_b(z2)> = prod_s Delta(x^s w)."""
    if a == b:
        return (0,) if a == 0 else ()
    if a > 0 and b == -a:
        return (-1, -2 * N - 2 + 2 * a)
    if b > 0 and a == -b:
        return (1, 2 * N + 2 - 2 * b)
    return (-1,) if rank(a, N) < rank(b, N) else (1,)


def correction_shifts(i: int, j: int) -> list[int]:
    """f_{i,j}(w) prod_s Delta(x^s w) = prod over staircase pairs of f_{1,1}(x^(e'-e) w)."""
    lo, hi = min(i, j), max(i, j)
    return [2 * k + 2 * l - i - j - 1 for k in range(1, lo + 1) for l in range(1, hi)]


def g_shifts(A: Iterable, B: Iterable, i: int, j: int, N: int) -> dict[int, int]:
    """Delta shifts (with multiplicity) of g_AB for staircase entries A, B."""
    out: dict[int, int] = {}
    for a, e in A:
        for b, e2 in B:
            for s in pair_shifts(a, b, N):
                k = s + e2 - e
                out[k] = out.get(k, 0) + 1
    for s in correction_shifts(i, j):
        out[s] = out.get(s, 0) - 1
    return {k: v for k, v in out.items() if v}


def g_rational(A, B, i: int, j: int, N: int) -> RationalFn:
    R = RationalFn.one()
    for s, n in g_shifts(A, B, i, j, N).items():
        R = R * delta_product([s]) ** n
    return R


def g_series_check(A, B, i: int, j: int, p: ParamPoint, order: int | None = None) -> CheckResult:
    """Compare g_AB with f_{i,j} times the oscillator two-point function as series."""
    order = p.z_order if order is None else order
    Va, Vb = monomial_operator(A, p), monomial_operator(B, p)
    con = contraction(Va, Vb, p, order)
    got = f_series(i, j, p, order) * con.series()
    want = g_rational(A, B, i, j, p.N).expand_inside(p, order)
    name = f"pair function ({','.join(label_name(s) for s, _ in A)}|{','.join(label_name(s) for s, _ in B)})"
    if not con.xexp.is_zero or not con.zexp.is_zero:
        return CheckResult(name, False, "unexpected zero-mode factor", "ExponentMismatch")
    bad = next((n for n in range(order + 1) if got[n] != want[n]), None)
    if bad is None:
        return CheckResult(name, True)
    return CheckResult(name, False, f"coefficient of w^{bad}: {got[bad]} vs {want[bad]}", "SeriesMismatch")


# ---------------------------------------------------------------------------
# left hand side


class _FPCache:
    def __init__(self, p: ParamPoint):
        self.p = p
        self.store: dict = {}

    def __call__(self, entries) -> tuple:
        fp = self.store.get(entries)
        if fp is None:
            fp = fingerprint(entries, self.p)
            self.store[entries] = fp
        return fp


def _pin(A_entries, s, B_entries) -> tuple:
    """:A(x^s z) B(z): as a single-argument entry list (sorted for caching)."""
    return tuple(sorted([(a, e + s) for a, e in A_entries] + list(B_entries)))


Classes = dict  # support key -> {pinned fingerprint -> polynomial}

# A pinned class is an exponential :exp(phi): times a polynomial in the
# oscillator variables a_j(m) z^-m.  Polynomials are dicts from sorted tuples of
# variable indices (mode slot, root) to coefficients; a pure exponential with
# weight c is {(): c}.  Polynomials appear when a pole of order k > 1 meets the
# Taylor expansion of an operator in y = 1 - X w at fixed z2.


def _const(c) -> dict:
    return {(): Fraction(c)} if c else {}


def _poly_add(dst: dict, src: dict, c=1) -> None:
    for mono, v in src.items():
        nv = dst.get(mono, Fraction(0)) + c * v
        if nv:
            dst[mono] = nv
        else:
            dst.pop(mono, None)


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ma, va in a.items():
        for mb, vb in b.items():
            mono = tuple(sorted(ma + mb))
            out[mono] = out.get(mono, Fraction(0)) + va * vb
    return {k: v for k, v in out.items() if v}


def poly_degree(poly: dict) -> int:
    return max((len(m) for m in poly), default=0)


def _gbinom(m: int, n: int) -> Fraction:
    out = Fraction(1)
    for k in range(n):
        out = out * (m - k) / (k + 1)
    return out


def _taylor_polys(fp_a: tuple, depth: int, M: int) -> list[dict]:
    """[y^n] of exp(sum_m phi_m ((1 - y)^m - 1) a(m)) for n = 0..depth.

    phi is the oscillator content of the z1 side, already pinned; moving
    z1 = X z2 / (1 - y) multiplies its mode m by (1 - y)^m.
    """
    modes = fp_a[0]
    ms = [m for m in range(-M, M + 1) if m]
    psi: list = [None]
    for n in range(1, depth + 1):
        lin = {}
        for idx, row in enumerate(modes):
            bn = (-1) ** n * _gbinom(ms[idx], n)
            if not bn:
                continue
            for j, c in enumerate(row):
                if c:
                    lin[((idx, j),)] = bn * c
        psi.append(lin)
    out = [{(): Fraction(1)}]
    for n in range(1, depth + 1):
        acc: dict = {}
        for k in range(1, n + 1):
            _poly_add(acc, _poly_mul(psi[k], out[n - k]), Fraction(k, n))
        out.append(acc)
    return out


def _pinned_series(items: list, hi: int, p: ParamPoint, fpc: "_FPCache") -> dict[int, dict]:
    """sum_c L_c(y) O_c(y) up to y^hi; items are (Laurent dict, pinned z1-side entries)."""
    lo = min(min(L) for L, _ in items)
    out: dict[int, dict] = {n: {} for n in range(lo, hi + 1)}
    for L, ea in items:
        depth = hi - min(L)
        tp = _taylor_polys(fpc(ea), depth, p.mode_order) if depth > 0 else [{(): Fraction(1)}]
        for n0, c in L.items():
            for l in range(0, hi - n0 + 1):
                _poly_add(out[n0 + l], tp[l], c)
    return out


@dataclass
class LHSResult:
    classes: Classes
    joint_count: int
    higher: list = field(default_factory=list)  # (support, order) pairs that did not cancel
    derivative_groups: int = 0  # pinned groups whose value needed the Taylor expansion


def assemble_lhs(i: int, j: int, p: ParamPoint, Ti: WCurrent | None = None, Tj: WCurrent | None = None,
                 fpc: "_FPCache | None" = None) -> LHSResult:
    """Delta decomposition of f_{i,j}(w) T_i(z1) T_j(z2) - f_{j,i}(1/w) T_j(z2) T_i(z1)."""
    N = p.N
    Ti = build_T(i, p) if Ti is None else Ti
    Tj = build_T(j, p) if Tj is None else Tj
    fpc = _FPCache(p) if fpc is None else fpc
    joint: dict = {}  # (fpA, fpB) -> [DeltaSum, representative entries]
    g_cache: dict = {}
    for ma in Ti.terms:
        fa = fpc(ma.entries)
        for mb in Tj.terms:
            gk = tuple(sorted(g_shifts(ma.entries, mb.entries, i, j, N).items()))
            ds = g_cache.get(gk)
            if ds is None:
                R = RationalFn.one()
                for s, n in gk:
                    R = R * delta_product([s]) ** n
                ds = expansion_difference(R, p)
                g_cache[gk] = ds
            if not ds.terms:
                continue
            jk = (fa, fpc(mb.entries))
            slot = joint.get(jk)
            if slot is None:
                slot = joint[jk] = [DeltaSum(), (ma.entries, mb.entries)]
            slot[0] += ds.scaled(ma.weight * mb.weight)
    # E_k(X w) is the expansion difference of y^-k, so its coefficient is [y^-k] of L(y) O(y)
    groups: dict = {}
    for ds, (ea, eb) in joint.values():
        by_key: dict = {}
        for (k, order), w in ds.terms.items():
            by_key.setdefault(k, {})[-order] = w
        for k, L in by_key.items():
            s = k[1]
            # delta(x^s w) pins z1 = x^s z2
            fp = fpc(_pin(ea, s, eb))
            groups.setdefault((k, fp), []).append((L, tuple((a, e + s) for a, e in ea)))
    classes: Classes = {}
    higher, derivative = [], 0
    for (k, fp), items in groups.items():
        ser = _pinned_series(items, -1, p, fpc)
        higher.extend((k, -n) for n, poly in ser.items() if n < -1 and poly)
        val = ser[-1]
        if poly_degree(val) > 0 or min(ser) < -1:
            derivative += 1
        if val:
            classes.setdefault(k, {})[fp] = val
    return LHSResult(classes, len(joint), sorted(set(higher)), derivative)


# ---------------------------------------------------------------------------
# right hand side


def _prod_delta(shifts: Iterable[int], p: ParamPoint) -> Fraction:
    out = Fraction(1)
    for s in shifts:
        out *= delta_at(s, p)
    return out


def k_weight(k: int, p: ParamPoint) -> Fraction:
    return c_const(p) * _prod_delta((2 * l + 1 for l in range(1, k)), p)


def boundary_weight(i: int, j: int, p: ParamPoint) -> Fraction:
    N = p.N
    return (c_const(p) * _prod_delta((2 * l + 1 for l in range(1, i)), p)
            * _prod_delta((2 * l for l in range(N + 1 - j, N + i - j + 1)), p))


class PinnedSingularity(ArithmeticError):
    """A product of currents at the pinned point does not have a finite value."""


def pinned_product(Ta: WCurrent, sa: int, Tb: WCurrent, sb: int, p: ParamPoint,
                   fpc: "_FPCache") -> dict:
    """f_{a,b}(x^(sb-sa)) T_a(x^sa z) T_b(x^sb z) as {fingerprint: polynomial}.

    The product is the value at the pinned ratio of sum g_AB(w) :A(z1) B(z2):.
    Single pair functions may have poles there; the singular parts must cancel
    once the operators are pinned, and the finite value then picks up Taylor
    terms of the z1 side.
    """
    a, b = Ta.i, Tb.i
    N = p.N
    d = sb - sa
    pole = key(0, -d)  # the factor (1 - x^-d w) vanishes at w = x^d
    wval = p.xpow(d)
    joint: dict = {}
    for ma in Ta.terms:
        fa = fpc(ma.entries)
        for mb in Tb.terms:
            R = g_rational(ma.entries, mb.entries, a, b, N)
            w = ma.weight * mb.weight
            if R.fdict.get(pole, 0) < 0:
                L = {n: c * w for n, c in laurent_at(R, pole, p, 0).items() if c}
            else:
                L = {0: R.evaluate(wval, p) * w}
            jk = (fa, fpc(mb.entries))
            slot = joint.get(jk)
            if slot is None:
                slot = joint[jk] = [{}, (ma.entries, mb.entries)]
            for n, c in L.items():
                slot[0][n] = slot[0].get(n, Fraction(0)) + c
    groups: dict = {}
    for L, (ea, eb) in joint.values():
        L = {n: c for n, c in L.items() if c}
        if not L:
            continue
        fp = fpc(_pin(ea, sa, [(s, e + sb) for s, e in eb]))
        groups.setdefault(fp, []).append((L, tuple((s, e + sa) for s, e in ea)))
    out: dict = {}
    for fp, items in groups.items():
        ser = _pinned_series(items, 0, p, fpc)
        sing = sorted(n for n, poly in ser.items() if n < 0 and poly)
        if sing:
            raise PinnedSingularity(f"f_{{{a},{b}}} T_{a} T_{b} is singular at w = x^{d} (orders {sing})")
        if ser[0]:
            out[fp] = ser[0]
    return out


def _merge(dst: dict, k, content: dict, scale: Fraction) -> None:
    bucket = dst.setdefault(key(0, k), {})
    for fp, poly in content.items():
        cur = bucket.setdefault(fp, {})
        _poly_add(cur, poly, scale)
        if not cur:
            bucket.pop(fp)


def _content(Tc: WCurrent, shift: int, fpc: "_FPCache") -> dict:
    raw = collect((fpc(tuple(sorted((s, e + shift) for s, e in m.entries))), m.weight) for m in Tc.terms)
    return {fp: _const(w) for fp, w in raw.items()}


def assemble_rhs(i: int, j: int, p: ParamPoint, fpc: "_FPCache | None" = None,
                 T: Callable[[int], WCurrent] | None = None) -> Classes:
    N = p.N
    fpc = _FPCache(p) if fpc is None else fpc
    T = (lambda n: build_T(n, p)) if T is None else T
    out: Classes = {}
    for k in range(1, i + 1):
        wk = k_weight(k, p)
        Ta, Tb = T(i - k), T(j + k)
        # delta(x^(i-j-2k) w): z1 = x^(i-j-2k) z2
        s = i - j - 2 * k
        _merge(out, s, pinned_product(Ta, s + k, Tb, -k, p, fpc), wk)
        s = j - i + 2 * k
        _merge(out, s, pinned_product(Ta, s - k, Tb, k, p, fpc), -wk)
    wb = boundary_weight(i, j, p)
    Tb = T(j - i)
    _merge(out, -(2 * N - j + i + 1), _content(Tb, -i, fpc), wb)
    _merge(out, 2 * N - j + i + 1, _content(Tb, i, fpc), -wb)
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# comparison


def _describe(poly: dict) -> str:
    if set(poly) <= {()}:
        return f"weight {poly.get((), 0)}"
    return f"polynomial of degree {poly_degree(poly)} with {len(poly)} terms"


def compare_classes(lhs: Classes, rhs: Classes, name: str) -> CheckResult:
    ls, rs = set(lhs), set(rhs)
    if ls != rs:
        extra = [str(s) for s in sorted(k[1] for k in ls - rs)]
        missing = [str(s) for s in sorted(k[1] for k in rs - ls)]
        return CheckResult(name, False, f"supports only on the left [{', '.join(extra)}], only on the right [{', '.join(missing)}]",
                           "MismatchedSupport")
    for k in sorted(ls):
        a, b = lhs[k], rhs[k]
        if set(a) != set(b):
            return CheckResult(name, False, f"support x^{k[1]}: {len(set(a) ^ set(b))} unmatched operator classes",
                               "MismatchedSupport")
        for fp in a:
            if a[fp] != b[fp]:
                return CheckResult(name, False, f"support x^{k[1]}: {_describe(a[fp])} vs {_describe(b[fp])}",
                                   "WeightMismatch")
    return CheckResult(name, True, f"{sum(len(v) for v in lhs.values())} pinned classes on {len(ls)} supports")


def verify_quadratic(i: int, j: int, p: ParamPoint, d_override=None) -> CheckResult:
    """Quadratic relation for the pair (T_i, T_j), 1 <= i <= j <= N."""
    name = f"quadratic (i={i},j={j})"
    if not 1 <= i <= j <= p.N:
        raise ValueError("need 1 <= i <= j <= N")
    fpc = _FPCache(p)
    Tcache: dict = {}

    def T(n):
        if n not in Tcache:
            Tcache[n] = build_T(n, p, d_override)
        return Tcache[n]

    lhs = assemble_lhs(i, j, p, T(i), T(j), fpc)
    if lhs.higher:
        return CheckResult(name, False, f"higher-order delta terms at {lhs.higher}", "HigherOrderPole")
    rhs = assemble_rhs(i, j, p, fpc, T)
    return compare_classes(lhs.classes, rhs, name)


def _move_class(fp: tuple, poly: dict, e: int, p: ParamPoint) -> tuple[tuple, dict]:
    """Re-express a pinned class O(z) as a class of O(x^e z).

    Both the exponential and the polynomial variables pick up the phase of
    their mode, so the two are moved with the same factors.
    """
    M = len(fp[0]) // 2
    ph = _phase(p.u, p.t, p.N, M, Fraction(e))
    moved = {}
    for mono, v in poly.items():
        w = v
        for idx, _ in mono:
            w *= ph[idx]
        moved[mono] = w
    return shift_fingerprint(fp, e, p), moved


def verify_antisymmetry(i: int, j: int, p: ParamPoint) -> CheckResult:
    """Swapping (i, z1) with (j, z2) negates the delta decomposition."""
    name = f"antisymmetry (i={i},j={j})"
    fpc = _FPCache(p)
    a = assemble_lhs(i, j, p, fpc=fpc).classes
    b = assemble_lhs(j, i, p, fpc=fpc).classes
    # b after renaming z1 <-> z2 lives on delta(x^-s z2/z1); its operators sat
    # at the old z2, which is now z1 = x^-s z2
    flipped: Classes = {}
    for k, classes in b.items():
        s = k[1]
        dst = flipped.setdefault(key(0, -s), {})
        for fp, poly in classes.items():
            nfp, npoly = _move_class(fp, poly, -s, p)
            _poly_add(dst.setdefault(nfp, {}), npoly, Fraction(-1))
    flipped = {k: {fp: v for fp, v in c.items() if v} for k, c in flipped.items()}
    flipped = {k: c for k, c in flipped.items() if c}
    return compare_classes(a, flipped, name)


def rank_one_rhs(p: ParamPoint) -> Classes:
    """N = 1 relation written with T_1 only: c kappa T_1 terms at x^-+2, c Delta(x^2) at x^-+3."""
    if p.N != 1:
        raise ValueError("rank one only")
    fpc = _FPCache(p)
    c, k0 = c_const(p), kappa(p)
    T1, T0 = build_T(1, p), build_T(0, p)
    out: Classes = {}
    _merge(out, -2, _content(T1, -1, fpc), c * k0)
    _merge(out, 2, _content(T1, 1, fpc), -c * k0)
    _merge(out, -3, _content(T0, 0, fpc), c * delta_at(2, p))
    _merge(out, 3, _content(T0, 0, fpc), -c * delta_at(2, p))
    return out


def verify_rank_one_relation(p: ParamPoint) -> CheckResult:
    lhs = assemble_lhs(1, 1, p)
    return compare_classes(lhs.classes, rank_one_rhs(p), "rank one relation with T_2 = kappa T_1")


# ---------------------------------------------------------------------------
# fusion of T-currents


def fusion_expected(kind: str, i: int, j: int, sign: int, p: ParamPoint) -> tuple[int, dict]:
    """(support shift, expected {fingerprint: weight}) for the limits of f_{i,j} T_i T_j."""
    N = p.N
    c = c_const(p)
    fpc = _FPCache(p)
    if kind == "T1":
        s = sign * (i + j)
        w = -sign * c * _prod_delta((2 * l + 1 for l in range(1, min(i, j))), p)
        return s, _scale(_content(build_T(i + j, p), sign * i, fpc), w)
    if kind == "T2":
        s = sign * (2 * N + 1 + i - j)
        w = -sign * boundary_weight(i, j, p)
        return s, _scale(_content(build_T(j - i, p), sign * i, fpc), w)
    if kind == "T3":
        s = sign * (2 * N + 1 - i + j)
        w = -sign * c * _prod_delta((2 * l + 1 for l in range(1, j)), p) \
            * _prod_delta((2 * l for l in range(N + 1 - i, N + j - i + 1)), p)
        return s, _scale(_content(build_T(i - j, p), sign * (2 * N + 1 - i), fpc), w)
    raise ValueError(kind)


def _scale(d: dict, w: Fraction) -> dict:
    return {fp: {m: c * w for m, c in poly.items()} for fp, poly in d.items() if w}


def fusion_cases(N: int) -> list[tuple[str, int, int, int]]:
    out = []
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            for sg in (1, -1):
                out.append(("T1", i, j, sg))
                if i <= j:
                    out.append(("T2", i, j, sg))
                if j <= i:
                    out.append(("T3", i, j, sg))
    return out


def verify_fusion_T(kind: str, i: int, j: int, sign: int, p: ParamPoint) -> CheckResult:
    sg = "+" if sign > 0 else "-"
    name = f"T-fusion {kind} (i={i},j={j},{sg})"
    s, want = fusion_expected(kind, i, j, sign, p)
    lhs = assemble_lhs(i, j, p)
    k = key(0, s)
    bad = [h for h in lhs.higher if h[0] == k]
    if bad:
        return CheckResult(name, False, f"pole of order {bad[0][1]} at x^{s}", "HigherOrderPole")
    got = lhs.classes.get(k, {})
    return compare_classes({k: got} if got else {}, {k: want} if want else {}, name)


def lhs_support_set(i: int, j: int, p: ParamPoint) -> set[int]:
    return {k[1] for k in assemble_lhs(i, j, p).classes}


def rhs_support_set(i: int, j: int, N: int) -> set[int]:
    out = set()
    for k in range(1, i + 1):
        out |= {i - j - 2 * k, j - i + 2 * k}
    out |= {2 * N - j + i + 1, -(2 * N - j + i + 1)}
    return out


# ---------------------------------------------------------------------------
# residuals of a failing relation


def quadratic_residual(i: int, j: int, p: ParamPoint) -> Classes:
    """Left minus right hand side, class by class; empty when the relation holds."""
    fpc = _FPCache(p)
    lhs = assemble_lhs(i, j, p, fpc=fpc).classes
    rhs = assemble_rhs(i, j, p, fpc)
    out: Classes = {}
    for k in set(lhs) | set(rhs):
        bucket: dict = {}
        for fp, poly in lhs.get(k, {}).items():
            _poly_add(bucket.setdefault(fp, {}), poly)
        for fp, poly in rhs.get(k, {}).items():
            _poly_add(bucket.setdefault(fp, {}), poly, -1)
        bucket = {fp: v for fp, v in bucket.items() if v}
        if bucket:
            out[k] = bucket
    return out


def proportionality(a: dict, b: dict) -> Fraction | None:
    """The scalar r with a = r b for {fingerprint: polynomial} maps, or None."""
    if not b or set(a) != set(b):
        return None
    r = None
    for fp, poly in b.items():
        if set(a[fp]) != set(poly):
            return None
        for mono, v in poly.items():
            q = a[fp][mono] / v
            if r is None:
                r = q
            elif q != r:
                return None
    return r


def level_two_correction(p: ParamPoint, fpc: "_FPCache | None" = None) -> Classes:
    """Candidate for the terms missing from the (i=2,j=2) right hand side.

    -+ c Delta(x^(2N-2)) f_{1,1} T_1 T_1 pinned on delta(x^-+(2N-1) w), in the
    same pinning pattern as the k = 1 terms but with T_{j-1} in place of T_{j+1}.
    """
    N = p.N
    fpc = _FPCache(p) if fpc is None else fpc
    T1 = build_T(1, p)
    w = c_const(p) * delta_at(2 * N - 2, p)
    s = 2 * N - 1
    out: Classes = {}
    _merge(out, -s, pinned_product(T1, -s + 1, T1, -1, p, fpc), w)
    _merge(out, s, pinned_product(T1, s - 1, T1, 1, p, fpc), -w)
    return {k: v for k, v in out.items() if v}


def verify_level_two_residual(p: ParamPoint) -> CheckResult:
    """The (2,2) residual is exactly the level-two correction."""
    name = f"quadratic (i=2,j=2) residual vs level-two correction (N={p.N})"
    if p.N < 2:
        raise ValueError("needs N >= 2")
    res = quadratic_residual(2, 2, p)
    return compare_classes(res, level_two_correction(p), name)
