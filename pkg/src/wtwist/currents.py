"""Basic currents Lambda_s, coefficients d_Omega, monomials and the W-currents T_i.

Labels of J_N are encoded as integers: k for 1..N, 0 for the middle label and
-k for the barred label.  The order is 1 < 2 < ... < N < 0 < -N < ... < -1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .coeff import ParamPoint, kappa
from .heisenberg import VertexOperator, build_A, build_Y
from .report import CheckResult
from .series import DeltaPole, delta_at

# ---------------------------------------------------------------------------
# the index set


def labels(N: int) -> list[int]:
    """J_N in increasing order."""
    return list(range(1, N + 1)) + [0] + list(range(-N, 0))


def rank(s: int, N: int) -> int:
    if s > 0:
        return s
    if s == 0:
        return N + 1
    return 2 * N + 2 + s


def bar(s: int) -> int:
    return -s


def label_name(s: int) -> str:
    return f"{s}" if s >= 0 else f"{-s}bar"


def sort_labels(ss: Iterable[int], N: int) -> tuple[int, ...]:
    return tuple(sorted(ss, key=lambda s: rank(s, N)))


# ---------------------------------------------------------------------------
# Lambda operators


@lru_cache(maxsize=None)
def _lambdas(u, t, N) -> dict[int, VertexOperator]:
    p = ParamPoint(u, t, N)
    k0 = kappa(p)
    lam: dict[int, VertexOperator] = {1: build_Y(1)}
    for k in range(2, N + 1):
        lam[k] = lam[k - 1].compose(build_A(k - 1).shifted(-k + 1).inverse(), f"L{k}")
    lam[0] = lam[N].compose(build_A(N).shifted(-N).inverse(), "L0").scaled(k0)
    lam[-N] = lam[0].compose(build_A(N).shifted(-N - 1).inverse(), f"L{N}bar").scaled(1 / k0)
    for k in range(N - 1, 0, -1):
        lam[-k] = lam[-(k + 1)].compose(build_A(k).shifted(-2 * N + k - 1).inverse(), f"L{k}bar")
    return lam


def build_lambdas(p: ParamPoint) -> dict[int, VertexOperator]:
    return _lambdas(p.u, p.t, p.N)


# ---------------------------------------------------------------------------
# fast fingerprints for products of Lambda's


@lru_cache(maxsize=None)
def _lambda_modes(u, t, N, M) -> dict[int, tuple]:
    p = ParamPoint(u, t, N)
    lam = _lambdas(u, t, N)
    out = {}
    for s, op in lam.items():
        out[s] = tuple(op.mode(m, p) for m in range(-M, M + 1) if m)
    return out


@lru_cache(maxsize=None)
def _lambda_xa0(u, t, N) -> dict[int, tuple]:
    p = ParamPoint(u, t, N)
    return {s: tuple(e.r for e in op.xop(p)) for s, op in _lambdas(u, t, N).items()}


@lru_cache(maxsize=None)
def _phase(u, t, N, M, e) -> tuple:
    p = ParamPoint(u, t, N)
    return tuple(p.xpow(-e * m) for m in range(-M, M + 1) if m)


Entry = tuple  # (label, shift)


def fingerprint(entries: Sequence[Entry], p: ParamPoint, mode_order: int | None = None) -> tuple:
    """Oscillator and zero-mode content of :prod Lambda_s(x^e z):."""
    M = p.mode_order if mode_order is None else mode_order
    N = p.N
    modes = _lambda_modes(p.u, p.t, N, M)
    xa0 = _lambda_xa0(p.u, p.t, N)
    acc = [[Fraction(0)] * N for _ in range(2 * M)]
    zero = [Fraction(0)] * N
    for s, e in entries:
        ph = _phase(p.u, p.t, N, M, Fraction(e))
        for idx, vec in enumerate(modes[s]):
            f = ph[idx]
            row = acc[idx]
            for j, c in enumerate(vec):
                if c:
                    row[j] += f * c
        for j, c in enumerate(xa0[s]):
            zero[j] += c
    return (tuple(tuple(r) for r in acc), tuple(zero))


def shift_fingerprint(fp: tuple, e, p: ParamPoint) -> tuple:
    """Fingerprint of the same operator at argument x^e z."""
    modes, zero = fp
    M = len(modes) // 2
    ph = _phase(p.u, p.t, p.N, M, Fraction(e))
    return (tuple(tuple(ph[idx] * c for c in row) for idx, row in enumerate(modes)), zero)


def add_fingerprints(a: tuple, b: tuple) -> tuple:
    return (tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a[0], b[0])),
            tuple(x + y for x, y in zip(a[1], b[1])))


def is_trivial(fp: tuple) -> bool:
    return not any(any(r) for r in fp[0]) and not any(fp[1])


def prefactor(entries: Sequence[Entry], p: ParamPoint) -> Fraction:
    lam = build_lambdas(p)
    out = Fraction(1)
    for s, _ in entries:
        out *= lam[s].prefactor
    return out


def monomial_operator(entries: Sequence[Entry], p: ParamPoint) -> VertexOperator:
    lam = build_lambdas(p)
    op = VertexOperator((), Fraction(1), "1")
    for s, e in entries:
        op = op.compose(lam[s].shifted(e))
    return op


# ---------------------------------------------------------------------------
# coefficients and currents


def d_coeff(omega: Sequence[int], p: ParamPoint) -> Fraction:
    """prod over p<q with s_q = bar(s_p) of Delta(x^(2(q-p+s_p-N-1)))."""
    N = p.N
    om = list(omega)
    out = Fraction(1)
    for a in range(len(om)):
        for b in range(a + 1, len(om)):
            if om[a] > 0 and om[b] == -om[a]:
                s = 2 * ((b + 1) - (a + 1) + om[a] - N - 1)
                if abs(s) == 1:
                    raise DeltaPole(f"d coefficient hits a pole for {om}")
                out *= delta_at(s, p)
    return out


def staircase(omega: Sequence[int]) -> tuple[Entry, ...]:
    i = len(omega)
    return tuple((s, -i + 1 + 2 * k) for k, s in enumerate(omega))


@dataclass(frozen=True)
class Monomial:
    omega: tuple
    entries: tuple
    d: Fraction
    weight: Fraction  # d times the Lambda prefactors


@dataclass(frozen=True)
class WCurrent:
    i: int
    terms: tuple  # of Monomial


def subsets(N: int, i: int) -> list[tuple[int, ...]]:
    return [tuple(c) for c in itertools.combinations(labels(N), i)]


_T_CACHE: dict = {}


def build_T(i: int, p: ParamPoint, d_override=None) -> WCurrent:
    """T_i as a list of monomials; d_override(omega, d) may perturb coefficients."""
    if not 0 <= i <= 2 * p.N + 1:
        raise ValueError("level out of range")
    ck = (i, p.u, p.t, p.N)
    if d_override is None and ck in _T_CACHE:
        return _T_CACHE[ck]
    terms = []
    for om in subsets(p.N, i):
        d = d_coeff(om, p)
        if d_override is not None:
            d = d_override(om, d)
        ent = staircase(om)
        terms.append(Monomial(om, ent, d, d * prefactor(ent, p)))
    cur = WCurrent(i, tuple(terms))
    if d_override is None:
        _T_CACHE[ck] = cur
    return cur


def collect(pairs: Iterable[tuple[tuple, Fraction]]) -> dict:
    out: dict = {}
    for fp, w in pairs:
        v = out.get(fp, Fraction(0)) + w
        if v:
            out[fp] = v
        else:
            out.pop(fp, None)
    return out


def current_content(T: WCurrent, p: ParamPoint, shift=0, scale=1) -> dict:
    """fingerprint -> total weight for T(x^shift z)."""
    return collect((fingerprint(tuple((s, e + shift) for s, e in m.entries), p), m.weight * scale)
                   for m in T.terms)


def duality_constant(i: int, p: ParamPoint) -> Fraction:
    out = kappa(p)
    for k in range(1, p.N - i + 1):
        out *= delta_at(2 * k, p)
    return out


# ---------------------------------------------------------------------------
# checks


def verify_product_collapse(p: ParamPoint, const: Fraction | None = None) -> CheckResult:
    N = p.N
    ent = staircase(labels(N))
    fp = fingerprint(ent, p)
    want = kappa(p) if const is None else const
    got = prefactor(ent, p)
    if not is_trivial(fp):
        modes = fp[0]
        ms = [m for m in range(-p.mode_order, p.mode_order + 1) if m]
        bad = next((ms[k] for k, r in enumerate(modes) if any(r)), None)
        return CheckResult("product collapse", False, f"nonzero oscillator content at mode {bad}")
    if got != want:
        return CheckResult("product collapse", False, f"prefactor {got} != {want}")
    return CheckResult("product collapse", True)


def verify_fusion_lambda(p: ParamPoint) -> list[CheckResult]:
    N = p.N
    out = []

    def same(lhs, lw, rhs, rw, name):
        ok = fingerprint(lhs, p) == fingerprint(rhs, p) and lw == rw
        out.append(CheckResult(name, ok, "" if ok else f"weights {lw} vs {rw} or content differs"))

    lhs = ((0, 0), (0, 1))
    rhs = ((N, 0), (-N, 1))
    same(lhs, prefactor(lhs, p), rhs, delta_at(0, p) * prefactor(rhs, p), "Lambda0 Lambda0 fusion")
    lhs = ((1, 0), (-1, 2 * N + 1))
    same(lhs, prefactor(lhs, p), (), Fraction(1), "Lambda1 Lambda1bar fusion")
    for k in range(2, N + 1):
        e = 2 * N - 2 * k + 3
        lhs = ((k, 0), (-k, e))
        rhs = ((k - 1, 0), (-(k - 1), e))
        same(lhs, prefactor(lhs, p), rhs, prefactor(rhs, p), f"Lambda{k} Lambda{k}bar fusion")
    return out


def verify_subset_duality(A: Sequence[int], p: ParamPoint) -> CheckResult:
    """Lambda-product of the barred complement equals a constant times that of A."""
    N = p.N
    A = sort_labels(A, N)
    comp = sort_labels([bar(s) for s in labels(N) if s not in A], N)
    k0 = kappa(p)
    factor = 1 / k0 if 0 in A else k0
    la, lc = staircase(A), staircase(comp)
    ok = fingerprint(la, p) == fingerprint(lc, p) and prefactor(lc, p) == factor * prefactor(la, p)
    return CheckResult(f"complement product (A={list(map(label_name, A))})", ok,
                       "" if ok else "content or prefactor differs")


def verify_d_ratio(A: Sequence[int], p: ParamPoint) -> CheckResult:
    N = p.N
    A = sort_labels(A, N)
    comp = sort_labels([s for s in labels(N) if s not in A], N)
    want = Fraction(1)
    for k in range(1, N - len(A) + 1):
        want *= delta_at(2 * k, p)
    if 0 in A:
        want *= delta_at(0, p)
    got = d_coeff(comp, p) / d_coeff(A, p)
    ok = got == want
    return CheckResult(f"d ratio (A={list(map(label_name, A))})", ok, "" if ok else f"{got} != {want}")


def verify_duality(i: int, p: ParamPoint, const: Fraction | None = None) -> CheckResult:
    N = p.N
    c = duality_constant(i, p) if const is None else const
    lhs = current_content(build_T(2 * N + 1 - i, p), p)
    rhs = current_content(build_T(i, p), p, scale=c)
    ok = lhs == rhs
    wit = ""
    if not ok:
        extra = set(lhs) ^ set(rhs)
        wit = f"{len(extra)} unmatched monomial classes" if extra else "weights differ"
    return CheckResult(f"duality (i={i})", ok, wit)
