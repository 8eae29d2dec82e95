"""Screening currents against T_1: exchange deltas, their pairing and the mode recursion.

Supports of the deltas here involve x^(+-r), so they are keys (a, b) meaning
x^(a r + b) and live apart from the integer supports of the quadratic relations.
A delta with key K multiplies :Lambda_a(z1) S_k(z2): and pins z2 = x^-K z1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .coeff import ParamPoint, q_int
from .currents import build_lambdas, duality_constant, label_name, labels
from .fixtures import S_NOME, closed_form_qproduct, lookup, prefactor_exp, rational_part, zpow_exp
from .heisenberg import VertexOperator, build_S, contraction
from .qproducts import QProduct, bracket
from .report import CheckResult
from .series import Key, RExp, RationalFn, expansion_difference, key, key_neg


class UnpairedDelta(ArithmeticError):
    """A delta term of [T_1, S_k] has no partner forming a q-difference."""


class NoValidK(ArithmeticError):
    """No auxiliary index k makes the mode recursion solvable."""


# ---------------------------------------------------------------------------
# two-point functions of Lambda_a with S_k


def _compose(op: VertexOperator, k: int, p: ParamPoint, reverse: bool) -> tuple[RExp, RationalFn]:
    """Closed form of <op(z1) S_k(z2)> (or <S_k(z2) op(z1)>) as x^E * R(w), w = z2/z1."""
    xe = RExp()
    R = RationalFn.one()
    for t in op.terms:
        if reverse:
            e = lookup("S", k, t.kind, t.index, p.N)
            # the table is a function of (x^shift z1)/z2 = x^shift / w
            part = rational_part(e).shift_key(t.shift, p).reflect(p)
        else:
            e = lookup(t.kind, t.index, "S", k, p.N)
            part = rational_part(e).shift_key(key_neg(t.shift), p)
            xe = xe + prefactor_exp(e).scale(t.coeff)
        if not zpow_exp(e).is_zero:
            raise ValueError("unexpected z power in a Lambda-S table")
        R = R * part ** t.coeff
    return xe, R


def lambda_s_rational(a: int, k: int, p: ParamPoint) -> RationalFn:
    """<Lambda_a(z1) S_k(z2)> with the zero-mode x power folded into the constant."""
    xe, R = _compose(build_lambdas(p)[a], k, p, reverse=False)
    return R * xe.x_value(p)


def verify_lambda_s_closed_form(a: int, k: int, p: ParamPoint, order: int = 20) -> CheckResult:
    """Table-composed closed form against the oscillator series, and against the reversed ordering."""
    name = f"Lambda-S two-point function (a={label_name(a)},k={k})"
    lam = build_lambdas(p)[a]
    xe, R = _compose(lam, k, p, reverse=False)
    c = contraction(lam, build_S(k), p, order)
    if c.xexp != xe or not c.zexp.is_zero:
        return CheckResult(name, False, f"zero-mode factor {c.xexp} vs tables {xe}", "ExponentMismatch")
    got, want = c.series(), R.expand_inside(p, order)
    bad = next((n for n in range(order + 1) if got[n] != want[n]), None)
    if bad is not None:
        return CheckResult(name, False, f"coefficient of w^{bad} differs", "SeriesMismatch")
    _, Rrev = _compose(lam, k, p, reverse=True)
    if R * xe.x_value(p) != Rrev:
        return CheckResult(name, False, "the two orderings are not one rational function", "SeriesMismatch")
    return CheckResult(name, True)


# ---------------------------------------------------------------------------
# scalar multiples of pinned normal-ordered operators


def _split_exponent(e: RExp) -> tuple[RExp, RExp]:
    """(canonical non-evaluable part, evaluable remainder)."""
    base = RExp(e.r - floor(e.r), e.one - Fraction(floor(2 * e.one), 2), e.inv)
    return base, e - base


@dataclass(frozen=True)
class Pinned:
    """coeff * x^xpow * :op:, with the operator reduced to its canonical content."""
    content: tuple
    xpow: RExp
    coeff: Fraction


def pin(op: VertexOperator, scalar: Fraction, p: ParamPoint) -> Pinned:
    base, rest = _split_exponent(op.scalar_xexp(p))
    return Pinned(op.fingerprint(p), base, scalar * op.prefactor * rest.x_value(p))


def _lambda_s(a: int, k: int, shift: Key, p: ParamPoint) -> VertexOperator:
    """:Lambda_a(z) S_k(x^shift z):"""
    return build_lambdas(p)[a].compose(build_S(k).shifted(shift))


def collect_pinned(items) -> dict:
    out: dict = {}
    for it in items:
        ck = (it.content, it.xpow)
        v = out.get(ck, Fraction(0)) + it.coeff
        if v:
            out[ck] = v
        else:
            out.pop(ck, None)
    return out


# ---------------------------------------------------------------------------
# exchange deltas


@dataclass(frozen=True)
class ScreeningDelta:
    a: int
    k: int
    support: Key  # delta(x^support w / z)
    weight: Fraction


def lambda_s_delta_terms(a: int, k: int, p: ParamPoint) -> list[ScreeningDelta]:
    """[Lambda_a(z1), S_k(z2)] = sum weight * delta(x^support z2/z1) :Lambda_a(z1) S_k(z2):."""
    ds = expansion_difference(lambda_s_rational(a, k, p), p)
    simple = ds.require_simple()  # HigherOrderPole propagates
    return [ScreeningDelta(a, k, key(*s), w) for s, w in sorted(simple.items())]


def expected_lambda_s(a: int, k: int, p: ParamPoint) -> list[ScreeningDelta]:
    """The listed exchange lines; every other pair commutes."""
    N = p.N
    up, down = p.xr(2, -2) - 1, p.xr(-2, 2) - 1  # x^(2r-2) - 1 and x^(-2r+2) - 1
    out = []
    if a == k:
        out.append(ScreeningDelta(a, k, key(-1, k), down))
    if k < N and a == k + 1:
        out.append(ScreeningDelta(a, k, key(1, k), up))
    if a == -k:
        out.append(ScreeningDelta(a, k, key(1, 2 * N + 1 - k), up))
    if k < N and a == -(k + 1):
        out.append(ScreeningDelta(a, k, key(-1, 2 * N + 1 - k), down))
    if k == N and a == 0:
        x = p.x
        w = (x - 1 / x) * q_int(-1, p, 1) * q_int(Fraction(1, 2), p) / q_int(Fraction(-1, 2), p, 1)
        out += [ScreeningDelta(a, k, key(1, N), w), ScreeningDelta(a, k, key(-1, N + 1), -w)]
    return sorted(out, key=lambda d: d.support)


def verify_lambda_s(a: int, k: int, p: ParamPoint, weight_scale=1) -> CheckResult:
    """weight_scale != 1 perturbs the listed weights (negative control)."""
    name = f"Lambda-S exchange (a={label_name(a)},k={k})"
    got = lambda_s_delta_terms(a, k, p)
    want = [ScreeningDelta(d.a, d.k, d.support, d.weight * weight_scale) for d in expected_lambda_s(a, k, p)]
    if got != want:
        return CheckResult(name, False, f"deltas {[(d.support, d.weight) for d in got]} "
                                        f"vs {[(d.support, d.weight) for d in want]}", "WeightMismatch")
    return CheckResult(name, True, f"{len(got)} delta terms")


def _pinned_term(d: ScreeningDelta, p: ParamPoint) -> Pinned:
    # delta(x^K w/z) pins w = x^-K z
    return pin(_lambda_s(d.a, d.k, key_neg(d.support), p), d.weight, p)


def commutator_terms(k: int, p: ParamPoint) -> dict[Key, dict]:
    """[T_1(z), S_k(w)] as support -> pinned operator content."""
    out: dict = {}
    for a in labels(p.N):
        for d in lambda_s_delta_terms(a, k, p):
            out.setdefault(d.support, []).append(_pinned_term(d, p))
    return {s: collect_pinned(v) for s, v in out.items()}


def commutator_form(k: int, p: ParamPoint) -> dict[Key, dict]:
    """C_k(z) (D_{x^r} delta)(x^k w/z) + Cbar_k(z) (D_{x^r} delta)(x^(2N+1-k) w/z)."""
    N = p.N
    gap = p.xr(1, -1) - p.xr(-1, 1)
    C = pin(_lambda_s(k, k, key(1, -k), p), p.xr(-1, 1) * gap, p)
    Cb = pin(_lambda_s(-k, k, key(-1, -2 * N - 1 + k), p), p.xr(1, -1) * gap, p)
    out: dict = {}
    for cur, s in ((C, k), (Cb, 2 * N + 1 - k)):
        neg = Pinned(cur.content, cur.xpow, -cur.coeff)
        out[key(1, s)] = collect_pinned([cur])
        out[key(-1, s)] = collect_pinned([neg])
    return out


def pairing_identities(k: int, p: ParamPoint) -> list[CheckResult]:
    """The operator identities that merge the four (or five) deltas into two q-differences."""
    N = p.N
    lam_ratio = q_int(Fraction(1, 2), p) / q_int(Fraction(-1, 2), p, 1)
    x_m, x_p = p.xr(-1, 1), p.xr(1, -1)
    cases = []
    if k < N:
        cases.append((f"Lambda{k} S{k} = Lambda{k + 1} S{k}",
                      (k, key(1, -k), x_m), (k + 1, key(-1, -k), x_p)))
        cases.append((f"Lambda{k}bar S{k} = Lambda{k + 1}bar S{k}",
                      (-k, key(-1, -2 * N - 1 + k), x_p), (-(k + 1), key(1, -2 * N - 1 + k), x_m)))
    else:
        cases.append((f"Lambda{N} S{N} = Lambda0 S{N}", (N, key(1, -N), x_m), (0, key(-1, -N), lam_ratio)))
        cases.append((f"Lambda{N}bar S{N} = Lambda0 S{N}",
                      (-N, key(-1, -N - 1), x_p), (0, key(1, -N - 1), lam_ratio)))
    out = []
    for name, (a1, s1, c1), (a2, s2, c2) in cases:
        lhs = pin(_lambda_s(a1, k, s1, p), c1, p)
        rhs = pin(_lambda_s(a2, k, s2, p), c2, p)
        ok = lhs == rhs
        wit = ""
        if not ok:
            wit = "operator content differs" if lhs.content != rhs.content else f"scalar {lhs.coeff} vs {rhs.coeff}"
        out.append(CheckResult(f"screening pairing {name}", ok, wit, "" if ok else "UnpairedDelta"))
    return out


def verify_commutator_form(k: int, p: ParamPoint) -> list[CheckResult]:
    """[T_1(z), S_k(w)] collapses to two q-difference deltas."""
    res = [verify_lambda_s(a, k, p) for a in labels(p.N)]
    res += pairing_identities(k, p)
    got, want = commutator_terms(k, p), commutator_form(k, p)
    name = f"T1-S{k} commutator form"
    if set(got) != set(want):
        res.append(CheckResult(name, False, f"supports {sorted(got)} vs {sorted(want)}", "UnpairedDelta"))
    else:
        bad = [s for s in got if got[s] != want[s]]
        res.append(CheckResult(name, not bad, f"mismatch at supports {bad}" if bad else "", "UnpairedDelta" if bad else ""))
    return res


def verify_residue_vanishes(k: int, p: ParamPoint) -> CheckResult:
    """The w-residue of every delta is its pinned payload; the payloads cancel in total."""
    total: dict = {}
    for s, content in commutator_terms(k, p).items():
        for ck, v in content.items():
            nv = total.get(ck, Fraction(0)) + v
            if nv:
                total[ck] = nv
            else:
                total.pop(ck, None)
    name = f"residue of [T1, S{k}(w)] in w"
    return CheckResult(name, not total, f"{len(total)} operator classes survive" if total else "")


# ---------------------------------------------------------------------------
# mode recursion certificate


def recursion_prefactor(j: int, m: int, k: int, p: ParamPoint) -> Fraction:
    return p.xpow(-(j + 1) * k + m) - p.xpow((j + 1) * k - m)


def recursion_certificate(p: ParamPoint, mmax: int = 10, kmax: int = 10) -> dict[tuple[int, int], int]:
    """(j, m) -> smallest |k| (positive first) with a nonzero recursion prefactor."""
    out = {}
    for j in range(1, p.N + 1):
        for m in range(-mmax, mmax + 1):
            for k in sorted(range(-kmax, kmax + 1), key=lambda v: (abs(v), -v)):
                if recursion_prefactor(j, m, k, p):
                    out[(j, m)] = k
                    break
            else:
                raise NoValidK(f"no k with |k| <= {kmax} for j={j}, m={m}")
    return out


def verify_recursion_reduction(p: ParamPoint, mmax: int = 10) -> list[CheckResult]:
    N = p.N
    out = []
    try:
        cert = recursion_certificate(p, mmax)
        out.append(CheckResult(f"mode recursion solvable (|m| <= {mmax})", True, f"{len(cert)} certified (j, m)"))
    except NoValidK as exc:
        out.append(CheckResult(f"mode recursion solvable (|m| <= {mmax})", False, str(exc), "NoValidK"))
    consts = {i: duality_constant(i, p) for i in range(1, N)}
    zero = [i for i, c in consts.items() if c == 0]
    out.append(CheckResult("duality reduction of levels N+2..2N", not zero,
                           f"vanishing constants at {zero}" if zero else "", "NoValidK" if zero else ""))
    for k in range(1, N + 1):
        out.append(verify_residue_vanishes(k, p))
    return out


# ---------------------------------------------------------------------------
# S-S exchange


def _ss_pair(i: int, j: int, p: ParamPoint) -> tuple[QProduct, QProduct]:
    """(<S_i(z1) S_j(z2)>, <S_j(z2) S_i(z1)>) as q-products in w = z2/z1, z powers folded in."""
    N = p.N
    e1 = lookup("S", i, "S", j, N)
    e2 = lookup("S", j, "S", i, N)
    fwd = closed_form_qproduct(e1, p) if "poch" in e1 or "rational" in e1 else QProduct.unit(S_NOME)
    rev = closed_form_qproduct(e2, p) if "poch" in e2 or "rational" in e2 else QProduct.unit(S_NOME)
    rev = rev.reflect(p)
    z1, z2 = zpow_exp(e1), zpow_exp(e2)
    if z1 != z2:
        raise ValueError("S-S z powers differ between orderings")
    # z1^a against z2^a: the ratio carries w^-a
    fwd = fwd.copy()
    fwd.wexp = fwd.wexp - z1
    fwd.xexp = fwd.xexp + prefactor_exp(e1)
    rev.xexp = rev.xexp + prefactor_exp(e2)
    return fwd, rev


def exchange_expected(i: int, j: int, p: ParamPoint, u_coeff: int = 1) -> QProduct:
    """The theta quotient of the S_i S_j exchange, v = u2 - u1."""
    N = p.N
    per = S_NOME

    def br(c, sign):
        return bracket(c, sign, p, per, u_coeff)

    if i == j < N:
        q = br(1, 1) / br(1, -1) * -1
    elif i == j == N:
        q = br(Fraction(1, 2), -1) * br(1, 1) / (br(Fraction(1, 2), 1) * br(1, -1)) * -1
    elif abs(i - j) == 1:
        q = br(Fraction(1, 2), -1) / br(Fraction(1, 2), 1)
    else:
        q = QProduct.unit(per)
    return q


def verify_screening_exchange(i: int, j: int, p: ParamPoint, u_coeff: int = 1, order: int = 20) -> CheckResult:
    name = f"S{i} S{j} exchange"
    fwd, rev = _ss_pair(i, j, p)
    got = fwd / rev
    want = exchange_expected(i, j, p, u_coeff)
    diff = got.difference(want, p)
    if diff:
        kind = "ExponentMismatch" if any("exponent" in d for d in diff) else "SeriesMismatch"
        return CheckResult(name, False, "; ".join(diff), kind)
    # second route: one-sided series of the infinite factors
    a, b = got.normalized(p), want.normalized(p)
    for sg in (1, -1):
        sa, sb = a.side_series(p, sg, order), b.side_series(p, sg, order)
        bad = next((n for n in range(order + 1) if sa[n] != sb[n]), None)
        if bad is not None:
            return CheckResult(name, False, f"series in w^{sg} differs at order {bad}", "SeriesMismatch")
    return CheckResult(name, True)


# ---------------------------------------------------------------------------
# Fock sectors


def s_power_integral(i: int, n: int, p: ParamPoint) -> bool:
    """The w power of S_i on pi_mu is an integer for mu_i = beta^(1/2) B_ii(0)/2 + n beta^(-1/2).

    On pi_mu, w^(-beta^(1/2) a_i(0)) acts as w^(-beta B_ii(0)/2 - n); it is added to
    the scalar power carried by S_i and the sum must have no r dependence.
    """
    from .coeff import b_matrix
    zexp = build_S(i).zexp(p)
    shift = RExp.beta_times(b_matrix(0, p)[i, i] / 2) + RExp(0, n, 0)
    total = zexp - shift
    return total.r == 0 and total.inv == 0 and total.one.denominator == 1
