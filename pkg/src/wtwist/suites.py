"""Named verification suites: lists of checks that the CLI and the tests share.

A check is a thunk returning one CheckResult or a list of them.  Each suite
also carries at least one negative control: a deliberately perturbed input
whose check must fail.  A control is recorded as passing when the perturbation
is detected.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .coeff import ParamPoint, b_matrix, i_matrix, identity, matmul
from .report import CheckResult

SUITES = ("coeff", "fixtures", "fusion", "duality", "quadratic", "screening", "oracle", "classical")


@dataclass(frozen=True)
class Check:
    suite: str
    identity: str
    fn: Callable[[], object]
    point: ParamPoint | None = None
    control: bool = False

    def point_dict(self) -> dict:
        return self.point.as_dict() if self.point is not None else {}


@dataclass
class SuiteOptions:
    fock_depth: int = 4
    fock_modes: int = 2
    fusion_order: int = 30
    subset_samples: int = 20
    subset_seed: int = 0
    classical_N: int = 2
    classical_m_max: int = 8
    extra: dict = field(default_factory=dict)


def negative_control(name: str, fn: Callable[[], object]) -> Callable[[], CheckResult]:
    """Wrap a check that must fail; passes iff at least one of its results fails."""

    def run() -> CheckResult:
        out = fn()
        res = out if isinstance(out, list) else [out]
        bad = [r for r in res if not r.ok]
        if bad:
            return CheckResult(name, True, f"detected: {bad[0].kind or 'mismatch'} ({bad[0].identity})")
        return CheckResult(name, False, "perturbed input was accepted", "ControlNotDetected")

    return run


# ---------------------------------------------------------------------------
# coeff


def verify_inverse(m: int, p: ParamPoint, perturb: bool = False) -> CheckResult:
    I = [list(r) for r in i_matrix(m, p)]
    if perturb:
        I[0][0] += 1
    ok = matmul(b_matrix(m, p).entries, I) == identity(p.N)
    return CheckResult(f"B(m) I(m) = 1 (m={m})", ok, "" if ok else "product is not the identity", "" if ok else
                       "WeightMismatch")


def coeff_checks(p: ParamPoint, opts: SuiteOptions) -> list[Check]:
    out = [Check("coeff", f"B(m) I(m) = 1 (m={m})", (lambda m=m: verify_inverse(m, p)), p)
           for m in range(-10, 11)]
    name = "control: perturbed inverse entry"
    out.append(Check("coeff", name, negative_control(name, lambda: verify_inverse(3, p, True)), p, True))
    return out


# ---------------------------------------------------------------------------
# fixtures


def _fixture_results(p: ParamPoint, order: int | None = None, mutate: str | None = None) -> list[CheckResult]:
    from .fixtures import check_all, check_entry, entry
    if mutate is None:
        rs = check_all(p, order)
    else:
        e = dict(entry(mutate))
        # bump the multiplicity of the first Delta factor
        d = [list(x) for x in e.get("delta", [])]
        d[0][1] += 1
        e["delta"] = d
        rs = list(check_entry(e, p, order=order))
    return [CheckResult(f"two-point table {r.eid} (i={r.pair[0]},j={r.pair[1]})", r.ok, r.witness,
                        "" if r.ok else "SeriesMismatch") for r in rs]


def fixture_checks(p: ParamPoint, opts: SuiteOptions) -> list[Check]:
    out = [Check("fixtures", "two-point tables", lambda: _fixture_results(p), p)]
    name = "control: perturbed Delta multiplicity in AA/same"
    if p.N >= 2:
        out.append(Check("fixtures", name, negative_control(name, lambda: _fixture_results(p, 12, "AA/same")), p,
                         True))
    else:
        name = "control: perturbed Delta multiplicity in AA/same_N"
        out.append(Check("fixtures", name, negative_control(name, lambda: _fixture_results(p, 12, "AA/same_N")), p,
                         True))
    return out


# ---------------------------------------------------------------------------
# fusion: Delta, f and Lambda identities, T fusion


def fusion_checks(p: ParamPoint, opts: SuiteOptions) -> list[Check]:
    from . import identities as idt
    from .currents import verify_fusion_lambda
    from .verify_quadratic import fusion_cases, verify_fusion_T
    out = [Check("fusion", "Delta difference", lambda: idt.verify_delta_difference(None, p), p)]
    for s in range(-5, 6):
        if s not in (0, 2, -2):
            out.append(Check("fusion", f"Delta product difference (s={s})",
                             lambda s=s: idt.verify_delta_difference(s, p), p))
    out.append(Check("fusion", "f11 first coefficient", lambda: idt.verify_f_log_term(p), p))
    out.append(Check("fusion", "f structure function families",
                     lambda: [idt.verify_fusion_f(c, p, opts.fusion_order) for c in idt.fusion_f_cases(p.N)], p))
    out.append(Check("fusion", "f11 theta ratio", lambda: idt.verify_f11_theta_ratio(p), p))
    out.append(Check("fusion", "Lambda fusion", lambda: verify_fusion_lambda(p), p))
    for case in fusion_cases(p.N):
        out.append(Check("fusion", f"T-fusion {case}", lambda case=case: verify_fusion_T(*case, p), p))

    def dropped_delta():
        # the level sum without its Delta factor
        i, j = 1, 1
        o = 12
        lhs = idt._f(1, i, p, o) * idt._f(1, j, p, o, i + j)
        return idt._series_check("f level sum without Delta", lhs, idt._f(1, i + j, p, o, j), o)

    name = "control: f level sum with the Delta factor dropped"
    out.append(Check("fusion", name, negative_control(name, dropped_delta), p, True))
    return out


# ---------------------------------------------------------------------------
# duality


def random_subsets(N: int, count: int, seed: int, max_size: int | None = None) -> list[tuple[int, ...]]:
    from .currents import labels
    rng = random.Random(seed * 1000 + N)
    labs = labels(N)
    top = len(labs) if max_size is None else max_size
    out = []
    for _ in range(count):
        k = rng.randint(0, top)
        out.append(tuple(rng.sample(labs, k)))
    return out


def duality_checks(p: ParamPoint, opts: SuiteOptions) -> list[Check]:
    from .currents import duality_constant, verify_d_ratio, verify_duality, verify_product_collapse, \
        verify_subset_duality
    N = p.N
    out = [Check("duality", "product collapse", lambda: verify_product_collapse(p), p)]
    out += [Check("duality", f"duality (i={i})", lambda i=i: verify_duality(i, p), p) for i in range(N + 1)]
    for A in random_subsets(N, opts.subset_samples, opts.subset_seed):
        out.append(Check("duality", f"complement product {A}", lambda A=A: verify_subset_duality(A, p), p))
    # the d ratio is a statement about subsets of size at most N
    for A in random_subsets(N, opts.subset_samples, opts.subset_seed + 1, N):
        out.append(Check("duality", f"d ratio {A}", lambda A=A: verify_d_ratio(A, p), p))
    name = "control: doubled duality constant"
    out.append(Check("duality", name, negative_control(
        name, lambda: verify_duality(1, p, 2 * duality_constant(1, p))), p, True))
    return out


# ---------------------------------------------------------------------------
# quadratic relations


def quadratic_pairs(N: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, N + 1) for j in range(i, N + 1)]


def quadratic_checks(p: ParamPoint, opts: SuiteOptions) -> list[Check]:
    from .verify_quadratic import verify_antisymmetry, verify_rank_one_relation, verify_quadratic
    out = [Check("quadratic", f"quadratic (i={i},j={j})", lambda i=i, j=j: verify_quadratic(i, j, p), p)
           for i, j in quadratic_pairs(p.N)]
    out += [Check("quadratic", f"antisymmetry (i={i},j={j})", lambda i=i, j=j: verify_antisymmetry(i, j, p), p)
            for i, j in quadratic_pairs(p.N)]
    if p.N == 1:
        out.append(Check("quadratic", "rank one relation with T_2 = kappa T_1", lambda: verify_rank_one_relation(p), p))

    def mutated():
        # double the d coefficients of T_2, which enters the (1,1) right hand side
        return verify_quadratic(1, 1, p, lambda om, d: 2 * d if len(om) == 2 else d)

    name = "control: doubled d coefficients"
    out.append(Check("quadratic", name, negative_control(name, mutated), p, True))
    return out


# ---------------------------------------------------------------------------
# screening


def screening_checks(p: ParamPoint, opts: SuiteOptions) -> list[Check]:
    from .currents import labels
    from . import screening as sc
    N = p.N
    out = []
    for k in range(1, N + 1):
        for a in labels(N):
            out.append(Check("screening", f"Lambda-S two-point (a={a},k={k})",
                             lambda a=a, k=k: sc.verify_lambda_s_closed_form(a, k, p), p))
        out.append(Check("screening", f"T1-S{k} commutator form", lambda k=k: sc.verify_commutator_form(k, p), p))
    out.append(Check("screening", "mode recursion reduction", lambda: sc.verify_recursion_reduction(p), p))
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            out.append(Check("screening", f"S{i} S{j} exchange", lambda i=i, j=j: sc.verify_screening_exchange(i, j, p),
                             p))
    name = "control: doubled Lambda-S exchange weight"
    out.append(Check("screening", name, negative_control(name, lambda: sc.verify_lambda_s(1, 1, p, 2)), p, True))
    return out


# ---------------------------------------------------------------------------
# Fock oracle


def oracle_checks(p: ParamPoint, opts: SuiteOptions) -> list[Check]:
    from . import fock_oracle as fo
    out = [Check("oracle", f"Fock oracle (D={opts.fock_depth})",
                 lambda: fo.run_fock_suite(p, opts.fock_depth, opts.fock_modes), p)]

    def flipped():
        from .verify_quadratic import assemble_lhs
        o = fo.Oracle(p, opts.fock_depth)
        lhs = assemble_lhs(1, 1, p).classes
        return fo.oracle_check_quadratic(o, 1, 1, 1, 0, lhs, "flipped f coefficient",
                                         lambda l, c: -c if l == 1 else c)

    name = "control: sign of one f coefficient flipped"
    out.append(Check("oracle", name, negative_control(name, flipped), p, True))
    return out


# ---------------------------------------------------------------------------
# classical limit (no parameter point: the limit path fixes q)


def classical_checks(opts: SuiteOptions) -> list[Check]:
    from . import classical_limit as cl
    N = opts.classical_N
    cfg = cl.LimitConfig()
    out = [Check("classical", "c(x,r)/beta -> 2 log q", lambda: cl.verify_c_slope(cfg))]
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            out.append(Check("classical", f"beta slope of f (i={i},j={j},N={N})",
                             lambda i=i, j=j: cl.verify_beta_expansion(i, j, N, opts.classical_m_max, cfg)))
    for i, j in quadratic_pairs(N):
        out.append(Check("classical", f"q-Poisson shape (i={i},j={j},N={N})",
                         lambda i=i, j=j: cl.verify_poisson_bracket_shape(i, j, N, cfg)))

    def ratio():
        r = cl.residual_ratio(1, 2, N, 1, cfg)
        ok = 3.5 < r < 4.5
        return CheckResult("second order residual quarters when beta halves", ok, f"ratio {float(r):.4f}")

    out.append(Check("classical", "second order residual", ratio))
    name = "control: limit path with x^(2r) = q"
    alt = cl.LimitConfig(convention="x^2r")
    out.append(Check("classical", name, negative_control(name, lambda: [cl.verify_c_slope(alt),
                                                                           cl.verify_beta_expansion(1, 1, N, 2, alt)]),
                     None, True))
    return out


BUILDERS = {
    "coeff": coeff_checks,
    "fixtures": fixture_checks,
    "fusion": fusion_checks,
    "duality": duality_checks,
    "quadratic": quadratic_checks,
    "screening": screening_checks,
    "oracle": oracle_checks,
}


def catalog(suites: Sequence[str], points: Sequence[ParamPoint], opts: SuiteOptions | None = None) -> list[Check]:
    """Checks in deterministic order: suite order, then point order, then check order."""
    opts = opts or SuiteOptions()
    out: list[Check] = []
    for s in suites:
        if s not in SUITES:
            raise ValueError(f"unknown suite {s!r}")
        if s == "classical":
            out += classical_checks(opts)
            continue
        for p in points:
            out += BUILDERS[s](p, opts)
    return out
