"""The beta -> 0 limit with q fixed: slopes of f_{i,j} and c(x, r), and the q-Poisson shape.

This is the only module with floating point arithmetic.  Along the limit path
x is irrational, so slopes are taken by finite differences in mpmath and
Richardson-extrapolated.  The limit path is r = 1/(1 - beta) with x^r = q by
default; ``convention="x^2r"`` uses x^(2r) = q instead, for comparison.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .coeff import DivisionByZero, ParamPoint
from .report import CheckResult
from .verify_quadratic import rhs_support_set

DEFAULT_PREC = 200
CONVENTIONS = ("x^r", "x^2r")


class ConvergenceFailure(ArithmeticError):
    pass


class ShapeMismatch(ArithmeticError):
    pass


@dataclass
class LimitConfig:
    q: str = "1/3"
    eps: list = field(default_factory=lambda: ["1e-3", "5e-4", "2.5e-4", "1.25e-4"])
    prec: int = DEFAULT_PREC
    tol: float = 1e-6
    convention: str = "x^r"

    def q_value(self):
        return mpmath.mpf(Fraction(self.q).numerator) / Fraction(self.q).denominator


# ---------------------------------------------------------------------------
# q-integers in either arithmetic


def _qint(n, q):
    """[n]_q; exact when q is a Fraction."""
    return (q ** n - q ** (-n)) / (q - 1 / q)


def poisson_C(i: int, j: int, m: int, N: int, q):
    """Coefficient of z^m in C_{i,j}(z)."""
    lo, hi = min(i, j), max(i, j)
    den = _qint((N + 1) * m, q) - _qint(N * m, q)
    if den == 0:
        raise DivisionByZero(f"C_{{{i},{j}}} denominator vanishes at m={m}")
    return _qint(lo * m, q) * (_qint((N + 1 - hi) * m, q) - _qint((N - hi) * m, q)) / den


# ---------------------------------------------------------------------------
# float engine for f_{i,j} and c(x, r)


def _bracket(a, b, x, xr):
    """[a r + b]_x from x and x^r."""
    X = xr ** a * x ** b
    return (X - 1 / X) / (x - 1 / x)


def f_log_coeff_float(i: int, j: int, m: int, N: int, x, xr):
    lo, hi = min(i, j), max(i, j)
    if lo == 0:
        return mpmath.mpf(0)
    pref = _bracket(m, -m, x, xr) * _bracket(m, 0, x, xr) * (x - 1 / x) ** 2 / m
    num = _bracket(0, lo * m, x, xr) * (_bracket(0, (N + 1 - hi) * m, x, xr) - _bracket(0, (N - hi) * m, x, xr))
    den = _bracket(0, m, x, xr) * (_bracket(0, (N + 1) * m, x, xr) - _bracket(0, N * m, x, xr))
    return -pref * num / den


def f_coeffs_float(i: int, j: int, order: int, N: int, x, xr) -> list:
    """Taylor coefficients of f_{i,j} from its logarithm."""
    lg = [mpmath.mpf(0)] + [f_log_coeff_float(i, j, m, N, x, xr) for m in range(1, order + 1)]
    out = [mpmath.mpf(1)] + [mpmath.mpf(0)] * order
    for n in range(1, order + 1):
        out[n] = sum(k * lg[k] * out[n - k] for k in range(1, n + 1)) / n
    return out


def c_float(x, xr):
    return _bracket(1, 0, x, xr) * _bracket(1, -1, x, xr) * (x - 1 / x)


def delta_float(s, x, xr):
    """Delta(x^s) from its four-factor form."""
    z = x ** s
    return (1 - xr ** 2 / x * z) * (1 - x / xr ** 2 * z) / ((1 - x * z) * (1 - z / x))


def path_point(beta, q, convention: str = "x^r"):
    """(x, x^r) at r = 1/(1 - beta) with the chosen convention for q."""
    r = 1 / (1 - beta)
    if convention == "x^r":
        x = q ** (1 / r)
    elif convention == "x^2r":
        x = q ** (1 / (2 * r))
    else:
        raise ValueError(convention)
    return x, x ** r


def float_matches_exact(i: int, j: int, p: ParamPoint, order: int = 12, prec: int = DEFAULT_PREC) -> CheckResult:
    """Float and exact engines agree on f_{i,j} coefficients at a rational point."""
    from .series import f_series
    with mpmath.workprec(prec):
        x = mpmath.mpf(p.x.numerator) / p.x.denominator
        xr = mpmath.mpf(p.t.numerator) / p.t.denominator
        fl = f_coeffs_float(i, j, order, p.N, x, xr)
        ex = f_series(i, j, p, order)
        tol = mpmath.mpf(2) ** (-prec + 20)
        for m in range(order + 1):
            e = mpmath.mpf(ex[m].numerator) / ex[m].denominator
            if abs(fl[m] - e) > tol * max(1, abs(e)):
                return CheckResult(f"float f engine (i={i},j={j})", False, f"order {m}: {fl[m]} vs {e}")
    return CheckResult(f"float f engine (i={i},j={j})", True)


# ---------------------------------------------------------------------------
# Richardson extrapolation


def richardson(eps: list, vals: list):
    """Extrapolate vals(eps) = v0 + a1 eps + a2 eps^2 + ... to eps = 0 (Neville)."""
    n = len(eps)
    T = [list(vals)]
    for k in range(1, n):
        prev = T[-1]
        T.append([(eps[i] * prev[i + 1] - eps[i + k] * prev[i]) / (eps[i] - eps[i + k]) for i in range(n - k)])
    return T[-1][0], T


@dataclass
class SlopeResult:
    name: str
    limit: object
    expected: object
    rel_error: object
    ok: bool


def _slope_check(name, fn, expected, cfg: LimitConfig) -> SlopeResult:
    eps = [mpmath.mpf(e) for e in cfg.eps]
    vals = [fn(e) / e for e in eps]
    lim, _ = richardson(eps, vals)
    rel = abs(lim - expected) / abs(expected) if expected else abs(lim)
    return SlopeResult(name, lim, expected, rel, rel < cfg.tol)


def verify_c_slope(cfg: LimitConfig | None = None) -> CheckResult:
    cfg = cfg or LimitConfig()
    with mpmath.workprec(cfg.prec):
        q = cfg.q_value()
        res = _slope_check("c slope", lambda e: c_float(*path_point(e, q, cfg.convention)),
                           2 * mpmath.log(q), cfg)
    return CheckResult("c(x,r)/beta -> 2 log q", res.ok,
                       f"limit {mpmath.nstr(res.limit, 12)}, relative error {mpmath.nstr(res.rel_error, 3)}"
                       f" (prec {cfg.prec}, tol {cfg.tol})", "" if res.ok else "ConvergenceFailure")


def verify_beta_expansion(i: int, j: int, N: int, m_max: int = 8, cfg: LimitConfig | None = None) -> CheckResult:
    """(f_{i,j} coefficient)/beta -> -2 log q (q - 1/q) C_{i,j} coefficient for 1 <= m <= m_max."""
    cfg = cfg or LimitConfig()
    name = f"beta slope of f (i={i},j={j},N={N})"
    worst = mpmath.mpf(0)
    with mpmath.workprec(cfg.prec):
        q = cfg.q_value()
        cache: dict = {}

        def coeffs(e):
            if e not in cache:
                cache[e] = f_coeffs_float(i, j, m_max, N, *path_point(e, q, cfg.convention))
            return cache[e]

        for m in range(1, m_max + 1):
            want = -2 * mpmath.log(q) * (q - 1 / q) * poisson_C(i, j, m, N, q)
            res = _slope_check(f"m={m}", lambda e: coeffs(e)[m], want, cfg)
            worst = max(worst, res.rel_error)
            if not res.ok:
                return CheckResult(name, False, f"z^{m}: slope {mpmath.nstr(res.limit, 12)} vs "
                                                f"{mpmath.nstr(want, 12)}", "ConvergenceFailure")
    return CheckResult(name, True, f"max relative error {mpmath.nstr(worst, 3)} (prec {cfg.prec})")


def residual_ratio(i: int, j: int, N: int, m: int, cfg: LimitConfig | None = None):
    """Ratio of O(beta^2) residuals when beta is halved; should be close to 4."""
    cfg = cfg or LimitConfig()
    with mpmath.workprec(cfg.prec):
        q = cfg.q_value()
        want = -2 * mpmath.log(q) * (q - 1 / q) * poisson_C(i, j, m, N, q)
        e = mpmath.mpf(cfg.eps[0])
        r1 = f_coeffs_float(i, j, m, N, *path_point(e, q, cfg.convention))[m] - want * e
        r2 = f_coeffs_float(i, j, m, N, *path_point(e / 2, q, cfg.convention))[m] - want * e / 2
        return r1 / r2


# ---------------------------------------------------------------------------
# shape of the q-Poisson relations


def poisson_support_set(i: int, j: int, N: int) -> set[int]:
    """Exponents of q in the deltas of the q-Poisson bracket."""
    out = set()
    for k in range(1, i + 1):
        out |= {-j + i - 2 * k, j - i + 2 * k}
    out |= {-(2 * N - j + i + 1), 2 * N - j + i + 1}
    return out


def support_image(i: int, j: int, N: int, convention: str = "x^r") -> set[Fraction]:
    """x^s -> q^(s / power) at r = 1."""
    power = 1 if convention == "x^r" else 2
    return {Fraction(s, power) for s in rhs_support_set(i, j, N)}


def verify_poisson_bracket_shape(i: int, j: int, N: int, cfg: LimitConfig | None = None) -> CheckResult:
    """Supports map onto the q-Poisson ones and every relation weight over c tends to 1."""
    cfg = cfg or LimitConfig()
    name = f"q-Poisson shape (i={i},j={j},N={N})"
    img = support_image(i, j, N, cfg.convention)
    want = {Fraction(s) for s in poisson_support_set(i, j, N)}
    if img != want:
        return CheckResult(name, False, f"supports {sorted(img)} vs {sorted(want)}", "ShapeMismatch")
    with mpmath.workprec(cfg.prec):
        q = cfg.q_value()

        def weights(e):
            x, xr = path_point(e, q, cfg.convention)
            ws = {}
            for k in range(1, i + 1):
                ws[f"k={k}"] = mpmath.fprod(delta_float(2 * l + 1, x, xr) for l in range(1, k))
            ws["boundary"] = mpmath.fprod([delta_float(2 * l + 1, x, xr) for l in range(1, i)]
                                          + [delta_float(2 * l, x, xr) for l in range(N + 1 - j, N + i - j + 1)])
            for a in range(0, N + 1):
                kap = _bracket(1, Fraction(-1, 2), x, xr) / _bracket(0, Fraction(1, 2), x, xr)
                ws[f"duality {a}"] = kap * mpmath.fprod(delta_float(2 * l, x, xr) for l in range(1, N - a + 1))
            return ws

        eps = [mpmath.mpf(e) for e in cfg.eps]
        samples = [weights(e) for e in eps]
        for label in samples[0]:
            lim, _ = richardson(eps, [s[label] for s in samples])
            if abs(lim - 1) > cfg.tol:
                return CheckResult(name, False, f"{label} weight tends to {mpmath.nstr(lim, 10)}", "ShapeMismatch")
    return CheckResult(name, True, f"{len(want)} supports, unit weights")
