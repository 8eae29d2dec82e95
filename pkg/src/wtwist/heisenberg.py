"""Oscillator algebra, vertex operators as exponent data, and two-point functions.

A vertex operator is a signed sum of elementary terms A_i, Y_i, S_i placed at
arguments x^(a r + b) z.  Its oscillator content at mode m is a length-N
vector over the root oscillators a_j(m); moving the argument by x^e multiplies
mode m by x^(-e m).

Zero modes are tracked symbolically.  Every operator carries
  * x^(sum_j xop_j a_j(0)) with xop_j an exponent r*(...) + (...),
  * z^(sum_j za0_j a_j(0)),
  * a charge vector: the number of e^(-sigma Q_j) factors, sigma = 2(r-1)/r,
  * a scalar x power and a scalar z power, both exponents in r, 1, 1/r.
With this normalization the charge pairing reproduces the table prefactors.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from .coeff import ParamPoint, b_matrix, i_matrix, q_int
from .series import Key, PowerSeries, RExp, key

Vec = tuple  # tuple[Fraction, ...]


def kernel(i: int, j: int, m: int, p: ParamPoint) -> Fraction:
    """[a_i(m), a_j(-m)] = (1/m)[rm][(r-1)m] B_ij(m) (x - 1/x)^2."""
    if m == 0:
        raise ValueError("kernel is defined for nonzero modes")
    x = p.x
    return q_int(0, p, m) * q_int(-m, p, m) * b_matrix(m, p)[i, j] * (x - 1 / x) ** 2 / m


def fundamental_kernel(m: int, p: ParamPoint) -> Fraction:
    """(1/m)[rm][(r-1)m](x - 1/x)^2, the pairing of y_i(m) with a_i(-m)."""
    x = p.x
    return q_int(0, p, m) * q_int(-m, p, m) * (x - 1 / x) ** 2 / m


def _unit(N: int, i: int, c=1) -> Vec:
    return tuple(Fraction(c) if j == i else Fraction(0) for j in range(1, N + 1))


def y_row(i: int, m: int, p: ParamPoint) -> Vec:
    """Coefficients of y_i(m) on a_1(m) .. a_N(m)."""
    return tuple(i_matrix(m, p)[i - 1])


def y1_alternate(m: int, p: ParamPoint) -> Vec:
    """y_1(m) = sum_j ([(2N+1-j)m] + [jm]) / [(2N+1)m] a_j(m)."""
    N = p.N
    den = q_int((2 * N + 1) * m, p)
    return tuple((q_int((2 * N + 1 - j) * m, p) + q_int(j * m, p)) / den for j in range(1, N + 1))


@lru_cache(maxsize=None)
def _base_mode(kind: str, i: int, m: int, u: Fraction, t: Fraction, N: int) -> Vec:
    p = ParamPoint(u, t, N)
    if kind == "A":
        return _unit(N, i)
    if kind == "Y":
        return y_row(i, m, p)
    if kind == "S":
        return _unit(N, i, 1 / (t ** m - t ** (-m)))
    raise ValueError(kind)


def base_mode(kind: str, i: int, m: int, p: ParamPoint) -> Vec:
    return _base_mode(kind, i, m, p.u, p.t, p.N)


def _beta2(e: RExp) -> RExp:
    """e * 2(r-1)/r."""
    if e.inv:
        raise ValueError("exponent would need 1/r^2")
    return RExp(2 * e.r, 2 * e.one - 2 * e.r, -2 * e.one)


def _mul_rexp(a: RExp, b: RExp) -> RExp:
    """Product of two exponents when it stays inside r, 1, 1/r."""
    terms = {}
    for pa, ca in ((1, a.r), (0, a.one), (-1, a.inv)):
        for pb, cb in ((1, b.r), (0, b.one), (-1, b.inv)):
            if ca and cb:
                terms[pa + pb] = terms.get(pa + pb, 0) + ca * cb
    if any(v for k, v in terms.items() if k not in (1, 0, -1)):
        raise ValueError("exponent product leaves the r, 1, 1/r span")
    return RExp(terms.get(1, 0), terms.get(0, 0), terms.get(-1, 0))


@dataclass(frozen=True)
class Term:
    kind: str  # "A", "Y" or "S"
    index: int
    shift: Key = (0, Fraction(0))  # argument x^(a r + b) z
    coeff: int = 1


@dataclass(frozen=True)
class VertexOperator:
    terms: tuple = ()
    prefactor: Fraction = Fraction(1)
    label: str = ""

    # construction ------------------------------------------------------------

    def compose(self, other: "VertexOperator", label: str = "") -> "VertexOperator":
        return VertexOperator(self.terms + other.terms, self.prefactor * other.prefactor,
                              label or f"{self.label}.{other.label}")

    def inverse(self) -> "VertexOperator":
        return VertexOperator(tuple(replace(t, coeff=-t.coeff) for t in self.terms),
                              1 / self.prefactor, f"{self.label}^-1")

    def shifted(self, e) -> "VertexOperator":
        """The operator at argument x^e z (e an integer, half-integer or a key)."""
        k = e if isinstance(e, tuple) else (0, Fraction(e))
        k = key(*k)
        return VertexOperator(tuple(replace(t, shift=(t.shift[0] + k[0], t.shift[1] + k[1]))
                                    for t in self.terms), self.prefactor, self.label)

    def scaled(self, c) -> "VertexOperator":
        return VertexOperator(self.terms, self.prefactor * Fraction(c), self.label)

    # oscillator data ---------------------------------------------------------

    def mode(self, m: int, p: ParamPoint) -> Vec:
        """Coefficient vector of a_1(m) .. a_N(m) in the exponent (includes shifts)."""
        acc = [Fraction(0)] * p.N
        for t in self.terms:
            v = base_mode(t.kind, t.index, m, p)
            ph = t.coeff * p.xr(-t.shift[0] * m, -t.shift[1] * m)
            for j, c in enumerate(v):
                if c:
                    acc[j] += ph * c
        return tuple(acc)

    def xop(self, p: ParamPoint) -> tuple:
        """Exponents e_j of the zero-mode operator x^(sum e_j a_j(0))."""
        N = p.N
        acc = [RExp() for _ in range(N)]
        for t in self.terms:
            if t.kind == "A":
                acc[t.index - 1] = acc[t.index - 1] + RExp(t.coeff)
            elif t.kind == "Y":
                row = i_matrix(0, p)[t.index - 1]
                for j in range(N):
                    acc[j] = acc[j] + RExp(t.coeff * row[j])
            else:
                # (c z)^(-a_i(0)/2) with c = x^(a r + b)
                a, b = t.shift
                acc[t.index - 1] = acc[t.index - 1] + RExp(Fraction(-a, 2), -b / 2).scale(t.coeff)
        return tuple(acc)

    def za0(self, p: ParamPoint) -> Vec:
        acc = [Fraction(0)] * p.N
        for t in self.terms:
            if t.kind == "S":
                acc[t.index - 1] += Fraction(-t.coeff, 2)
        return tuple(acc)

    def charge(self, p: ParamPoint) -> Vec:
        acc = [Fraction(0)] * p.N
        for t in self.terms:
            if t.kind == "S":
                acc[t.index - 1] += t.coeff
        return tuple(acc)

    def scalar_xexp(self, p: ParamPoint) -> RExp:
        """Scalar x power carried by shifted screening terms: c^((r-1) B_ii(0) / (2r))."""
        acc = RExp()
        B0 = b_matrix(0, p)
        for t in self.terms:
            if t.kind == "S":
                a, b = t.shift
                acc = acc + _mul_rexp(RExp(a, b), RExp.beta_times(B0[t.index, t.index] / 2)).scale(t.coeff)
        return acc

    def zexp(self, p: ParamPoint) -> RExp:
        """Scalar z power: (r-1) B_ii(0) / (2r) per screening term."""
        acc = RExp()
        B0 = b_matrix(0, p)
        for t in self.terms:
            if t.kind == "S":
                acc = acc + RExp.beta_times(B0[t.index, t.index] / 2).scale(t.coeff)
        return acc

    def fingerprint(self, p: ParamPoint, mode_order: int | None = None) -> tuple:
        """Canonical content of the normal-ordered operator, prefactor excluded."""
        M = p.mode_order if mode_order is None else mode_order
        modes = tuple(self.mode(m, p) for m in range(-M, M + 1) if m)
        return (modes, self.xop(p), self.za0(p), self.charge(p), self.zexp(p))


def build_A(i: int, p: ParamPoint | None = None) -> VertexOperator:
    return VertexOperator((Term("A", i),), Fraction(1), f"A{i}")


def build_Y(i: int, p: ParamPoint | None = None) -> VertexOperator:
    return VertexOperator((Term("Y", i),), Fraction(1), f"Y{i}")


def build_S(i: int, p: ParamPoint | None = None) -> VertexOperator:
    return VertexOperator((Term("S", i),), Fraction(1), f"S{i}")


@dataclass(frozen=True)
class Contraction:
    """<V(z1) W(z2)> = x^xexp * z1^zexp * exp(log_series(w)), w = z2/z1."""
    xexp: RExp
    zexp: RExp
    log_series: PowerSeries

    def series(self) -> PowerSeries:
        return self.log_series.exp()


def contraction_log(V: VertexOperator, W: VertexOperator, p: ParamPoint, order: int | None = None) -> PowerSeries:
    """log <V(z1) W(z2)> oscillator part: sum_{m>0} V(m)^T K(m) W(-m) w^m."""
    order = p.z_order if order is None else order
    N = p.N
    cs = [Fraction(0)]
    for m in range(1, order + 1):
        v = V.mode(m, p)
        w = W.mode(-m, p)
        if not any(v) or not any(w):
            cs.append(Fraction(0))
            continue
        B = b_matrix(m, p)
        s = Fraction(0)
        for i in range(N):
            if v[i]:
                for j in range(max(0, i - 1), min(N, i + 2)):
                    if w[j]:
                        s += v[i] * B.entries[i][j] * w[j]
        cs.append(s * fundamental_kernel(m, p))
    return PowerSeries(cs, 0, order)


def zero_mode_factor(V: VertexOperator, W: VertexOperator, p: ParamPoint) -> tuple[RExp, RExp]:
    """(x exponent, z1 exponent) produced by moving V's zero modes past W's charges."""
    ch = W.charge(p)
    if not any(ch):
        return RExp(), RExp()
    B0 = b_matrix(0, p)
    N = p.N
    xop, za0 = V.xop(p), V.za0(p)
    xe, ze = RExp(), RExp()
    for j in range(N):
        for k in range(N):
            bjk = B0[j + 1, k + 1] * ch[k]
            if not bjk:
                continue
            xe = xe - _beta2(xop[j].scale(bjk))
            ze = ze - RExp.beta_times(2 * za0[j] * bjk)
    return xe, ze


def contraction(V: VertexOperator, W: VertexOperator, p: ParamPoint, order: int | None = None) -> Contraction:
    xe, ze = zero_mode_factor(V, W, p)
    return Contraction(xe, ze, contraction_log(V, W, p, order))
