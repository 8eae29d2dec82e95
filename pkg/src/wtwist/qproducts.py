"""Symbolic products of infinite q-Pochhammer symbols in one variable w.

An element is

    const * x^xexp * x^(gauss * v^2 / r) * w^wexp * R(w) * prod (c w^s; p)_inf^n

with c = x^(a r + b), s in {+1, -1}, R a finite rational function of w, and
w = x^(2v) where theta brackets need it.  Two elements are compared after
moving every Pochhammer argument into a fixed fundamental domain modulo p,
which only produces finite factors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .coeff import ParamPoint
from .series import (Key, PowerSeries, RExp, RationalFn, key, key_value,
                     pochhammer_series)

PP = "pp"  # marker for the constant (p;p)_inf


def _finite(k: Key, sign: int, mult: int, p: ParamPoint) -> RationalFn:
    """(1 - x^k w^sign)^mult as a rational function of w."""
    if sign == 1:
        return RationalFn.linear(k, mult)
    if sign == -1:
        # 1 - C/w = (-C) w^-1 (1 - w/C)
        C = key_value(k, p)
        return RationalFn.make((-C) ** mult, -mult, {(-k[0], -k[1]): mult})
    val = 1 - key_value(k, p)
    return RationalFn.make(val ** mult)


@dataclass
class QProduct:
    period: Key
    const: Fraction = Fraction(1)
    xexp: RExp = field(default_factory=RExp)
    gauss: Fraction = Fraction(0)
    wexp: RExp = field(default_factory=RExp)
    finite: RationalFn = field(default_factory=RationalFn.one)
    inf: dict = field(default_factory=dict)  # (key, sign) or PP -> multiplicity

    def copy(self) -> "QProduct":
        return QProduct(self.period, self.const, self.xexp, self.gauss, self.wexp, self.finite, dict(self.inf))

    @classmethod
    def unit(cls, period: Key) -> "QProduct":
        return cls(key(*period))

    @classmethod
    def poch(cls, period: Key, k: Key, sign: int = 1, mult: int = 1) -> "QProduct":
        q = cls.unit(period)
        q.inf[(key(*k), sign)] = mult
        return q

    @classmethod
    def theta(cls, period: Key, k: Key, sign: int = 1) -> "QProduct":
        """Theta_p(x^k w^sign) = (p;p)(x^k w^sign;p)(p x^-k w^-sign;p)."""
        period = key(*period)
        k = key(*k)
        q = cls.unit(period)
        q.inf[PP] = 1
        q.inf[(k, sign)] = q.inf.get((k, sign), 0) + 1
        k2 = (period[0] - k[0], period[1] - k[1])
        q.inf[(k2, -sign)] = q.inf.get((k2, -sign), 0) + 1
        return q

    @classmethod
    def rational(cls, period: Key, R: RationalFn) -> "QProduct":
        q = cls.unit(period)
        q.finite = R
        return q

    def __mul__(self, other: "QProduct") -> "QProduct":
        if not isinstance(other, QProduct):
            q = self.copy()
            q.const *= Fraction(other)
            return q
        assert self.period == other.period, "products over different nomes"
        q = self.copy()
        q.const *= other.const
        q.xexp = q.xexp + other.xexp
        q.gauss += other.gauss
        q.wexp = q.wexp + other.wexp
        q.finite = q.finite * other.finite
        for k, v in other.inf.items():
            q.inf[k] = q.inf.get(k, 0) + v
        return q

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QProduct":
        q = QProduct(self.period, self.const ** n, self.xexp.scale(n), self.gauss * n, self.wexp.scale(n),
                     self.finite ** n, {k: v * n for k, v in self.inf.items()})
        return q

    def __truediv__(self, other: "QProduct") -> "QProduct":
        return self * other ** -1

    def reflect(self, p: ParamPoint) -> "QProduct":
        """Substitute w -> 1/w."""
        inf = {}
        for k, v in self.inf.items():
            nk = k if k == PP else (k[0], -k[1])
            inf[nk] = inf.get(nk, 0) + v
        return QProduct(self.period, self.const, self.xexp, self.gauss, -self.wexp,
                        self.finite.reflect(p), inf)

    def normalized(self, p: ParamPoint) -> "QProduct":
        pa, pb = self.period
        q = QProduct(self.period, self.const, self.xexp, self.gauss, self.wexp, self.finite, {})
        fin = self.finite
        for k, v in self.inf.items():
            if not v:
                continue
            if k == PP:
                q.inf[PP] = q.inf.get(PP, 0) + v
                continue
            (a, b), sign = k
            if pa:
                n = floor(Fraction(a, pa))
            else:
                n = floor(Fraction(b) / pb)
            base = (a - n * pa, Fraction(b) - n * pb)
            # (p^n c w;p) = (c w;p) / prod_{j<n} (1 - p^j c w)   for n > 0
            # (p^n c w;p) = prod_{n<=j<0} (1 - p^j c w) (c w;p) for n < 0
            if n > 0:
                for j in range(n):
                    fin = fin * _finite((base[0] + j * pa, base[1] + j * pb), sign, -v, p)
            elif n < 0:
                for j in range(n, 0):
                    fin = fin * _finite((base[0] + j * pa, base[1] + j * pb), sign, v, p)
            nk = (base, sign)
            q.inf[nk] = q.inf.get(nk, 0) + v
        q.inf = {k: v for k, v in q.inf.items() if v}
        # integer powers of w live in wexp
        q.wexp = q.wexp + RExp(0, fin.wpow, 0)
        q.const *= fin.const
        q.finite = RationalFn.make(1, 0, fin.fdict)
        return q

    def difference(self, other: "QProduct", p: ParamPoint) -> list[str]:
        """Human readable list of components that differ (empty when equal)."""
        a, b = self.normalized(p), other.normalized(p)
        out = []
        if a.const != b.const:
            out.append(f"constant {a.const} != {b.const}")
        if a.xexp != b.xexp:
            out.append(f"x exponent {a.xexp} != {b.xexp}")
        if a.gauss != b.gauss:
            out.append(f"gaussian exponent {a.gauss} != {b.gauss}")
        if a.wexp != b.wexp:
            out.append(f"w exponent {a.wexp} != {b.wexp}")
        if a.finite != b.finite:
            out.append(f"finite factors {a.finite} != {b.finite}")
        if a.inf != b.inf:
            diff = {k: a.inf.get(k, 0) - b.inf.get(k, 0) for k in set(a.inf) | set(b.inf)}
            out.append(f"infinite factors differ by {({k: v for k, v in diff.items() if v})}")
        return out

    def equals(self, other: "QProduct", p: ParamPoint) -> bool:
        return not self.difference(other, p)

    # series views -----------------------------------------------------------

    def side_series(self, p: ParamPoint, sign: int, order: int) -> PowerSeries:
        """Product of the infinite factors with the given sign as a series in w^sign."""
        pq = key_value(self.period, p)
        out = PowerSeries.one(order)
        for k, v in self.inf.items():
            if k == PP or k[1] != sign:
                continue
            base = pochhammer_series(key_value(k[0], p), pq, order, 1 if v > 0 else -1)
            for _ in range(abs(v)):
                out = out * base
        return out


def bracket(c, sign: int, p: ParamPoint, period: Key, u_coeff: int = 1) -> QProduct:
    """[c + sign*v] = x^((c+sign v)^2/r - u_coeff (c+sign v)) Theta_p(x^(2c) w^sign), w = x^(2v).

    u_coeff = 1 is the normalization under which the screening exchange relations
    hold; u_coeff = 2 reproduces the printed variant for comparison.
    """
    c = Fraction(c)
    q = QProduct.theta(period, (0, 2 * c), sign)
    q.xexp = RExp(0, -u_coeff * c, c * c)
    q.gauss = Fraction(1)
    # 2 c sign v / r  ->  w^(c sign / r) ;  -u_coeff sign v -> w^(-u_coeff sign / 2)
    q.wexp = RExp(0, Fraction(-u_coeff * sign, 2), c * sign)
    return q
