"""Truncated power series, factored rational functions of w, and delta extraction.

A factor key ``(a, b)`` stands for the number x^(a*r + b); in a rational function
it denotes the linear factor (1 - x^(a*r+b) w).  Poles therefore sit at
w = x^-(a*r+b) and the matching delta term is delta(x^(a*r+b) w).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, gcd
from typing import Iterable, Mapping

from .coeff import DivisionByZero, ParamPoint, q_int

Key = tuple  # (a: int, b: Fraction)


def key(a: int, b) -> Key:
    return (int(a), Fraction(b))


def key_value(k: Key, p: ParamPoint) -> Fraction:
    return p.xr(k[0], k[1])


def key_add(k1: Key, k2: Key) -> Key:
    return (k1[0] + k2[0], k1[1] + k2[1])


def key_neg(k: Key) -> Key:
    return (-k[0], -k[1])


class HigherOrderPole(ArithmeticError):
    pass


class DeltaPole(DivisionByZero):
    """A pinned evaluation hit a pole."""


# ---------------------------------------------------------------------------
# exponents of the form  A*r + B + C/r


@dataclass(frozen=True)
class RExp:
    """An exponent r_part*r + one + inv/r with rational components.

    Used both for powers of x and for formal powers of z.  These are compared
    componentwise and only evaluated when the 1/r component vanishes.
    """
    r: Fraction = Fraction(0)
    one: Fraction = Fraction(0)
    inv: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("r", "one", "inv"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def __add__(self, other: "RExp") -> "RExp":
        return RExp(self.r + other.r, self.one + other.one, self.inv + other.inv)

    def __neg__(self) -> "RExp":
        return RExp(-self.r, -self.one, -self.inv)

    def __sub__(self, other: "RExp") -> "RExp":
        return self + (-other)

    def scale(self, c) -> "RExp":
        c = Fraction(c)
        return RExp(self.r * c, self.one * c, self.inv * c)

    def times_r(self) -> "RExp":
        """Multiply by r; fails if an r^2 term would appear."""
        if self.r:
            raise ValueError("r^2 exponent not representable")
        return RExp(self.one, self.inv, 0)

    @property
    def is_zero(self) -> bool:
        return not (self.r or self.one or self.inv)

    def evaluable(self) -> bool:
        return self.inv == 0 and self.r.denominator == 1 and (2 * self.one).denominator == 1

    def x_value(self, p: ParamPoint) -> Fraction:
        """x to this power; only allowed when the exponent is a*r + b."""
        if not self.evaluable():
            raise ValueError(f"exponent {self} cannot be evaluated at a sampled point")
        return p.xr(int(self.r), self.one)

    @staticmethod
    def beta_times(c) -> "RExp":
        """c * (r-1)/r."""
        c = Fraction(c)
        return RExp(0, c, -c)

    def __str__(self):
        parts = []
        if self.r:
            parts.append(f"{self.r}*r")
        if self.one:
            parts.append(f"{self.one}")
        if self.inv:
            parts.append(f"{self.inv}/r")
        return " + ".join(parts) if parts else "0"


ZERO_EXP = RExp()


# ---------------------------------------------------------------------------
# power series


def _common(cs: list) -> tuple[list[int], int]:
    """Integer numerators over the lcm of the denominators."""
    cs = [Fraction(c) for c in cs]
    D = 1
    for c in cs:
        d = c.denominator
        if D % d:
            D = D * d // gcd(D, d)
    return [c.numerator * (D // c.denominator) for c in cs], D


class PowerSeries:
    """Laurent series sum_{n >= val} c_n v^n known for exponents n <= order."""

    __slots__ = ("val", "coeffs", "order")

    def __init__(self, coeffs: Iterable = (), val: int = 0, order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is None:
            order = val + len(cs) - 1
        keep = max(0, order - val + 1)
        cs = cs[:keep] + [Fraction(0)] * (keep - len(cs))
        self.val, self.coeffs, self.order = val, cs, order

    @classmethod
    def from_dict(cls, d: Mapping[int, Fraction], order: int) -> "PowerSeries":
        lo = min([n for n, c in d.items() if c] or [0])
        lo = min(lo, order + 1) if d else 0
        cs = [Fraction(0)] * max(0, order - lo + 1)
        for n, c in d.items():
            if lo <= n <= order:
                cs[n - lo] += c
        return cls(cs, lo, order)

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls([1], 0, order)

    @classmethod
    def monomial(cls, n: int, c, order: int) -> "PowerSeries":
        return cls([c], n, order)

    def __getitem__(self, n: int) -> Fraction:
        if n > self.order:
            raise IndexError(f"coefficient {n} beyond truncation order {self.order}")
        k = n - self.val
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def items(self):
        for k, c in enumerate(self.coeffs):
            if c:
                yield self.val + k, c

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.items())

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs, self.val, min(order, self.order))

    def _binary(self, other, op) -> "PowerSeries":
        order = min(self.order, other.order)
        lo = min(self.val, other.val)
        cs = [op(self[n] if n >= self.val else Fraction(0), other[n] if n >= other.val else Fraction(0))
              for n in range(lo, order + 1)]
        return PowerSeries(cs, lo, order)

    def __add__(self, other):
        if not isinstance(other, PowerSeries):
            return self + PowerSeries([other], 0, self.order)
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, PowerSeries):
            return self - PowerSeries([other], 0, self.order)
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return PowerSeries([-c for c in self.coeffs], self.val, self.order)

    def scale(self, c) -> "PowerSeries":
        c = Fraction(c)
        return PowerSeries([c * a for a in self.coeffs], self.val, self.order)

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by v^k."""
        return PowerSeries(self.coeffs, self.val + k, self.order + k)

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return self.scale(other)
        # the product is known up to min(order_a + val_b, order_b + val_a)
        order = min(self.order + other.val, other.order + self.val)
        val = self.val + other.val
        n = order - val + 1
        if n <= 0:
            return PowerSeries([], val, order)
        # integer convolution over a common denominator, one reduction per coefficient
        na, A = _common(self.coeffs[:n])
        nb, B = _common(other.coeffs[:n])
        acc = [0] * n
        for i, ai in enumerate(na):
            if ai:
                for j, bj in enumerate(nb[:n - i]):
                    if bj:
                        acc[i + j] += ai * bj
        AB = A * B
        return PowerSeries([Fraction(v, AB) for v in acc], val, order)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        order = min(self.order, other.order)
        lo = min(self.val, other.val)
        return all(self[n] == other[n] for n in range(lo, order + 1))

    def __repr__(self):
        terms = ", ".join(f"{n}: {c}" for n, c in self.items())
        return f"PowerSeries({{{terms}}}, order={self.order})"

    def subs_scale(self, a) -> "PowerSeries":
        """v -> a*v."""
        a = Fraction(a)
        return PowerSeries([c * a ** (self.val + k) for k, c in enumerate(self.coeffs)], self.val, self.order)

    def inverse(self) -> "PowerSeries":
        lead = next((k for k, c in enumerate(self.coeffs) if c), None)
        if lead is None:
            raise DivisionByZero("inverse of a series with no known nonzero coefficient")
        v = self.val + lead
        cs = self.coeffs[lead:]
        rel = self.order - v  # relative precision
        inv0 = 1 / cs[0]
        out = [inv0]
        for n in range(1, rel + 1):
            s = sum((cs[k] * out[n - k] for k in range(1, min(n, len(cs) - 1) + 1)), Fraction(0))
            out.append(-s * inv0)
        return PowerSeries(out, -v, rel - v)

    def __truediv__(self, other):
        if not isinstance(other, PowerSeries):
            return self.scale(1 / Fraction(other))
        return self * other.inverse()

    def exp(self) -> "PowerSeries":
        """exp of a series with vanishing non-positive part."""
        if any(self[n] for n in range(self.val, 1)):
            raise ValueError("exp needs a series without constant or polar part")
        order = self.order
        s = [self[n] if n >= 1 else Fraction(0) for n in range(order + 1)]
        e = [Fraction(1)] + [Fraction(0)] * order
        for n in range(1, order + 1):
            e[n] = sum((k * s[k] * e[n - k] for k in range(1, n + 1)), Fraction(0)) / n
        return PowerSeries(e, 0, order)

    def log(self) -> "PowerSeries":
        """log of a series with constant term 1."""
        if self.val < 0 and any(self[n] for n in range(self.val, 0)) or self[0] != 1:
            raise ValueError("log needs a series 1 + O(v)")
        order = self.order
        f = [self[n] for n in range(order + 1)]
        lg = [Fraction(0)] * (order + 1)
        # f' = f * lg'  =>  n f_n = sum_k k lg_k f_{n-k}
        for n in range(1, order + 1):
            s = n * f[n] - sum((k * lg[k] * f[n - k] for k in range(1, n)), Fraction(0))
            lg[n] = s / n
        return PowerSeries(lg, 0, order)

    def power(self, n: int) -> "PowerSeries":
        if n < 0:
            return self.inverse().power(-n)
        out = None
        base = self
        while n:
            if n & 1:
                out = base if out is None else out * base
            n >>= 1
            if n:
                base = base * base
        return PowerSeries([1], 0, self.order) if out is None else out


def binomial_series(alpha, beta, m: int, order: int) -> PowerSeries:
    """(alpha + beta v)^m as a power series in v."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    if m >= 0:
        return PowerSeries([comb(m, k) * alpha ** (m - k) * beta ** k for k in range(min(m, order) + 1)], 0, order)
    if alpha == 0:
        raise DivisionByZero("binomial series with vanishing constant")
    ratio = -beta / alpha
    n = -m
    head = alpha ** m
    return PowerSeries([head * comb(n + k - 1, k) * ratio ** k for k in range(order + 1)], 0, order)


# ---------------------------------------------------------------------------
# rational functions in w


def _clean(factors: Mapping[Key, int]) -> dict[Key, int]:
    return {k: v for k, v in factors.items() if v}


@dataclass(frozen=True)
class RationalFn:
    """const * w^wpow * prod_k (1 - x^k w)^mult_k with k = (a, b) keys."""
    const: Fraction = Fraction(1)
    wpow: int = 0
    factors: tuple = ()

    @staticmethod
    def make(const=1, wpow: int = 0, factors: Mapping[Key, int] | None = None) -> "RationalFn":
        f = _clean(factors or {})
        return RationalFn(Fraction(const), int(wpow), tuple(sorted(f.items())))

    @staticmethod
    def one() -> "RationalFn":
        return RationalFn.make()

    @staticmethod
    def linear(k: Key, mult: int = 1) -> "RationalFn":
        return RationalFn.make(1, 0, {key(*k): mult})

    @property
    def fdict(self) -> dict[Key, int]:
        return dict(self.factors)

    def __mul__(self, other: "RationalFn") -> "RationalFn":
        if not isinstance(other, RationalFn):
            return RationalFn.make(self.const * Fraction(other), self.wpow, self.fdict)
        f = self.fdict
        for k, v in other.factors:
            f[k] = f.get(k, 0) + v
        return RationalFn.make(self.const * other.const, self.wpow + other.wpow, f)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RationalFn":
        if n < 0 and self.const == 0:
            raise DivisionByZero("zero rational function inverted")
        return RationalFn.make(self.const ** n, self.wpow * n, {k: v * n for k, v in self.factors})

    def inverse(self) -> "RationalFn":
        return self ** -1

    def __truediv__(self, other: "RationalFn") -> "RationalFn":
        return self * other.inverse()

    def shift(self, s, p: ParamPoint) -> "RationalFn":
        """R(x^s w) for integer or half-integer s."""
        s = Fraction(s)
        return RationalFn.make(self.const * p.xpow(s * self.wpow), self.wpow,
                               {(a, b + s): v for (a, b), v in self.factors})

    def shift_key(self, k: Key, p: ParamPoint) -> "RationalFn":
        """R(x^(a r + b) w)."""
        a, b = k
        return RationalFn.make(self.const * p.xr(a * self.wpow, b * self.wpow), self.wpow,
                               {(ka + a, kb + b): v for (ka, kb), v in self.factors})

    def reflect(self, p: ParamPoint) -> "RationalFn":
        """R(1/w) rewritten as a rational function of w."""
        const = self.const
        wpow = -self.wpow
        f: dict[Key, int] = {}
        for k, v in self.factors:
            # (1 - X/w)^v = (-X)^v w^-v (1 - w/X)^v
            const *= (-key_value(k, p)) ** v
            wpow -= v
            nk = key_neg(k)
            f[nk] = f.get(nk, 0) + v
        return RationalFn.make(const, wpow, f)

    def poles(self) -> dict[Key, int]:
        return {k: -v for k, v in self.factors if v < 0}

    def evaluate(self, wval, p: ParamPoint) -> Fraction:
        wval = Fraction(wval)
        if wval == 0 and self.wpow < 0:
            raise DeltaPole("pole at w = 0")
        num, den = self.const * wval ** self.wpow if self.wpow >= 0 else self.const, Fraction(1)
        if self.wpow < 0:
            den *= wval ** (-self.wpow)
        for k, v in self.factors:
            val = 1 - key_value(k, p) * wval
            if val == 0:
                if v < 0:
                    raise DeltaPole(f"pole of factor {k} at w = {wval}")
                return Fraction(0)
            if v > 0:
                num *= val ** v
            else:
                den *= val ** (-v)
        return num / den

    def at_key(self, k: Key, p: ParamPoint) -> Fraction:
        """Value at w = x^(a r + b)."""
        return self.evaluate(key_value(k, p), p)

    def expand_inside(self, p: ParamPoint, order: int) -> PowerSeries:
        """Expansion in ascending powers of w (valid near w = 0)."""
        rel = order - self.wpow
        out = PowerSeries([self.const], 0, rel)
        for k, v in self.factors:
            out = out * binomial_series(1, -key_value(k, p), v, rel)
        return out.shift(self.wpow)

    def expand_outside(self, p: ParamPoint, order: int) -> PowerSeries:
        """Expansion near w = infinity, returned as a series in v = 1/w."""
        return self.reflect(p).expand_inside(p, order)

    def __str__(self):
        fs = " ".join(f"(1-x^({a}r{b:+})w)^{v}" for (a, b), v in self.factors)
        return f"{self.const} w^{self.wpow} {fs}".strip()


def delta_rational(p: ParamPoint | None = None, s=0) -> RationalFn:
    """Delta(x^s w) = (1-x^(2r-1+s)w)(1-x^(-2r+1+s)w)/((1-x^(1+s)w)(1-x^(s-1)w))."""
    s = Fraction(s)
    return RationalFn.make(1, 0, {(2, s - 1): 1, (-2, s + 1): 1, (0, s + 1): -1, (0, s - 1): -1})


def delta_product(shifts: Iterable) -> RationalFn:
    out = RationalFn.one()
    for s in shifts:
        out = out * delta_rational(None, s)
    return out


def delta_at(s, p: ParamPoint) -> Fraction:
    """The scalar Delta(x^s)."""
    return delta_rational(None, s).evaluate(1, p)


# ---------------------------------------------------------------------------
# delta distributions


def delta_coeff(k: int, n: int) -> Fraction:
    """Coefficient of y^n in the two-sided difference of (1-y)^-k expansions."""
    num = 1
    for i in range(1, k):
        num *= n + i
    return Fraction(num, factorial(k - 1))


@dataclass
class DeltaSum:
    """sum of weight * E_order(x^key w); E_1 is the formal delta."""
    terms: dict = field(default_factory=dict)  # (key, order) -> Fraction

    def add(self, k: Key, order: int, weight) -> None:
        idx = (key(*k), order)
        v = self.terms.get(idx, Fraction(0)) + Fraction(weight)
        if v:
            self.terms[idx] = v
        else:
            self.terms.pop(idx, None)

    def __iadd__(self, other: "DeltaSum"):
        for (k, o), w in other.terms.items():
            self.add(k, o, w)
        return self

    def scaled(self, c) -> "DeltaSum":
        return DeltaSum({i: w * c for i, w in self.terms.items() if w * c})

    def max_order(self) -> int:
        return max((o for (_, o) in self.terms), default=0)

    def first_order(self) -> dict[Key, Fraction]:
        return {k: w for (k, o), w in self.terms.items() if o == 1}

    def require_simple(self) -> dict[Key, Fraction]:
        bad = [(k, o) for (k, o) in self.terms if o > 1]
        if bad:
            raise HigherOrderPole(f"higher-order delta terms survive: {sorted(bad)}")
        return self.first_order()

    def coefficient(self, n: int, p: ParamPoint) -> Fraction:
        """Coefficient of w^n of the distribution."""
        return sum((w * delta_coeff(o, n) * key_value(k, p) ** n for (k, o), w in self.terms.items()),
                   Fraction(0))

    def __eq__(self, other):
        return isinstance(other, DeltaSum) and self.terms == other.terms


def laurent_at(R: RationalFn, pole: Key, p: ParamPoint, upto: int = 0) -> dict[int, Fraction]:
    """Coefficients of y^k, k <= upto, of R around w = 1/X where y = 1 - X w."""
    f = R.fdict
    m = f.get(pole, 0)
    X = key_value(pole, p)
    depth = upto - m
    if depth < 0:
        return {}
    # w = (1 - y)/X ; R = y^m h(y)
    h = PowerSeries([R.const * X ** (-R.wpow)], 0, depth)
    h = h * binomial_series(1, -1, R.wpow, depth)
    for k, v in f.items():
        if k == pole:
            continue
        rho = key_value(k, p) / X
        if rho == 1:
            raise DivisionByZero(f"factor keys {k} and {pole} coincide at this point")
        h = h * binomial_series(1 - rho, rho, v, depth)
    return {n + m: h[n] for n in range(depth + 1)}


def principal_parts(R: RationalFn, pole: Key, p: ParamPoint) -> list[Fraction]:
    """Coefficients c_1..c_n with R = sum c_k (1 - X w)^-k + (regular at w = 1/X)."""
    n = -R.fdict.get(pole, 0)
    if n <= 0:
        return []
    co = laurent_at(R, pole, p, -1)
    return [co[-k] for k in range(1, n + 1)]


def expansion_difference(R: RationalFn, p: ParamPoint, allow_higher: bool = True) -> DeltaSum:
    """Inside minus outside expansion of R as a sum of delta-type distributions."""
    out = DeltaSum()
    for pole in R.poles():
        for order, c in enumerate(principal_parts(R, pole, p), start=1):
            if c:
                if order > 1 and not allow_higher:
                    raise HigherOrderPole(f"pole of order {order} at key {pole}")
                out.add(pole, order, c)
    return out


def two_sided_difference(R: RationalFn, p: ParamPoint, window: int) -> dict[int, Fraction]:
    """Coefficientwise inside - outside on exponents in [-window, window]."""
    ins = R.expand_inside(p, window)
    outs = R.expand_outside(p, window)
    res = {}
    for n in range(-window, window + 1):
        a = ins[n] if n >= ins.val else Fraction(0)
        b = outs[-n] if -n >= outs.val else Fraction(0)
        if a - b:
            res[n] = a - b
    return res


# ---------------------------------------------------------------------------
# structure functions


def f_log_coeff(i: int, j: int, m: int, p: ParamPoint) -> Fraction:
    """Coefficient of w^m in log f_{i,j}(w)."""
    lo, hi = min(i, j), max(i, j)
    if lo == 0:
        return Fraction(0)
    N = p.N
    x = p.x
    den = q_int(m, p) * (q_int((N + 1) * m, p) - q_int(N * m, p))
    if den == 0:
        raise DivisionByZero(f"f-series denominator vanishes at m={m}")
    num = q_int(lo * m, p) * (q_int((N + 1 - hi) * m, p) - q_int((N - hi) * m, p))
    pref = q_int(-m, p, m) * q_int(0, p, m) * (x - 1 / x) ** 2
    return -pref * num / (den * m)


def f_log_series(i: int, j: int, p: ParamPoint, order: int | None = None) -> PowerSeries:
    order = p.z_order if order is None else order
    return PowerSeries([0] + [f_log_coeff(i, j, m, p) for m in range(1, order + 1)], 0, order)


_F_CACHE: dict = {}


def f_series(i: int, j: int, p: ParamPoint, order: int | None = None) -> PowerSeries:
    """f_{i,j}(w) truncated at the given order (default z_order)."""
    order = p.z_order if order is None else order
    ck = (min(i, j), max(i, j), p.u, p.t, p.N, order)
    if ck not in _F_CACHE:
        _F_CACHE[ck] = f_log_series(i, j, p, order).exp()
    return _F_CACHE[ck]


# ---------------------------------------------------------------------------
# q-Pochhammer symbols and theta functions with exact coefficients


def qpoch_finite(a: Fraction, p: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for k in range(n):
        out *= 1 - a * p ** k
    return out


def pochhammer_series(a, pq, order: int, power: int = 1) -> PowerSeries:
    """(a w; p)_inf^power as a series in w (power = +1 or -1), exact coefficients.

    Uses the q-binomial sums (a w;p) = sum (-1)^n p^C(n,2) a^n w^n / (p;p)_n and
    1/(a w;p) = sum a^n w^n / (p;p)_n.
    """
    a, pq = Fraction(a), Fraction(pq)
    cs = []
    for n in range(order + 1):
        den = qpoch_finite(pq, pq, n)
        if den == 0:
            raise DivisionByZero("(p;p)_n vanishes")
        if power == 1:
            cs.append((-1) ** n * pq ** comb(n, 2) * a ** n / den)
        elif power == -1:
            cs.append(a ** n / den)
        else:
            raise ValueError("power must be +1 or -1")
    return PowerSeries(cs, 0, order)


def pochhammer_log_series(a, pq, order: int) -> PowerSeries:
    """log (a w; p)_inf = -sum a^m w^m / (m (1 - p^m))."""
    a, pq = Fraction(a), Fraction(pq)
    return PowerSeries([0] + [-a ** m / (m * (1 - pq ** m)) for m in range(1, order + 1)], 0, order)


def theta_triple_product(order: int) -> dict[tuple[int, int], int]:
    """(p;p)(w;p)(p/w;p) with p and w formal, truncated at p^order.

    Keys are (power of p, power of w).
    """
    poly: dict[tuple[int, int], int] = {(0, 0): 1}

    def times(poly, dp, dw):
        out: dict[tuple[int, int], int] = {}
        for (a, b), c in poly.items():
            out[(a, b)] = out.get((a, b), 0) + c
            if a + dp <= order:
                out[(a + dp, b + dw)] = out.get((a + dp, b + dw), 0) - c
        return {k: v for k, v in out.items() if v}

    poly = times(poly, 0, 1)  # (1 - w)
    for k in range(1, order + 1):
        poly = times(poly, k, 0)
        poly = times(poly, k, 1)
        poly = times(poly, k, -1)
    return poly


def theta_sum(order: int) -> dict[tuple[int, int], int]:
    """sum_n (-1)^n p^C(n,2) w^n truncated at p^order."""
    out = {}
    n = 0
    while True:
        hit = False
        for m in {n, -n + 1}:
            e = m * (m - 1) // 2
            if e <= order:
                out[(e, m)] = (-1) ** (m % 2)
                hit = True
        if not hit:
            break
        n += 1
    return out
