"""Exact coefficient field, parameter points, q-integers and the matrices B(m), I(m).

All scalars are ``fractions.Fraction``.  The deformation parameters are never
numbers: a point carries u (with x = u^2) and an independent sample t standing
for x^r.  A power x^(a*r + b) is evaluated as t^a * x^b, with half-integer b
handled through u.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Rat = Fraction

# u, t pairs used when no seed is given; the first three are the documented defaults.
DEFAULT_SEEDS: tuple[tuple[Fraction, Fraction], ...] = (
    (Fraction(2, 3), Fraction(1, 5)),
    (Fraction(3, 5), Fraction(2, 7)),
    (Fraction(5, 7), Fraction(3, 11)),
)


class DivisionByZero(ZeroDivisionError):
    """A denominator vanished at the sampled point; the caller should resample."""


class SingularMatrix(DivisionByZero):
    pass


class InvalidParamPoint(ValueError):
    pass


def _half(n) -> Fraction:
    q = Fraction(n)
    if (2 * q).denominator != 1:
        raise ValueError(f"exponent {n} is not a half-integer")
    return q


@dataclass(frozen=True)
class ParamPoint:
    u: Fraction
    t: Fraction
    N: int
    z_order: int = 30
    mode_order: int = 12

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "t", Fraction(self.t))
        if self.N < 1:
            raise InvalidParamPoint("rank N must be positive")
        if self.z_order < 1 or self.mode_order < 1:
            raise InvalidParamPoint("truncation orders must be positive")
        if self.u in (0, 1, -1):
            raise InvalidParamPoint("u must avoid 0 and +-1")
        if self.t in (0, 1, -1):
            raise InvalidParamPoint("t must avoid 0 and +-1")
        if self.u * self.u == self.t:
            raise InvalidParamPoint("x = t would make [r-1]_x vanish")

    @property
    def x(self) -> Fraction:
        return self.u * self.u

    def xpow(self, b) -> Fraction:
        """x^b for integer or half-integer b."""
        return _upow(self.u, int(2 * _half(b)))

    def xr(self, a: int, b=0) -> Fraction:
        """x^(a*r + b)."""
        return _upow(self.t, int(a)) * self.xpow(b)

    def with_orders(self, z_order: int | None = None, mode_order: int | None = None) -> "ParamPoint":
        return ParamPoint(self.u, self.t, self.N,
                          self.z_order if z_order is None else z_order,
                          self.mode_order if mode_order is None else mode_order)

    def label(self) -> str:
        return f"u={self.u},t={self.t},N={self.N}"

    def as_dict(self) -> dict:
        return {"u": str(self.u), "t": str(self.t), "N": self.N,
                "z_order": self.z_order, "mode_order": self.mode_order}


@lru_cache(maxsize=None)
def _upow(base: Fraction, k: int) -> Fraction:
    return base ** k


def q_int(n, p: ParamPoint, r_coeff: int = 0) -> Fraction:
    """[r_coeff*r + n]_x = (X - 1/X)/(x - 1/x) with X = x^(r_coeff*r + n).

    ``n`` may be a half-integer.  With r_coeff = 0 this is the plain q-integer.
    """
    return _q_int(_half(n), p.u, p.t, int(r_coeff))


@lru_cache(maxsize=None)
def _q_int(n: Fraction, u: Fraction, t: Fraction, a: int) -> Fraction:
    x = u * u
    den = x - 1 / x
    if den == 0:
        raise DivisionByZero("x - 1/x vanishes")
    X = t ** a * u ** int(2 * n)
    return (X - 1 / X) / den


def c_const(p: ParamPoint) -> Fraction:
    """c(x, r) = [r]_x [r-1]_x (x - 1/x)."""
    x = p.x
    return q_int(0, p, 1) * q_int(-1, p, 1) * (x - 1 / x)


def kappa(p: ParamPoint) -> Fraction:
    """[r - 1/2]_x / [1/2]_x, the scalar attached to the middle label 0."""
    return q_int(Fraction(-1, 2), p, 1) / q_int(Fraction(1, 2), p)


Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class TwistedB:
    m: int
    N: int
    entries: Matrix

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i - 1][j - 1]


def b_matrix(m: int, p: ParamPoint) -> TwistedB:
    return _b_matrix(m, p.u, p.t, p.N)


@lru_cache(maxsize=None)
def _b_matrix(m: int, u: Fraction, t: Fraction, N: int) -> TwistedB:
    p = ParamPoint(u, t, N)
    rows = []
    if m == 0:
        diag, last = Fraction(2), Fraction(1)
    else:
        qm = q_int(m, p)
        if qm == 0:
            raise DivisionByZero(f"[{m}]_x vanishes")
        q2m = q_int(2 * m, p)
        diag, last = q2m / qm, (q2m - qm) / qm
    for i in range(1, N + 1):
        row = []
        for j in range(1, N + 1):
            if i == j:
                row.append(last if i == N else diag)
            elif abs(i - j) == 1:
                row.append(Fraction(-1))
            else:
                row.append(Fraction(0))
        rows.append(tuple(row))
    return TwistedB(m, N, tuple(rows))


def i_matrix(m: int, p: ParamPoint) -> Matrix:
    """Inverse of B(m) from its closed form (m != 0); m = 0 inverts B(0) exactly."""
    return _i_matrix(m, p.u, p.t, p.N)


@lru_cache(maxsize=None)
def _i_matrix(m: int, u: Fraction, t: Fraction, N: int) -> Matrix:
    p = ParamPoint(u, t, N)
    if m == 0:
        return invert(b_matrix(0, p).entries)

    def q(k):
        return q_int(k * m, p)

    den = q(N + 1) - q(N)
    if den == 0:
        raise SingularMatrix(f"[(N+1)m]_x - [Nm]_x vanishes at m={m}")
    out = [[Fraction(0)] * N for _ in range(N)]
    for i in range(1, N + 1):
        for j in range(i, N + 1):
            if j == N:
                val = q(i)
            elif i == 1:
                val = q(N + 1 - j) - q(N - j)
            else:
                sign = -1 if (N - j + i) % 2 else 1
                val = sign * sum(((-1) ** k) * q(k) for k in range(i - 1, N - j + i + 1))
            out[i - 1][j - 1] = out[j - 1][i - 1] = val / den
    return tuple(tuple(r) for r in out)


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    return tuple(tuple(sum((a[i][l] * b[l][j] for l in range(k)), Fraction(0)) for j in range(m))
                 for i in range(n))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def invert(a: Sequence[Sequence[Fraction]]) -> Matrix:
    """Gauss-Jordan inverse over the rationals."""
    n = len(a)
    work = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv = 1 / work[col][col]
        work[col] = [v * inv for v in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [vr - f * vc for vr, vc in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def parse_rat(text: str) -> Fraction:
    return Fraction(text.strip())


def parse_seed(text: str) -> tuple[Fraction, Fraction]:
    """Parse 'u/t' where u and t are rationals, e.g. '2/3,1/5' or '2/3:1/5'."""
    for sep in (",", ":", ";", " "):
        if sep in text:
            a, b = text.split(sep, 1)
            return parse_rat(a), parse_rat(b)
    raise ValueError(f"seed {text!r} must look like 'u,t' (for example '2/3,1/5')")


def probe(p: ParamPoint) -> None:
    """Evaluate every denominator a run at p can hit; raises DivisionByZero on failure."""
    top = max(p.z_order, p.mode_order) + 2 * p.N + 2
    for m in range(1, top + 1):
        for a in (0, 1):
            for b in range(-2 * p.N - 2, 2 * p.N + 3):
                if a == 0 and b == 0:
                    continue
                if p.xr(a, b) ** (2 * m) == 1:
                    raise DivisionByZero(f"x^({a}r+{b}) is a root of unity")
        i_matrix(m, p)
        b_matrix(m, p)
    if q_int(Fraction(1, 2), p) == 0 or q_int(Fraction(-1, 2), p, 1) == 0:
        raise DivisionByZero("[1/2]_x or [r-1/2]_x vanishes")
    # Distinct pole keys must give distinct points.
    seen: dict[Fraction, tuple[int, int]] = {}
    for a in range(-3, 4):
        for b in range(-6 * p.N - 8, 6 * p.N + 9):
            v = p.xr(a, b)
            if v in seen:
                raise DivisionByZero(f"x^({a}r+{b}) collides with x^{seen[v]}")
            seen[v] = (a, b)


def fallback_seeds(seed: int = 0) -> Iterable[tuple[Fraction, Fraction]]:
    rng = random.Random(seed)
    while True:
        u = Fraction(rng.randint(2, 9), rng.randint(10, 19))
        t = Fraction(rng.randint(1, 9), rng.randint(10, 29))
        yield u, t


def param_points(N: int, seeds: Sequence[tuple[Fraction, Fraction]] | None = None,
                 count: int | None = None, z_order: int = 30, mode_order: int = 12) -> list[ParamPoint]:
    """Validated points for rank N.

    Seeds that violate the invariants or hit a vanishing denominator are replaced
    by the next deterministic fallback seed, never skipped silently.
    """
    seeds = list(DEFAULT_SEEDS if seeds is None else seeds)
    count = len(seeds) if count is None else count
    backup = fallback_seeds(N)
    out: list[ParamPoint] = []
    queue = list(seeds)
    while len(out) < count:
        u, t = queue.pop(0) if queue else next(backup)
        try:
            p = ParamPoint(u, t, N, z_order, mode_order)
            probe(p)
        except (InvalidParamPoint, DivisionByZero):
            continue
        if p not in out:
            out.append(p)
    return out
