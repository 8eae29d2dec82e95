"""Brute-force oracle on a truncated Fock space.

States are monomials prod a_j(-m)|0> with total degree <= D, written as sorted
tuples of (j, m).  The basis is not orthonormal; nothing here needs an inner
product beyond reading off the vacuum component.  Zero modes act trivially in
the sector lambda = 0, so every vertex operator is its prefactor times
exp(creation part) exp(annihilation part).

The mode V[n] of a single vertex operator is exact on the truncated space.
Products of matrices are exact between states of degree <= D - B where B bounds
how far an intermediate state can rise above the initial one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from .coeff import ParamPoint, c_const
from .currents import build_T, duality_constant, monomial_operator
from .heisenberg import VertexOperator, contraction, kernel
from .report import CheckResult
from .series import PowerSeries, delta_at, f_series

State = tuple  # sorted tuple of (j, m)
Vector = dict  # State -> Fraction


class WindowTooSmall(ValueError):
    pass


# ---------------------------------------------------------------------------
# basis


def degree(s: State) -> int:
    return sum(m for _, m in s)


@lru_cache(maxsize=None)
def _rest(n: int, m: int, j: int, N: int) -> tuple:
    """Multisets of total n whose parts are <= (m, j) in (m, j) order."""
    if n == 0:
        return ((),)
    out = []
    for m2 in range(min(n, m), 0, -1):
        for j2 in range(N, 0, -1):
            if (m2, j2) > (m, j):
                continue
            for rest in _rest(n - m2, m2, j2, N):
                out.append(((j2, m2),) + rest)
    return tuple(out)


@dataclass(frozen=True)
class FockBasis:
    N: int
    D: int
    states: tuple

    @staticmethod
    def build(N: int, D: int) -> "FockBasis":
        sts = []
        for d in range(D + 1):
            level = sorted({tuple(sorted(s)) for s in _rest(d, d, N, N)})
            sts.extend(level)
        return FockBasis(N, D, tuple(sts))

    def count(self, d: int) -> int:
        return sum(1 for s in self.states if degree(s) == d)

    def window(self, B: int) -> list:
        return [s for s in self.states if degree(s) <= self.D - B]


def colored_partition_counts(N: int, D: int) -> list[int]:
    """Coefficients of prod_m (1 - q^m)^-N up to q^D."""
    out = PowerSeries.one(D)
    for m in range(1, D + 1):
        geo = PowerSeries([1 if k % m == 0 else 0 for k in range(D + 1)], 0, D)
        for _ in range(N):
            out = out * geo
    return [int(out[d]) for d in range(D + 1)]


# ---------------------------------------------------------------------------
# vectors and oscillators


def _vadd(dst: Vector, src: Vector, c=1) -> None:
    for s, v in src.items():
        nv = dst.get(s, Fraction(0)) + c * v
        if nv:
            dst[s] = nv
        else:
            dst.pop(s, None)


@lru_cache(maxsize=None)
def _kernel(i: int, j: int, m: int, p: ParamPoint) -> Fraction:
    return kernel(i, j, m, p)


def annihilate(i: int, m: int, vec: Vector, p: ParamPoint) -> Vector:
    """a_i(m) for m > 0."""
    out: Vector = {}
    for s, c in vec.items():
        seen = set()
        for pos, (j, mm) in enumerate(s):
            if mm != m or (j, mm) in seen:
                continue
            seen.add((j, mm))
            mult = s.count((j, mm))
            k = _kernel(i, j, m, p)
            if not k:
                continue
            rest = s[:pos] + s[pos + 1:]
            out[rest] = out.get(rest, Fraction(0)) + c * mult * k
    return {s: v for s, v in out.items() if v}


def create(i: int, m: int, vec: Vector, D: int) -> Vector:
    """a_i(-m) for m > 0, projected to degree <= D."""
    out: Vector = {}
    for s, c in vec.items():
        if degree(s) + m > D:
            continue
        t = tuple(sorted(s + ((i, m),)))
        out[t] = out.get(t, Fraction(0)) + c
    return out


# ---------------------------------------------------------------------------
# vertex operators on the truncated space


@dataclass
class FockVertex:
    """pref * :poly * exp(sum_m c(m) . a(m) z^-m):, modes |m| <= D.

    ``poly`` maps sorted tuples of (m, j) (each a factor a_j(m) z^-m) to coefficients.
    """
    coeffs: dict  # m -> tuple of N coefficients
    pref: Fraction
    N: int
    D: int
    poly: dict | None = None

    def __post_init__(self):
        self._minus = None
        self._plus: dict = {}

    def _creation_polys(self) -> list:
        """[z^k] exp(sum_m c(-m) a(-m) z^m) as polynomials in creation operators."""
        if self._minus is not None:
            return self._minus
        P = [{(): Fraction(1)}]
        for n in range(1, self.D + 1):
            acc: dict = {}
            for k in range(1, n + 1):
                row = self.coeffs.get(-k)
                if not row:
                    continue
                for j, cj in enumerate(row, start=1):
                    if not cj:
                        continue
                    for mono, v in P[n - k].items():
                        t = tuple(sorted(mono + ((j, k),)))
                        acc[t] = acc.get(t, Fraction(0)) + Fraction(k, n) * cj * v
            P.append({t: v for t, v in acc.items() if v})
        self._minus = P
        return P

    def _annihilation(self, vec: Vector, p: ParamPoint) -> dict[int, Vector]:
        """l -> [z^-l] exp(sum_m c(m) a(m) z^-m) vec, memoized per basis state."""
        out: dict = {}
        for s, c in vec.items():
            if s not in self._plus:
                self._plus[s] = self._annihilation_state(s, p)
            for l, v in self._plus[s].items():
                _vadd(out.setdefault(l, {}), v, c)
        return out

    def _annihilation_state(self, s: State, p: ParamPoint) -> dict[int, Vector]:
        vec = {s: Fraction(1)}
        dmax = max((degree(s) for s in vec), default=0)
        cur = {0: dict(vec)}
        for m in range(1, dmax + 1):
            row = self.coeffs.get(m)
            if not row or not any(row):
                continue
            nxt: dict = {}
            for l, v in cur.items():
                term = v
                k = 0
                while term:
                    _vadd(nxt.setdefault(l + k * m, {}), term)
                    k += 1
                    new: Vector = {}
                    for j, cj in enumerate(row, start=1):
                        if cj:
                            _vadd(new, annihilate(j, m, term, p), cj)
                    term = {s: c / k for s, c in new.items()}
            cur = {l: v for l, v in nxt.items() if v}
        return cur

    def _exp_mode(self, n: int, vec: Vector, p: ParamPoint) -> Vector:
        out: Vector = {}
        P = self._creation_polys()
        for l, v in self._annihilation(vec, p).items():
            k = l - n
            if k < 0 or k > self.D:
                continue
            for mono, c in P[k].items():
                for s, cv in v.items():
                    if degree(s) + k > self.D:
                        continue
                    t = tuple(sorted(s + mono))
                    out[t] = out.get(t, Fraction(0)) + c * cv
        return {s: c for s, c in out.items() if c}

    def mode(self, n: int, vec: Vector, p: ParamPoint) -> Vector:
        """V[n] vec, the coefficient of z^-n."""
        if self.poly is None:
            return {s: c * self.pref for s, c in self._exp_mode(n, vec, p).items()}
        out: Vector = {}
        for mono, coef in self.poly.items():
            sigma = sum(m for m, _ in mono)
            v = dict(vec)
            for m, j in mono:
                if m > 0:
                    v = annihilate(j, m, v, p)
            v = self._exp_mode(n - sigma, v, p)
            for m, j in mono:
                if m < 0:
                    v = create(j, -m, v, self.D)
            _vadd(out, v, coef * self.pref)
        return out


def vertex_from_operator(op: VertexOperator, p: ParamPoint, D: int, scale=1) -> FockVertex:
    coeffs = {m: op.mode(m, p) for m in range(-D, D + 1) if m}
    return FockVertex(coeffs, op.prefactor * Fraction(scale), p.N, D)


def vertex_from_fingerprint(fp: tuple, poly: dict, p: ParamPoint, D: int, M: int) -> FockVertex:
    """Pinned class (exponential content plus polynomial) as a Fock operator."""
    ms = [m for m in range(-M, M + 1) if m]
    if D > M:
        raise WindowTooSmall("fingerprints are shorter than the Fock depth")
    rows = fp[0]
    coeffs = {ms[idx]: rows[idx] for idx in range(len(ms)) if abs(ms[idx]) <= D}
    pol = {}
    for mono, c in poly.items():
        pol[tuple(sorted((ms[idx], j + 1) for idx, j in mono))] = c
    return FockVertex(coeffs, Fraction(1), p.N, D, pol)


# ---------------------------------------------------------------------------
# operators as column maps


class FockMatrix:
    def __init__(self, basis: FockBasis, cols: dict | None = None):
        self.basis = basis
        self.cols = cols or {}

    @staticmethod
    def from_map(basis: FockBasis, fn: Callable[[Vector], Vector], states: Iterable | None = None) -> "FockMatrix":
        cols = {}
        for s in (basis.states if states is None else states):
            v = fn({s: Fraction(1)})
            if v:
                cols[s] = v
        return FockMatrix(basis, cols)

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        for s, c in vec.items():
            col = self.cols.get(s)
            if col:
                _vadd(out, col, c)
        return out

    def __matmul__(self, other: "FockMatrix") -> "FockMatrix":
        return FockMatrix(self.basis, {s: v for s, col in other.cols.items() if (v := self.apply(col))})

    def __add__(self, other: "FockMatrix") -> "FockMatrix":
        cols = {s: dict(c) for s, c in self.cols.items()}
        for s, col in other.cols.items():
            _vadd(cols.setdefault(s, {}), col)
        return FockMatrix(self.basis, {s: c for s, c in cols.items() if c})

    def scaled(self, c) -> "FockMatrix":
        c = Fraction(c)
        if not c:
            return FockMatrix(self.basis)
        return FockMatrix(self.basis, {s: {t: v * c for t, v in col.items()} for s, col in self.cols.items()})

    def __sub__(self, other: "FockMatrix") -> "FockMatrix":
        return self + other.scaled(-1)

    def restricted(self, states: Iterable) -> dict:
        """Entries whose column and row both lie in the given states."""
        keep = set(states)
        return {(t, s): v for s, col in self.cols.items() if s in keep for t, v in col.items() if t in keep}

    def entry(self, row: State, col: State) -> Fraction:
        return self.cols.get(col, {}).get(row, Fraction(0))

    def dump(self) -> str:
        """Sparse text: row-index col-index numerator denominator, one entry per line."""
        idx = {s: k for k, s in enumerate(self.basis.states)}
        lines = []
        for s in sorted(self.cols, key=idx.get):
            for t in sorted(self.cols[s], key=idx.get):
                v = self.cols[s][t]
                lines.append(f"{idx[t]} {idx[s]} {v.numerator} {v.denominator}")
        return "\n".join(lines) + ("\n" if lines else "")


def identity(basis: FockBasis, states: Iterable | None = None) -> FockMatrix:
    return FockMatrix(basis, {s: {s: Fraction(1)} for s in (basis.states if states is None else states)})


def dump_basis(basis: FockBasis) -> str:
    return "\n".join(f"{k} " + " ".join(f"a{j}(-{m})" for j, m in s) for k, s in enumerate(basis.states)) + "\n"


# ---------------------------------------------------------------------------
# currents


class Oracle:
    """Mode matrices of Lambda's and T's on one truncated Fock space."""

    def __init__(self, p: ParamPoint, D: int):
        self.p = p
        self.basis = FockBasis.build(p.N, D)
        self.D = D
        self._cache: dict = {}

    def _vertex_list(self, i: int, d_override=None) -> list:
        ck = ("T", i, d_override is not None)
        if ck not in self._cache or d_override is not None:
            T = build_T(i, self.p, d_override)
            vs = [vertex_from_operator(monomial_operator(m.entries, self.p), self.p, self.D, m.d) for m in T.terms]
            if d_override is not None:
                return vs
            self._cache[ck] = vs
        return self._cache[ck]

    def lambda_mode(self, s: int, n: int) -> FockMatrix:
        from .currents import build_lambdas
        ck = ("L", s, n)
        if ck not in self._cache:
            v = vertex_from_operator(build_lambdas(self.p)[s], self.p, self.D)
            self._cache[ck] = FockMatrix.from_map(self.basis, lambda vec: v.mode(n, vec, self.p))
        return self._cache[ck]

    def t_mode(self, i: int, n: int, d_override=None) -> FockMatrix:
        ck = ("TM", i, n)
        if d_override is None and ck in self._cache:
            return self._cache[ck]
        vs = self._vertex_list(i, d_override)

        def fn(vec):
            out: Vector = {}
            for v in vs:
                _vadd(out, v.mode(n, vec, self.p))
            return out

        mat = FockMatrix.from_map(self.basis, fn)
        if d_override is None:
            self._cache[ck] = mat
        return mat

    def support_mode(self, cls: dict, n: int) -> FockMatrix:
        """O[n] for one support's classes {fp: poly}; cached by identity of the dict."""
        p = self.p
        ck = ("C", id(cls), n)
        if ck not in self._cache:
            vk = ("CV", id(cls))
            if vk not in self._cache:
                # keep cls alive so its id stays unique while cached
                self._cache[vk] = (cls, [vertex_from_fingerprint(fp, poly, p, self.D, p.mode_order)
                                         for fp, poly in cls.items()])
            vs = self._cache[vk][1]

            def fn(vec):
                out: Vector = {}
                for v in vs:
                    _vadd(out, v.mode(n, vec, p))
                return out

            self._cache[ck] = FockMatrix.from_map(self.basis, fn)
        return self._cache[ck]

    def classes_mode(self, classes: dict, m1: int, m2: int) -> FockMatrix:
        """sum_s x^(s m1) O_s[m1 + m2] for pinned classes {key(0, s): {fp: poly}}."""
        total = FockMatrix(self.basis)
        for k, cls in classes.items():
            total = total + self.support_mode(cls, m1 + m2).scaled(self.p.xpow(k[1] * m1))
        return total


# ---------------------------------------------------------------------------
# checks


def _compare(name: str, A: FockMatrix, B: FockMatrix, window: list) -> CheckResult:
    a, b = A.restricted(window), B.restricted(window)
    keys = set(a) | set(b)
    bad = [k for k in keys if a.get(k, 0) != b.get(k, 0)]
    if bad:
        r, c = sorted(bad)[0]
        return CheckResult(name, False, f"{len(bad)} entries differ, e.g. <{r}|..|{c}>: {a.get((r, c), 0)} vs "
                                        f"{b.get((r, c), 0)}", "WeightMismatch")
    return CheckResult(name, True, f"{len(keys)} nonzero entries on {len(window)} states")


def verify_basis_counts(N: int, D: int) -> CheckResult:
    b = FockBasis.build(N, D)
    got = [b.count(d) for d in range(D + 1)]
    want = colored_partition_counts(N, D)
    return CheckResult(f"Fock basis counts (N={N},D={D})", got == want, f"{got} vs {want}")


def verify_oscillator_commutator(o: Oracle, m: int) -> list[CheckResult]:
    """[a_i(m), a_j(-m)] acts as kernel(i, j, m) on states of degree <= D - m."""
    p, basis = o.p, o.basis
    win = basis.window(m)
    out = []
    for i in range(1, p.N + 1):
        for j in range(1, p.N + 1):
            def comm(vec, i=i, j=j):
                a = annihilate(i, m, create(j, m, vec, o.D), p)
                b = create(j, m, annihilate(i, m, vec, p), o.D)
                _vadd(a, b, -1)
                return a

            M = FockMatrix.from_map(basis, comm, win)
            out.append(_compare(f"oscillator commutator (i={i},j={j},m={m})", M,
                                identity(basis, win).scaled(kernel(i, j, m, p)), win))
    return out


def verify_vacuum_two_point(o: Oracle, i: int, j: int, n: int) -> CheckResult:
    """<0|T_i[n] T_j[-n]|0> against the w^n coefficient of the contraction engine."""
    p = o.p
    if n > o.D:
        raise WindowTooSmall("mode exceeds the Fock depth")
    v = o.t_mode(j, -n).apply({(): Fraction(1)})
    got = o.t_mode(i, n).apply(v).get((), Fraction(0))
    want = Fraction(0)
    Ti, Tj = build_T(i, p), build_T(j, p)
    for A in Ti.terms:
        opA = monomial_operator(A.entries, p)
        for B in Tj.terms:
            opB = monomial_operator(B.entries, p)
            c = contraction(opA, opB, p, n)
            want += A.weight * B.weight * c.series()[n] * c.xexp.x_value(p)
    name = f"vacuum two-point (i={i},j={j},n={n})"
    return CheckResult(name, got == want, "" if got == want else f"{got} vs {want}", "" if got == want else "WeightMismatch")


def verify_duality_matrices(o: Oracle, i: int, n: int) -> CheckResult:
    N = o.p.N
    A = o.t_mode(2 * N + 1 - i, n)
    B = o.t_mode(i, n).scaled(duality_constant(i, o.p))
    win = list(o.basis.states)
    return _compare(f"duality as matrices (i={i},n={n})", A, B, win)


def verify_top_current(o: Oracle, n: int) -> CheckResult:
    """T_{2N+1} is the constant duality_constant(0) times the identity."""
    N = o.p.N
    A = o.t_mode(2 * N + 1, n)
    B = identity(o.basis).scaled(duality_constant(0, o.p)) if n == 0 else FockMatrix(o.basis)
    return _compare(f"top current collapse (n={n})", A, B, list(o.basis.states))


def lhs_modes(o: Oracle, i: int, j: int, m1: int, m2: int, window: list,
              f_perturb: Callable[[int, Fraction], Fraction] | None = None) -> FockMatrix:
    """Coefficient of z1^-m1 z2^-m2 in f_{i,j}(z2/z1) T_i(z1) T_j(z2) - f_{j,i}(z1/z2) T_j(z2) T_i(z1)."""
    p = o.p
    dmax = max((degree(s) for s in window), default=0)
    lmax = dmax + abs(m1) + abs(m2) + 1
    fij = f_series(i, j, p, lmax)
    fji = f_series(j, i, p, lmax)
    total = FockMatrix(o.basis)
    for l in range(lmax + 1):
        c1, c2 = fij[l], fji[l]
        if f_perturb is not None:
            c1 = f_perturb(l, c1)
        if c1 and m2 + l <= dmax:
            total = total + (o.t_mode(i, m1 - l) @ _restrict(o.t_mode(j, m2 + l), window)).scaled(c1)
        if c2 and m1 + l <= dmax:
            total = total - (o.t_mode(j, m2 - l) @ _restrict(o.t_mode(i, m1 + l), window)).scaled(c2)
    return total


def _restrict(M: FockMatrix, window: list) -> FockMatrix:
    keep = set(window)
    return FockMatrix(M.basis, {s: c for s, c in M.cols.items() if s in keep})


def oracle_window(o: Oracle, m1: int, m2: int) -> list:
    B = max(0, -m1, -m2, -(m1 + m2))
    win = o.basis.window(B)
    if not win:
        raise WindowTooSmall(f"no reliable states for modes ({m1},{m2}) at depth {o.D}")
    return win


def oracle_check_quadratic(o: Oracle, i: int, j: int, m1: int, m2: int, classes: dict,
                           name: str, f_perturb=None) -> CheckResult:
    win = oracle_window(o, m1, m2)
    lhs = lhs_modes(o, i, j, m1, m2, win, f_perturb)
    rhs = o.classes_mode(classes, m1, m2)
    return _compare(name, _restrict(lhs, win), _restrict(rhs, win), win)


def verify_mode_recursion(o: Oracle, j: int, m: int, k: int) -> CheckResult:
    """The i = 1 relation in modes, solved for T_{j+1}[m] with auxiliary index k."""
    p = o.p
    N = p.N
    x = p.xpow
    win = oracle_window(o, k, m - k)
    win = [s for s in win if degree(s) <= o.D - max(0, -m, -k, k - m)]
    if not win:
        raise WindowTooSmall("empty window")
    lhs = o.t_mode(j + 1, m).scaled(x(-(j + 1) * k + m) - x((j + 1) * k - m))
    rhs = o.t_mode(j - 1, m).scaled(delta_at(2 * N + 2 - 2 * j, p) * (x((2 * N - j + 2) * k - m)
                                                                      - x((-2 * N + j - 2) * k + m)))
    # c^-1 sum_l (f1j^l T_1[k-l] T_j[l-k+m] - fj1^l T_j[k-l-m] T_1[l-k])
    quad = lhs_modes(o, 1, j, k, m - k, win)
    rhs = rhs + quad.scaled(1 / c_const(p))
    return _compare(f"mode recursion (j={j},m={m},k={k})", _restrict(lhs, win), _restrict(rhs, win), win)


def verify_lambda_vacuum(o: Oracle, s: int = 1, n: int = 1) -> CheckResult:
    """<0|Lambda_s[n] Lambda_s[-n]|0> is the w^n coefficient of pref^2 / f_{1,1}(w)."""
    from .currents import build_lambdas
    p = o.p
    v = o.lambda_mode(s, -n).apply({(): Fraction(1)})
    got = o.lambda_mode(s, n).apply(v).get((), Fraction(0))
    want = build_lambdas(p)[s].prefactor ** 2 * f_series(1, 1, p, n).inverse()[n]
    name = f"Lambda vacuum pairing (s={s},n={n})"
    return CheckResult(name, got == want, f"{got} vs {want}", "" if got == want else "WeightMismatch")


def quadratic_mode_pairs(mmax: int) -> list[tuple[int, int]]:
    return [(m1, m2) for m1 in range(-mmax, mmax + 1) for m2 in range(-mmax, mmax + 1)]


def oracle_quadratic_sweep(o: Oracle, i: int, j: int, classes: dict, label: str, mmax: int = 2,
                           f_perturb=None) -> CheckResult:
    """All mode pairs |m1|, |m2| <= mmax with a nonempty reliable window; first failure wins."""
    checked = 0
    for m1, m2 in quadratic_mode_pairs(mmax):
        try:
            r = oracle_check_quadratic(o, i, j, m1, m2, classes, label, f_perturb)
        except WindowTooSmall:
            continue
        checked += 1
        if not r.ok:
            return CheckResult(label, False, f"modes ({m1},{m2}): {r.witness}", r.kind)
    return CheckResult(label, True, f"{checked} mode pairs at depth {o.D}")


def run_fock_suite(p: ParamPoint, D: int = 4, mmax: int = 2) -> list[CheckResult]:
    """Oracle checks at one parameter point; quadratic pairs (1, j) against both engine and formula."""
    from .verify_quadratic import assemble_lhs, assemble_rhs
    o = Oracle(p, D)
    N = p.N
    out = [verify_basis_counts(N, D), verify_lambda_vacuum(o)]
    out += verify_oscillator_commutator(o, 1)
    out.append(verify_vacuum_two_point(o, 1, 1, 1))
    out += [verify_duality_matrices(o, i, n) for i in range(N + 1) for n in (-1, 0, 1)]
    out += [verify_top_current(o, n) for n in (0, 1)]
    for j in range(1, N + 1):
        lhs = assemble_lhs(1, j, p).classes
        out.append(oracle_quadratic_sweep(o, 1, j, lhs, f"Fock oracle vs pinned classes (i=1,j={j})", mmax))
        out.append(oracle_quadratic_sweep(o, 1, j, assemble_rhs(1, j, p),
                                          f"Fock oracle vs quadratic (i=1,j={j})", mmax))
        for m in (-1, 0, 1):
            out.append(verify_mode_recursion(o, j, m, 1))
    return out
