"""Independent numeric look at <T_i(z1) T_j(z2)>: fit the vacuum series to poles.

The vacuum coefficient G(w) = f_{i,j}(w) <T_i(z1) T_j(z2)> is built from scalar
contractions in high precision and fitted to sum_{s,k} a_{s,k} (1 - x^s w)^-k.
The fitted pole set is compared with the delta supports of the stated relation.

    python3 scripts/vacuum_fit.py --N 2 --i 2 --j 2
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import mpmath as mp

from wtwist.coeff import DEFAULT_SEEDS, ParamPoint
from wtwist.currents import build_lambdas, build_T
from wtwist.heisenberg import contraction
from wtwist.series import f_series
from wtwist.verify_quadratic import rhs_support_set


@dataclass
class FitConfig:
    N: int = 2
    i: int = 2
    j: int = 2
    order: int = 90
    prec: int = 6000
    smax: int = 7
    kmax: int = 3
    start: int = 12


def mpf(q):
    return mp.mpf(q.numerator) / q.denominator


def series_log(a, n):
    out = [mp.mpf(0)] * (n + 1)
    for m in range(1, n + 1):
        s = a[m] * m
        for k in range(1, m):
            s -= k * out[k] * a[m - k]
        out[m] = s / m
    return out


def series_exp(lg, n):
    out = [mp.mpf(1)] + [mp.mpf(0)] * n
    for m in range(1, n + 1):
        out[m] = sum(k * lg[k] * out[m - k] for k in range(1, m + 1)) / m
    return out


def vacuum_series(cfg: FitConfig, p: ParamPoint) -> list:
    n = cfg.order
    lam = build_lambdas(p)
    cache: dict = {}

    def pair(a, ea, b, eb):
        k = (a, ea, b, eb)
        if k not in cache:
            c = contraction(lam[a].shifted(ea), lam[b].shifted(eb), p, n)
            if not (c.xexp.is_zero and c.zexp.is_zero):
                raise ValueError("Lambda contractions should carry no zero-mode factors")
            cache[k] = [mpf(c.log_series[m]) for m in range(n + 1)]
        return cache[k]

    f = f_series(cfg.i, cfg.j, p, n)
    logf = series_log([mpf(f[m]) for m in range(n + 1)], n)
    G = [mp.mpf(0)] * (n + 1)
    for A in build_T(cfg.i, p).terms:
        for B in build_T(cfg.j, p).terms:
            lg = list(logf)
            for a, ea in A.entries:
                for b, eb in B.entries:
                    c = pair(a, ea, b, eb)
                    for m in range(n + 1):
                        lg[m] += c[m]
            E = series_exp(lg, n)
            w = mpf(A.weight * B.weight)
            for m in range(n + 1):
                G[m] += w * E[m]
    return G


def fit(cfg: FitConfig, p: ParamPoint, G: list) -> dict:
    x = mpf(p.x)
    basis = [(s, k) for s in range(-cfg.smax, cfg.smax + 1) for k in range(1, cfg.kmax + 1)]
    rows = range(cfg.start, cfg.start + len(basis))
    M = mp.matrix(len(basis), len(basis))
    b = mp.matrix(len(basis), 1)
    for r, n in enumerate(rows):
        for c, (s, k) in enumerate(basis):
            M[r, c] = mp.binomial(n + k - 1, k - 1) * x ** (s * n)
        b[r] = G[n]
    sol = mp.lu_solve(M, b)
    return {sk: sol[c] for c, sk in enumerate(basis) if abs(sol[c]) > mp.mpf(10) ** -30}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, val in vars(FitConfig()).items():
        ap.add_argument(f"--{name}", type=int, default=val)
    cfg = FitConfig(**vars(ap.parse_args()))
    mp.mp.prec = cfg.prec
    p = ParamPoint(*DEFAULT_SEEDS[0], cfg.N, z_order=cfg.order)
    poles = fit(cfg, p, vacuum_series(cfg, p))
    for (s, k), a in sorted(poles.items()):
        print(f"pole x^{s}, order {k}: {mp.nstr(a, 15)}")
    # a pole of (1 - x^s w) sits at w = x^-s, i.e. on delta(x^s w)
    found = {s for s, _ in poles}
    print("stated supports:", sorted(rhs_support_set(cfg.i, cfg.j, cfg.N)))
    print("fitted supports:", sorted(found))


if __name__ == "__main__":
    main()
