"""Residuals of the quadratic relations: which delta supports the right hand side misses.

    python3 scripts/residual_analysis.py --N 3
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from wtwist.coeff import param_points
from wtwist.verify_quadratic import quadratic_residual, rhs_support_set, verify_level_two_residual


@dataclass
class ResidualConfig:
    N: int = 2
    seeds: int = 1


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=ResidualConfig.N)
    ap.add_argument("--seeds", type=int, default=ResidualConfig.seeds, help="how many default seeds to use")
    cfg = ResidualConfig(**vars(ap.parse_args()))
    for p in param_points(cfg.N)[:cfg.seeds]:
        print(f"# {p.label()}")
        for i in range(1, cfg.N + 1):
            for j in range(i, cfg.N + 1):
                t0 = time.perf_counter()
                res = quadratic_residual(i, j, p)
                sup = sorted(int(k[1]) for k in res)
                sizes = [len(res[k]) for k in sorted(res)]
                stated = sorted(rhs_support_set(i, j, cfg.N))
                tail = f"residual supports {sup} with {sizes} classes" if sup else "no residual"
                print(f"(i={i},j={j}) stated supports {stated}; {tail} ({time.perf_counter() - t0:.1f} s)")
        if cfg.N >= 2:
            r = verify_level_two_residual(p)
            print(f"(2,2) residual equals the level-two correction: {r.ok} ({r.witness})")


if __name__ == "__main__":
    main()
