"""Run the Fock-space oracle at one point and optionally dump its matrices.

    python3 scripts/oracle_run.py --N 2 --depth 4 --dump out/
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from wtwist import fock_oracle as fo
from wtwist.coeff import DEFAULT_SEEDS, ParamPoint
from wtwist.verify_quadratic import _merge, assemble_lhs, assemble_rhs, level_two_correction


@dataclass
class OracleConfig:
    N: int = 1
    depth: int = 4
    modes: int = 2
    seed: int = 0
    dump: str | None = None


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=OracleConfig.N)
    ap.add_argument("--depth", type=int, default=OracleConfig.depth)
    ap.add_argument("--modes", type=int, default=OracleConfig.modes)
    ap.add_argument("--seed", type=int, default=OracleConfig.seed, help="index into the default seeds")
    ap.add_argument("--dump", help="directory for basis and T_1 mode matrices")
    cfg = OracleConfig(**vars(ap.parse_args()))
    p = ParamPoint(*DEFAULT_SEEDS[cfg.seed], cfg.N)
    t0 = time.perf_counter()
    for r in fo.run_fock_suite(p, cfg.depth, cfg.modes):
        print(f"{'PASS' if r.ok else 'FAIL'}  {r.identity}  {r.witness}")
    if cfg.N >= 2:
        o = fo.Oracle(p, cfg.depth)
        stated = assemble_rhs(2, 2, p)
        full = assemble_rhs(2, 2, p)
        for k, cls in level_two_correction(p).items():
            _merge(full, k[1], cls, Fraction(1))
        for label, cl in (("engine left side", assemble_lhs(2, 2, p).classes), ("stated right side", stated),
                          ("stated right side plus level-two correction", full)):
            r = fo.oracle_quadratic_sweep(o, 2, 2, cl, f"(2,2) vs {label}", 1)
            print(f"{'PASS' if r.ok else 'FAIL'}  {r.identity}  {r.witness}")
    if cfg.dump:
        out = Path(cfg.dump)
        out.mkdir(parents=True, exist_ok=True)
        o = fo.Oracle(p, cfg.depth)
        (out / "basis.txt").write_text(fo.dump_basis(o.basis))
        for n in range(-cfg.modes, cfg.modes + 1):
            (out / f"T1_mode_{n}.txt").write_text(o.t_mode(1, n).dump())
    print(f"done in {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
