"""Command-line driver: `wtwist verify <suite|all> [options]`.

Exit status is 0 when every record passes, 1 when any check fails or errors,
and 2 when the configuration itself is invalid.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .coeff import DEFAULT_SEEDS, DivisionByZero, InvalidParamPoint, ParamPoint, parse_seed, probe
from .report import Report
from .suites import SUITES, Check, SuiteOptions, catalog


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    N: int = 1
    seeds: list = field(default_factory=lambda: list(DEFAULT_SEEDS))
    z_order: int = 30
    mode_order: int = 12
    fock_depth: int = 4
    suites: list = field(default_factory=lambda: list(SUITES))
    out: str | None = None
    format: str = "json"
    jobs: int = 1
    timing: bool = True

    def validate(self) -> list[ParamPoint]:
        if self.N < 1:
            raise ConfigError("N must be at least 1")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.format not in ("json", "markdown"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.fock_depth < 1 or self.jobs < 1:
            raise ConfigError("fock depth and jobs must be positive")
        bad = [s for s in self.suites if s not in SUITES]
        if bad:
            raise ConfigError(f"unknown suite(s) {bad}; choose from {', '.join(SUITES)}")
        pts = []
        for u, t in self.seeds:
            try:
                p = ParamPoint(u, t, self.N, self.z_order, self.mode_order)
                probe(p)
            except (InvalidParamPoint, DivisionByZero) as exc:
                raise ConfigError(f"seed {u},{t}: {exc}") from exc
            pts.append(p)
        return pts

    def as_dict(self) -> dict:
        return {"N": self.N, "seeds": [[str(u), str(t)] for u, t in self.seeds], "z_order": self.z_order,
                "mode_order": self.mode_order, "fock_depth": self.fock_depth, "suites": list(self.suites)}

    def options(self) -> SuiteOptions:
        return SuiteOptions(fock_depth=self.fock_depth)


_INT_KEYS = {"N": "N", "z_order": "z_order", "mode_order": "mode_order", "fock_depth": "fock_depth",
             "jobs": "jobs"}


def read_config(path: str | Path) -> RunConfig:
    """Flat `key = value` lines; `seed` and `suite` may repeat; `#` starts a comment."""
    cfg = RunConfig(seeds=[], suites=[])
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        k = k.replace("-", "_")
        try:
            if k == "seed":
                cfg.seeds.append(parse_seed(v))
            elif k == "suite":
                cfg.suites += [s.strip() for s in v.split(",") if s.strip()]
            elif k in _INT_KEYS:
                setattr(cfg, _INT_KEYS[k], int(v))
            elif k in ("out", "format"):
                setattr(cfg, k, v)
            else:
                raise ConfigError(f"line {n}: unknown key {k!r}")
        except ValueError as exc:
            raise ConfigError(f"line {n}: {exc}") from exc
    if not cfg.seeds:
        cfg.seeds = list(DEFAULT_SEEDS)
    if not cfg.suites:
        cfg.suites = list(SUITES)
    return cfg


def _units(cfg: RunConfig, points: Sequence[ParamPoint]) -> list[tuple[str, int | None]]:
    out = []
    for s in cfg.suites:
        if s == "classical":
            out.append((s, None))
        else:
            out += [(s, k) for k in range(len(points))]
    return out


def _run_unit(cfg: RunConfig, points: Sequence[ParamPoint], unit) -> list:
    suite, k = unit
    pts = points if k is None else [points[k]]
    rep = Report({})
    for c in catalog([suite], pts, cfg.options()):
        rep.run(c.suite, c.identity, c.point_dict(), c.fn)
    return rep.records


def run(cfg: RunConfig) -> Report:
    points = cfg.validate()
    rep = Report(cfg.as_dict())
    units = _units(cfg, points)
    if cfg.jobs > 1 and len(units) > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            parts = list(ex.map(_run_unit, [cfg] * len(units), [points] * len(units), units))
    else:
        parts = [_run_unit(cfg, points, u) for u in units]
    for recs in parts:
        rep.records.extend(recs)
    return rep


def list_checks(cfg: RunConfig) -> list[Check]:
    points = cfg.validate()
    return catalog(cfg.suites, points[:1], cfg.options())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wtwist", description="Exact verification of the twisted deformed W-algebra.")
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suite", nargs="?", default="all", help=f"one of {', '.join(SUITES)} or all")
    v.add_argument("--N", type=int)
    v.add_argument("--seed", action="append", metavar="U,T", help="rational pair such as 2/3,1/5 (repeatable)")
    v.add_argument("--z-order", type=int)
    v.add_argument("--mode-order", type=int)
    v.add_argument("--fock-depth", type=int)
    v.add_argument("--config", help="flat key = value file")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--format", choices=("json", "markdown"))
    v.add_argument("--jobs", type=int, help="worker processes")
    v.add_argument("--no-timing", action="store_true", help="omit timing fields from JSON")
    v.add_argument("--list", action="store_true", help="list the identities that would be checked")
    return ap


def config_from_args(a: argparse.Namespace) -> RunConfig:
    cfg = read_config(a.config) if a.config else RunConfig()
    if a.suite != "all":
        cfg.suites = [a.suite]
    elif not a.config:
        cfg.suites = list(SUITES)
    if a.seed:
        try:
            cfg.seeds = [parse_seed(s) for s in a.seed]
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    for name in ("N", "z_order", "mode_order", "fock_depth", "out", "format", "jobs"):
        val = getattr(a, name)
        if val is not None:
            setattr(cfg, name, val)
    cfg.timing = not a.no_timing
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    try:
        cfg = config_from_args(a)
        if a.list:
            for c in list_checks(cfg):
                tag = "  [control]" if c.control else ""
                print(f"{c.suite}\t{c.identity}{tag}")
            return 0
        rep = run(cfg)
    except ConfigError as exc:
        print(f"wtwist: configuration error: {exc}", file=sys.stderr)
        return 2
    text = rep.to_json(cfg.timing) + "\n" if cfg.format == "json" else rep.to_markdown()
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    c = rep.counts()
    print(f"wtwist: pass {c['pass']}, fail {c['fail']}, error {c['error']}", file=sys.stderr)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
