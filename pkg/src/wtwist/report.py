"""Check records and the versioned report format."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

SCHEMA_VERSION = 1


@dataclass
class CheckResult:
    identity: str
    ok: bool
    witness: str = ""
    kind: str = ""  # failure category, e.g. WeightMismatch


@dataclass
class Record:
    suite: str
    identity: str
    point: dict
    status: str  # pass | fail | error
    witness: str = ""
    kind: str = ""
    seconds: float = 0.0


@dataclass
class Report:
    config: dict
    records: list = field(default_factory=list)

    def add(self, suite: str, point: dict, res: CheckResult, seconds: float = 0.0) -> None:
        self.records.append(Record(suite, res.identity, point, "pass" if res.ok else "fail",
                                   res.witness, res.kind, round(seconds, 3)))

    def add_error(self, suite: str, identity: str, point: dict, exc: BaseException) -> None:
        self.records.append(Record(suite, identity, point, "error", f"{type(exc).__name__}: {exc}",
                                   type(exc).__name__))

    def run(self, suite: str, identity: str, point: dict, fn: Callable[[], Any]) -> None:
        """Call fn and record each CheckResult it returns (a single one or a list)."""
        t0 = time.perf_counter()
        try:
            out = fn()
        except Exception as exc:  # recorded, never swallowed silently
            self.add_error(suite, identity, point, exc)
            return
        dt = time.perf_counter() - t0
        res = out if isinstance(out, list) else [out]
        for r in res:
            self.add(suite, point, r, dt / max(len(res), 1))

    @property
    def ok(self) -> bool:
        return all(r.status == "pass" for r in self.records)

    def counts(self) -> dict:
        c = {"pass": 0, "fail": 0, "error": 0}
        for r in self.records:
            c[r.status] += 1
        return c

    def to_dict(self, timing: bool = True) -> dict:
        recs = []
        for r in self.records:
            d = asdict(r)
            if not timing:
                d.pop("seconds")
            recs.append(d)
        return {"schema_version": SCHEMA_VERSION, "config": self.config,
                "summary": self.counts(), "records": recs}

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True)

    def to_markdown(self) -> str:
        c = self.counts()
        lines = [f"# wtwist report (schema {SCHEMA_VERSION})", "",
                 f"pass {c['pass']}, fail {c['fail']}, error {c['error']}", "",
                 "| suite | identity | point | status | witness |", "|---|---|---|---|---|"]
        for r in self.records:
            pt = ",".join(f"{k}={v}" for k, v in r.point.items())
            wit = r.witness.replace("|", "\\|")
            lines.append(f"| {r.suite} | {r.identity} | {pt} | {r.status} | {wit} |")
        return "\n".join(lines) + "\n"
