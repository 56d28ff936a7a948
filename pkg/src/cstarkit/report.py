"""Check records and reports shared by the campaign runner and the CLI."""

from __future__ import annotations

import datetime as _dt
import json
from dataclasses import dataclass, field
from typing import Any

from . import __version__

PLUMBING = "plumbing"


@dataclass
class Record:
    """Outcome of one named check.

    ``anchor`` names the mathematical statement the check exercises (see the
    traceability table in the README) or is the tag ``"plumbing"``.
    """

    check_id: str
    anchor: str
    passed: bool
    samples: int = 0
    violations: int = 0
    witness: Any = None
    details: dict = field(default_factory=dict)
    timing: float | None = None

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "check_id": self.check_id,
            "anchor": self.anchor,
            "verdict": "pass" if self.passed else "fail",
            "samples": self.samples,
            "violations": self.violations,
            "witness": self.witness,
            "details": self.details,
        }
        if timing and self.timing is not None:
            out["timing"] = round(self.timing, 6)
        return out

    def text_line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        line = f"{mark}  {self.check_id}  [{self.anchor}]  samples={self.samples} violations={self.violations}"
        if not self.passed and self.witness is not None:
            line += f"  witness={json.dumps(self.witness, sort_keys=True, default=str)}"
        return line


@dataclass
class Report:
    command: str
    config: dict = field(default_factory=dict)
    records: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    timestamp: str = ""

    def __post_init__(self):
        if not self.timestamp:
            self.timestamp = _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()

    def add(self, record: Record) -> None:
        self.records.append(record)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def sorted_records(self) -> list:
        return sorted(self.records, key=lambda r: r.check_id)

    def first_failure(self) -> Record | None:
        for r in self.sorted_records():
            if not r.passed:
                return r
        return None

    def summary(self) -> dict:
        failed = sum(1 for r in self.records if not r.passed)
        return {"total": len(self.records), "passed": len(self.records) - failed, "failed": failed}

    def to_json(self, timing: bool = False) -> dict:
        return {
            "tool": "cstarkit",
            "version": __version__,
            "command": self.command,
            "timestamp": self.timestamp,
            "config": self.config,
            "summary": self.summary(),
            "warnings": list(self.warnings),
            "records": [r.to_json(timing) for r in self.sorted_records()],
        }

    def dumps(self, fmt: str = "json", timing: bool = False) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(timing), indent=2, sort_keys=True, default=_json_default) + "\n"
        lines = [f"cstarkit {self.command}"]
        lines += [f"warning: {w}" for w in self.warnings]
        lines += [r.text_line() for r in self.sorted_records()]
        s = self.summary()
        lines.append(f"{s['passed']}/{s['total']} checks passed")
        first = self.first_failure()
        if first is not None:
            lines.append(f"first failure: {first.check_id} witness="
                         f"{json.dumps(first.witness, sort_keys=True, default=_json_default)}")
        return "\n".join(lines) + "\n"


def _json_default(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if hasattr(value, "to_json"):
        return value.to_json()
    if hasattr(value, "item"):
        return value.item()
    return str(value)
