"""Law reports: one entry per checked law, with witnesses on failure.

Reports are plain data so the CLI can merge them and render both a text
summary and a machine-readable JSON document.  Status is three-valued:
``pass``, ``fail``, or ``inconclusive`` (a certification budget ran out —
never a claim of falsity).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


def _jsonable(value):
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return repr(value)


@dataclass
class LawEntry:
    name: str
    status: str
    witness: Any = None

    def to_json(self):
        doc = {"law": self.name, "status": self.status}
        if self.witness is not None:
            doc["witness"] = _jsonable(self.witness)
        return doc


@dataclass
class LawReport:
    subject: str
    entries: list[LawEntry] = field(default_factory=list)

    def law(self, name: str, ok: bool, witness: Any = None) -> None:
        self.entries.append(
            LawEntry(name, PASS if ok else FAIL, None if ok else witness)
        )

    def inconclusive(self, name: str, note: Any = None) -> None:
        self.entries.append(LawEntry(name, INCONCLUSIVE, note))

    def extend(self, other: "LawReport", prefix: str = "") -> None:
        for e in other.entries:
            name = f"{prefix}{e.name}" if prefix else e.name
            self.entries.append(LawEntry(name, e.status, e.witness))

    @property
    def ok(self) -> bool:
        return all(e.status == PASS for e in self.entries)

    @property
    def has_inconclusive(self) -> bool:
        return any(e.status == INCONCLUSIVE for e in self.entries)

    def failures(self) -> list[LawEntry]:
        return [e for e in self.entries if e.status == FAIL]

    def status(self) -> str:
        if any(e.status == FAIL for e in self.entries):
            return FAIL
        if self.has_inconclusive:
            return INCONCLUSIVE
        return PASS

    def to_json(self):
        return {
            "subject": self.subject,
            "status": self.status(),
            "laws": [e.to_json() for e in self.entries],
        }

    def summary_lines(self) -> list[str]:
        lines = [f"[{self.status():>12}] {self.subject}"]
        for e in self.entries:
            mark = {"pass": "ok", "fail": "FAIL", "inconclusive": "????"}[e.status]
            line = f"    {mark:>4}  {e.name}"
            if e.status != PASS and e.witness is not None:
                line += f"  witness={e.witness!r}"
            lines.append(line)
        return lines
