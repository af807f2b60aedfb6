from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Outcome of a check: a verdict, human-readable problems, and structured details."""

    name: str
    ok: bool = True
    problems: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    def fail(self, message: str) -> None:
        self.ok = False
        self.problems.append(message)

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        head = f"{self.name}: {'pass' if self.ok else 'FAIL'}"
        return "\n".join([head] + [f"  - {p}" for p in self.problems])

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "ok": self.ok,
            "problems": list(self.problems),
            "details": _jsonable(self.details),
        }


def _jsonable(value):
    if isinstance(value, Report):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value
