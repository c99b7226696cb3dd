"""Machine-readable verification reports."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Optional


def _clean(value: Any) -> Any:
    """Convert numpy scalars and non-finite floats into JSON-safe values."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "tolist"):
        return _clean(value.tolist())
    if isinstance(value, complex):
        return [_clean(value.real), _clean(value.imag)]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


@dataclass
class Check:
    """One comparison; ``gated`` checks decide the exit code."""

    name: str
    measured: Optional[float]
    expected: float
    tolerance: float
    relative: bool = False
    gated: bool = True
    note: str = ""
    passed: bool = field(init=False)

    def __post_init__(self):
        m = self.measured
        if m is None or not math.isfinite(m):
            self.measured = None
            self.passed = False
            return
        gap = abs(m - self.expected)
        if self.relative:
            gap /= abs(self.expected)
        self.passed = bool(gap <= self.tolerance)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "measured": self.measured,
            "expected": self.expected,
            "tolerance": self.tolerance,
            "relative": self.relative,
            "gated": self.gated,
            "pass": self.passed,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    command: str
    params: dict
    checks: list = field(default_factory=list)
    seed: Optional[int] = None
    runtime_ms: int = 0
    diagnostics: dict = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check.to_dict())
        return check

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks if c.get("gated", True))

    @property
    def failed_checks(self) -> list[str]:
        return [c["name"] for c in self.checks if c.get("gated", True) and not c["pass"]]

    def to_dict(self) -> dict:
        return _clean(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        return cls(**json.loads(text))
