from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification: failing is a result, not an exception."""

    passed: bool
    detail: str = ""
    residual: Any = field(default=None, compare=False, repr=False)

    def __bool__(self) -> bool:
        return self.passed
