"""Named verification results shared by the library and the CLI reports."""
from __future__ import annotations

from dataclasses import dataclass

from .config import VerificationError


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    count: int
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "count": self.count, "detail": self.detail}


def require(checks) -> None:
    """Raise VerificationError naming the first failed check."""
    for c in checks:
        if not c.passed:
            msg = f"verification failed: {c.name}"
            if c.detail:
                msg += f" ({c.detail})"
            raise VerificationError(msg)
