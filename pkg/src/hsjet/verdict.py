from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict


@dataclass
class Verdict:
    """Outcome of a check; truthy iff it passed."""

    ok: bool
    detail: str = ""
    data: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok
