"""Resource budgets shared by the enumeration and the direct computation."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import InfeasibleScale, InputError

# E6 (|W| = 51840) runs by default; E7 (2,903,040) only under the extended budget.
DEFAULT_MAX_WEYL_ORDER = 100_000
EXTENDED_MAX_WEYL_ORDER = 3_000_000


@dataclass
class Budget:
    max_weyl_order: int = DEFAULT_MAX_WEYL_ORDER
    max_seconds: float | None = None
    max_memory_mb: float | None = 2048
    _started: float = field(default_factory=time.monotonic, repr=False, compare=False)

    def __post_init__(self):
        for name in ("max_weyl_order", "max_seconds", "max_memory_mb"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise InputError(f"budget {name} must be positive, got {value}")

    @classmethod
    def extended(cls, **kw) -> "Budget":
        kw.setdefault("max_weyl_order", EXTENDED_MAX_WEYL_ORDER)
        kw.setdefault("max_memory_mb", 12 * 1024)
        return cls(**kw)

    def restart(self) -> "Budget":
        self._started = time.monotonic()
        return self

    def check_time(self, where: str):
        if self.max_seconds is not None and time.monotonic() - self._started > self.max_seconds:
            raise InfeasibleScale(f"time budget of {self.max_seconds}s exceeded at {where}")

    def check_bytes(self, nbytes: float, where: str):
        if self.max_memory_mb is not None and nbytes > self.max_memory_mb * 2**20:
            raise InfeasibleScale(
                f"{where} needs ~{nbytes / 2**20:.0f} MB, over the {self.max_memory_mb:.0f} MB budget"
            )
