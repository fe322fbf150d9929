from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

#: Relative distance |kappa - g| below which the balanced (kappa == g) branch is used.
BALANCE_RTOL = 1e-9


@dataclass(frozen=True)
class LaserParams:
    """Gain rate ``g`` and loss rate ``kappa`` of the cavity (both 1/time)."""

    g: float
    kappa: float

    def __post_init__(self):
        for name in ("g", "kappa"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"{name} must be finite and non-negative, got {v!r}")

    @property
    def detuning(self) -> float:
        """``kappa - g``; positive when loss dominates."""
        return self.kappa - self.g

    @property
    def balanced(self) -> bool:
        return abs(self.kappa - self.g) <= BALANCE_RTOL * max(self.kappa, self.g, 1.0)


def check_time(t) -> float:
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"time must be finite and non-negative, got {t!r}")
    return t
