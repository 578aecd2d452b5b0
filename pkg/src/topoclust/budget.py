"""Wall-clock budgets for interruptible computations."""
from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass

from .errors import InvalidParameter

_UNITS = {"": 1.0, "s": 1.0, "ms": 1e-3, "us": 1e-6, "min": 60.0, "m": 60.0, "h": 3600.0}


@dataclass(frozen=True)
class TimeBudget:
    """Maximum duration in seconds; ``None`` means unbounded."""

    max_duration: float | None = None

    def __post_init__(self):
        if self.max_duration is not None and not self.max_duration > 0:
            raise InvalidParameter("a bounded time budget must be positive")

    @property
    def bounded(self) -> bool:
        return self.max_duration is not None

    def start(self) -> Deadline:
        return Deadline(self.max_duration)

    @classmethod
    def parse(cls, text) -> TimeBudget:
        """Parse ``"10s"``, ``"500ms"``, ``"0.5"``, ``"inf"`` or ``"none"``."""
        s = str(text).strip().lower()
        if s in ("", "none", "inf", "unbounded"):
            return cls(None)
        m = re.fullmatch(r"([0-9]*\.?[0-9]+(?:e[-+]?[0-9]+)?)\s*([a-z]*)", s)
        if not m or m.group(2) not in _UNITS:
            raise InvalidParameter(f"cannot parse duration {text!r}")
        return cls(float(m.group(1)) * _UNITS[m.group(2)])


UNBOUNDED = TimeBudget(None)


class Deadline:
    def __init__(self, seconds: float | None, clock=time.perf_counter):
        self.clock = clock
        self.started = clock()
        self.seconds = math.inf if seconds is None else float(seconds)

    def elapsed(self) -> float:
        return self.clock() - self.started

    def remaining(self) -> float:
        return self.seconds - self.elapsed()

    def expired(self) -> bool:
        return self.remaining() <= 0.0

    def budget(self, cap: float | None = None) -> TimeBudget:
        """Budget covering what is left, optionally capped; never below 1 us."""
        left = self.remaining()
        if cap is not None:
            left = min(left, cap)
        if math.isinf(left):
            return UNBOUNDED
        return TimeBudget(max(left, 1e-6))
