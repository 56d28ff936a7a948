"""Absolute/relative tolerance policy used for every approximate comparison."""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_VAR = "CSTARKIT_TOLERANCE"


@dataclass(frozen=True)
class Tolerance:
    """Comparison slack ``abs_tol + rel_tol * scale``.

    ``scale`` is the larger operand norm of the comparison being made.
    """

    abs_tol: float = 1e-9
    rel_tol: float = 1e-9

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError(f"tolerances must be positive, got {self}")

    def bound(self, scale: float = 0.0) -> float:
        return self.abs_tol + self.rel_tol * abs(scale)

    def close(self, x: float, y: float) -> bool:
        return abs(x - y) <= self.bound(max(abs(x), abs(y)))


def parse_tolerance(text: str) -> Tolerance:
    """Parse ``"1e-9"`` (both tolerances) or ``"1e-9,1e-8"`` (abs, rel)."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) == 1:
        value = float(parts[0])
        return Tolerance(value, value)
    if len(parts) == 2:
        return Tolerance(float(parts[0]), float(parts[1]))
    raise ValueError(f"cannot parse tolerance {text!r}")


def _from_environment() -> Tolerance:
    text = os.environ.get(ENV_VAR)
    if not text:
        return Tolerance()
    return parse_tolerance(text)


DEFAULT_TOLERANCE = _from_environment()


def resolve(tol: Tolerance | None) -> Tolerance:
    return DEFAULT_TOLERANCE if tol is None else tol
