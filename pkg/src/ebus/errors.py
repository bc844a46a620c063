"""Exception types raised across the toolkit."""

from __future__ import annotations


class EbusError(Exception):
    """Base class for all domain errors."""


class InvalidConfig(EbusError, ValueError):
    """A configuration record violates one of its invariants.

    Args:
        field: Name of the first offending field.
        reason: Human-readable description of the violated invariant.
    """

    def __init__(self, field: str, reason: str) -> None:
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


class NegativeRelativeSpeed(EbusError, ValueError):
    """Tailwind exceeds vehicle speed, so the drag model does not apply."""


class NotRegenCapable(EbusError):
    """Braking demand was issued but no motor can regenerate."""


class GainSingularity(EbusError, ValueError):
    """Converter duty cycle too close to one for a finite boost gain."""


class QuadrantViolation(EbusError, ValueError):
    """Operating point implies reversed link-voltage polarity."""


class TargetUnreachable(EbusError, ValueError):
    """Requested state of charge lies above a full pack."""


class InfeasibleConfig(EbusError, ValueError):
    """Depot configuration cannot run even a single charger."""


class PackDepleted(EbusError):
    """The pack reached zero state of charge during a drive cycle.

    The partially filled report is attached as ``report``.
    """

    def __init__(self, t: float, report=None) -> None:
        super().__init__(f"pack depleted at t={t:g} s")
        self.t = t
        self.report = report
