"""Exception types shared across the package."""

from __future__ import annotations


class McsError(Exception):
    """Base class for all package errors."""


class LatticeError(McsError, ValueError):
    """Invalid lattice, point, or order construction."""


class InfeasibleError(McsError):
    """Every candidate has infinite adjustment cost."""


class ConfigError(McsError, ValueError):
    """Malformed scenario configuration.

    ``path`` locates the offending entry inside the document.
    """

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class HypothesisError(McsError):
    """A theorem's hypotheses failed; ``report`` carries the failing check."""

    def __init__(self, theorem: str, report):
        self.theorem = theorem
        self.report = report
        super().__init__(f"{theorem}: hypothesis '{report.name}' fails; witness {report.witness}")


class EngineError(McsError, AssertionError):
    """A constructed selection failed its certificate.

    The theorems guarantee these certificates under verified hypotheses, so
    this signals a bug in the engine rather than in the input.
    """


class CycleError(McsError):
    """Policy iteration from the initial point cycles instead of absorbing."""


class ConvergenceError(McsError):
    """Value iteration hit its iteration cap before reaching the tolerance."""
