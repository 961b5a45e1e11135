"""Exception hierarchy for fixprop"""

from typing import Optional


class FixPropError(Exception):
    """Base class for every error raised by fixprop"""


class InstanceError(FixPropError, ValueError):
    """Instance data violates a model invariant"""


class MpsFormatError(InstanceError):
    """MPS input could not be parsed"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DimensionError(FixPropError, ValueError):
    """Vector length does not match the instance"""


class SolverError(FixPropError, RuntimeError):
    """LP iterates became non-finite"""


class StrategyError(FixPropError, ValueError):
    """Variable strategy cannot be applied"""


class BranchingError(FixPropError, ValueError):
    """Fixing value or domain is invalid for branching"""
