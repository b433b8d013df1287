"""
Analysis Exceptions
app/exceptions.py

Typed failures raised by the algebra, atlas, orbit, picard and planar services.
The CLI controller maps them onto exit codes.
"""
from typing import List, Optional


class AnalysisError(Exception):
    """Base class for every failure of an analysis step"""


class DegenerateParameters(AnalysisError):
    """Parameters violate the nondegeneracy assumptions of the family"""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"degenerate parameters: {reason}")


class DirectionDependent(AnalysisError):
    """The image of an element depends on the transverse direction of the lift"""


class UnsupportedConfiguration(AnalysisError):
    """The element needs a chart or lift depth the atlas does not provide"""


class ForbiddenContact(AnalysisError):
    """An orbit touched a set it can never reach for a critical map"""

    def __init__(self, step: int, where: str):
        self.step = step
        self.where = where
        super().__init__(f"orbit reached {where} at step {step}")


class NonClosing(AnalysisError):
    """The orbit did not close within the iteration cap"""

    def __init__(self, n_max: int, trace: Optional[List] = None):
        self.n_max = n_max
        self.trace = trace or []
        super().__init__(f"orbit did not close within {n_max} steps")


class InconsistentSignature(AnalysisError):
    """An orbit signature violates the shape rules needed by the matrix builders"""


class InconsistentLedger(AnalysisError):
    """A planar blowup ledger is malformed or fails its stability witness"""


class DegreeBoundExceeded(AnalysisError):
    """An iterate exceeded the configured degree bound"""

    def __init__(self, bound: int, degrees: List[int]):
        self.bound = bound
        self.degrees = list(degrees)
        super().__init__(f"degree bound {bound} exceeded after {len(degrees)} iterates")


class UsageError(AnalysisError):
    """Malformed command line or input file"""
