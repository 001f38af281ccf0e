"""Exception and warning types shared across the package."""


class MargulisError(Exception):
    """Base class for all package errors."""


class DomainError(MargulisError):
    """An argument lies outside the mathematical domain of an operation.

    Carries the offending value in ``offending`` when known.
    """

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending


class DegenerateNu(DomainError):
    """A sinh interval touches zero, so a cap bound cannot be formed."""


class DegenerateHeight(MargulisError):
    """A Mobius image height underflowed to <= 0: precision is exhausted."""


class DegenerateVertex(MargulisError):
    """An angle was requested at a vertex coinciding with an endpoint."""


class AmbiguousClass(MargulisError):
    """A trace sits too close to a classification boundary to decide."""


class HypothesisViolated(MargulisError):
    """A lemma hypothesis failed; the message names the failed inequality."""


class ConsistencyError(MargulisError):
    """Two independent certified routes to the same value failed to overlap."""


class NoSignChange(MargulisError):
    """A bisection bracket does not straddle a root."""


class NotDisjoint(MargulisError):
    """Two subtrees expected to be disjoint intersect."""


class PreconditionFailed(MargulisError):
    """A checked precondition of a tree operation failed; message names it."""


class TruncationAmbiguous(MargulisError):
    """A finite-window computation touched the boundary and cannot certify."""


class BudgetExceeded(MargulisError):
    """A configurable evaluation cap was hit before the search finished."""


class InvalidGroupFile(MargulisError):
    """A group file failed schema or matrix validation."""


class HashCollisionRisk(UserWarning):
    """Two elements far apart in norm fell into one quantization cell."""
