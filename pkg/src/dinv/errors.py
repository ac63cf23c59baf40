"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes): ``InvalidInput``
for malformed data and ``PreconditionError`` for well-formed data that falls
outside the hypotheses of a computation.
"""


class DinvError(Exception):
    pass


class InvalidInput(DinvError, ValueError):
    pass


class PreconditionError(DinvError):
    pass


# arith
class ZeroTail(InvalidInput):
    pass


class OutOfRange(InvalidInput):
    pass


# plumbing
class InvalidTree(InvalidInput):
    pass


class SingularForm(PreconditionError):
    pass


class NotNegativeDefinite(PreconditionError):
    pass


class TooManyBadVertices(PreconditionError):
    pass


class EmptyBox(PreconditionError):
    pass


# lens / obstruct
class NoWitness(PreconditionError):
    pass


class ModulusMismatch(InvalidInput):
    pass


# knots
class NotNormalized(InvalidInput):
    pass


class NotSymmetric(InvalidInput):
    pass


class NotLSpaceForm(PreconditionError):
    pass


# cfk
class InvalidGaps(InvalidInput):
    pass


class InvalidComplex(InvalidInput):
    pass


class WindowTooSmall(PreconditionError):
    pass


class NotSphereLike(PreconditionError):
    pass


class InconsistentRanks(PreconditionError):
    pass


class HypothesisFailed(PreconditionError):
    pass


class ValueMismatch(DinvError):
    """A computed value contradicts a proven identity; indicates a modeling bug."""
