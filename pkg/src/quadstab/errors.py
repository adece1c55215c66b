"""Exception hierarchy shared by all modules."""


class QuadStabError(Exception):
    """Base class for every error raised by this package."""


class InputError(QuadStabError):
    """Malformed or out-of-domain input (CLI exit code 1)."""


class NumericalError(QuadStabError):
    """Numerical certification failed (CLI exit code 2)."""


class NonConvergence(NumericalError):
    pass


class NotCentered(InputError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class InvalidQuiver(InputError):
    pass


class DiagonalNotPresent(InputError):
    pass


class InvalidAngulation(InputError):
    pass


class TooLarge(InputError):
    pass


class DegenerateInput(InputError):
    pass


class WrongParity(InputError):
    pass


class BasisMismatch(InputError):
    pass


class PreconditionFailed(InputError):
    pass


class Unresolved(NumericalError):
    pass


class NotSaddleFree(NumericalError):
    pass


class AmbiguousDirection(NumericalError):
    pass


class BranchAmbiguity(NumericalError):
    pass


class ChamberExit(NumericalError):
    pass


class TransportFailure(NumericalError):
    pass


class PhaseExit(NumericalError):
    pass


class UnresolvedWall(NumericalError):
    pass


class NonAdjacentJump(NumericalError):
    pass
