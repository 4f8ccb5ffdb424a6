"""Exception types raised by the solvers and the benchmark harness."""


class CcqoError(Exception):
    """Base class for all package errors."""


class NonConvergence(CcqoError):
    """A box QP hit its iteration cap with the KKT residual above tolerance."""


class EmptySupport(CcqoError):
    pass


class NotBranchable(CcqoError):
    pass


class NoBranchableCoordinate(CcqoError):
    pass


class EmptyList(CcqoError):
    pass


class InfeasibleCandidate(CcqoError):
    pass


class InvalidK(CcqoError, ValueError):
    pass


class InvalidInitialSupport(CcqoError, ValueError):
    pass


class InvalidShape(CcqoError, ValueError):
    pass


class DegenerateBox(CcqoError, ValueError):
    pass


class TooLarge(CcqoError):
    pass


class ZeroBest(CcqoError, ZeroDivisionError):
    pass


class MissingCell(CcqoError, KeyError):
    pass


class EmptySample(CcqoError, ValueError):
    pass
