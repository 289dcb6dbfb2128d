"""Exception hierarchy shared by the library and the CLI."""


class SegalError(Exception):
    """Base class for every error raised by segalpy."""

    exit_code = 3


class ValidationError(SegalError):
    exit_code = 2

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class ParseError(ValidationError):
    pass


class NonInjectiveLeg(SegalError):
    """A pushout leg that must be a monomorphism is not injective."""

    exit_code = 2


class NotGlobular(SegalError):
    """The zeroth column of a would-be Segal precat is not a single point."""

    exit_code = 2


class MultiObject(SegalError):
    """An arrangement operation was given a precat with more than one object."""

    exit_code = 2


class CapExceeded(SegalError):
    """A request needs data above the dimension cap of its input."""

    exit_code = 2


class IndexBeyondCap(CapExceeded):
    """Homology was requested in a degree the capped complex cannot certify."""


class DisconnectedA1(SegalError):
    """The first column is not connected, so the schedule does not apply."""


class BadBasepoint(ValidationError):
    """The input does not have exactly one vertex."""


class NondegenerateEdges(ValidationError):
    """The input has nondegenerate 1-simplices."""


class NotSimplyConnected(SegalError):
    """A simple-connectivity assertion contradicts the computed H_1."""

    exit_code = 3


class InconsistentRun(SegalError):
    """A run-wide invariant (diagonal homology, Hurewicz cross-check) failed."""

    exit_code = 3


class ResourceLimit(SegalError):
    """The configured cell budget was exhausted."""

    exit_code = 4
