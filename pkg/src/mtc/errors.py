class MtcError(ValueError):
    """Base class of every error raised on purpose by the workbench."""


class ConfigError(MtcError):
    """Bad environment or flag configuration."""


class ValidationError(MtcError):
    """Input that does not describe a valid object, e.g. a malformed spec."""


class ScenarioError(ValidationError):
    """A scenario violates the event rules or its selection is not closed."""


class SingularBlockError(MtcError):
    """The A-block of an operator is not invertible."""


class InconsistentSystemError(MtcError):
    """A linear system has no solution, or no unique one when required."""


class WendlBoundError(MtcError):
    """A computed rank falls below the claimed lower bound.

    The full verification report is kept on the exception so callers can
    still print it.

    """
    def __init__(self, message: str, report: object = None):
        super().__init__(message)
        self.report = report
