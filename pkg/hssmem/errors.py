"""Exceptions raised by the hssmem library and the exit codes they map to."""


class HssmemError(ValueError):
    """Base class of every hssmem error."""
    exit_code = 1


class DimensionLimitError(HssmemError):
    """Operator dimension beyond the configured maximum."""


class ContractViolationError(HssmemError):
    """Input or output breaking an operation contract (hermiticity, normalization, shape)."""


class DomainError(HssmemError):
    """Argument outside the mathematical domain of an operation."""


class UnsupportedParameterError(HssmemError):
    """Model parameter or combination that the library does not define."""


class InvalidSpecError(HssmemError):
    """Sweep configuration failing validation."""


class ValidationFailure(HssmemError):
    """At least one binding check of the validation suite failed."""
    exit_code = 2


# exit codes of the command line tool
EXIT_OK = 0
EXIT_INVALID_SPEC = 1
EXIT_VALIDATION = 2
EXIT_IO = 3
