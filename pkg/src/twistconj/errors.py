"""Exception taxonomy shared by the library and the CLI exit-code mapping."""


class TwistConjError(Exception):
    """Base class for all package errors."""


class ConfigurationError(TwistConjError):
    """Unsupported family/rank/twist or malformed run configuration."""


class ValidationError(TwistConjError):
    """Input violates a documented precondition."""


class InputDataError(TwistConjError):
    """External data (matrix files, config files) failed validation."""


class ResourceError(TwistConjError):
    """An enumeration exceeded its configured cap."""


class NumericError(TwistConjError):
    """A numerical routine failed to converge or resolve."""


class InternalError(TwistConjError):
    """An internal consistency check failed; indicates a bug."""
