"""Exception and warning types shared across the package."""


class LevicatError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(LevicatError):
    """Invalid parameters, units, config files, or CLI arguments."""


class TruncationError(ConfigurationError):
    """A Fock-space or grid truncation is too small for the requested state."""


class NumericalError(LevicatError):
    """A computation produced unusable numbers (non-finite, unstable, ...)."""


class ConvergenceError(NumericalError):
    """An iterative procedure failed to converge."""


class LambDickeWarning(UserWarning):
    """The Lamb-Dicke expansion underlying the gate model is strained."""


class MassOverrideWarning(UserWarning):
    """An explicit particle mass disagrees with the geometric value."""
