"""Exception and warning types shared across the package."""


class MemkinError(Exception):
    """Base class for model errors."""


class ConfigError(MemkinError):
    """Config text could not be parsed; carries a line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(MemkinError):
    """A parameter set violates a model invariant."""


class QuadratureError(MemkinError):
    """Energy integral failed to converge at the configured node count."""


class TruncationError(MemkinError):
    """Potential-profile series tail estimate exceeds the tolerance."""


class StalledLayerError(MemkinError):
    """One or more layers can never switch at the applied amplitude."""

    def __init__(self, layers, hint=""):
        self.layers = list(layers)
        msg = f"stalled layer(s) {self.layers}: switching threshold never reached"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)


class ConservationError(MemkinError):
    """Steady-state current expressions disagree beyond tolerance."""


class ModelConsistencyWarning(UserWarning):
    """Parameters outside the regime the model assumes (e.g. P > 1)."""
