class ConfigurationError(ValueError):
    """Invalid or inconsistent run configuration."""


class TruncationError(RuntimeError):
    """Fock cutoff too small: the evolved state lost more norm than allowed."""

    def __init__(self, message, norm_loss=None, suggested_cutoff=None):
        super().__init__(message)
        self.norm_loss = norm_loss
        self.suggested_cutoff = suggested_cutoff


class ContractViolation(RuntimeError):
    """An input violated a numerical precondition (hermiticity, positivity...)."""


class InsufficientDataError(ValueError):
    """Not enough samples or oscillations to estimate a quantity."""
