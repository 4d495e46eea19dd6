"""Exception types shared across the package."""


class AnharmError(Exception):
    """Base class for all package errors."""


class ConfigError(AnharmError):
    """Invalid potential, state, or scalar configuration."""


class SingularFrequencyError(AnharmError):
    """Raw recursion requested at omega = 0, where it divides by zero.

    The renormalized engine handles zero-frequency potentials; the raw one
    cannot.
    """


class NoRootError(AnharmError):
    """No root of the optimization target was bracketed in the scan interval."""

    def __init__(self, message, interval=None, endpoint_values=None):
        super().__init__(message)
        self.interval = interval
        self.endpoint_values = endpoint_values


class BracketError(AnharmError):
    """An energy bracket does not contain the requested eigenvalue."""

    def __init__(self, message, nodes_low=None, nodes_high=None):
        super().__init__(message)
        self.nodes_low = nodes_low
        self.nodes_high = nodes_high


class ConvergenceError(AnharmError):
    """An iterative solver failed to reach its tolerance."""
