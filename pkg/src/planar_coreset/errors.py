"""Exception types shared across the package.

The CLI maps these to exit codes: InputError -> 2, CapExceededError -> 3.
"""


class InputError(ValueError):
    """Malformed or inconsistent input (bad ids, weights, empty point sets...)."""


class DisconnectedError(InputError):
    """Points that must be mutually reachable lie in different components."""


class CapExceededError(RuntimeError):
    """An exact/exhaustive routine was asked to run beyond its size cap."""

    def __init__(self, message, size=None, cap=None):
        super().__init__(message)
        self.size = size
        self.cap = cap


class ConvergenceError(RuntimeError):
    """Iterative solver hit its iteration cap; carries the best feasible value."""

    def __init__(self, message, best_value=None):
        super().__init__(message)
        self.best_value = best_value


class ExtractionError(RuntimeError):
    """Ramsey extraction could not reach a homogeneous index set of size > 1."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []
