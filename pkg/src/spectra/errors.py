"""Exception types shared across the package."""


class SpectraError(Exception):
    """Base class for all package errors."""


class InvalidVertexError(SpectraError, ValueError):
    pass


class InvalidArgumentError(SpectraError, ValueError):
    pass


class ValidationError(SpectraError, ValueError):
    """A colouring failed validation; ``violations`` lists every problem found."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class BoundError(SpectraError, ValueError):
    """A desk-scale guard was exceeded or the requested bounds are infeasible."""


class PreconditionError(SpectraError, ValueError):
    pass


class DomainError(SpectraError, ValueError):
    pass
