"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """A parameter violates its documented range."""


class DomainError(ValueError):
    """An input lies outside the domain of a function."""


class InfeasibleConstraint(ValueError):
    """A constrained problem has no interior feasible point."""


class DegenerateOrbit(ValueError):
    """A deterministic orbit collapsed onto a fixed point."""


class InputFormatError(Exception):
    """An input file or JSON payload could not be parsed."""
