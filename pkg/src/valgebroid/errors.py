"""Exception hierarchy.  CLI exit codes are attached to the classes."""


class AlgebroidError(Exception):
    exit_code = 1


class InputError(AlgebroidError, ValueError):
    """Malformed or inconsistent user input."""

    exit_code = 2


class DimensionError(InputError):
    pass


class MembershipError(AlgebroidError, ValueError):
    """A vector was expected to lie in a subspace and does not."""


class WindowError(AlgebroidError):
    """A computation left the degree window; rebuild with a larger cutoff."""

    exit_code = 3


class InternalConsistencyError(AlgebroidError):
    """A construction broke a property it is guaranteed to have.

    Raised for example when a quotient map is not well defined or when the
    degree-zero slice of a universal module differs from its fiber.
    """

    exit_code = 4
