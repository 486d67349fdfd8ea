"""Exception hierarchy shared by every module.

Each class carries the process exit code the command line front end uses
when the exception escapes a subcommand.
"""


class SyzError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class InputError(SyzError, ValueError):
    """Malformed or inconsistent input data (wrong rank, bad JSON, ...)."""

    exit_code = 3


class DimensionError(InputError):
    """Vectors or matrices of incompatible sizes."""


class PreconditionError(SyzError, ValueError):
    """Input is well formed but violates a mathematical precondition."""

    exit_code = 4


class ConvexityError(PreconditionError):
    """A weight function fails the convexity condition required downstream.

    ``point`` names the offending lattice point and ``face`` the face of the
    polytope on which the failure was detected, when known.
    """

    def __init__(self, message, point=None, face=None):
        super().__init__(message)
        self.point = point
        self.face = face


class InvariantError(SyzError, RuntimeError):
    """An internal consistency check failed; this indicates a defect."""

    exit_code = 5


class InfeasibleError(PreconditionError):
    """A system of inequalities has no solution."""
