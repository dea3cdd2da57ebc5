"""Exception hierarchy.

Argument problems subclass :class:`ValueError` so callers can catch them the
usual way; everything the CLI maps to exit code 3 derives from
:class:`MethodUndefinedError`.
"""


class CommkitError(Exception):
    """Base class for all errors raised by commkit."""


class ValidationError(CommkitError, ValueError):
    """Input violates a structural invariant (self-loop, asymmetric matrix, ...)."""


class GraphFormatError(ValidationError):
    """Malformed edge-list text."""


class ArgumentError(CommkitError, ValueError):
    """Parameter outside its admissible range."""


class NumericalError(CommkitError, ArithmeticError):
    """Linear-algebra kernel failed (singular matrix, non-convergence, NaN)."""


class MethodUndefinedError(CommkitError):
    """The requested measure, embedding or algorithm is undefined on this graph."""


class DivergenceError(MethodUndefinedError):
    """A series-defined measure does not converge for the given parameters."""


class TrainingError(MethodUndefinedError):
    """Gradient training produced a non-finite loss."""
