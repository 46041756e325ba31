"""Exception types raised by so3topo."""


class SO3TopologyError(Exception):
    """Base class for all package errors."""


class InputValidationError(SO3TopologyError, ValueError):
    """An argument violates a documented precondition."""


class SouthPoleSingular(SO3TopologyError, ValueError):
    """The rotated z-axis is at (or too near) the south pole -e_z."""


class RefinementRequired(SO3TopologyError, ValueError):
    """A path has consecutive samples too far apart for the requested operation."""


class NumericalDriftError(SO3TopologyError, ArithmeticError):
    """Accumulated floating point error left a result ambiguous."""


class NotNullHomotopic(SO3TopologyError):
    """The loop lies in the nontrivial homotopy class and cannot be contracted."""


class PoleSearchFailed(SO3TopologyError, RuntimeError):
    """No stereographic pole with enough clearance from the loop was found."""
