"""Exception types shared across the package."""


class EquimoriError(Exception):
    """Base class for all domain errors raised by this package."""


class ModelMismatchError(EquimoriError):
    """Two divisor classes (or a class and a matrix) live on different models."""


class AbstractModelError(EquimoriError):
    """An operation requires a marked blow-up model but got an abstract one."""


class NonStandardContraction(EquimoriError):
    """A contraction orbit could not be normalized to exceptional basis vectors.

    Raised after the reflection search (products of reflections in (-2)-classes,
    depth-limited) fails to move every orbit member onto a basis vector.
    """


class IsometryError(EquimoriError):
    """A candidate matrix violates a lattice-isometry invariant.

    The ``violations`` attribute names every failed invariant.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class CapExceededError(EquimoriError):
    """Group closure exceeded its element cap (likely infinite or misconfigured)."""


class EnumerationRangeError(EquimoriError):
    """Curve enumeration requested outside the supported Del Pezzo range."""


class GraphSizeError(EquimoriError):
    """Graph too large for exhaustive automorphism search."""


class InternalConsistencyError(EquimoriError):
    """Hard-coded data or a pushed-forward action failed a self-check."""
