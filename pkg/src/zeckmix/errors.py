"""Exception types shared across the package."""


class ZeckmixError(Exception):
    """Base class for all library-specific errors."""


class GuardExceededError(ZeckmixError):
    """An enumeration or search would exceed its configured resource guard."""


class DigitRuleError(ZeckmixError, ValueError):
    """A digit string violates the numeration scheme's digit rule."""


class NonPrimitiveMatrixError(ZeckmixError, ValueError):
    """Matrix is not primitive (no power is strictly positive)."""


class NonConvergenceError(ZeckmixError):
    """An iterative numeric routine failed to converge."""


class StructureError(ZeckmixError, ValueError):
    """A substitution lacks the structural property an operation requires."""


class IllegalWordError(ZeckmixError, ValueError):
    """A word required to be legal is not in the subshift language."""


class UnsupportedFamilyError(ZeckmixError, ValueError):
    """The requested operation does not support this substitution family."""
