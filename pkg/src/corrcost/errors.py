"""Exception and warning taxonomy shared across the package."""


class CorrcostError(Exception):
    """Base class for all package errors."""


class ValidationError(CorrcostError, ValueError):
    """Inputs violate a contract (domain, shape, normalization)."""


class NotNormalizedError(ValidationError):
    """Probability mass does not sum to 1 within tolerance."""


class NegativeMassError(ValidationError):
    """A probability entry is negative."""


class ArityMismatchError(ValidationError):
    """A point's arity does not match the number of variables."""


class UnknownVariableError(ValidationError):
    """A referenced variable name is not part of the distribution."""


class UnknownLabelError(ValidationError):
    """A point uses a label outside the declared alphabet."""


class OverlappingGroupsError(ValidationError):
    """Variable groups passed to a measure are not disjoint."""


class AlphabetMismatchError(ValidationError):
    """Two distribution handles do not share a common alphabet."""


class ChainViolationError(ValidationError):
    """A required conditional-independence chain does not hold."""


class EmptyTypicalSetError(CorrcostError):
    """A codebook was requested from an empty typical set."""


class OptimizerDivergedError(CorrcostError):
    """Every restart ended with constraint violation above tolerance."""


class InfeasibleReductionError(CorrcostError):
    """Cardinality reduction failed to meet its preservation tolerances."""


class BudgetExceededError(CorrcostError):
    """Exact enumeration would exceed the configured budget."""


class BlockTooShortError(CorrcostError):
    """Block length too small: some per-letter block would be empty."""


class UndefinedChannelRowError(CorrcostError):
    """Simulation channel queried on a sequence with zero mixture mass."""


class UnknownIdError(ValidationError):
    """Unknown built-in distribution identifier."""


class BadParamsError(ValidationError):
    """Malformed parameters for a built-in distribution."""


class EmptyTypicalSetWarning(UserWarning):
    """Typical set is empty for the given (n, delta)."""


class RateTooLargeWarning(UserWarning):
    """Requested codebook size exceeds the typical set; truncated."""
