"""Exception types shared across the package."""


class DataError(ValueError):
    """Malformed or inconsistent input data (bad ballot, unknown id, NaN score)."""


class UsageError(ValueError):
    """Invalid arguments to an operation (unknown method, option out of range)."""


class CapacityError(UsageError):
    """A requested computation exceeds a hard size cap."""


class SolverError(RuntimeError):
    """The underlying LP / optimization solver failed to produce a solution."""
