class FullTableError(RuntimeError):
    """Raised when an operation needs an empty cell and the table has none."""


class InvalidParamsError(ValueError):
    pass


class TableTooSmallError(ValueError):
    """Block-size formulas need log2(log2(n)) > 0, i.e. n >= 4."""


class EmptyRunError(ValueError):
    pass


class KeyNotFoundError(RuntimeError):
    """A recorded key could not be found.  Always a bug, never expected."""
