"""Exceptions raised by the cell algebra machinery."""


class CellAlgebraError(Exception):
    """Base class for all cellschur errors."""


class BoundExceededError(CellAlgebraError):
    """A configured size bound was exceeded."""

    def __init__(self, what: str, value: int, bound: int):
        self.what = what
        self.value = value
        self.bound = bound
        super().__init__(f"{what} = {value} exceeds the configured bound {bound}")


class CellStructureError(CellAlgebraError):
    """An internal consistency check failed while building or using a structure."""


class InadmissibleError(CellAlgebraError, ValueError):
    """An argument lies outside the hypotheses of a construction."""
