"""Exception types shared across the package."""


class PottsError(Exception):
    """Base class for all errors raised by pottszero."""


class GraphParseError(PottsError, ValueError):
    """Malformed graph or weight file. ``lineno`` is 1-based (0 if not line-specific)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        if lineno:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ContractError(PottsError, ValueError):
    """A documented precondition of an operation was violated."""


class SizeCapError(PottsError, ValueError):
    """An exhaustive enumeration would exceed its configured size cap."""


class SearchFailure(PottsError, RuntimeError):
    """A parameter search found no feasible point below its cap."""


class DiskMapError(PottsError, ValueError):
    """The disk-map image escaped the target zero-free region."""

    def __init__(self, message: str, witness: complex | None = None):
        self.witness = witness
        super().__init__(message)
