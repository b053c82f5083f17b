"""Exception hierarchy shared by every zetalab module."""


class ZetalabError(Exception):
    """Base class for all zetalab failures."""


class DomainError(ZetalabError, ValueError):
    """An argument lies outside the supported numerical domain."""


class NearZeroError(ZetalabError):
    """The evaluation point is closer to a zero ordinate than the guard allows."""


class BranchTrackError(ZetalabError):
    """Continuous-variation tracking of arg zeta could not be certified."""


class CertificationError(ZetalabError):
    """Turing's method could not close the zero count for a scanned range."""

    def __init__(self, message: str, block: tuple[float, float] | None = None):
        super().__init__(message)
        self.block = block


class UncertifiedRangeError(ZetalabError):
    """A query reaches outside the range where the zero catalog is complete."""


class OrderingError(ZetalabError):
    """Zero ordinates are not strictly ascending."""


class FormatError(ZetalabError):
    """A zero cache file or parameter string is malformed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class HypothesisError(ZetalabError):
    """A hypothesis of the theorem or lemma being checked is violated."""

    def __init__(self, hypothesis: str, detail: str = ""):
        msg = f"hypothesis violated: {hypothesis}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.hypothesis = hypothesis


class MonotonicityError(ZetalabError):
    """A function spec fails its required monotonicity on the test grid."""
