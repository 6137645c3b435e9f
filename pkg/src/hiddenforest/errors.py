"""Exception types shared across the package."""


class HiddenForestError(Exception):
    """Base class for all library errors."""


class InconsistentSystem(HiddenForestError, ValueError):
    """A congruence system has no solution.

    ``pair`` holds the two conflicting ``(residue, modulus)`` equations: the
    accumulated equation merged so far and the first one it could not absorb.
    """

    def __init__(self, pair, message=None):
        self.pair = pair
        (a, m), (b, n) = pair
        super().__init__(
            message or f"x = {a} (mod {m}) and x = {b} (mod {n}) are incompatible"
        )


class DegenerateRowOrColumn(HiddenForestError, ValueError):
    """A matrix row or column has product 1, so it constrains nothing."""


class OverlappingRuns(HiddenForestError, ValueError):
    """The x-run and y-run of a forest share a value."""


class RangeTooLarge(HiddenForestError, ValueError):
    """A sieve range exceeds the configured memory budget."""


class NotHidden(HiddenForestError, AssertionError):
    """A constructed block contains a visible point."""
