"""Exception types shared across the package."""


class WorpitzkyError(Exception):
    """Base class for every error raised by this package."""


class InvalidType(WorpitzkyError, ValueError):
    """Unknown or out-of-range root system identifier."""


class CapExceeded(WorpitzkyError):
    """Weyl group enumeration would exceed the configured cap."""

    def __init__(self, estimate: int, cap: int):
        super().__init__(f"|W| = {estimate} exceeds enumeration cap {cap}")
        self.estimate = estimate
        self.cap = cap


class GuardExceeded(WorpitzkyError):
    """A brute-force scan would touch more points than its guard allows."""

    def __init__(self, what: str, size: int, guard: int):
        super().__init__(f"{what}: {size} points exceeds guard {guard}")
        self.size = size
        self.guard = guard


class OverdeterminationFailure(WorpitzkyError):
    """Sampled data is not a quasi-polynomial of the requested period/degree."""

    def __init__(self, residue: int, argument: int, expected, got):
        super().__init__(
            f"residue {residue}: fit predicts {expected} at q={argument}, sample is {got}"
        )
        self.residue = residue
        self.argument = argument


class NonTermination(WorpitzkyError):
    """Alcove reduction exceeded its step bound (indicates an arithmetic bug)."""


class ConvergenceFailure(WorpitzkyError):
    """Simultaneous root iteration did not converge."""
