"""Exception hierarchy shared by every module."""


class SandiegoError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(SandiegoError, ValueError):
    """Two objects disagree on the number of cities ``n``."""


class InvalidStrategy(SandiegoError, ValueError):
    """A Bob-strategy is malformed (bad key, missing prefix, wrong kind)."""


class InvalidTree(SandiegoError, ValueError):
    """A decision tree or query algorithm violates its structural invariants."""


class CapExceeded(SandiegoError):
    """An exhaustive computation was requested above its configured cap."""

    def __init__(self, what: str, n: int, cap: int):
        super().__init__(
            f"{what}: n={n} exceeds the exhaustive cap {cap} "
            f"(raise it with SANDIEGO_CAPS or an explicit cap argument)"
        )
        self.what = what
        self.n = n
        self.cap = cap


class PremiseError(SandiegoError):
    """A theorem premise (e.g. |K| > 2^(n-1)) does not hold."""
