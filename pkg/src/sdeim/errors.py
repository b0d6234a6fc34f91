"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Input has an incompatible or empty shape."""


class RankError(ValueError):
    """A rank requirement is violated (e.g. more modes requested than the data supports)."""


class AssumptionError(ValueError):
    """The full-rank sampling assumption rank(S^T Phi) = min(n, m) is violated."""


class ObservationRangeError(ValueError):
    """Requested time lies outside the observation window (no extrapolation)."""


class DivergenceError(RuntimeError):
    """Integration left the finite range; carries the last valid time."""

    def __init__(self, message, t_last):
        super().__init__(message)
        self.t_last = t_last
