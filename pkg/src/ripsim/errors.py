"""Exception types shared across the package."""


class RipsimError(Exception):
    """Base class for all package errors."""


class ConfigError(RipsimError):
    """Invalid scenario or run configuration."""


class NumericError(RipsimError):
    """A numerical invariant was violated during integration or analysis.

    Carries the simulation time at which the violation occurred and a short
    description of the offending quantity.
    """

    def __init__(self, time: float, detail: str):
        self.time = time
        self.detail = detail
        super().__init__(f"t={time:.6g}: {detail}")


class EmptyEnsembleError(RipsimError):
    """Conditional ensemble average requested at a time with no surviving trajectories."""

    def __init__(self, time: float):
        self.time = time
        super().__init__(f"no surviving trajectories at t={time:.6g}")
