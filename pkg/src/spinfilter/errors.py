"""Exception types raised by the simulator."""


class SpinFilterError(Exception):
    """Base class for all errors raised by :mod:`spinfilter`."""


class NotUnitaryError(SpinFilterError, ValueError):
    """A matrix that must be (special) unitary is not, within tolerance."""


class BranchAmbiguityError(SpinFilterError, ValueError):
    """The SU(2) logarithm is not unique (the input is -I)."""


class DegenerateBasisError(SpinFilterError):
    """The loop phase factor has a degenerate spectrum, so no tilted basis exists."""


class EnergyRangeError(SpinFilterError, ValueError):
    """The energy lies outside the range where the leads propagate."""


class SingularSystemError(SpinFilterError, ArithmeticError):
    """A linear system that should be regular turned out singular."""

    def __init__(self, message, energy=None):
        super().__init__(message)
        self.energy = energy
