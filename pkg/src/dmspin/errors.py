"""Exception types raised across the package."""


class DMSpinError(Exception):
    """Base class for all package errors."""


class NotHermitian(DMSpinError, ValueError):
    pass


class NonFiniteResult(DMSpinError, ArithmeticError):
    """A spectral function produced NaN or Inf (e.g. exp overflow at tiny kT)."""


class ZeroTemperature(DMSpinError, ValueError):
    """A thermal quantity was requested at T = 0; use the ground-state path."""


class InvalidState(DMSpinError, ValueError):
    """Matrix is not a valid two-qubit density matrix."""


class PresetMismatch(DMSpinError, ValueError):
    pass


class BranchInvalid(DMSpinError, ValueError):
    """Parameters lie outside the validity region of a formula branch."""


class FieldsNonzero(DMSpinError, ValueError):
    """Closed-form evolution requires B = b = 0."""


class NoClosedForm(DMSpinError, KeyError):
    pass


class NoRoot(DMSpinError, ValueError):
    pass


class BracketInvalid(DMSpinError, ValueError):
    """Both bracket endpoints have the same entanglement status."""
