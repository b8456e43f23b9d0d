"""Exception hierarchy shared by every module."""


class LukModalError(Exception):
    """Base class for all errors raised by lukmodal."""


class GrainMismatchError(LukModalError, ValueError):
    """Two truth values (or structures) with different grains were combined."""


class SynthesisError(LukModalError):
    """A term search exhausted its space without a match."""


class FormulaSyntaxError(LukModalError, ValueError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class SignatureError(LukModalError, ValueError):
    """Unknown modality, arity mismatch or malformed signature."""


class FrameError(LukModalError, ValueError):
    """Malformed frame, unknown world or incompatible frames."""


class AlgebraError(LukModalError, ValueError):
    """Malformed algebra or a map that is not a homomorphism."""


class BudgetExceeded(LukModalError):
    """An exhaustive enumeration would exceed its configured cap."""

    def __init__(self, needed, budget):
        self.needed = needed
        self.budget = budget
        super().__init__(f"enumeration needs {needed} cases, budget is {budget}")
