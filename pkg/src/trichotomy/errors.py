"""Exception hierarchy.  Every error raised on purpose derives from TrichotomyError."""


class TrichotomyError(Exception):
    pass


class ParseError(TrichotomyError, ValueError):
    pass


class InvalidEquation(TrichotomyError, ValueError):
    pass


class ZeroDenominator(TrichotomyError, ZeroDivisionError):
    """The denominator vanished; ``history`` is the offending window, ``step`` the index if known."""

    def __init__(self, history, step=None):
        self.history = tuple(history)
        self.step = step
        where = f" at step {step}" if step is not None else ""
        super().__init__(f"vanishing denominator{where}")


class NegativeInput(TrichotomyError, ValueError):
    pass


class Degenerate(TrichotomyError):
    """A continuum of equilibria (A = sum(beta), sum(B) = 0, alpha = 0)."""


class NotCoprime(TrichotomyError, ValueError):
    pass


class NotApplicable(TrichotomyError):
    pass


class HypothesisViolated(TrichotomyError):
    pass


class NegativeLift(TrichotomyError):
    def __init__(self, index, value):
        self.index = index
        self.value = value
        super().__init__(f"lifted value {value} at position {index} is negative")


class WindowTooLarge(TrichotomyError, ValueError):
    pass


class TooShort(TrichotomyError, ValueError):
    pass


class HypothesisFailedAtStep(TrichotomyError):
    """A monitor's per-step premise failed; distinct from a failed conclusion."""

    def __init__(self, step):
        self.step = step
        super().__init__(f"monitor hypothesis fails at step {step}")
