"""Exception hierarchy shared by the solver, encoders and CLI."""


class NFoldError(Exception):
    """Base class for all errors raised by combnfold."""


class ArithmeticOverflow(NFoldError, OverflowError):
    """A value left the signed 64-bit range."""


class BoundTooLarge(ArithmeticOverflow):
    """A complexity bound does not fit in 64 bits; exact mode must be refused."""


class InstanceError(NFoldError, ValueError):
    """The instance violates a structural invariant."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class OracleTooLarge(NFoldError):
    """The brute-force oracle refuses boxes above its volume cap."""


class CapExceeded(NFoldError):
    """An encoder's enumeration would exceed its configured cap."""


class IterationLimit(NFoldError):
    """The augmentation loop hit its iteration cap."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
