"""Exception hierarchy for the whole package."""


class PfcError(Exception):
    """Base class for every error raised by pfcircuit."""


# coefficients

class RingMismatch(PfcError, TypeError):
    pass


class InexactDivision(PfcError, ArithmeticError):
    pass


class DivisionByZero(PfcError, ZeroDivisionError):
    pass


# tensor

class LabelError(PfcError, ValueError):
    """Unknown, duplicated or overlapping edge labels."""


class OrientationMismatch(PfcError, ValueError):
    pass


class SingularBasis(PfcError, ValueError):
    pass


# predicate fitting

class FitError(PfcError):
    """A fitting procedure could not realize the predicate.

    ``condition`` names the failed condition; ``witness`` is the offending
    subset (if any) and ``expected``/``actual`` the coefficient mismatch.
    """

    condition = "FitError"

    def __init__(self, message="", witness=None, expected=None, actual=None):
        self.witness = witness
        self.expected = expected
        self.actual = actual
        super().__init__(message or self.condition)

    def report(self) -> str:
        parts = [self.condition]
        if self.witness is not None:
            parts.append("witness=" + _fmt_subset(self.witness))
        if self.expected is not None or self.actual is not None:
            parts.append(f"expected={self.expected} actual={self.actual}")
        msg = str(self.args[0]) if self.args else ""
        if msg and msg != self.condition:
            parts.append(msg)
        return "; ".join(parts)


def _fmt_subset(s):
    return "{" + ",".join(str(x) for x in sorted(s)) + "}"


class MixedParity(FitError):
    condition = "MixedParity"


class OddSupport(FitError):
    condition = "OddSupport"


class NotOdd(FitError):
    condition = "NotOdd"


class NotEven(FitError):
    condition = "NotEven"


class ZeroAtOrigin(FitError):
    condition = "ZeroAtOrigin"


class ZeroPredicate(FitError):
    condition = "ZeroTensor"


class ConsistencyViolated(FitError):
    condition = "ConsistencyViolated"


class NoSingletonPivot(FitError):
    condition = "NoSingletonPivot"


class TemplateUnsolvable(FitError):
    condition = "TemplateUnsolvable"


class FitInexactDivision(FitError):
    condition = "InexactDivision"


class NotPfaffianInGivenBasis(FitError):
    condition = "NotPfaffianInGivenBasis"

    def __init__(self, message="", diagnostics=None):
        self.diagnostics = list(diagnostics or [])
        super().__init__(message)

    def report(self) -> str:
        lines = [self.condition + (f": {self.args[0]}" if self.args and self.args[0] else "")]
        lines.extend("  " + d.report() for d in self.diagnostics)
        return "\n".join(lines)


# circuit

class CircuitError(PfcError, ValueError):
    pass


class UnfilledSlot(CircuitError):
    pass


class BasisMismatch(CircuitError):
    pass


class Disconnected(CircuitError):
    pass


class NonPlanar(CircuitError):
    pass


class InvalidRotationSystem(CircuitError):
    pass


class OddEdgeCount(CircuitError):
    pass


class TooLarge(PfcError, ValueError):
    pass


class InvalidRegion(PfcError, ValueError):
    pass


class ParseError(PfcError, ValueError):
    pass
