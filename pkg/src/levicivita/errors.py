"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class LeviCivitaError(ArithmeticError):
    """Base class for all errors raised by this package."""


class IndeterminateZeroToOrder(LeviCivitaError):
    """A truncated value has no known terms: it may be a nonzero infinitesimal."""

    def __init__(self, order):
        self.order = order
        super().__init__(f"value is zero only up to order {order}")


class IndeterminateSign(LeviCivitaError):
    pass


class DivisionByZero(LeviCivitaError, ZeroDivisionError):
    pass


class NonPositiveRadicand(LeviCivitaError, ValueError):
    pass


class LeadingCoefficientNotPerfectPower(LeviCivitaError, ValueError):
    pass


class TruncationBeyondKnowledge(LeviCivitaError, ValueError):
    pass


class BeyondTruncation(LeviCivitaError, ValueError):
    pass


class CertificateViolation(LeviCivitaError):
    """A decay certificate was contradicted by a sampled index."""

    def __init__(self, index, detail=""):
        self.index = index
        self.detail = detail
        msg = f"certificate violated at n={index}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class MissingCertificate(LeviCivitaError):
    pass


class IndeterminateOverlap(LeviCivitaError):
    pass


class OverlapDetected(LeviCivitaError, ValueError):
    pass


class UnboundedLength(LeviCivitaError, ValueError):
    pass


class PrecisionExhausted(LeviCivitaError):
    pass


class GapCertificateViolation(LeviCivitaError):
    pass


class NotSMeasurable(LeviCivitaError):
    """No inner/outer cover construction applies to the set."""


class NotEvaluable(LeviCivitaError):
    pass


class IdentityViolation(LeviCivitaError, AssertionError):
    """A measure identity that must hold exactly failed at the working order."""


class DSLError(ValueError):
    """Base class for parse errors; carries the offending source span."""

    def __init__(self, message, span=None):
        self.span = span
        if span is not None:
            message = f"{message} at {span[0]}:{span[1]}"
        super().__init__(message)


class DSLSyntaxError(DSLError):
    pass


class DuplicateExponent(DSLError):
    pass


class UnknownPattern(DSLError):
    pass


class UnboundedComplement(DSLError):
    pass


class ZeroOperand(LeviCivitaError, ValueError):
    """Magnitude relations are only defined between nonzero numbers."""
