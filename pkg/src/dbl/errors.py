"""Exception hierarchy for the dbl library.

Every error raised on purpose derives from DblError so callers (and the CLI)
can distinguish domain errors (exit 2) from genuine bugs.
"""


class DblError(Exception):
    """Base class for all library errors."""


class UnsupportedValue(DblError):
    """Operation needs a rational norm value but got an irrational one."""


class UnsupportedRing(DblError):
    pass


class ElementOutOfRange(DblError):
    pass


class ValidationFailure(DblError):
    """A normed-ring or seminorm law failed; carries the first witness."""

    def __init__(self, law, witness, message=None):
        self.law = law
        self.witness = witness
        super().__init__(message or f"{law} violated at {witness!r}")


class SizeExceeded(DblError):
    pass


class SizeMismatch(DblError):
    pass


class NotClopen(DblError):
    pass


class NotContinuous(DblError):
    pass


class NotEmbedding(DblError):
    pass


class SpaceMismatch(DblError):
    pass


class RingMismatch(DblError):
    pass


class ModeMismatch(DblError):
    pass


class NotInIdeal(DblError):
    pass


class CannotSeparate(DblError):
    pass


class NotUltrafilter(DblError):
    pass


class UnrecognizedBasePoint(DblError):
    pass


class DisconnectedSpectrum(DblError):
    """Raised when a duality construction needs a connected spectrum.

    idempotent holds a nontrivial idempotent witness when one exists.
    """

    def __init__(self, ring, idempotent=None):
        self.ring = ring
        self.idempotent = idempotent
        msg = f"spectrum of {ring} is not connected"
        if idempotent is not None:
            msg += f" (idempotent witness {idempotent})"
        super().__init__(msg)


class UnsupportedHom(DblError):
    pass


class EquivalenceViolation(DblError):
    pass


class CocycleViolation(DblError):
    def __init__(self, triple, component, message=None):
        self.triple = triple
        self.component = component
        super().__init__(
            message
            or f"cocycle fails on triple {triple} at component {component}"
        )


class IsCover(DblError):
    pass


class NoSection(DblError):
    pass


class NonSeparating(DblError):
    def __init__(self, pair, message=None):
        self.pair = pair
        super().__init__(message or f"generators do not separate {pair}")


class ZeroFunction(DblError):
    pass
