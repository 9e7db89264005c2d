"""Exception types shared across the pipeline."""


class ReuleauxError(Exception):
    """Base class for every error raised by this package."""


class InvalidMap(ReuleauxError):
    """Dart arrays violate the rotation-system invariants."""


class CodecError(ReuleauxError):
    pass


class BadHeader(CodecError):
    pass


class TruncatedRecord(CodecError):
    pass


class NeighborOutOfRange(CodecError):
    pass


class AsymmetricAdjacency(CodecError):
    pass


class UnsupportedExtension(CodecError):
    pass


class TooLarge(CodecError):
    pass


class SizeCap(ReuleauxError):
    """Internal enumeration requested beyond its supported vertex count."""


class NotReducible(ReuleauxError):
    """The chosen edge is also a diameter edge, so remove-contract is undefined."""


class CertificationFailure(ReuleauxError):
    """A map produced by reduction failed the strong-involution re-check."""


class RejectNonInjective(ReuleauxError):
    pass


class NonConvergence(ReuleauxError):
    """The optimizer stopped above threshold; carries the best result found."""

    def __init__(self, message, embedding=None, report=None):
        super().__init__(message)
        self.embedding = embedding
        self.report = report
