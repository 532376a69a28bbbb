"""Exception hierarchy.

Every validation failure raised by the library derives from
:class:`AffineStructError` (itself a ``ValueError``); the CLI maps these to
exit code 1 and anything else to exit code 2.
"""


class AffineStructError(ValueError):
    pass


class DimensionMismatch(AffineStructError):
    pass


class SingularMap(AffineStructError):
    pass


class InvalidWord(AffineStructError):
    pass


class NotLinePreserving(AffineStructError):
    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending or {}


class ScalesLine(AffineStructError):
    pass


class EigenvalueOne(AffineStructError):
    pass


class NotAnEigenvector(AffineStructError):
    pass


class MissingTransition(AffineStructError):
    pass


class SeamMismatch(AffineStructError):
    def __init__(self, segment, gap):
        super().__init__(f"seam mismatch entering segment {segment}: gap {gap:.3g}")
        self.segment = segment
        self.gap = gap


class NotALoop(AffineStructError):
    pass


class NotInGroup(AffineStructError):
    pass


class SamplerPrecondition(AffineStructError):
    pass


class InvalidParameter(AffineStructError):
    pass
