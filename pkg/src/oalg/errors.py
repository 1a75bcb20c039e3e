"""Exception taxonomy shared by all oalg modules."""


class OalgError(Exception):
    """Base class for every error this package raises on purpose."""


class ParseError(OalgError):
    pass


class ValidationError(OalgError):
    pass


class IndexOutOfRange(OalgError, IndexError):
    pass


class UnboundVariable(OalgError, KeyError):
    pass


class NotAHomomorphism(OalgError):
    pass


class NotACongruence(OalgError):
    pass


class NotOrderCongruence(OalgError):
    pass


class NotCompatibleQuasiorder(OalgError):
    pass


class NotMonotone(OalgError):
    pass


class PreconditionFailed(OalgError):
    pass


class SizeLimit(OalgError):
    pass


class CommutationFailure(OalgError):
    pass


class WitnessInconsistency(OalgError):
    """A certificate produced by this package failed its own recheck."""


class TheoremContradiction(OalgError):
    """An outcome the theory excludes was observed; always a hard failure."""


class NotApplicable(OalgError):
    pass


class SkeletonMismatch(OalgError):
    pass


class NotClosedChain(OalgError):
    pass
