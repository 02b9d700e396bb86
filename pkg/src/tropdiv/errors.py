"""Exception hierarchy shared by every module."""


class TropDivError(Exception):
    """Base class for all library errors."""


class DisconnectedGraph(TropDivError):
    pass


class GraphMismatch(TropDivError):
    pass


class InvariantViolation(TropDivError):
    """A domain object would break one of its structural invariants."""


class ParseError(TropDivError):
    pass


class EpsTooLarge(TropDivError):
    pass


class NotEffectiveAwayFromQ(TropDivError):
    pass


class InternalError(TropDivError):
    """An algorithm exceeded its safety cap or reached an impossible state."""


class NotASpanningTree(TropDivError):
    pass


class LatticeMismatch(TropDivError):
    pass


class UnsupportedSupport(TropDivError):
    pass


class DisconnectedCover(TropDivError):
    pass


class DegreeNonZero(TropDivError):
    pass


class NotPrym(TropDivError):
    pass


class NotAntiSymmetric(TropDivError):
    pass


class WrongDegree(TropDivError):
    pass


class GenericityFailure(TropDivError):
    pass
