"""Exception hierarchy shared by every module of the package."""


class FusionError(Exception):
    """Base class for all errors raised by fusionscale."""


# numerics
class EmptyInput(FusionError, ValueError):
    pass


class DimensionMismatch(FusionError, ValueError):
    pass


class NonFinite(FusionError, ValueError):
    pass


class NotSquare(FusionError, ValueError):
    pass


class NotSymmetric(FusionError, ValueError):
    pass


class IterationLimit(FusionError, RuntimeError):
    """The NNLS active-set loop exceeded its iteration budget."""


class Infeasible(FusionError):
    """The max-min LP has an empty feasible set at the requested tolerance."""


# subspaces
class ZeroSubspace(FusionError, ValueError):
    pass


class OverlappingSubspaces(FusionError, ValueError):
    pass


# fusion frames
class NonpositiveWeight(FusionError, ValueError):
    pass


class NotAFrame(FusionError, ValueError):
    pass


class NotRieszBasis(FusionError, ValueError):
    pass


class LengthMismatch(FusionError, ValueError):
    pass


# scaling and theorem checkers
class NonpositiveGamma(FusionError, ValueError):
    pass


class MalformedDecomposition(FusionError, ValueError):
    pass


class WrongAmbientDimension(FusionError, ValueError):
    pass


# frame files and the command line
class ParseError(FusionError, ValueError):
    pass


class RankDeficientBasis(FusionError, ValueError):
    pass


class BadDecomposition(FusionError, ValueError):
    pass


class UnknownTheoremId(FusionError, KeyError):
    pass


class UnknownExample(FusionError, KeyError):
    pass


class ParameterOutOfRange(FusionError, ValueError):
    pass


class InvalidSpec(FusionError, ValueError):
    pass
