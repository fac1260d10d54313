"""Exception hierarchy shared by all modules."""


class BdMorseError(Exception):
    """Base class for every error raised by the package."""


class ParseError(BdMorseError):
    pass


class NonManifold(BdMorseError):
    pass


class DanglingVertex(BdMorseError):
    pass


class DuplicateTopSimplex(BdMorseError):
    pass


class LabelCountMismatch(BdMorseError):
    pass


class UnknownExample(BdMorseError):
    pass


class ResolutionTooSmall(BdMorseError):
    pass


class ArithmeticOverflow(BdMorseError):
    pass


class RankDisagreement(BdMorseError):
    """Exact and prime-field ranks disagree on two independent primes."""


class DegenerateVertex(BdMorseError):
    def __init__(self, vertex, reduced_betti):
        self.vertex = vertex
        self.reduced_betti = tuple(reduced_betti)
        super().__init__(
            f"vertex {vertex}: lower link has reduced Betti profile "
            f"{self.reduced_betti}, not a point or a sphere"
        )


class ModeMismatch(BdMorseError):
    pass


class MissingMorseValues(BdMorseError):
    pass


class ScaleOverflow(BdMorseError):
    pass


class NonpositiveWeight(BdMorseError):
    pass


class GapAmbiguity(BdMorseError):
    pass


class ConvergenceFailure(BdMorseError):
    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message if residual is None else f"{message} (residual {residual:.3e})")


class RequiresFullSpectrum(BdMorseError):
    pass


class ClusterAmbiguity(BdMorseError):
    pass


class TruncationTooSmall(BdMorseError):
    pass


class GridTooCoarse(BdMorseError):
    pass


class QuadratureFailure(BdMorseError):
    pass


class EnergyCapTooSmall(BdMorseError):
    pass


class ScheduleTooShort(BdMorseError):
    pass


class LengthMismatch(BdMorseError):
    pass


class NotOddDimensional(BdMorseError):
    pass
