"""Exception hierarchy shared by all modules."""


class AristotelianError(Exception):
    """Base class for every error raised by this package."""


class SeparationTooSmall(AristotelianError):
    pass


class InvalidOmega(AristotelianError):
    pass


class TauOffCurve(AristotelianError):
    pass


class MuExcluded(AristotelianError):
    pass


class NegativeBase(AristotelianError):
    pass


class DegenerateRoot(AristotelianError):
    pass


class DegenerateRoots(AristotelianError):
    pass


class SingularDirection(AristotelianError):
    pass


class NotSemiSymmetric(AristotelianError):
    pass


class EqualCouplings(AristotelianError):
    pass


class ZeroCouplingC(AristotelianError):
    pass


class NoValidBranch(AristotelianError):
    pass


class ReducedSingular(AristotelianError):
    pass


class NonPositiveLogArgument(AristotelianError):
    pass


class VerticalSlope(AristotelianError):
    pass


class ConformalSingular(AristotelianError):
    pass


class VanishingH2(AristotelianError):
    pass


class StepUnderflow(AristotelianError):
    pass


class SamplingError(AristotelianError):
    pass
