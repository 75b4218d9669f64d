"""Aristotelian three-body model: dynamics, integrals, Poisson structures and audits."""
from .errors import AristotelianError
from .model import Couplings, ExtendedPoint, auxiliary_rhs, physical_rhs, to_auxiliary, from_auxiliary
from .roots import classify

__all__ = [
    "AristotelianError",
    "Couplings",
    "ExtendedPoint",
    "auxiliary_rhs",
    "physical_rhs",
    "to_auxiliary",
    "from_auxiliary",
    "classify",
]
