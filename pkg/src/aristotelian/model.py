"""Physical (rotating) and auxiliary (pure two-body) vector fields.

States are length-3 complex numpy arrays ``(u, v, w)``.  The physical model
uses ``(x, y, z)`` with the same layout.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidOmega, SeparationTooSmall, TauOffCurve

EPS_SEP = 1e-10


@dataclass(frozen=True)
class Couplings:
    a: float
    b: float
    c: float
    omega: float = 1.0

    @property
    def total(self) -> float:
        return self.a + self.b + self.c

    def with_(self, **kw) -> "Couplings":
        d = dict(a=self.a, b=self.b, c=self.c, omega=self.omega)
        d.update(kw)
        return Couplings(**d)


@dataclass(frozen=True)
class ExtendedPoint:
    tau: complex
    state: np.ndarray


def as_state(state) -> np.ndarray:
    s = np.asarray(state, dtype=complex)
    if s.shape != (3,):
        raise ValueError(f"state must have three components, got shape {s.shape}")
    return s


def min_separation(state) -> float:
    u, v, w = as_state(state)
    return float(min(abs(u - v), abs(v - w), abs(w - u)))


def check_separation(state, eps: float = EPS_SEP) -> None:
    sep = min_separation(state)
    if not sep > eps:
        raise SeparationTooSmall(f"minimum pairwise separation {sep:.3e} <= {eps:.1e}")


def interaction(state, params: Couplings, eps: float = EPS_SEP) -> np.ndarray:
    s = as_state(state)
    check_separation(s, eps)
    u, v, w = s
    a, b, c = params.a, params.b, params.c
    return np.array(
        [
            c / (u - v) + b / (u - w),
            a / (v - w) + c / (v - u),
            b / (w - u) + a / (w - v),
        ]
    )


def auxiliary_rhs(state, params: Couplings, eps: float = EPS_SEP) -> np.ndarray:
    """Velocity of the auxiliary model (derivative in complexified time)."""
    return interaction(state, params, eps)


def physical_rhs(state, params: Couplings, eps: float = EPS_SEP) -> np.ndarray:
    """Velocity of the rotating physical model in real time ``t``."""
    s = as_state(state)
    return 1j * params.omega * s + interaction(s, params, eps)


def _check_omega(params: Couplings) -> None:
    if not params.omega > 0:
        raise InvalidOmega(f"omega must be positive, got {params.omega}")


def tau_of_t(t: float, omega: float) -> complex:
    return -cmath.exp(-2j * omega * t) / (2j * omega)


def to_auxiliary(t: float, state, params: Couplings) -> ExtendedPoint:
    _check_omega(params)
    s = as_state(state)
    return ExtendedPoint(tau=tau_of_t(t, params.omega), state=cmath.exp(-1j * params.omega * t) * s)


def from_auxiliary(point: ExtendedPoint, params: Couplings, tol: float = 1e-9):
    """Invert :func:`to_auxiliary`.

    ``tau`` only fixes ``t`` modulo ``pi/omega``; the pair ``(t + pi/omega, -x)``
    maps to the same point as ``(t, x)``.  The principal time in
    ``[0, pi/omega)`` is returned together with the matching physical state.
    """
    _check_omega(params)
    om = params.omega
    z = -2j * om * complex(point.tau)  # = exp(-2 i omega t)
    if abs(abs(z) - 1.0) > tol:
        raise TauOffCurve(f"|2 omega tau| = {abs(z):.6g}, expected 1")
    t = (-cmath.phase(z) / (2 * om)) % (math.pi / om)
    if math.isclose(t, math.pi / om):
        t = 0.0
    x = cmath.exp(1j * om * t) * as_state(point.state)
    return t, x
