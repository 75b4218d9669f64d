"""Orthonormal plane coordinates and the reduced planar flow.

``zeta`` is the normalised centre of mass; the flow lives on planes of
constant ``zeta`` with coordinates ``(eta, xi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numdiff
from .conserved import grad_potential
from .errors import ConformalSingular, NonPositiveLogArgument, ReducedSingular, VerticalSlope
from .model import Couplings, as_state, auxiliary_rhs

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)

# rows: grad zeta, grad eta, grad xi
PLANE_MATRIX = np.array(
    [
        [1 / SQRT3, 1 / SQRT3, 1 / SQRT3],
        [1 / SQRT2, -1 / SQRT2, 0.0],
        [1 / SQRT6, 1 / SQRT6, -2 / SQRT6],
    ]
)


@dataclass(frozen=True)
class PlanePoint:
    zeta: complex
    eta: complex
    xi: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.zeta, self.eta, self.xi])


def to_plane(state) -> PlanePoint:
    z, e, x = PLANE_MATRIX @ as_state(state)
    return PlanePoint(z, e, x)


def from_plane(point: PlanePoint) -> np.ndarray:
    return PLANE_MATRIX.T @ np.asarray(point.as_array(), dtype=complex)


def _denominators(eta, xi):
    return eta, SQRT3 * xi + eta, SQRT3 * xi - eta


def reduced_rhs(eta, xi, params: Couplings) -> tuple:
    d0, dp, dm = _denominators(eta, xi)
    if d0 == 0 or dp == 0 or dm == 0:
        raise ReducedSingular(f"reduced field singular at (eta, xi) = ({eta}, {xi})")
    a, b, c = params.a, params.b, params.c
    return c / d0 + b / dp - a / dm, SQRT3 * (b / dp + a / dm)


def reduced_potential(eta: float, xi: float, params: Couplings) -> float:
    d0, dp, dm = _denominators(eta, xi)
    if not (d0 > 0 and dp > 0 and dm > 0):
        raise NonPositiveLogArgument(f"log arguments ({d0}, {dp}, {dm}) must all be positive")
    return params.c * math.log(d0) + params.b * math.log(dp) + params.a * math.log(dm)


def grad_reduced_potential(eta, xi, params: Couplings) -> tuple:
    """Analytic gradient of the reduced potential; identical to :func:`reduced_rhs`."""
    d0, dp, dm = _denominators(eta, xi)
    a, b, c = params.a, params.b, params.c
    return c / d0 + b / dp - a / dm, SQRT3 * b / dp + SQRT3 * a / dm


def characteristic_slope(eta, xi, params: Couplings):
    """d xi / d eta along the reduced flow (degree-zero homogeneous in (eta, xi))."""
    a, b, c = params.a, params.b, params.c
    num = SQRT3 * (a - b) * eta ** 2 + 3 * (a + b) * eta * xi
    den = (a + b + c) * eta ** 2 + SQRT3 * (a - b) * eta * xi - 3 * c * xi ** 2
    if den == 0:
        raise VerticalSlope(f"vertical characteristic at (eta, xi) = ({eta}, {xi})")
    return -num / den


def h_full_plane(eta, xi):
    return xi ** 3 - 3 * xi * eta ** 2


def grad_h_full_plane(eta, xi):
    return -6 * xi * eta, 3 * xi ** 2 - 3 * eta ** 2


def conformal_factor_full(eta, xi):
    den = SQRT3 * eta * (3 * xi ** 2 - eta ** 2)
    if den == 0:
        raise ConformalSingular(f"conformal factor singular at (eta, xi) = ({eta}, {xi})")
    return 1 / den


def conformal_factor_full_state(state):
    """The same factor written in (u, v, w)."""
    p = to_plane(state)
    return conformal_factor_full(p.eta, p.xi)


def symplectic_residual(eta, xi, params: Couplings, phi, h_grad) -> tuple[float, float, float]:
    """Least-squares fit of ``kappa`` in  dF/deta = -kappa*phi*dh/dxi,  dF/dxi = kappa*phi*dh/deta.

    Returns ``(kappa, residual, scale)``.
    """
    fe, fx = grad_reduced_potential(eta, xi, params)
    he, hx = h_grad(eta, xi)
    ph = phi(eta, xi)
    basis = np.array([-ph * hx, ph * he])
    target = np.array([fe, fx])
    kappa = float(basis @ target / (basis @ basis))
    res = float(np.linalg.norm(target - kappa * basis))
    return kappa, res, float(np.abs(target).sum() + abs(kappa) * np.abs(basis).sum())


def reduced_divergence(eta: float, xi: float, params: Couplings) -> float:
    """Laplacian of the reduced potential, by central differences of its gradient."""
    def fe(x):
        return grad_reduced_potential(x[0], x[1], params)[0]

    def fx(x):
        return grad_reduced_potential(x[0], x[1], params)[1]

    pt = np.array([eta, xi], dtype=float)
    return float(numdiff.partial(fe, pt, 0) + numdiff.partial(fx, pt, 1))


def liouville_residual(phi, eta: float, xi: float, params: Couplings) -> tuple[float, float]:
    """Left side of  eta' dphi/deta + xi' dphi/dxi + phi * lap F = 0  and its scale."""
    ed, xd = reduced_rhs(eta, xi, params)
    pt = np.array([eta, xi], dtype=float)

    def f(x):
        return phi(x[0], x[1])

    pe = numdiff.partial(f, pt, 0)
    px = numdiff.partial(f, pt, 1)
    ph = phi(eta, xi)
    lap = reduced_divergence(eta, xi, params)
    terms = (ed * pe, xd * px, ph * lap)
    return float(sum(terms)), float(sum(abs(t) for t in terms))


def liouville_residual_3d(rho, state, params: Couplings) -> tuple[float, float]:
    """``U . grad rho + rho div U`` for a density on (u, v, w) and its scale."""
    x = np.asarray(as_state(state).real, dtype=float)

    def U(y):
        return auxiliary_rhs(y, params).real

    grad_rho = numdiff.gradient(lambda y: rho(y), x)
    div = float(np.trace(numdiff.jacobian(U, x)))
    Ux = U(x)
    r = rho(x)
    terms = list(Ux * grad_rho) + [r * div]
    return float(sum(terms)), float(sum(abs(t) for t in terms))


def pushforward(state, params: Couplings) -> np.ndarray:
    """The auxiliary field expressed in plane coordinates (zeta', eta', xi')."""
    return PLANE_MATRIX @ auxiliary_rhs(state, params)


def potential_gradient_plane(state, params: Couplings) -> np.ndarray:
    return PLANE_MATRIX @ grad_potential(state, params)
