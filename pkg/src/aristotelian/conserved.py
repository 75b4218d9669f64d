"""Conserved quantities of the three-body flow and their analytic gradients.

Every conservation check here works with gradients (logarithmic derivatives
are rational), never with values of multivalued logarithms, so the checks are
free of branch-cut artefacts.  Returned log values use the principal branch
and are meant for display.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import (
    DegenerateRoot,
    DegenerateRoots,
    EqualCouplings,
    MuExcluded,
    NegativeBase,
    NotSemiSymmetric,
    SeparationTooSmall,
    SingularDirection,
)
from .model import EPS_SEP, Couplings, ExtendedPoint, as_state, auxiliary_rhs, check_separation

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)

GRAD_S = np.array([1.0, 1.0, -2.0])  # gradient of u + v - 2w
GRAD_D = np.array([1.0, -1.0, 0.0])  # gradient of u - v
ONES = np.ones(3)

_EXCLUDED_MU = (0.25, 1.0)


def directional_residual(grad, field) -> tuple[complex, float]:
    """Return ``(grad . field, sum |grad_i field_i|)``."""
    terms = np.asarray(grad) * np.asarray(field)
    return complex(terms.sum()), float(np.abs(terms).sum())


# -- time-dependent integrals of the auxiliary model ---------------------------

def h1(state) -> complex:
    return complex(as_state(state).sum())


def grad_h1(state=None) -> np.ndarray:
    return ONES.astype(complex)


def h2_aux(point: ExtendedPoint, params: Couplings) -> complex:
    s = as_state(point.state)
    return complex((s * s).sum() - 2 * params.total * point.tau)


def grad_h2_aux(point: ExtendedPoint, params: Couplings) -> tuple[complex, np.ndarray]:
    """``(d/dtau, spatial gradient)`` of H2."""
    return complex(-2 * params.total), 2 * as_state(point.state)


def h3_aux(point: ExtendedPoint, params: Couplings) -> complex:
    u, v, w = as_state(point.state)
    return complex(u * v + u * w + v * w + params.total * point.tau)


def grad_h3_aux(point: ExtendedPoint, params: Couplings) -> tuple[complex, np.ndarray]:
    s = as_state(point.state)
    return complex(params.total), s.sum() - s


def total_derivative(dtau, grad, point: ExtendedPoint, params: Couplings) -> tuple[complex, float]:
    """Derivative along the suspended field ``d/dtau + U`` with its scale."""
    U = auxiliary_rhs(point.state, params)
    val, scale = directional_residual(grad, U)
    return val + dtau, scale + abs(dtau)


def relation2_coefficient(point: ExtendedPoint, params: Couplings) -> complex:
    """Coefficient ``k`` in  sum of squared differences = 2 H2 - 2 H3 + k (a+b+c) tau."""
    u, v, w = as_state(point.state)
    lhs = (u - v) ** 2 + (v - w) ** 2 + (w - u) ** 2
    rest = lhs - 2 * h2_aux(point, params) + 2 * h3_aux(point, params)
    return rest / (params.total * point.tau)


# -- physical-time versions ----------------------------------------------------

def h1_physical(t: float, state, params: Couplings) -> complex:
    return complex(cmath.exp(-1j * params.omega * t) * as_state(state).sum())


def h2_physical_printed(t: float, state, params: Couplings) -> complex:
    s = as_state(state)
    return complex(0.25 * cmath.exp(-4j * params.omega * t) * (s * s).sum() - params.total * t)


def h2_physical(t: float, state, params: Couplings) -> complex:
    """H2 of the auxiliary model pulled back through the time transformation."""
    s = as_state(state)
    om = params.omega
    return complex(cmath.exp(-2j * om * t) * ((s * s).sum() + params.total / (1j * om)))


# -- potential -------------------------------------------------------------------

def potential(state, params: Couplings) -> complex:
    s = as_state(state)
    check_separation(s)
    u, v, w = s
    return complex(
        params.a * cmath.log(v - w) + params.b * cmath.log(u - w) + params.c * cmath.log(u - v)
    )


def grad_potential(state, params: Couplings) -> np.ndarray:
    s = as_state(state)
    check_separation(s)
    u, v, w = s
    a, b, c = params.a, params.b, params.c
    return np.array(
        [
            b / (u - w) + c / (u - v),
            a / (v - w) - c / (u - v),
            -a / (v - w) - b / (u - w),
        ]
    )


# -- time-independent integrals ----------------------------------------------------

def _sd(state):
    u, v, w = as_state(state)
    return u + v - 2 * w, u - v


def h_full(state) -> complex:
    s, d = _sd(state)
    return complex(s * (s * s - 9 * d * d) / (6 * SQRT6))


def grad_h_full(state) -> np.ndarray:
    s, d = _sd(state)
    ds = (3 * s * s - 9 * d * d) / (6 * SQRT6)
    dd = -18 * s * d / (6 * SQRT6)
    return ds * GRAD_S + dd * GRAD_D


def mu_of(params: Couplings) -> float:
    if params.a != params.b:
        raise NotSemiSymmetric(f"mu needs a == b, got a={params.a}, b={params.b}")
    den = 8 * params.a + params.c
    if den == 0:
        raise NotSemiSymmetric("8a + c = 0 leaves mu undefined")
    return (2 * params.a + params.c) / den


def k_of(params: Couplings) -> float:
    if params.a == params.b:
        raise EqualCouplings("k needs a != b")
    return (params.a + params.b) / (SQRT3 * (params.a - params.b))


def _check_mu(mu: float) -> None:
    for bad in _EXCLUDED_MU:
        if abs(mu - bad) < 1e-12:
            raise MuExcluded(f"mu = {mu} is excluded")


def _power(base, expo):
    """``base**expo`` on the real branch; complex bases use the principal branch."""
    if abs(expo - round(expo)) < 1e-12:
        return base ** int(round(expo))
    if abs(base.imag) == 0.0:
        if base.real <= 0:
            raise NegativeBase(f"non-integer power {expo:.6g} of non-positive base {base.real:.6g}")
        return complex(base.real ** expo)
    return base ** expo


def _semi_exponents(mu: float) -> tuple[float, float]:
    return 2 * mu / (1 - mu), 3 / (4 * mu - 1)


def h_semi(state, mu: float) -> complex:
    _check_mu(mu)
    alpha, beta = _semi_exponents(mu)
    s, d = _sd(state)
    return complex(_power(s, alpha) * (s * s - beta * d * d))


def grad_h_semi(state, mu: float) -> np.ndarray:
    _check_mu(mu)
    alpha, beta = _semi_exponents(mu)
    s, d = _sd(state)
    sa = _power(s, alpha)
    ds = alpha * sa / s * (s * s - beta * d * d) + 2 * s * sa
    dd = -2 * beta * d * sa
    return ds * GRAD_S + dd * GRAD_D


def h_noninteracting_equal(state) -> complex:
    s, d = _sd(state)
    return complex(0.25 * s * d ** 3)


def grad_h_noninteracting_equal(state) -> np.ndarray:
    s, d = _sd(state)
    return 0.25 * d ** 3 * GRAD_S + 0.75 * s * d * d * GRAD_D


def theta_of(state) -> complex:
    """Ratio xi/eta of the plane coordinates, written in (u, v, w)."""
    s, d = _sd(state)
    if d == 0:
        raise SeparationTooSmall("u = v makes the ratio xi/eta singular")
    return s / (SQRT3 * d)


def grad_theta(state) -> np.ndarray:
    s, d = _sd(state)
    return (GRAD_S / d - s * GRAD_D / d ** 2) / SQRT3


def _k_root(k: float) -> complex:
    disc = 4 * k * k - 1
    if abs(disc) < 1e-12:
        raise DegenerateRoot("4k^2 - 1 = 0: the two logarithms merge")
    return cmath.sqrt(disc)


def h_noninteracting_general(state, k: float) -> complex:
    r = _k_root(k)
    s = as_state(state)
    check_separation(s, EPS_SEP)
    u, v, _ = s
    th = theta_of(s)
    return complex(
        2 * r * cmath.log((u - v) / SQRT2)
        + (r - k) * cmath.log(th - r + 2 * k)
        + (r + k) * cmath.log(th + r + 2 * k)
    )


def grad_h_noninteracting_general(state, k: float) -> np.ndarray:
    r = _k_root(k)
    s = as_state(state)
    check_separation(s, EPS_SEP)
    u, v, _ = s
    th = theta_of(s)
    gt = grad_theta(s)
    return 2 * r * GRAD_D / (u - v) + (r - k) * gt / (th - r + 2 * k) + (r + k) * gt / (th + r + 2 * k)


def general_coefficients(roots, printed: bool = False) -> tuple[complex, complex, complex, complex]:
    """Coefficients of ln(eta) and the three ln(theta - theta_i) terms.

    With ``printed=True`` the log-theta coefficients carry the sign pattern of
    the literal closed form; the default flips them, which is what the
    partial-fraction residues of the characteristic integral give.
    """
    if roots.degenerate:
        raise DegenerateRoots("repeated cubic roots; partial fractions do not exist")
    t1, t2, t3 = roots.theta1, roots.thetaPlus, roots.thetaMinus
    tp, tm = roots.numPlus, roots.numMinus
    c0 = (t1 - t2) * (t2 - t3) * (t3 - t1)
    c1 = (t1 - tp) * (t2 - t3) * (t1 - tm)
    c2 = (t2 - tp) * (t2 - tm) * (t3 - t1)
    c3 = (t1 - t2) * (t3 - tp) * (t3 - tm)
    sign = 1 if printed else -1
    return c0, sign * c1, sign * c2, sign * c3


def _check_general_domain(state, roots) -> None:
    from .roots import singular_direction_ok

    check_separation(state, EPS_SEP)
    for th in roots.real_thetas():
        if not singular_direction_ok(state, th):
            raise SingularDirection(f"state lies on the singular plane of root theta = {th:.6g}")


def h_general(state, roots, printed: bool = False) -> complex:
    s = as_state(state)
    _check_general_domain(s, roots)
    c0, c1, c2, c3 = general_coefficients(roots, printed)
    u, v, _ = s
    th = theta_of(s)
    return complex(
        c0 * cmath.log((u - v) / SQRT2)
        + c1 * cmath.log(th - roots.theta1)
        + c2 * cmath.log(th - roots.thetaPlus)
        + c3 * cmath.log(th - roots.thetaMinus)
    )


def grad_h_general(state, roots, printed: bool = False) -> np.ndarray:
    s = as_state(state)
    _check_general_domain(s, roots)
    c0, c1, c2, c3 = general_coefficients(roots, printed)
    u, v, _ = s
    th = theta_of(s)
    gt = grad_theta(s)
    return (
        c0 * GRAD_D / (u - v)
        + (c1 / (th - roots.theta1) + c2 / (th - roots.thetaPlus) + c3 / (th - roots.thetaMinus)) * gt
    )
