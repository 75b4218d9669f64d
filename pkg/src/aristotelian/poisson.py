"""Poisson tensors in three dimensions, the time-extended bivector, and the
finite-difference residual engines that audit them.

Conventions for the extended bivector on coordinates ``(tau, u, v, w)``::

    Lambda^{0i} = V^i,   Lambda^{ij} = U^i E^j - E^i U^j,   V = E - 2 tau U
    X^mu = sum_nu Lambda^{mu nu} d_nu H

Under this convention ``Lambda(dH) = (1, U)`` for ``H = ln(H2)/2``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numdiff
from .conserved import grad_h2_aux, h2_aux
from .errors import MuExcluded, VanishingH2
from .model import Couplings, ExtendedPoint, as_state, auxiliary_rhs, check_separation

SQRT6 = math.sqrt(6.0)

_PAIRS = ((0, 1), (0, 2), (1, 2))


class SkewTensor3:
    """A 3x3 antisymmetric matrix stored through its three upper entries."""

    __slots__ = ("m01", "m02", "m12")

    def __init__(self, m01, m02, m12):
        self.m01, self.m02, self.m12 = m01, m02, m12

    @property
    def matrix(self) -> np.ndarray:
        m = np.zeros((3, 3), dtype=complex)
        for (i, j), val in zip(_PAIRS, (self.m01, self.m02, self.m12)):
            m[i, j] = val
            m[j, i] = -val
        return m

    def __mul__(self, s) -> "SkewTensor3":
        return SkewTensor3(self.m01 * s, self.m02 * s, self.m12 * s)

    __rmul__ = __mul__

    def __add__(self, other: "SkewTensor3") -> "SkewTensor3":
        return SkewTensor3(self.m01 + other.m01, self.m02 + other.m02, self.m12 + other.m12)

    def __neg__(self) -> "SkewTensor3":
        return self * -1

    def __matmul__(self, vec):
        return self.matrix @ np.asarray(vec)

    @classmethod
    def from_matrix(cls, m) -> "SkewTensor3":
        m = np.asarray(m)
        return cls(m[0, 1], m[0, 2], m[1, 2])

    def __repr__(self) -> str:
        return f"SkewTensor3({self.m01!r}, {self.m02!r}, {self.m12!r})"


def hat(x) -> SkewTensor3:
    """Matrix of ``y -> x cross y``."""
    x1, x2, x3 = x
    return SkewTensor3(-x3, x2, -x1)


# constant patterns appearing in the explicit tensors
K_CYCLIC = SkewTensor3(1, -1, 1)
F2_A = SkewTensor3(-2, -1, 1)
F2_B = SkewTensor3(0, 1, 1)
N2_A = SkewTensor3(2, 1, -1)
N2_B = SkewTensor3(0, -1, -1)


@dataclass(frozen=True)
class TensorField3:
    name: str
    eval: Callable[[np.ndarray], SkewTensor3]
    guard: Callable[[np.ndarray], bool] = field(default=lambda s: True)

    def __call__(self, state) -> SkewTensor3:
        return self.eval(as_state(state))

    def __add__(self, other: "TensorField3") -> "TensorField3":
        return TensorField3(
            f"{self.name}+{other.name}",
            lambda s: self.eval(s) + other.eval(s),
            lambda s: self.guard(s) and other.guard(s),
        )

    def conjugate(self, perm) -> "TensorField3":
        """``Pi P Pi^T`` for the permutation matrix sending e_i to e_perm[i]."""
        Pi = np.eye(3)[list(perm)].T

        def ev(s):
            return SkewTensor3.from_matrix(Pi @ self.eval(s).matrix @ Pi.T)

        return TensorField3(f"{self.name}^{''.join(map(str, perm))}", ev, self.guard)

    def scaled(self, k) -> "TensorField3":
        return TensorField3(f"{k}*{self.name}", lambda s: self.eval(s) * k, self.guard)


def cross_tensor(phi, grad_H, name: str = "cross") -> TensorField3:
    """Tensor acting on a gradient ``dG`` as ``phi * grad_H x dG``."""
    return TensorField3(name, lambda s: hat(np.asarray(grad_H(s)) * phi(s)))


# -- the explicit tensors ------------------------------------------------------------

def _diffs(state):
    u, v, w = as_state(state)
    return u - v, v - w, w - u


def p_f1(state) -> SkewTensor3:
    check_separation(state)
    d1, d2, d3 = _diffs(state)
    return K_CYCLIC * (-1 / (SQRT6 * d1 * d2 * d3))


def p_f2(state) -> SkewTensor3:
    """As printed."""
    check_separation(state)
    d1, d2, d3 = _diffs(state)
    return F2_A * ((d1 / (d2 * d3) + 2 / d1) / 6) + F2_B * ((1 / d2 - 1 / d3) / 2)


def _check_mu(mu):
    for bad in (0.25, 1.0):
        if abs(mu - bad) < 1e-12:
            raise MuExcluded(f"mu = {mu} is excluded")


def p_s1(state, mu: float, c: float) -> SkewTensor3:
    _check_mu(mu)
    check_separation(state)
    u, v, w = as_state(state)
    d1, d2, d3 = _diffs(state)
    s = u + v - 2 * w
    expo = (1 - 3 * mu) / (1 - mu)
    if abs(s.imag) == 0.0 and abs(expo - round(expo)) > 1e-12:
        if s.real <= 0:
            from .errors import NegativeBase

            raise NegativeBase("u + v - 2w must be positive for a non-integer power")
        sp = complex(s.real ** expo)
    else:
        sp = s ** expo
    return K_CYCLIC * (-1.5 * c * sp / (d1 * d2 * d3))


def p_s2(state, mu: float, c: float) -> SkewTensor3:
    _check_mu(mu)
    check_separation(state)
    d1, d2, d3 = _diffs(state)
    first = -c / 12 / d1 * (d2 / d3 + d3 / d2 - 2)
    second = c / 12 * 3 * mu / (4 * mu - 1) * d1 / (d2 * d3)
    third = c / 4 * (1 - mu) / (4 * mu - 1) * (1 / d3 - 1 / d2)
    return N2_A * (first + second) + N2_B * third


def p_n1(state) -> SkewTensor3:
    check_separation(state)
    d1, d2, d3 = _diffs(state)
    return K_CYCLIC * (2 / (d1 * d1 * d2 * d3))


def p_n2(state) -> SkewTensor3:
    check_separation(state)
    d1, d2, d3 = _diffs(state)
    return N2_A * (d1 / (d2 * d3) / 6) + N2_B * ((1 / d3 - 1 / d2) / 2)


def _sep_guard(s) -> bool:
    u, v, w = s
    return min(abs(u - v), abs(v - w), abs(w - u)) > 1e-10


def _semi_guard(s) -> bool:
    u, v, w = s
    return _sep_guard(s) and (u + v - 2 * w).real > 0


P_F1 = TensorField3("P_f1", p_f1, _sep_guard)
P_F2 = TensorField3("P_f2", p_f2, _sep_guard)
P_N1 = TensorField3("P_n1", p_n1, _sep_guard)
P_N2 = TensorField3("P_n2", p_n2, _sep_guard)


def semi_tensors(mu: float, c: float) -> tuple[TensorField3, TensorField3]:
    return (
        TensorField3("P_s1", lambda s: p_s1(s, mu, c), _semi_guard),
        TensorField3("P_s2", lambda s: p_s2(s, mu, c), _sep_guard),
    )


# -- residual engines ---------------------------------------------------------------

def jacobi_residual(P, state) -> tuple[float, float]:
    """Single Jacobi component of a 3D bivector, by central differences.

    Returns ``(|residual|, scale)`` where scale sums the moduli of all terms.
    """
    x = np.asarray(as_state(state).real, dtype=float)
    M = P(x).matrix
    dM = numdiff.jacobian(lambda y: P(y).matrix, x)  # dM[i, j, l] = d_l P^{ij}
    total = 0j
    scale = 0.0
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        terms = M[i, :] * dM[j, k, :]
        total += terms.sum()
        scale += float(np.abs(terms).sum())
    return abs(total), scale


def compatibility_residual(P1, P2, state) -> tuple[float, float]:
    return jacobi_residual(lambda s: P1(s) + P2(s), state)


def hamilton_residual(P, grad_H, state, params: Couplings) -> tuple[float, complex, float]:
    """Fit ``kappa`` minimising ``|P grad_H - kappa U|``.

    Returns ``(residual, kappa, |U|)``.
    """
    s = as_state(state)
    U = auxiliary_rhs(s, params)
    X = P(s) @ grad_H(s)
    nU = float(np.linalg.norm(U))
    kappa = complex(np.vdot(U, X) / np.vdot(U, U))
    return float(np.linalg.norm(X - kappa * U)), kappa, nU


# -- time-extended structure -----------------------------------------------------------

def symmetry_field(point: ExtendedPoint, params: Couplings, coeff: float = 2.0) -> np.ndarray:
    s = as_state(point.state)
    return s - coeff * point.tau * auxiliary_rhs(s, params)


def extended_lambda(point: ExtendedPoint, params: Couplings, coeff: float = 2.0) -> np.ndarray:
    """The 4x4 antisymmetric matrix of the extended bivector."""
    s = as_state(point.state)
    U = auxiliary_rhs(s, params)
    V = s - coeff * point.tau * U
    L = np.zeros((4, 4), dtype=complex)
    L[0, 1:] = V
    L[1:, 0] = -V
    L[1:, 1:] = np.outer(U, s) - np.outer(s, U)
    return L


def _split(x):
    return ExtendedPoint(tau=x[0], state=np.asarray(x[1:], dtype=complex))


JACOBI_TRIPLES = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))


def extended_jacobi_residual(point: ExtendedPoint, params: Couplings, coeff: float = 2.0) -> tuple[float, float]:
    """Worst Jacobi component of the extended bivector and its scale."""
    x = np.concatenate([[complex(point.tau).real], as_state(point.state).real]).astype(float)

    def lam(y):
        return extended_lambda(_split(y), params, coeff)

    L = lam(x)
    dL = numdiff.jacobian(lam, x)  # dL[m, n, s] = d_s Lambda^{mn}
    worst, worst_scale = 0.0, 0.0
    for m, n, r in JACOBI_TRIPLES:
        terms = np.concatenate([L[m, :] * dL[n, r, :], L[n, :] * dL[r, m, :], L[r, :] * dL[m, n, :]])
        res = abs(terms.sum())
        sc = float(np.abs(terms).sum())
        if res >= worst:
            worst, worst_scale = res, sc
    return worst, worst_scale


def extended_hamiltonian_field(point: ExtendedPoint, params: Couplings, dH) -> np.ndarray:
    """``X^mu = sum_nu Lambda^{mu nu} d_nu H`` for a covector ``dH`` on (tau, u, v, w)."""
    return extended_lambda(point, params) @ np.asarray(dH, dtype=complex)


def log_h2_covector(point: ExtendedPoint, params: Couplings) -> np.ndarray:
    h2 = h2_aux(point, params)
    if abs(h2) < 1e-14:
        raise VanishingH2("H2 vanishes; ln(H2)/2 is singular")
    dt, g = grad_h2_aux(point, params)
    return np.concatenate([[dt], g]) / (2 * h2)


def suspended_field(point: ExtendedPoint, params: Couplings) -> np.ndarray:
    return np.concatenate([[1.0], auxiliary_rhs(point.state, params)])


def symmetry_commutator_residual(point: ExtendedPoint, params: Couplings, coeff: float = 2.0) -> tuple[float, float]:
    """Largest component of ``[d_tau + U, E - coeff tau U]`` and its scale."""
    x = np.concatenate([[complex(point.tau).real], as_state(point.state).real]).astype(float)

    def X(y):
        return suspended_field(_split(y), params)

    def Y(y):
        p = _split(y)
        return np.concatenate([[0.0], symmetry_field(p, params, coeff)])

    JX = numdiff.jacobian(X, x)
    JY = numdiff.jacobian(Y, x)
    Xv, Yv = X(x), Y(x)
    a_terms = JY * Xv[None, :]
    b_terms = JX * Yv[None, :]
    br = a_terms.sum(axis=1) - b_terms.sum(axis=1)
    scale = np.abs(a_terms).sum(axis=1) + np.abs(b_terms).sum(axis=1)
    return float(np.abs(br).max()), float(scale.max())


def transposition_candidates():
    """Permutations tried, in order, by the erratum protocol."""
    return [(1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1)]


# -- reporting -----------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    samples: int
    max_residual: float
    scale: float
    tol: float
    passed: bool
    calibration: float | None = None
    note: str = ""
    erratum: bool = False
    skipped: bool = False

    @classmethod
    def from_samples(cls, name, residuals, scales, tol, **kw) -> "CheckResult":
        """Build a result from per-sample residuals; the worst ratio decides."""
        residuals = np.asarray(residuals, dtype=float)
        scales = np.asarray(scales, dtype=float)
        if residuals.size == 0:
            return cls(name, 0, 0.0, 0.0, tol, False, skipped=True, note=kw.pop("note", "no samples"), **kw)
        ratio = residuals / np.where(scales > 0, scales, 1.0)
        ratio = np.where(np.isfinite(ratio), ratio, np.inf)
        k = int(np.argmax(ratio))
        r, s = float(residuals[k]), float(scales[k])
        passed = bool(np.isfinite(r) and r <= tol * s)
        return cls(name, int(residuals.size), r, s, tol, passed, **kw)

    @property
    def ok(self) -> bool:
        return self.passed or self.erratum or self.skipped

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "scale": self.scale,
            "tol": self.tol,
            "pass": self.passed,
            "calibration": self.calibration,
            "note": self.note,
            "erratum": self.erratum,
            "skipped": self.skipped,
        }
