"""Shifted parameters, cubic and quadratic roots, discriminants, special loci.

The characteristic integral of the reduced flow has a cubic denominator and a
quadratic numerator in theta = xi/eta.  After dividing by -3c and shifting
theta = vartheta + p/3 the cubic is depressed::

    vartheta**3 + P*vartheta + Q,   P = -(p^2+12q+1)/3,  Q = -2p(p^2+18q+15)/27

with p = (a-b)/(sqrt(3) c) and q = (a+b)/(3c).
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NoValidBranch, ZeroCouplingC
from .model import Couplings, as_state

SQRT3 = math.sqrt(3.0)
SIGMA_PLUS = 1 + 1j * SQRT3
SIGMA_MINUS = 1 - 1j * SQRT3

ROOT_TOL = 1e-10
DEGENERATE_TOL = 1e-12


def pq_of(params: Couplings) -> tuple[float, float]:
    if params.c == 0:
        raise ZeroCouplingC("p and q need c != 0 (the non-interacting case is excluded)")
    return (params.a - params.b) / (SQRT3 * params.c), (params.a + params.b) / (3 * params.c)


def depressed_coefficients(p: float, q: float) -> tuple[float, float]:
    return -(p * p + 12 * q + 1) / 3, -2 * p * (p * p + 18 * q + 15) / 27


def depressed_cubic(theta, p: float, q: float):
    P, Q = depressed_coefficients(p, q)
    return theta ** 3 + P * theta + Q


def lambda_of(p: float, q: float) -> complex:
    arg = 27 * p ** 4 + 6 * p * p * (6 * (13 - 3 * q) * q + 37) - (1 + 12 * q) ** 3
    return -p * (p * p + 18 * q + 15) + cmath.sqrt(arg)


def cubic_residual(roots, p: float, q: float) -> float:
    """Largest residual of ``roots`` in the depressed cubic, relative to the
    size of its terms at the largest root modulus (at least 1)."""
    P, Q = depressed_coefficients(p, q)
    R = max([1.0] + [abs(r) for r in roots])
    scale = R ** 3 + abs(P) * R + abs(Q)
    return max(abs(depressed_cubic(r, p, q)) for r in roots) / scale


def direct_cubic_roots(p: float, q: float) -> np.ndarray:
    P, Q = depressed_coefficients(p, q)
    return np.roots([1.0, 0.0, P, Q]).astype(complex)


@dataclass(frozen=True)
class CubicRoots:
    theta1: complex
    theta_plus: complex
    theta_minus: complex
    branch: int | None
    residual: float
    note: str = ""

    def as_tuple(self):
        return self.theta1, self.theta_plus, self.theta_minus


def _branch_roots(lam: complex, m: float, k: int):
    c = abs(lam) ** (1 / 3) * cmath.exp(1j * (cmath.phase(lam) + 2 * math.pi * k) / 3)
    c2 = c * c
    t1 = -(m + c2) / (3 * c)
    tp = (SIGMA_PLUS * m + SIGMA_MINUS * c2) / (6 * c)
    tm = (SIGMA_MINUS * m + SIGMA_PLUS * c2) / (6 * c)
    return t1, tp, tm


def cubic_roots(p: float, q: float, strict: bool = False) -> CubicRoots:
    """Roots of the depressed cubic from the closed-form lambda expressions.

    All three cube-root branches of lambda are tried.  The branch with the
    smallest residual wins; near-ties go to the branch with the smallest
    ``|vartheta_1|`` so that the symmetric cases reproduce vartheta_1 = 0.
    """
    lam = lambda_of(p, q)
    m = 1 + p * p + 12 * q
    if abs(lam) < 1e-14 * max(1.0, abs(m) ** 1.5):
        roots = direct_cubic_roots(p, q)
        return CubicRoots(*roots, branch=None, residual=cubic_residual(roots, p, q),
                          note="lambda = 0: direct solver used")
    candidates = []
    for k in range(3):
        rts = _branch_roots(lam, m, k)
        candidates.append((cubic_residual(rts, p, q), k, rts))
    best_res = min(c[0] for c in candidates)
    near = [c for c in candidates if c[0] <= best_res + 1e-13]
    res, k, rts = min(near, key=lambda c: (abs(c[2][0]), c[1]))
    if res > ROOT_TOL:
        if strict:
            raise NoValidBranch(f"best branch residual {res:.3e} exceeds {ROOT_TOL:.0e}")
        roots = direct_cubic_roots(p, q)
        return CubicRoots(*roots, branch=None, residual=cubic_residual(roots, p, q),
                          note=f"closed form residual {res:.2e}; direct solver used")
    return CubicRoots(*rts, branch=k, residual=res)


def set_distance(xs, ys) -> float:
    """Smallest over matchings of the largest pairwise distance."""
    xs, ys = list(xs), list(ys)
    return min(
        max(abs(x - y) for x, y in zip(xs, perm)) for perm in itertools.permutations(ys)
    )


def numerator_roots(p: float, q: float) -> tuple[complex, complex]:
    """Roots of the numerator quadratic, returned in the unshifted theta."""
    half = p / 6
    r = cmath.sqrt(half * half + (2 * p * p + 9 * q + 3) / 9)
    return half + r + p / 3, half - r + p / 3


def discriminant(p: float, q: float) -> float:
    return 4 * (-27 * p ** 4 + 6 * p * p * (-37 + 6 * q * (-13 + 3 * q)) + (1 + 12 * q) ** 3) / 27


def discriminant_in_p2(q: float) -> tuple[float, float, float]:
    """Coefficients (A, B, C) of the discriminant as  A X^2 + B X + C,  X = p^2."""
    return -4.0, 8 * (-37 + 6 * q * (-13 + 3 * q)) / 9, 4 * (1 + 12 * q) ** 3 / 27


def denp_value(q: float) -> float:
    """The literal closed form for the discriminant of Delta in p^2."""
    return -16777216 * (1 + 3 * q) ** 2 * (7 + 3 * q) ** 6 * (1 + 12 * q) ** 3 / 177147


def denp_audited(q: float) -> float:
    """B^2 - 4AC computed from the coefficients of Delta itself."""
    A, B, C = discriminant_in_p2(q)
    return B * B - 4 * A * C


def n_real_roots(delta: float, scale: float = 1.0) -> int:
    if delta < -DEGENERATE_TOL * scale:
        return 1
    return 3


# -- special coupling loci ----------------------------------------------------------

@dataclass(frozen=True)
class SpecialLocus:
    """A line  alpha (a+b) + beta c = 0  in coupling space."""

    q: Fraction
    alpha: int
    beta: int
    source: str  # "printed" or "audited"
    printed_mu: Fraction | None = None

    @property
    def constraint(self) -> str:
        ab = "(a+b)" if self.alpha != 1 else "a+b"
        lead = f"{self.alpha}{ab}" if self.alpha != 1 else ab
        tail = "c" if self.beta == 1 else f"{self.beta}c"
        return f"{lead}+{tail}=0"

    @property
    def q_from_constraint(self) -> Fraction:
        return Fraction(-self.beta, 3 * self.alpha)

    @property
    def semi_mu(self) -> Fraction | None:
        """mu for a = b on this line, or None when 8a + c = 0 there."""
        den = 4 * self.beta - self.alpha
        if den == 0:
            return None
        return Fraction(self.beta - self.alpha, den)

    def audit(self) -> dict:
        q = float(self.q)
        mu = self.semi_mu
        return {
            "source": self.source,
            "q": str(self.q),
            "constraint": self.constraint,
            "q_matches_constraint": self.q == self.q_from_constraint,
            "printed_denp_zero": abs(denp_value(q)) < 1e-9,
            "audited_disc_zero": abs(denp_audited(q)) < 1e-9,
            "semi_mu": None if mu is None else str(mu),
            "printed_mu": None if self.printed_mu is None else str(self.printed_mu),
            "mu_consistent": self.printed_mu is None or self.printed_mu == mu,
        }


PRINTED_LOCI = (
    SpecialLocus(Fraction(-1, 3), 1, 1, "printed", printed_mu=Fraction(0)),
    SpecialLocus(Fraction(-3, 7), 7, 9, "printed", printed_mu=Fraction(1, 29)),
    SpecialLocus(Fraction(-1, 12), 4, 1, "printed"),
)


def printed_denp_zeros() -> list[Fraction]:
    return [Fraction(-1, 3), Fraction(-7, 3), Fraction(-1, 12)]


def special_loci() -> list[dict]:
    """Printed special values with audit flags, followed by audited entries.

    Audited entries are the zeros of the printed discriminant factors that do
    not appear in the printed list.
    """
    out = [locus.audit() for locus in PRINTED_LOCI]
    printed_qs = {locus.q for locus in PRINTED_LOCI}
    for q in printed_denp_zeros():
        if q in printed_qs:
            continue
        alpha, beta = q.denominator, -3 * q.numerator
        g = math.gcd(alpha, beta)
        out.append(SpecialLocus(q, alpha // g, beta // g, "audited").audit())
    return out


def loci_membership(q: float, tol: float = 1e-12) -> list[dict]:
    return [entry for entry in special_loci() if abs(float(Fraction(entry["q"])) - q) <= tol]


# -- singular directions -------------------------------------------------------------------

def singular_direction_ok(state, theta_real: float, tol: float = 1e-12) -> bool:
    u, v, w = as_state(state)
    terms = (u * (1 - SQRT3 * theta_real), v * (1 + SQRT3 * theta_real), -2 * w)
    dot = sum(terms)
    scale = sum(abs(t) for t in terms) or 1.0
    return abs(dot) > tol * scale


# -- classification --------------------------------------------------------------------------

@dataclass
class RootProfile:
    case_label: str
    p: float | None = None
    q: float | None = None
    lam: complex | None = None
    theta1: complex | None = None
    thetaPlus: complex | None = None
    thetaMinus: complex | None = None
    numPlus: complex | None = None
    numMinus: complex | None = None
    delta: float | None = None
    degenerate: bool = False
    root_residual: float | None = None
    branch: int | None = None
    mu: float | None = None
    mu_note: str = ""
    k: float | None = None
    loci: list = field(default_factory=list)
    note: str = ""

    def real_thetas(self, tol: float = 1e-9) -> list[float]:
        if self.theta1 is None:
            return []
        out = []
        for t in (self.theta1, self.thetaPlus, self.thetaMinus):
            if abs(t.imag) <= tol * max(1.0, abs(t)):
                out.append(t.real)
        return out

    def shifted_roots(self) -> tuple[complex, complex, complex]:
        s = self.p / 3
        return self.theta1 - s, self.thetaPlus - s, self.thetaMinus - s

    def to_dict(self) -> dict:
        def cx(z):
            return None if z is None else [z.real, z.imag]

        return {
            "case": self.case_label,
            "p": self.p,
            "q": self.q,
            "lambda": cx(self.lam),
            "theta_roots": [cx(self.theta1), cx(self.thetaPlus), cx(self.thetaMinus)],
            "numerator_roots": [cx(self.numPlus), cx(self.numMinus)],
            "delta": self.delta,
            "degenerate": self.degenerate,
            "root_residual": self.root_residual,
            "branch": self.branch,
            "mu": self.mu,
            "mu_note": self.mu_note,
            "k": self.k,
            "loci": self.loci,
            "note": self.note,
        }


def _case_label(params: Couplings) -> str:
    a, b, c = params.a, params.b, params.c
    if a == b == c == 0:
        return "excluded"
    if c == 0:
        return "noninteracting"
    if a == b == c:
        return "full_symmetric"
    if a == b:
        return "semi_symmetric" if a != 0 and 8 * a + c != 0 else "generic"
    return "generic"


def classify(params: Couplings) -> RootProfile:
    from .conserved import k_of, mu_of
    from .errors import NotSemiSymmetric

    prof = RootProfile(case_label=_case_label(params))
    if params.a == params.b:
        try:
            prof.mu = mu_of(params)
        except NotSemiSymmetric as exc:
            prof.mu_note = str(exc)
        else:
            if abs(prof.mu - 0.25) < 1e-12 or abs(prof.mu - 1.0) < 1e-12:
                prof.mu_note = "excluded for the semi-symmetric Hamiltonian"
    else:
        prof.k = k_of(params)
    if params.c == 0:
        prof.note = "c = 0: p, q, lambda and Delta are undefined"
        return prof
    p, q = pq_of(params)
    prof.p, prof.q = p, q
    prof.lam = lambda_of(p, q)
    roots = cubic_roots(p, q)
    shift = p / 3
    prof.theta1, prof.thetaPlus, prof.thetaMinus = (r + shift for r in roots.as_tuple())
    prof.branch = roots.branch
    prof.root_residual = roots.residual
    prof.note = roots.note
    prof.numPlus, prof.numMinus = numerator_roots(p, q)
    prof.delta = discriminant(p, q)
    P, Q = depressed_coefficients(p, q)
    scale = 4 * abs(P) ** 3 + 27 * Q * Q
    prof.degenerate = abs(prof.delta) < DEGENERATE_TOL * max(scale, 1e-300)
    prof.loci = loci_membership(q)
    return prof
