"""Numerical audit of every claimed identity, grouped into suites.

Each check returns :class:`~aristotelian.poisson.CheckResult` records.  A
claim that fails as printed is retried with a short fixed list of candidate
corrections; when one passes, the record is marked ``erratum`` and the
candidate is named in the note.
"""
from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np

from . import conserved as cs
from . import poisson as ps
from . import reduction as rd
from . import roots as rt
from .errors import AristotelianError, SamplingError, ZeroCouplingC
from .integrator import IntegrationConfig, integrate
from .model import Couplings, ExtendedPoint, auxiliary_rhs, min_separation, physical_rhs, to_auxiliary
from .poisson import CheckResult

SCHEMA_VERSION = "1.0"
SUITES = ("tensors", "extended", "conserved", "reduction", "roots")

FULL = Couplings(1.0, 1.0, 1.0)
SEMI = Couplings(1.0, 1.0, 2.0)
NONINT = Couplings(1.0, 1.0, 0.0)
NONINT_K = Couplings(1.0, 0.0, 0.0)
GENERIC = Couplings(1.0, 2.0, 3.0)


@dataclass(frozen=True)
class Context:
    params: Couplings
    samples: int = 100
    seed: int = 0
    box: float = 5.0
    min_sep: float = 0.1

    def rng(self, name: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(name.encode())])

    def states(self, name: str, accept=None, n: int | None = None, sort: bool = False) -> list[np.ndarray]:
        """Uniform real states in the box, rejecting near-collisions and
        states failing ``accept``."""
        n = self.samples if n is None else n
        rng = self.rng(name)
        out = []
        tries = 0
        while len(out) < n:
            tries += 1
            if tries > 1000 * max(n, 1):
                raise SamplingError(f"sampler for {name} cannot find admissible states")
            x = rng.uniform(-self.box, self.box, 3)
            if sort:
                x = np.sort(x)[::-1]
            if min_separation(x) < self.min_sep:
                continue
            if accept is not None and not accept(x):
                continue
            out.append(x.astype(complex))
        return out

    def points(self, name: str, accept=None) -> list[ExtendedPoint]:
        rng = self.rng(name + ":tau")
        return [ExtendedPoint(complex(rng.uniform(-self.box, self.box)), s) for s in self.states(name, accept)]


def _semi_params(params: Couplings) -> Couplings:
    if params.a == params.b and params.c != 0 and params.a != 0 and params.a != params.c and 8 * params.a + params.c != 0:
        return params
    return SEMI


def _generic_params(params: Couplings) -> Couplings:
    if params.c != 0 and not rt.classify(params).degenerate:
        return params
    return GENERIC


# -- conserved suite -------------------------------------------------------------------

def check_gradient_identity(ctx: Context) -> list[CheckResult]:
    p = ctx.params
    res, sc, zres, zsc = [], [], [], []
    for s in ctx.states("gradient-identity", n=max(ctx.samples, 200)):
        g = cs.grad_potential(s, p)
        U = auxiliary_rhs(s, p)
        res.append(np.linalg.norm(g - U))
        sc.append(np.linalg.norm(U))
        zres.append(abs(g.sum()))
        zsc.append(np.abs(g).sum())
    return [
        CheckResult.from_samples("gradient-identity", res, sc, 1e-12),
        CheckResult.from_samples("potential-translation-pde", zres, zsc, 1e-13),
    ]


def check_time_dependent_conservation(ctx: Context) -> list[CheckResult]:
    p = ctx.params
    out = []
    grads = {
        "h1": lambda pt: (0.0, cs.grad_h1(pt.state)),
        "h2": lambda pt: cs.grad_h2_aux(pt, p),
        "h3": lambda pt: cs.grad_h3_aux(pt, p),
    }
    pts = ctx.points("time-dependent-conservation")
    for name, g in grads.items():
        res, sc = [], []
        for pt in pts:
            dt, gr = g(pt)
            val, scale = cs.total_derivative(dt, gr, pt, p)
            res.append(abs(val))
            sc.append(scale)
        out.append(CheckResult.from_samples(f"{name}-conservation", res, sc, 1e-10))
    res, sc = [], []
    for pt in pts:
        h1, h2, h3 = cs.h1(pt.state), cs.h2_aux(pt, p), cs.h3_aux(pt, p)
        res.append(abs(h3 - (h1 * h1 - h2) / 2))
        sc.append(abs(h3) + abs(h1 * h1) / 2 + abs(h2) / 2)
    out.append(CheckResult.from_samples("relation-1", res, sc, 1e-12))
    return out


def check_relation2(ctx: Context) -> list[CheckResult]:
    p = ctx.params
    if p.total == 0:
        return [CheckResult("relation-2-coefficient", 0, 0.0, 0.0, 1e-9, False, skipped=True,
                            note="a+b+c = 0: the tau term vanishes")]
    coefs = [cs.relation2_coefficient(pt, p) for pt in ctx.points("relation-2") if abs(pt.tau) > 1e-3]
    coefs = np.array(coefs)
    measured = float(np.mean(coefs.real))
    spread = float(np.max(np.abs(coefs - measured)))
    printed = 4.0
    res = abs(measured - printed) + spread
    r = CheckResult("relation-2-coefficient", len(coefs), res, printed, 1e-9, res <= 1e-9 * printed,
                    calibration=measured)
    if not r.passed and spread <= 1e-9 * abs(measured) and abs(measured - 6.0) <= 1e-9 * 6:
        r.erratum = True
        r.note = f"printed coefficient 4; measured {measured:.12g} (direct expansion gives 6)"
    return [r]


def _first_integral(ctx, name, params, grad, accept=None, tol=1e-8, sort=False):
    res, sc = [], []
    for s in ctx.states(name, accept, sort=sort):
        val, scale = cs.directional_residual(grad(s), auxiliary_rhs(s, params))
        res.append(abs(val))
        sc.append(scale)
    return CheckResult.from_samples(name, res, sc, tol)


def _semi_ok(s):
    return (s[0] + s[1] - 2 * s[2]).real > 0


def _general_ok(prof, margin=1e-3):
    return lambda s: all(rt.singular_direction_ok(s, th, tol=margin) for th in prof.real_thetas())


def check_first_integrals(ctx: Context) -> list[CheckResult]:
    out = []
    n = max(ctx.samples // 2, 50) if ctx.samples >= 50 else ctx.samples
    sub = Context(ctx.params, n, ctx.seed, ctx.box, ctx.min_sep)
    out.append(_first_integral(sub, "h_full-first-integral", FULL, cs.grad_h_full))
    semi = _semi_params(ctx.params)
    mu = cs.mu_of(semi)
    r = _first_integral(sub, "h_semi-first-integral", semi, lambda s: cs.grad_h_semi(s, mu), _semi_ok)
    r.calibration = mu
    r.note = f"couplings {semi.a:g},{semi.b:g},{semi.c:g}; mu = {mu:.12g}"
    out.append(r)
    out.append(_first_integral(sub, "h_noninteracting_equal-first-integral", NONINT, cs.grad_h_noninteracting_equal))
    k = cs.k_of(NONINT_K)
    out.append(_first_integral(sub, "h_noninteracting_general-first-integral", NONINT_K,
                               lambda s: cs.grad_h_noninteracting_general(s, k), lambda s: s[0].real > s[1].real))
    gen = _generic_params(ctx.params)
    prof = rt.classify(gen)
    printed = _first_integral(sub, "h_general-first-integral-printed", gen,
                              lambda s: cs.grad_h_general(s, prof, printed=True), _general_ok(prof))
    fixed = _first_integral(sub, "h_general-first-integral", gen,
                            lambda s: cs.grad_h_general(s, prof), _general_ok(prof))
    tag = f"couplings {gen.a:g},{gen.b:g},{gen.c:g}"
    fixed.note = tag + "; residue-sign coefficients"
    if not printed.passed and fixed.passed:
        printed.erratum = True
        printed.note = tag + "; fails as printed, passes with the log-theta coefficients negated (partial-fraction residues)"
    out += [printed, fixed]

    # both h_general and h_semi are integrals of the same reduced flow
    prof = rt.classify(semi)
    res, sc = [], []
    for s in sub.states("gradient-dependence", lambda s: _semi_ok(s) and _general_ok(prof)(s)):
        g1 = cs.grad_h_general(s, prof)
        g2 = cs.grad_h_semi(s, mu)
        g3 = cs.grad_h1(s)
        M = np.array([g / np.linalg.norm(g) for g in (g1, g2, g3)])
        res.append(abs(np.linalg.det(M)))
        sc.append(1.0)
    out.append(CheckResult.from_samples("gradient-dependence", res, sc, 1e-8,
                                        note="determinant of unit-normalised gradients"))
    return out


def _pushforward_residual(t, x, params, delta=1e-6):
    """d(state)/d(tau) from a short physical integration, against the auxiliary field."""
    cfg_f = IntegrationConfig(t0=t, t1=t + delta, fixed_step=delta, sep_floor=1e-12)
    cfg_b = IntegrationConfig(t0=t, t1=t - delta, fixed_step=delta, sep_floor=1e-12)
    xf = integrate("physical", x, params, cfg_f).final.state
    xb = integrate("physical", x, params, cfg_b).final.state
    pf, pb, p0 = to_auxiliary(t + delta, xf, params), to_auxiliary(t - delta, xb, params), to_auxiliary(t, x, params)
    fd = (pf.state - pb.state) / (pf.tau - pb.tau)
    U = auxiliary_rhs(p0.state, params)
    return float(np.linalg.norm(fd - U)), float(np.linalg.norm(U))


def check_transformation(ctx: Context) -> list[CheckResult]:
    rng = ctx.rng("transformation")
    p = ctx.params
    res, sc = [], []
    for x in ctx.states("transformation", n=20):
        t = float(rng.uniform(0, 2 * math.pi))
        om = float(rng.uniform(0.2, 3.0))
        r, s = _pushforward_residual(t, x, p.with_(omega=om))
        res.append(r)
        sc.append(s)
    out = [CheckResult.from_samples("transformation-pushforward", res, sc, 1e-6)]

    # time derivative of H2 along the physical flow, both forms
    printed_res, printed_sc, comp_res, comp_sc = [], [], [], []
    for x in ctx.states("h2-physical", n=20):
        t = float(rng.uniform(0, 2 * math.pi))
        q = p.with_(omega=float(rng.uniform(0.2, 3.0)))
        xd = physical_rhs(x, q)
        d = 1e-5
        for f, rr, ss in ((cs.h2_physical_printed, printed_res, printed_sc), (cs.h2_physical, comp_res, comp_sc)):
            rate = (f(t + d, x + d * xd, q) - f(t - d, x - d * xd, q)) / (2 * d)
            rr.append(abs(rate))
            ss.append(abs(f(t, x, q)) + abs(q.total) + float(np.abs(x * xd).sum()))
    printed = CheckResult.from_samples("h2-physical-printed-conservation", printed_res, printed_sc, 1e-8)
    composed = CheckResult.from_samples("h2-physical-conservation", comp_res, comp_sc, 1e-8,
                                        note="H2 of the auxiliary model composed with the time transformation")
    if not printed.passed and composed.passed:
        printed.erratum = True
        printed.note = "not conserved as printed; exp(-2i w t)(x^2+y^2+z^2) + (a+b+c)exp(-2i w t)/(i w) is"
    return out + [printed, composed]


# -- tensors suite ---------------------------------------------------------------------------

def _jacobi(ctx, name, P, accept=None, tol=1e-6):
    res, sc = [], []
    for s in ctx.states(name, accept):
        r, scale = ps.jacobi_residual(P, s)
        res.append(r)
        sc.append(scale)
    return CheckResult.from_samples(name, res, sc, tol)


def _hamilton(ctx, name, P, grad, params, accept=None, tol=1e-9, expected=None):
    res, sc, ks = [], [], []
    for s in ctx.states(name, accept):
        r, k, nU = ps.hamilton_residual(P, grad, s, params)
        res.append(r)
        sc.append(nU)
        ks.append(k)
    r = CheckResult.from_samples(name, res, sc, tol)
    ks = np.array(ks)
    kappa = complex(ks.mean())
    spread = float(ks.std())
    r.calibration = kappa.real
    constant = spread <= 1e-6 * abs(kappa)
    r.passed = r.passed and constant
    if not constant:
        r.note = f"calibration not constant (std {spread:.3e})"
    elif expected is not None and abs(kappa - expected) > 1e-9 * abs(expected):
        r.note = f"calibration {kappa.real:.12g}, expected {expected}"
    return r


def _audit_hamilton(ctx, name, P, grad, params, accept=None):
    printed = _hamilton(ctx, name, P, grad, params, accept)
    if printed.passed:
        return [printed]
    for perm in ps.transposition_candidates():
        cand = _hamilton(ctx, f"{name}-conjugated-{''.join(map(str, perm))}", P.conjugate(perm), grad, params, accept)
        if cand.passed:
            printed.erratum = True
            printed.note = (f"fails as printed; permutation-conjugated candidate {perm} passes "
                            f"with calibration {cand.calibration:.12g}")
            return [printed, cand]
    return [printed]


def check_tensors(ctx: Context) -> list[CheckResult]:
    semi = _semi_params(ctx.params)
    mu = cs.mu_of(semi)
    Ps1, Ps2 = ps.semi_tensors(mu, semi.c)
    f2c = ps.P_F2.conjugate((1, 0, 2))
    out = [
        _jacobi(ctx, "jacobi-P_f1", ps.P_F1),
        _jacobi(ctx, "jacobi-P_f2", ps.P_F2),
        _jacobi(ctx, "jacobi-P_s1", Ps1, _semi_ok),
        _jacobi(ctx, "jacobi-P_s2", Ps2),
        _jacobi(ctx, "jacobi-P_n1", ps.P_N1),
        _jacobi(ctx, "jacobi-P_n2", ps.P_N2),
    ]
    out.append(_hamilton(ctx, "hamilton-P_f1-H_f", ps.P_F1, cs.grad_h_full, FULL, expected=1.0))
    out += _audit_hamilton(ctx, "hamilton-P_f2-H1", ps.P_F2, cs.grad_h1, FULL)
    r = _hamilton(ctx, "hamilton-P_s1-H_s", Ps1, lambda s: cs.grad_h_semi(s, mu), semi, _semi_ok)
    r.note = (r.note + "; " if r.note else "") + f"mu = {mu:.12g}, couplings {semi.a:g},{semi.b:g},{semi.c:g}"
    out.append(r)
    out += _audit_hamilton(ctx, "hamilton-P_s2-H1", Ps2, cs.grad_h1, semi)
    r = _hamilton(ctx, "hamilton-P_n1-H_n", ps.P_N1, cs.grad_h_noninteracting_equal, NONINT)
    if r.passed and abs(r.calibration - 3.0) < 1e-9 * 3:
        r.erratum = True
        r.note = "P grad H = 3U: the stated pair is off by a factor 3"
    out.append(r)
    out += _audit_hamilton(ctx, "hamilton-P_n2-H1", ps.P_N2, cs.grad_h1, NONINT)

    printed_pair = _compat(ctx, "compatibility-P_f1-P_f2", ps.P_F1, ps.P_F2)
    fixed_pair = _compat(ctx, "compatibility-P_f1-P_f2-conjugated", ps.P_F1, f2c)
    if not printed_pair.passed and fixed_pair.passed:
        printed_pair.erratum = True
        printed_pair.note = "incompatible as printed; compatible after the u<->v conjugation of P_f2"
    out += [printed_pair, fixed_pair,
            _compat(ctx, "compatibility-P_s1-P_s2", Ps1, Ps2, _semi_ok),
            _compat(ctx, "compatibility-P_n1-P_n2", ps.P_N1, ps.P_N2)]
    out += check_semi_limit(ctx)
    return out


def _compat(ctx, name, P1, P2, accept=None):
    res, sc = [], []
    for s in ctx.states(name, accept):
        r, scale = ps.compatibility_residual(P1, P2, s)
        res.append(r)
        sc.append(scale)
    return CheckResult.from_samples(name, res, sc, 1e-6)


def check_semi_limit(ctx: Context) -> list[CheckResult]:
    """At mu = 1/3 the semi-symmetric objects are constant multiples of the full ones."""
    mu = 1 / 3
    res, sc, ratios = [], [], []
    hres, hsc = [], []
    for s in ctx.states("semi-full-limit", _semi_ok):
        A = ps.p_s1(s, mu, 1.0).matrix
        B = ps.p_f1(s).matrix
        k = np.vdot(B, A) / np.vdot(B, B)
        ratios.append(k)
        res.append(np.linalg.norm(A - k * B))
        sc.append(np.linalg.norm(A))
        hs, hf = cs.h_semi(s, mu), cs.h_full(s)
        hres.append(abs(hs - 6 * math.sqrt(6) * hf))
        hsc.append(abs(hs))
    r = CheckResult.from_samples("semi-full-limit-tensor", res, sc, 1e-12)
    ratios = np.array(ratios)
    r.calibration = float(ratios.mean().real)
    r.passed = r.passed and float(ratios.std()) <= 1e-9 * abs(r.calibration)
    r.note = "P_s1(mu=1/3, c=1) / P_f1"
    return [r, CheckResult.from_samples("semi-full-limit-hamiltonian", hres, hsc, 1e-12,
                                        calibration=6 * math.sqrt(6), note="H_s(mu=1/3) = 6 sqrt(6) H_f")]


# -- extended suite ----------------------------------------------------------------------------

def check_extended(ctx: Context) -> list[CheckResult]:
    p = ctx.params
    pts = ctx.points("extended")
    jac_r, jac_s = [], []
    h_r, h_s = [], []
    tau_r, tau_s, tau_k = [], [], []
    h1_r, h1_s = [], []
    h3p_r, h3c_r, h3_s = [], [], []
    com_r, com_s = [], []
    for pt in pts:
        r, s = ps.extended_jacobi_residual(pt, p)
        jac_r.append(r)
        jac_s.append(s)
        target = ps.suspended_field(pt, p)
        try:
            X = ps.extended_hamiltonian_field(pt, p, ps.log_h2_covector(pt, p))
        except AristotelianError:
            pass
        else:
            h_r.append(np.linalg.norm(X - target))
            h_s.append(np.linalg.norm(target))
        V = ps.symmetry_field(pt, p)
        Xt = ps.extended_hamiltonian_field(pt, p, [1, 0, 0, 0])
        tv = np.concatenate([[0], V])
        k = np.vdot(tv, Xt) / np.vdot(tv, tv)
        tau_k.append(k)
        tau_r.append(np.linalg.norm(Xt - tv))
        tau_s.append(np.linalg.norm(tv))
        Xh1 = ps.extended_hamiltonian_field(pt, p, [0, 1, 1, 1])
        h1_r.append(np.linalg.norm(Xh1 - cs.h1(pt.state) * target))
        h1_s.append(abs(cs.h1(pt.state)) * np.linalg.norm(target))
        dt, g = cs.grad_h3_aux(pt, p)
        Xh3 = ps.extended_hamiltonian_field(pt, p, np.concatenate([[dt], g]))
        h3 = cs.h3_aux(pt, p)
        printed = np.concatenate([[0], -2 * h3 * target[1:]])
        h3p_r.append(np.linalg.norm(Xh3 - printed))
        h3c_r.append(np.linalg.norm(Xh3 - 2 * h3 * target))
        h3_s.append(abs(2 * h3) * np.linalg.norm(target))
        r, s = ps.symmetry_commutator_residual(pt, p)
        com_r.append(r)
        com_s.append(s)

    out = [
        CheckResult.from_samples("extended-jacobi", jac_r, jac_s, 1e-6),
        CheckResult.from_samples("extended-hamilton-H", h_r, h_s, 1e-10, note="H = ln(H2)/2, target (1, U)"),
    ]
    tau_printed = CheckResult.from_samples("extended-hamilton-tau", tau_r, tau_s, 1e-12)
    tau_k = np.array(tau_k)
    kappa = complex(tau_k.mean())
    tau_printed.calibration = kappa.real
    if not tau_printed.passed:
        fixed = []
        for pt in pts:
            V = np.concatenate([[0], ps.symmetry_field(pt, p)])
            Xt = ps.extended_hamiltonian_field(pt, p, [1, 0, 0, 0])
            fixed.append(np.linalg.norm(Xt + V))
        cand = CheckResult.from_samples("extended-hamilton-tau-sign-flipped", fixed, tau_s, 1e-12, calibration=-1.0)
        if cand.passed:
            tau_printed.erratum = True
            tau_printed.note = "Lambda(d tau) = -(0, E - 2 tau U); the sign follows from the -H_tau V term of the Hamiltonian form"
        out += [tau_printed, cand]
    else:
        out.append(tau_printed)
    out.append(CheckResult.from_samples("extended-hamilton-H1", h1_r, h1_s, 1e-10, note="target H1 (1, U)"))
    h3p = CheckResult.from_samples("extended-hamilton-H3-printed", h3p_r, h3_s, 1e-10, note="target -2 H3 U")
    h3c = CheckResult.from_samples("extended-hamilton-H3", h3c_r, h3_s, 1e-10, note="target 2 H3 (1, U)")
    if not h3p.passed and h3c.passed:
        h3p.erratum = True
        h3p.note = "printed -2 H3 U fails; Lambda(dH3) = 2 H3 (1, U) under the fixed convention"
    out += [h3p, h3c, CheckResult.from_samples("symmetry-commutator", com_r, com_s, 1e-6)]
    return out


# -- reduction suite ----------------------------------------------------------------------------

def _ordered(s):
    return s[0].real > s[1].real > s[2].real


def check_reduction(ctx: Context) -> list[CheckResult]:
    p = ctx.params
    out = []
    res, sc = [], []
    for s in ctx.states("plane-roundtrip"):
        back = rd.from_plane(rd.to_plane(s))
        res.append(np.linalg.norm(back - s))
        sc.append(np.linalg.norm(s))
    out.append(CheckResult.from_samples("plane-roundtrip", res, sc, 1e-14))
    M = rd.PLANE_MATRIX
    out.append(CheckResult("plane-orthonormality", 1, float(np.abs(M @ M.T - np.eye(3)).max()), 1.0, 1e-14,
                           bool(np.abs(M @ M.T - np.eye(3)).max() <= 1e-14)))

    res, sc, zres = [], [], []
    for s in ctx.states("reduced-pushforward"):
        pf = rd.pushforward(s, p)
        pt = rd.to_plane(s)
        ed, xd = rd.reduced_rhs(pt.eta, pt.xi, p)
        res.append(np.linalg.norm(pf - np.array([0, ed, xd])))
        sc.append(np.linalg.norm(pf))
    out.append(CheckResult.from_samples("reduced-pushforward", res, sc, 1e-12))

    res, sc = [], []
    offsets = []
    for s in ctx.states("reduced-potential", sort=True):
        pt = rd.to_plane(s)
        e, x = pt.eta.real, pt.xi.real
        Fr = rd.reduced_potential(e, x, p)
        diffs = [cs.potential(rd.from_plane(rd.PlanePoint(z, e, x)), p).real - Fr for z in (-1.3, 2.7)]
        offsets.append(diffs[0])
        res.append(abs(diffs[0] - diffs[1]))
        sc.append(abs(Fr) + 1.0)
    r = CheckResult.from_samples("reduced-potential-zeta-independence", res, sc, 1e-12)
    r.calibration = float(np.mean(offsets)) if offsets else None
    r.note = "calibration: constant offset F(u,v,w) - F(eta, xi)"
    out.append(r)

    res, sc = [], []
    for s in ctx.states("reduced-gradient", sort=True):
        pt = rd.to_plane(s)
        g = np.array(rd.grad_reduced_potential(pt.eta.real, pt.xi.real, p))
        f = np.array(rd.reduced_rhs(pt.eta.real, pt.xi.real, p))
        res.append(np.linalg.norm(g - f))
        sc.append(np.linalg.norm(f))
    out.append(CheckResult.from_samples("reduced-gradient", res, sc, 1e-12))

    def slope_ok(s):
        # admissible: every sum entering the slope or the field ratio loses at most two digits
        pt = rd.to_plane(s)
        e, x = pt.eta.real, pt.xi.real
        a, b, c = p.a, p.b, p.c
        r3 = math.sqrt(3)
        dp, dm = r3 * x + e, r3 * x - e
        sums = (
            (r3 * (a - b) * e * e, 3 * (a + b) * e * x),
            ((a + b + c) * e * e, r3 * (a - b) * e * x, -3 * c * x * x),
            (c / e, b / dp, -a / dm),
            (b / dp, a / dm),
        )
        return all(abs(sum(t)) > 1e-2 * sum(abs(v) for v in t) for t in sums if any(v != 0 for v in t))

    res, sc, hres = [], [], []
    for s in ctx.states("characteristic-slope", slope_ok):
        pt = rd.to_plane(s)
        e, x = pt.eta.real, pt.xi.real
        ed, xd = rd.reduced_rhs(e, x, p)
        sl = rd.characteristic_slope(e, x, p)
        res.append(abs(sl - xd / ed))
        sc.append(abs(sl))
        hres.append(max(abs(rd.characteristic_slope(k * e, k * x, p) - sl) for k in (2.0, -3.0, 0.5)))
    out.append(CheckResult.from_samples("characteristic-slope", res, sc, 1e-12))
    out.append(CheckResult.from_samples("characteristic-slope-homogeneity", hres, sc, 1e-12))

    out += check_symplectic(ctx)
    return out


def check_symplectic(ctx: Context) -> list[CheckResult]:
    """Full-symmetric plane structure: symplectic form, densities, normalisation."""
    out = []
    p = FULL

    def plane_ok(s):
        pt = rd.to_plane(s)
        e, x = pt.eta.real, pt.xi.real
        return abs(e * (3 * x * x - e * e)) > 1e-3

    kap, res, sc = [], [], []
    for s in ctx.states("symplectic", plane_ok):
        pt = rd.to_plane(s)
        k, r, scale = rd.symplectic_residual(pt.eta.real, pt.xi.real, p, rd.conformal_factor_full, rd.grad_h_full_plane)
        kap.append(k)
        res.append(r)
        sc.append(scale)
    r = CheckResult.from_samples("symplectic-form", res, sc, 1e-10)
    kap = np.array(kap)
    r.calibration = float(kap.mean())
    r.passed = r.passed and float(kap.std()) <= 1e-9 * abs(r.calibration)
    r.note = "phi = calibration * phi_f with h = h_f"
    out.append(r)

    def inv(e, x):
        return 1.0 / rd.conformal_factor_full(e, x)

    for label, phi in (("phi_f", rd.conformal_factor_full), ("1/phi_f", inv)):
        res, sc = [], []
        for s in ctx.states("liouville-plane", plane_ok):
            pt = rd.to_plane(s)
            r_, s_ = rd.liouville_residual(phi, pt.eta.real, pt.xi.real, p)
            res.append(abs(r_))
            sc.append(s_)
        name = "liouville-plane" if label == "phi_f" else "liouville-plane-reciprocal"
        out.append(CheckResult.from_samples(name, res, sc, 1e-6, note=f"density {label}"))
    if not out[-2].passed and out[-1].passed:
        out[-2].erratum = True
        out[-2].note = "phi_f is not invariant; its reciprocal is"

    def rho(y):
        return float(np.real(rd.conformal_factor_full_state(y)))

    def rho_inv(y):
        return 1.0 / rho(y)

    for label, f in (("phi_f", rho), ("1/phi_f", rho_inv)):
        res, sc = [], []
        for s in ctx.states("liouville-3d", plane_ok):
            r_, s_ = rd.liouville_residual_3d(f, s, p)
            res.append(abs(r_))
            sc.append(s_)
        name = "liouville-3d" if label == "phi_f" else "liouville-3d-reciprocal"
        out.append(CheckResult.from_samples(name, res, sc, 1e-6, note=f"density {label}"))
    if not out[-2].passed and out[-1].passed:
        out[-2].erratum = True
        out[-2].note = "phi_f du dv dw is not invariant; its reciprocal is"

    ks, res, sc = [], [], []
    for s in ctx.states("h_full-normalisation", plane_ok):
        pt = rd.to_plane(s)
        hf = rd.h_full_plane(pt.eta.real, pt.xi.real)
        Hf = cs.h_full(rd.from_plane(rd.PlanePoint(0, pt.eta, pt.xi))).real
        ks.append(Hf / hf)
    ks = np.array(ks)
    k0 = float(ks.mean())
    spread = float(np.abs(ks - k0).max())
    out.append(CheckResult("h_full-normalisation", len(ks), spread, abs(k0), 1e-12, spread <= 1e-12 * abs(k0),
                           calibration=k0, note="H_f(u,v,w) = calibration * h_f(eta, xi)"))
    return out


# -- roots suite ---------------------------------------------------------------------------------

def check_roots(ctx: Context) -> list[CheckResult]:
    out = []
    p = ctx.params
    try:
        pp, qq = rt.pq_of(p)
    except ZeroCouplingC as exc:
        out.append(CheckResult("roots-couplings", 0, 0.0, 0.0, 1e-10, False, skipped=True,
                               note=f"ZeroCouplingC: {exc}"))
    else:
        prof = rt.classify(p)
        out.append(CheckResult("roots-couplings", 1, prof.root_residual, 1.0, 1e-10,
                               prof.root_residual <= 1e-10, note=f"case {prof.case_label}; branch {prof.branch}"))
        rng = ctx.rng("depressed-identity")
        res, sc = [], []
        a, b, c = p.a, p.b, p.c
        s3 = math.sqrt(3)
        for th in rng.uniform(-3, 3, 10):
            den = s3 * (a - b) + (4 * a + 4 * b + c) * th + s3 * (a - b) * th ** 2 - 3 * c * th ** 3
            num = (a + b + c) + s3 * (a - b) * th - 3 * c * th ** 2
            vt = th - pp / 3
            dep = rt.depressed_cubic(vt, pp, qq)
            nq = vt ** 2 - (pp / 3) * vt - (2 * pp * pp + 9 * qq + 3) / 9
            res.append(max(abs(den / (-3 * c) - dep), abs(num / (-3 * c) - nq)))
            sc.append(abs(den / (3 * c)) + abs(num / (3 * c)) + 1.0)
        out.append(CheckResult.from_samples("depressed-cubic-identity", res, sc, 1e-11))

    rng = ctx.rng("root-sets")
    n = max(ctx.samples, 500)
    dist, dres, dsc, reality = [], [], [], []
    for pp, qq in rng.uniform(-2, 2, (n, 2)):
        cr = rt.cubic_roots(pp, qq)
        direct = rt.direct_cubic_roots(pp, qq)
        dist.append(rt.set_distance(cr.as_tuple(), direct))
        P, Q = rt.depressed_coefficients(pp, qq)
        d = rt.discriminant(pp, qq)
        dres.append(abs(d - (-4 * P ** 3 - 27 * Q ** 2)))
        dsc.append(abs(d) + 4 * abs(P) ** 3 + 27 * Q * Q)
        n_real = int(np.sum(np.abs(direct.imag) <= 1e-9 * max(1.0, np.abs(direct).max())))
        reality.append(0.0 if n_real == rt.n_real_roots(d, dsc[-1]) else 1.0)
    out.append(CheckResult.from_samples("root-set-vs-direct", dist, [1.0] * n, 1e-9))
    out.append(CheckResult.from_samples("delta-identity", dres, dsc, 1e-10))
    out.append(CheckResult.from_samples("delta-sign-reality", reality, [1.0] * n, 0.0))

    fs = rt.classify(FULL)
    expect = (0.0, 2 / 3, 27j, 108.0)
    got = (fs.p, fs.q, fs.lam, fs.delta)
    roots_err = rt.set_distance((fs.theta1, fs.thetaPlus, fs.thetaMinus), (0, math.sqrt(3), -math.sqrt(3)))
    err = max([abs(g - e) for g, e in zip(got, expect)] + [roots_err, abs(fs.theta1)])
    out.append(CheckResult("full-symmetric-profile", 1, err, 108.0, 1e-12, err <= 1e-12 * 108,
                           note="p=0, q=2/3, lambda=27i, roots {0, +-sqrt3}, Delta=108"))

    loci = rt.special_loci()
    bad_q = [e for e in loci if e["source"] == "printed" and not e["printed_denp_zero"]]
    audited = [e for e in loci if e["source"] == "audited"]
    bad_mu = [e for e in loci if not e["mu_consistent"]]
    r = CheckResult("special-loci", len(loci), float(len(bad_q) + len(bad_mu)), 1.0, 0.0,
                    not bad_q and not bad_mu)
    if not r.passed:
        r.erratum = True
        parts = [f"printed q={e['q']} ({e['constraint']}) is not a zero of the printed discriminant" for e in bad_q]
        parts += [f"zero q={e['q']} ({e['constraint']}) missing from the printed list" for e in audited]
        parts += [f"mu on {e['constraint']} with a=b is {e['semi_mu']}, printed {e['printed_mu']}" for e in bad_mu]
        r.note = "; ".join(parts)
    out.append(r)
    zero_mu = [e for e in loci if e["constraint"] == "a+b+c=0"][0]["semi_mu"]
    out.append(CheckResult("mu-on-a+b+c=0", 1, abs(float(eval_fraction(zero_mu))), 1.0, 1e-15,
                           abs(float(eval_fraction(zero_mu))) <= 1e-15, calibration=float(eval_fraction(zero_mu))))
    return out


def eval_fraction(text: str) -> float:
    from fractions import Fraction

    return float(Fraction(text))


SUITE_CHECKS = {
    "conserved": (check_gradient_identity, check_time_dependent_conservation, check_relation2,
                  check_first_integrals, check_transformation),
    "tensors": (check_tensors,),
    "extended": (check_extended,),
    "reduction": (check_reduction,),
    "roots": (check_roots,),
}


def run_suite(suite: str, ctx: Context) -> list[CheckResult]:
    names = SUITES if suite == "all" else (suite,)
    out = []
    for name in names:
        for check in SUITE_CHECKS[name]:
            out.extend(check(ctx))
    return out


def report(suite: str, ctx: Context, results: list[CheckResult]) -> dict:
    p = ctx.params
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "couplings": [p.a, p.b, p.c],
        "samples": ctx.samples,
        "seed": ctx.seed,
        "box": ctx.box,
        "checks": [r.to_dict() for r in results],
        "all_ok": all(r.ok for r in results),
    }
