"""Acceptance criteria 1-10, each at its stated tolerance."""
import json
import math
import subprocess
import sys

import numpy as np

from aristotelian import conserved as cs
from aristotelian import poisson as ps
from aristotelian import roots as rt
from aristotelian import verify as vf
from aristotelian.cli import SCAN_COLUMNS, SIM_COLUMNS
from aristotelian.integrator import IntegrationConfig, drift_report, integrate
from aristotelian.model import Couplings, ExtendedPoint, auxiliary_rhs, physical_rhs, to_auxiliary
from tests.conftest import random_states

FULL = Couplings(1, 1, 1)
GEN = Couplings(1, 2, 3)


def extended_points(seed, n):
    rng = np.random.default_rng(seed + 1000)
    return [ExtendedPoint(complex(rng.uniform(-5, 5)), s) for s in random_states(seed, n)]


def test_criterion_01_gradient_identity(acceptance_line):
    worst_rel, worst_sum = 0.0, 0.0
    for params in (GEN, FULL, Couplings(-0.7, 2.5, 0.3)):
        for s in random_states(101, 200):
            g, U = cs.grad_potential(s, params), auxiliary_rhs(s, params)
            worst_rel = max(worst_rel, np.linalg.norm(g - U) / np.linalg.norm(U))
            worst_sum = max(worst_sum, abs(g.sum()) / np.abs(g).sum())
    ok = worst_rel <= 1e-12 and worst_sum <= 1e-13
    acceptance_line(1, ok, f"grad F = U rel {worst_rel:.1e} (tol 1e-12); sum of partials rel {worst_sum:.1e} (tol 1e-13)")
    assert ok


def test_criterion_02_conservation(acceptance_line):
    worst, worst_rel1 = 0.0, 0.0
    for pt in extended_points(102, 200):
        for dt, g in ((0.0, cs.grad_h1(pt.state)), cs.grad_h2_aux(pt, GEN), cs.grad_h3_aux(pt, GEN)):
            val, scale = cs.total_derivative(dt, g, pt, GEN)
            worst = max(worst, abs(val) / scale)
        h1, h2, h3 = cs.h1(pt.state), cs.h2_aux(pt, GEN), cs.h3_aux(pt, GEN)
        worst_rel1 = max(worst_rel1, abs(h3 - (h1 * h1 - h2) / 2) / (abs(h3) + abs(h1 * h1) / 2 + abs(h2) / 2))
    ok = worst <= 1e-10 and worst_rel1 <= 1e-12
    acceptance_line(2, ok, f"dH/ds max {worst:.1e}*scale (tol 1e-10); relation 1 {worst_rel1:.1e} (tol 1e-12)")
    assert ok


def test_criterion_03_extended_structure(acceptance_line):
    jac, ham, tau_printed, tau_flipped = 0.0, 0.0, 0.0, 0.0
    for k, params in enumerate((GEN, FULL, Couplings(2, -1, 0.5))):
        for pt in extended_points(103 + k, 100):
            r, s = ps.extended_jacobi_residual(pt, params)
            jac = max(jac, r / s)
            target = ps.suspended_field(pt, params)
            X = ps.extended_hamiltonian_field(pt, params, ps.log_h2_covector(pt, params))
            ham = max(ham, np.linalg.norm(X - target) / np.linalg.norm(target))
            V = np.concatenate([[0], ps.symmetry_field(pt, params)])
            Xt = ps.extended_hamiltonian_field(pt, params, [1, 0, 0, 0])
            tau_printed = max(tau_printed, np.linalg.norm(Xt - V) / np.linalg.norm(V))
            tau_flipped = max(tau_flipped, np.linalg.norm(Xt + V) / np.linalg.norm(V))
    ok = jac <= 1e-6 and ham <= 1e-10 and tau_printed <= 1e-12
    acceptance_line(3, ok, f"4D Jacobi {jac:.1e}*scale (tol 1e-6); Lambda(dH)=(1,U) {ham:.1e} (tol 1e-10); "
                           f"Lambda(dtau)=+(0,V) {tau_printed:.1e} (tol 1e-12), -(0,V) {tau_flipped:.1e}")
    assert ok, "Lambda(d tau) equals -(0, E - 2 tau U) under the fixed Hamiltonian map, not +(0, E - 2 tau U)"


def test_criterion_04_tensor_audits(acceptance_line):
    mu = 0.4
    Ps1, _ = ps.semi_tensors(mu, 2.0)
    semi_ok = lambda x: x[0] + x[1] - 2 * x[2] > 0  # noqa: E731
    jac = 0.0
    for P, accept in ((ps.P_F1, None), (Ps1, semi_ok), (ps.P_N1, None)):
        for s in random_states(104, 100, accept=accept):
            r, sc = ps.jacobi_residual(P, s)
            jac = max(jac, r / sc)
    pairs = (
        ("P_f1,H_f", ps.P_F1, cs.grad_h_full, FULL, 1.0, None),
        ("P_s1,H_s", Ps1, lambda y: cs.grad_h_semi(y, mu), Couplings(1, 1, 2), None, semi_ok),
        ("P_n1,H_n", ps.P_N1, cs.grad_h_noninteracting_equal, Couplings(1, 1, 0), 3.0, None),
    )
    ok = jac <= 1e-6
    parts = [f"Jacobi {jac:.1e}*scale"]
    for label, P, g, params, expected, accept in pairs:
        ks, res = [], 0.0
        for s in random_states(105, 100, accept=accept):
            r, k, nU = ps.hamilton_residual(P, g, s, params)
            ks.append(k)
            res = max(res, r / nU)
        ks = np.array(ks)
        kappa = ks.mean().real
        std = ks.std()
        good = std <= 1e-6 * abs(kappa) and res <= 1e-9 and (expected is None or abs(kappa - expected) <= 1e-9)
        ok = ok and good
        parts.append(f"{label} kappa={kappa:.10g} std {std:.1e}")
    acceptance_line(4, ok, "; ".join(parts))
    assert ok


def test_criterion_05_erratum_detection(acceptance_line):
    ctx = vf.Context(FULL, samples=50, seed=5)
    res = {r.name: r for r in vf.run_suite("tensors", ctx) + vf.run_suite("conserved", ctx) + vf.run_suite("roots", ctx)}
    f2 = res["hamilton-P_f2-H1"]
    n1 = res["hamilton-P_n1-H_n"]
    rel2 = res["relation-2-coefficient"]
    loci = res["special-loci"]
    checks = {
        "P_f2 swap": f2.erratum and not f2.passed and "(1, 0, 2)" in f2.note and res["hamilton-P_f2-H1-conjugated-102"].passed,
        "P_n1 factor 3": n1.erratum and abs(n1.calibration - 3) < 1e-9 and "3" in n1.note,
        "relation-2 6 vs 4": rel2.erratum and abs(rel2.calibration - 6) < 1e-9 and "4" in rel2.note,
        "q=-7/3 vs -3/7": loci.erratum and "-7/3" in loci.note and "-3/7" in loci.note,
        "mu 2/29 vs 1/29": "2/29" in loci.note and "1/29" in loci.note,
    }
    ok = all(checks.values())
    acceptance_line(5, ok, ", ".join(f"{k}: {'flagged' if v else 'MISSING'}" for k, v in checks.items()))
    assert ok


def test_criterion_06_first_integrals(acceptance_line):
    mu = cs.mu_of(Couplings(1, 1, 2))
    k = cs.k_of(Couplings(1, 0, 0))
    prof = rt.classify(GEN)
    semi_prof = rt.classify(Couplings(1, 1, 2))
    off_singular = lambda pr: lambda x: all(rt.singular_direction_ok(x, th, 1e-3) for th in pr.real_thetas())  # noqa: E731
    cases = {
        "h_full": (FULL, cs.grad_h_full, None),
        "h_semi": (Couplings(1, 1, 2), lambda s: cs.grad_h_semi(s, mu), lambda x: x[0] + x[1] - 2 * x[2] > 0),
        "h_noninteracting_equal": (Couplings(1, 1, 0), cs.grad_h_noninteracting_equal, None),
        "h_noninteracting_general": (Couplings(1, 0, 0), lambda s: cs.grad_h_noninteracting_general(s, k),
                                     lambda x: x[0] > x[1]),
        "h_general": (GEN, lambda s: cs.grad_h_general(s, prof), off_singular(prof)),
    }
    worst = {}
    for name, (params, grad, accept) in cases.items():
        w = 0.0
        for s in random_states(106, 50, accept=accept):
            val, scale = cs.directional_residual(grad(s), auxiliary_rhs(s, params))
            w = max(w, abs(val) / scale)
        worst[name] = w
    det = 0.0
    both = lambda x: x[0] + x[1] - 2 * x[2] > 0 and off_singular(semi_prof)(x)  # noqa: E731
    for s in random_states(107, 50, accept=both):
        M = np.array([g / np.linalg.norm(g) for g in
                      (cs.grad_h_general(s, semi_prof), cs.grad_h_semi(s, mu), cs.grad_h1(s))])
        det = max(det, abs(np.linalg.det(M)))
    ok = max(worst.values()) <= 1e-8 and det <= 1e-8
    acceptance_line(6, ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f" (tol 1e-8); det {det:.1e} (tol 1e-8)")
    assert ok


def test_criterion_07_root_machinery(acceptance_line):
    rng = np.random.default_rng(107)
    dist, delta_rel = 0.0, 0.0
    for p, q in rng.uniform(-3, 3, (500, 2)):
        dist = max(dist, rt.set_distance(rt.cubic_roots(p, q).as_tuple(), np.roots([1, 0, *rt.depressed_coefficients(p, q)])))
        P, Q = rt.depressed_coefficients(p, q)
        ref = -4 * P ** 3 - 27 * Q ** 2
        delta_rel = max(delta_rel, abs(rt.discriminant(p, q) - ref) / (4 * abs(P) ** 3 + 27 * Q * Q))
    fs = rt.classify(FULL)
    profile_ok = (fs.p == 0 and abs(fs.q - 2 / 3) < 1e-15 and abs(fs.lam - 27j) < 1e-12
                  and rt.set_distance((fs.theta1, fs.thetaPlus, fs.thetaMinus), (0, math.sqrt(3), -math.sqrt(3))) < 1e-12)
    ok = dist <= 1e-9 and delta_rel <= 1e-10 and profile_ok
    acceptance_line(7, ok, f"set distance {dist:.1e} (tol 1e-9); Delta identity {delta_rel:.1e} (tol 1e-10); "
                           f"full-symmetric profile {'ok' if profile_ok else 'wrong'}")
    assert ok


def test_criterion_08_transformation(acceptance_line):
    rng = np.random.default_rng(108)
    push = 0.0
    for x in random_states(108, 20):
        t, om = float(rng.uniform(0, 2 * math.pi)), float(rng.uniform(0.2, 3.0))
        r, s = vf._pushforward_residual(t, x, GEN.with_(omega=om))
        push = max(push, r / s)
    params = GEN.with_(omega=0.8)
    traj = integrate("physical", [2, 0.5 + 1j, -1], params, IntegrationConfig(0, 3))
    comp = drift_report(traj)["h2_rel_drift"]
    printed = [cs.h2_physical_printed(s.t, s.state, params) for s in traj.samples]
    printed_drift = max(abs(v - printed[0]) for v in printed) / abs(printed[0])
    ok = push <= 1e-6 and comp <= 1e-9 and printed_drift > 1e-3 and traj.termination == "completed"
    acceptance_line(8, ok, f"pushforward {push:.1e} (tol 1e-6); composed H2 drift {comp:.1e} (tol 1e-9); "
                           f"printed h2 drift {printed_drift:.1e} (non-conserved)")
    assert ok


def test_criterion_09_integrator(acceptance_line):
    traj = integrate("auxiliary", [1, 0, 5], Couplings(0, 0, 1), IntegrationConfig(0, 1))
    u, v, _ = traj.final.state
    two_body = abs((u - v) ** 2 - 5) / 5
    drift = drift_report(integrate("auxiliary", [2, 1, 0], FULL, IntegrationConfig(0, 0.1, rtol=1e-10)))["h1_abs_drift"]
    r = math.sqrt(17)
    exact = np.array([(1 + r) / 2, (1 - r) / 2, 5])
    errs = [np.abs(integrate("auxiliary", [1, 0, 5], Couplings(0, 0, 1), IntegrationConfig(0, 4, fixed_step=h)).final.state
                   - exact).max() for h in (0.4, 0.2, 0.1, 0.05)]
    order = min(math.log2(errs[i] / errs[i + 1]) for i in range(3))
    ok = two_body <= 1e-9 and drift <= 1e-9 and order >= 4
    acceptance_line(9, ok, f"two-body rel {two_body:.1e} (tol 1e-9); H1 drift {drift:.1e} (tol 1e-9); order {order:.2f} (>= 4)")
    assert ok


def _cli(*args, code=None):
    cmd = [sys.executable, "-m", "aristotelian.cli", *args] if code is None else [sys.executable, "-c", code]
    return subprocess.run(cmd, capture_output=True, text=True)


def test_criterion_10_cli_contract(acceptance_line, tmp_path):
    verify_args = ("verify", "--suite", "all", "--couplings", "1,2,3", "--samples", "20", "--seed", "9", "--json")
    a, b = _cli(*verify_args), _cli(*verify_args)
    identical = a.returncode == 0 and a.stdout == b.stdout and json.loads(a.stdout)["schema_version"]
    sim = tmp_path / "s.csv"
    r0 = _cli("simulate", "--couplings", "1,1,1", "--initial", "2,1,0", "--t1", "0.1", "--output", str(sim))
    scan = tmp_path / "g.csv"
    _cli("scan", "--p-range", "0:1:2", "--q-range", "0:1:2", "--output", str(scan))
    headers = (sim.read_text().splitlines()[0] == ",".join(SIM_COLUMNS)
               and scan.read_text().splitlines()[0] == ",".join(SCAN_COLUMNS))
    fail = ("import sys; from aristotelian import verify as vf; from aristotelian.poisson import CheckResult; "
            "from aristotelian.cli import main; "
            "vf.SUITE_CHECKS['roots'] = (lambda ctx: [CheckResult('forced', 1, 1.0, 1.0, 0.0, False)],); "
            "sys.exit(main(['verify', '--suite', 'roots']))")
    r1 = _cli(code=fail)
    r2 = _cli("simulate", "--couplings", "1,1,1", "--initial", "1,1,0", "--t1", "1")
    r3 = _cli("reduce", "--couplings", "1,1,1", "--state", "1,1,0")
    codes = (r0.returncode, r1.returncode, r2.returncode, r3.returncode)
    ok = bool(identical) and headers and codes == (0, 1, 2, 3)
    acceptance_line(10, ok, f"verify JSON byte-identical: {bool(identical)}; CSV headers: {headers}; exit codes {codes} (want (0, 1, 2, 3))")
    assert ok
