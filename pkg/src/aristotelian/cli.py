"""Command-line frontend: simulate, verify, classify, scan, reduce.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import re
import sys

import numpy as np

from . import reduction as rd
from . import roots as rt
from . import verify as vf
from .errors import AristotelianError, ReducedSingular, SeparationTooSmall
from .integrator import IntegrationConfig, integrate
from .model import Couplings

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

SIM_COLUMNS = ("t", "u_re", "u_im", "v_re", "v_im", "w_re", "w_im", "h1_re", "h1_im", "h2_re", "h2_im", "hfund_dirres")
SCAN_COLUMNS = ("p", "q", "delta", "n_real_roots", "min_root_gap", "lambda_re", "lambda_im")

_FLOAT = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^\s*({_FLOAT})(?:\s*([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)?\s*$")


def parse_complex(text: str) -> complex:
    """Parse ``RE`` or ``RE(+|-)IMi``, e.g. ``1.25-0.5i``."""
    m = _COMPLEX_RE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"malformed complex literal: {text!r}")
    re_part = float(m.group(1))
    im_part = 0.0 if m.group(2) is None else float(m.group(3)) * (-1 if m.group(2) == "-" else 1)
    return complex(re_part, im_part)


def parse_state(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"state needs three comma-separated complex literals: {text!r}")
    return np.array([parse_complex(p) for p in parts], dtype=complex)


def parse_couplings(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"couplings need three comma-separated reals: {text!r}")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed couplings: {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"couplings must be finite: {text!r}")
    return vals


def parse_range(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must be lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed range: {text!r}") from None
    if n < 1 or not (math.isfinite(lo) and math.isfinite(hi)) or (n > 1 and hi < lo):
        raise argparse.ArgumentTypeError(f"range needs n >= 1 and lo <= hi: {text!r}")
    return np.linspace(lo, hi, n)


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _num(x) -> str:
    x = float(x)
    return repr(x) if math.isfinite(x) else str(x)


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def _cx(z):
    return [float(np.real(z)), float(np.imag(z))]


# -- simulate ------------------------------------------------------------------------------

def run_simulate(args) -> int:
    a, b, c = args.couplings
    params = Couplings(a, b, c, args.omega)
    try:
        cfg = IntegrationConfig(t0=args.t0, t1=args.t1, rtol=args.rtol, atol=args.atol,
                                max_step=args.max_step, fixed_step=args.fixed_step)
        traj = integrate(args.model, args.initial, params, cfg)
    except SeparationTooSmall as exc:
        print(f"error: initial state violates separation: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, AristotelianError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = _open_out(args.output)
    try:
        if args.format == "csv":
            out.write(",".join(SIM_COLUMNS) + "\n")
            for s in traj.samples:
                row = [s.t, *np.column_stack([s.state.real, s.state.imag]).ravel(),
                       s.h1.real, s.h1.imag, s.h2.real, s.h2.imag, s.hfund_dirres]
                out.write(",".join(_num(x) for x in row) + "\n")
        else:
            doc = {
                "schema_version": vf.SCHEMA_VERSION,
                "meta": {
                    "model": args.model,
                    "couplings": [a, b, c],
                    "omega": args.omega,
                    "initial": [_cx(z) for z in np.asarray(args.initial)],
                    "t0": args.t0,
                    "t1": args.t1,
                    "rtol": args.rtol,
                    "atol": args.atol,
                    "accepted": traj.accepted,
                    "rejected": traj.rejected,
                    "columns": list(SIM_COLUMNS),
                },
                "samples": [
                    {"t": s.t, "state": [_cx(z) for z in s.state], "h1": _cx(s.h1), "h2": _cx(s.h2),
                     "hfund_dirres": s.hfund_dirres}
                    for s in traj.samples
                ],
                "termination": {"reason": traj.termination, "message": traj.message},
            }
            json.dump(doc, out, indent=2)
            out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if traj.termination != "completed":
        print(f"terminated: {traj.termination}: {traj.message}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------------

def _status(r) -> str:
    if r.skipped:
        return "SKIP"
    if r.passed:
        return "PASS"
    return "ERRATUM" if r.erratum else "FAIL"


def run_verify(args) -> int:
    a, b, c = args.couplings
    ctx = vf.Context(Couplings(a, b, c), samples=args.samples, seed=args.seed, box=args.box)
    try:
        results = vf.run_suite(args.suite, ctx)
    except AristotelianError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    doc = vf.report(args.suite, ctx, results)
    out = _open_out(args.output)
    try:
        if args.json:
            json.dump(doc, out, indent=2)
            out.write("\n")
        else:
            for r in results:
                line = f"{_status(r):8s}{r.name}  residual={r.max_residual:.3e} scale={r.scale:.3e} tol={r.tol:.1e}"
                if r.calibration is not None:
                    line += f" calibration={r.calibration:.12g}"
                if r.note:
                    line += f"  [{r.note}]"
                out.write(line + "\n")
            out.write(f"{'all ok' if doc['all_ok'] else 'FAILURES'}: {len(results)} checks\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK if doc["all_ok"] else EXIT_FAIL


# -- classify ---------------------------------------------------------------------------------

def run_classify(args) -> int:
    a, b, c = args.couplings
    try:
        prof = rt.classify(Couplings(a, b, c))
    except AristotelianError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    d = prof.to_dict()
    d["couplings"] = [a, b, c]
    if args.json:
        print(json.dumps({"schema_version": vf.SCHEMA_VERSION, **d}, indent=2))
        return EXIT_OK

    def fmt(z):
        if z is None:
            return "undefined"
        z = complex(z)
        # hide round-off parts in the human-readable view; --json keeps raw values
        tiny = 1e-12 * max(1.0, abs(z))
        re_, im_ = (0.0 if abs(x) <= tiny else x for x in (z.real, z.imag))
        return f"{re_ + 0.0:.12g}" if im_ == 0 else f"{re_ + 0.0:.12g}{im_:+.12g}i"

    print(f"case: {prof.case_label}")
    for key, val in (("p", prof.p), ("q", prof.q), ("lambda", prof.lam), ("Delta", prof.delta)):
        print(f"{key}: {fmt(val)}")
    if prof.theta1 is not None:
        print(f"theta roots: {fmt(prof.theta1)}, {fmt(prof.thetaPlus)}, {fmt(prof.thetaMinus)}")
        print(f"numerator roots: {fmt(prof.numPlus)}, {fmt(prof.numMinus)}")
        print(f"root residual: {prof.root_residual:.3e} (branch {prof.branch})")
        print(f"degenerate: {prof.degenerate}")
    if prof.mu is not None:
        print(f"mu: {prof.mu:.12g}" + (f" ({prof.mu_note})" if prof.mu_note else ""))
    elif prof.mu_note:
        print(f"mu: undefined ({prof.mu_note})")
    if prof.k is not None:
        print(f"k: {fmt(prof.k)}")
    for e in prof.loci:
        flags = [f"printed discriminant zero: {e['printed_denp_zero']}", f"audited discriminant zero: {e['audited_disc_zero']}"]
        if e["printed_mu"] is not None:
            flags.append(f"mu printed {e['printed_mu']} / audited {e['semi_mu']}")
        print(f"special locus {e['constraint']} (q={e['q']}, {e['source']}): " + "; ".join(flags))
    if prof.note:
        print(f"note: {prof.note}")
    return EXIT_OK


# -- scan ----------------------------------------------------------------------------------------

def scan_rows(ps_, qs):
    for p in ps_:
        for q in qs:
            p, q = float(p), float(q)
            d = rt.discriminant(p, q)
            P, Q = rt.depressed_coefficients(p, q)
            n_real = rt.n_real_roots(d, 4 * abs(P) ** 3 + 27 * Q * Q)
            r = rt.cubic_roots(p, q).as_tuple()
            gap = min(abs(r[i] - r[j]) for i, j in ((0, 1), (0, 2), (1, 2)))
            lam = rt.lambda_of(p, q)
            yield (p, q, d, n_real, gap, lam.real, lam.imag)


def run_scan(args) -> int:
    buf = io.StringIO()
    buf.write(",".join(SCAN_COLUMNS) + "\n")
    try:
        for row in scan_rows(args.p_range, args.q_range):
            buf.write(",".join(str(x) if isinstance(x, int) else _num(x) for x in row) + "\n")
    except AristotelianError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    out = _open_out(args.output)
    try:
        out.write(buf.getvalue())
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# -- reduce ----------------------------------------------------------------------------------------

def run_reduce(args) -> int:
    a, b, c = args.couplings
    params = Couplings(a, b, c)
    pt = rd.to_plane(args.state)
    try:
        ed, xd = rd.reduced_rhs(pt.eta, pt.xi, params)
    except ReducedSingular as exc:
        print(f"error: ReducedSingular: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"zeta: {_fmt_c(pt.zeta)}")
    print(f"eta: {_fmt_c(pt.eta)}")
    print(f"xi: {_fmt_c(pt.xi)}")
    print(f"eta_dot: {_fmt_c(ed)}")
    print(f"xi_dot: {_fmt_c(xd)}")
    try:
        print(f"slope: {_fmt_c(rd.characteristic_slope(pt.eta, pt.xi, params))}")
    except AristotelianError as exc:
        print(f"slope: undefined ({type(exc).__name__}: {exc})")
    try:
        if abs(np.imag(pt.eta)) > 0 or abs(np.imag(pt.xi)) > 0:
            raise ValueError("reduced potential is defined for real plane coordinates")
        print(f"reduced potential: {_num(rd.reduced_potential(float(np.real(pt.eta)), float(np.real(pt.xi)), params))}")
    except (AristotelianError, ValueError) as exc:
        print(f"reduced potential: undefined ({type(exc).__name__}: {exc})")
    return EXIT_OK


def _fmt_c(z) -> str:
    z = complex(z)
    return repr(z.real) if z.imag == 0 else f"{z.real!r}{z.imag:+}i"


# -- parser ----------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aristotelian", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="integrate the auxiliary or physical model")
    sim.add_argument("--model", choices=("auxiliary", "physical"), default="auxiliary")
    sim.add_argument("--couplings", type=parse_couplings, required=True)
    sim.add_argument("--omega", type=float, default=1.0)
    sim.add_argument("--initial", type=parse_state, required=True)
    sim.add_argument("--t0", type=float, default=0.0)
    sim.add_argument("--t1", type=float, required=True)
    sim.add_argument("--rtol", type=float, default=1e-10)
    sim.add_argument("--atol", type=float, default=1e-12)
    sim.add_argument("--max-step", type=float, default=math.inf)
    sim.add_argument("--fixed-step", type=float, default=None)
    sim.add_argument("--output", default=None)
    sim.add_argument("--format", choices=("csv", "json"), default="csv")
    sim.set_defaults(func=run_simulate)

    ver = sub.add_parser("verify", help="run the numerical audit suites")
    ver.add_argument("--suite", choices=("all",) + vf.SUITES, default="all")
    ver.add_argument("--couplings", type=parse_couplings, default=(1.0, 2.0, 3.0))
    ver.add_argument("--samples", type=_positive_int, default=100)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--box", type=float, default=5.0)
    ver.add_argument("--json", action="store_true")
    ver.add_argument("--output", default=None)
    ver.set_defaults(func=run_verify)

    cls = sub.add_parser("classify", help="classify a coupling triple")
    cls.add_argument("--couplings", type=parse_couplings, required=True)
    cls.add_argument("--json", action="store_true")
    cls.set_defaults(func=run_classify)

    scn = sub.add_parser("scan", help="tabulate root data over a (p, q) grid")
    scn.add_argument("--p-range", type=parse_range, required=True)
    scn.add_argument("--q-range", type=parse_range, required=True)
    scn.add_argument("--output", default=None)
    scn.set_defaults(func=run_scan)

    red = sub.add_parser("reduce", help="plane coordinates and reduced field of a state")
    red.add_argument("--couplings", type=parse_couplings, required=True)
    red.add_argument("--state", type=parse_state, required=True)
    red.set_defaults(func=run_reduce)
    return parser


_NEGATIVE_VALUE = re.compile(r"^-[\d.]")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Let option values start with a minus sign (``--p-range -1:1:5``)."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok.startswith("--") and "=" not in tok and i + 1 < len(argv) and _NEGATIVE_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    if getattr(args, "box", 1.0) <= 0:
        parser.print_usage(sys.stderr)
        print("error: --box must be positive", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
