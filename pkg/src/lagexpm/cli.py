"""Command-line driver.

Exit codes: 0 success, 2 input error, 3 stability error, 4 convergence
or accuracy failure; `validate` exits 1 when any check fails.
"""

import argparse
import sys

import numpy as np

from . import io, optimize
from .errors import (
    AccuracyError,
    ConvergenceError,
    LagexpmError,
    ParameterError,
    StabilityError,
)
from .experiments import run_experiment
from .generators import LadderConfig, SpectrumSampleConfig
from .matrix import eigendecompose, eval_series, series_coeffs_alpha0, series_coeffs_general
from .params import BasisParams, Spectrum
from .validate import run_validation


def _build_parser():
    p = argparse.ArgumentParser(
        prog="lagexpm",
        description="Matrix exponential via generalized Laguerre series "
        "with certified L2 error bounds.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="optimize tau (and alpha) for a spectrum")
    pa.add_argument("--spectrum", required=True, metavar="FILE",
                    help="JSON array of [re, im] pairs, or - for stdin")
    pa.add_argument("--n", required=True, type=int, metavar="N")
    pa.add_argument("--mode", choices=["alpha0", "full"], default="alpha0")
    pa.add_argument("--out", metavar="FILE", help="report destination (default stdout)")

    pe = sub.add_parser("expand", help="compute series coefficients for a matrix")
    pe.add_argument("--matrix", required=True, metavar="FILE")
    pe.add_argument("--n", required=True, type=int, metavar="N")
    pe.add_argument("--tau", type=float)
    pe.add_argument("--alpha", type=float)
    pe.add_argument("--auto", action="store_true",
                    help="derive tau by the scale search at alpha = 0")
    pe.add_argument("--coeffs-out", metavar="FILE", help="series destination (default stdout)")

    pv = sub.add_parser("eval", help="evaluate a stored series at times t")
    pv.add_argument("--series", required=True, metavar="FILE")
    pv.add_argument("--t", required=True, metavar="T1,T2,...")
    pv.add_argument("--out", metavar="FILE", help="CSV destination (default stdout)")

    pb = sub.add_parser("bench", help="run a generated experiment")
    bsub = pb.add_subparsers(dest="bench_kind", required=True)
    pl = bsub.add_parser("line", help="RLCG ladder")
    pl.add_argument("--sections", type=int, default=150)
    pl.add_argument("--c0", type=float, default=10.0)
    pl.add_argument("--l0", type=float, default=50.0)
    pl.add_argument("--r0", type=float, default=170.0)
    pl.add_argument("--g0", type=float, default=160.0)
    pl.add_argument("--n", required=True, type=int, metavar="N")
    pl.add_argument("--mode", choices=["alpha0", "full"], default="alpha0")
    pr = bsub.add_parser("random", help="random stable spectrum")
    pr.add_argument("--count", type=int, default=200)
    pr.add_argument("--sigma", type=float, default=4.0)
    pr.add_argument("--mu", type=float, default=0.0)
    pr.add_argument("--std", type=float, default=1.0)
    pr.add_argument("--seed", required=True, type=int, metavar="U64")
    pr.add_argument("--n", required=True, type=int, metavar="N")
    pr.add_argument("--mode", choices=["alpha0", "full"], default="alpha0")

    pd = sub.add_parser("validate", help="run the built-in oracle/property battery")
    pd.add_argument("--quick", action="store_true")

    pp = sub.add_parser("plotdata", help="emit a tau sweep of phi from a report")
    pp.add_argument("--report", required=True, metavar="FILE")
    pp.add_argument("--out", required=True, metavar="FILE")
    return p


def _emit(text, out):
    if out:
        io._write_text(out, text)
    else:
        sys.stdout.write(text)


def _cmd_analyze(args):
    lam = io.parse_spectrum(io._read_text(args.spectrum), what=args.spectrum)
    report = run_experiment(lam, args.n, mode=args.mode)
    _emit(io.dump_report(report.to_dict()), args.out)
    return 0


def _cmd_expand(args):
    if args.auto and (args.tau is not None or args.alpha is not None):
        raise ParameterError("--auto conflicts with --tau/--alpha")
    if not args.auto and args.tau is None:
        raise ParameterError("either --tau or --auto is required")
    a = io.load_matrix(args.matrix)
    if args.auto:
        lam = np.linalg.eigvals(a)
        Spectrum(lam).require_stable()
        res = optimize.find_tau0(args.n, lam)
        tau, alpha = res.tau_opt, 0.0
        print(f"auto-selected tau = {tau:.12g}", file=sys.stderr)
    else:
        tau = args.tau
        alpha = args.alpha if args.alpha is not None else 0.0
    if alpha == 0.0:
        series = series_coeffs_alpha0(a, tau, args.n)
    else:
        eig = eigendecompose(a)
        series = series_coeffs_general(
            eig, BasisParams(tau=tau, alpha=alpha, n_trunc=args.n)
        )
    _emit(io.dump_series(series), args.coeffs_out)
    return 0


def _cmd_eval(args):
    series = io.load_series(args.series)
    toks = [tok for tok in args.t.split(",") if tok.strip()]
    if not toks:
        raise ParameterError("--t needs at least one time value")
    try:
        ts = [float(tok) for tok in toks]
    except ValueError as exc:
        raise ParameterError(f"bad time value in --t: {exc}") from exc
    m = series.dim
    header = ["t"] + [f"h_{i}_{j}" for i in range(m) for j in range(m)]
    rows = []
    for t in ts:
        h = eval_series(series, t)
        rows.append([repr(t)] + [io.format_complex_token(v) for v in h.ravel()])
    io.write_csv(args.out or "-", header, rows)
    return 0


def _cmd_bench(args):
    if args.bench_kind == "line":
        cfg = LadderConfig(
            sections=args.sections, c0=args.c0, l0=args.l0, r0=args.r0, g0=args.g0
        )
    else:
        cfg = SpectrumSampleConfig(
            count=args.count,
            sigma_maxwell=args.sigma,
            mu_normal=args.mu,
            sigma_normal=args.std,
            seed=args.seed,
        )
    report = run_experiment(cfg, args.n, mode=args.mode)
    sys.stdout.write(io.dump_report(report.to_dict()))
    return 0


def _cmd_validate(args):
    rows = run_validation(quick=args.quick)
    width = max(len(name) for name, _, _ in rows)
    failures = 0
    for name, ok, detail in rows:
        status = "PASS" if ok else "FAIL"
        failures += 0 if ok else 1
        print(f"{status}  {name.ljust(width)}  {detail}")
    print(f"{len(rows) - failures}/{len(rows)} checks passed")
    return 0 if failures == 0 else 1


def _cmd_plotdata(args):
    doc = io.load_report(args.report)
    try:
        n = int(doc["n_trunc"])
        pairs = doc["spectrum"]
        tau_star = doc["tau1"] if doc.get("tau1") is not None else doc["tau0"]
        alpha = doc["alpha1"] if doc.get("alpha1") is not None else 0.0
    except (KeyError, TypeError) as exc:
        raise ParameterError(f"report lacks required fields: {exc}") from exc
    lam = np.array([complex(p[0], p[1]) for p in pairs])
    taus = np.linspace(0.5 * float(tau_star), 1.5 * float(tau_star), 201)
    rows = [
        [repr(float(t)), repr(optimize.phi(n, float(t), float(alpha), lam))]
        for t in taus
    ]
    io.write_csv(args.out, ["tau", "phi"], rows)
    return 0


_DISPATCH = {
    "analyze": _cmd_analyze,
    "expand": _cmd_expand,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
    "validate": _cmd_validate,
    "plotdata": _cmd_plotdata,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except StabilityError as exc:
        print(f"stability error: {exc}", file=sys.stderr)
        return 3
    except (ConvergenceError, AccuracyError) as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return 4
    except LagexpmError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
