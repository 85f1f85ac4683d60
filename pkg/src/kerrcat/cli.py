"""Command-line front end: single evaluations, figure-data sweeps and oracle checks.

Every subcommand writes one CSV row per grid point (header first) and a JSON
summary line on stderr.

Exit codes: 0 success, 2 invalid arguments, 3 domain error, 4 tolerance failure.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cat import entanglement_of
from .errors import DomainError, KerrCatError
from .lossy_kerr import (
    DEFAULT_ALPHA0,
    DEFAULT_GAMMA_RATIO,
    DEFAULT_STEPS,
    EvolutionParams,
    evolve,
    evolve_closed_form,
    loss_db_per_km_to_gamma,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_TOLERANCE = 4

COHERENCE_COLUMNS = ["alpha", "alpha0", "Gamma", "N", "theta", "A", "abs_C", "arg_C", "eff_amp"]
TIME_COLUMNS = ["alpha", "Gamma", "N", "t", "gamma_t", "theta", "A", "abs_C", "log_abs_C", "arg_C"]
ENTANGLEMENT_COLUMNS = COHERENCE_COLUMNS + ["abs_Cprime", "delta", "lambda_min", "E"]
ORACLE_COLUMNS = ["alpha", "Gamma", "cutoff", "trace_distance", "abs_C_closed", "abs_C_oracle", "pass"]

MODES = ("coherence", "time-sweep", "alpha-sweep", "n-sweep", "entanglement", "oracle-check")

DEFAULT_ALPHAS = {
    "coherence": "300,3000,30000",
    "time-sweep": "3,30,300",
    "alpha-sweep": "3,30,300,3000,30000",
    "n-sweep": "300,1000,10000",
    "entanglement": "3,30,300,3000,30000",
    "oracle-check": "1,2,3",
}


class UsageError(Exception):
    pass


def parse_real_list(text: str, name: str) -> list[float]:
    """``"1,2,3"`` or a decade range ``"1e3..1e6"`` (``"lo..hi:k"`` for ``k``
    log-spaced points)."""
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..", 1)
            count = None
            if ":" in hi_s:
                hi_s, count_s = hi_s.split(":", 1)
                count = int(count_s)
            lo, hi = float(lo_s), float(hi_s)
            if not 0 < lo <= hi:
                raise ValueError
            if count is None:
                decades = math.log10(hi / lo)
                count = int(round(decades)) + 1
                if abs(decades - round(decades)) > 1e-9:
                    raise ValueError
            if count < 1:
                raise ValueError
            return [float(x) for x in np.geomspace(lo, hi, count)]
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--{name}: cannot parse {text!r}") from None
    if not values:
        raise UsageError(f"--{name}: empty list")
    if any(not math.isfinite(v) for v in values):
        raise UsageError(f"--{name}: values must be finite")
    return values


def parse_steps(text: str) -> list[int]:
    out = []
    for v in parse_real_list(text, "N"):
        n = int(round(v))
        if n < 1 or abs(n - v) > 1e-6 * max(1.0, v):
            raise UsageError(f"--N: {v!r} is not a positive integer")
        out.append(n)
    return out


def fmt(x) -> str:
    """Round-trip exact text for floats; ints and bools as-is."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


@dataclass(frozen=True)
class Loss:
    chi: float
    gamma: float

    @property
    def Gamma(self) -> float:
        return math.inf if self.gamma == 0 else self.chi / self.gamma


def resolve_loss(args) -> Loss:
    given = [args.Gamma is not None, args.gamma is not None or args.chi is not None, args.db_per_km is not None]
    if sum(given) > 1:
        raise UsageError("give only one of --Gamma, (--gamma, --chi), (--db-per-km, --length-km)")
    if args.db_per_km is not None:
        if args.length_km is None or not args.length_km > 0:
            raise UsageError("--length-km (fiber length for a pi Kerr phase) must be positive")
        if args.db_per_km < 0:
            raise UsageError("--db-per-km must be non-negative")
        chi = math.pi / args.length_km
        gamma, _ = loss_db_per_km_to_gamma(args.db_per_km, chi)
        return Loss(chi, gamma)
    if args.gamma is not None or args.chi is not None:
        if args.gamma is None or args.chi is None:
            raise UsageError("--gamma and --chi must be given together")
        if not args.chi > 0:
            raise UsageError("--chi must be positive")
        if not args.gamma >= 0:
            raise UsageError("--gamma must be non-negative")
        return Loss(args.chi, args.gamma)
    Gamma = DEFAULT_GAMMA_RATIO if args.Gamma is None else args.Gamma
    if not Gamma > 0:
        raise UsageError("--Gamma must be positive")
    return Loss(1.0, 0.0 if math.isinf(Gamma) else 1.0 / Gamma)


def _evolve(p: EvolutionParams, method: str):
    return evolve(p) if method == "steps" else evolve_closed_form(p)


def _coherence_row(p: EvolutionParams, method: str) -> list:
    r = _evolve(p, method)
    return [p.alpha, p.alpha0, p.Gamma, p.steps, r.theta, r.A, abs(r.C), cmath.phase(r.C), r.effective_amplitude]


def _time_row(p: EvolutionParams, method: str) -> list:
    r = _evolve(p, method)
    return [p.alpha, p.Gamma, p.steps, p.t, p.gamma * p.t, r.theta, r.A, abs(r.C), r.log_C.real, cmath.phase(r.C)]


def _entanglement_row(job) -> list:
    p, method, sign = job
    r = _evolve(p, method)
    sym, neg = entanglement_of(r, p.alpha, sign)
    return [
        p.alpha, p.alpha0, p.Gamma, p.steps, r.theta, r.A, abs(r.C), cmath.phase(r.C),
        r.effective_amplitude, abs(sym.C_prime), abs(sym.delta), neg.lambda_min, neg.E,
    ]


def _oracle_row(job) -> list:
    from .fock import compare_with_closed_form

    p, sign, tol = job
    cmp = compare_with_closed_form(p, sign=sign)
    return [p.alpha, p.Gamma, cmp.cutoff, cmp.trace_distance, cmp.abs_C_closed, cmp.abs_C_oracle, cmp.passed(tol)]


def _coherence_job(job):
    return _coherence_row(*job)


def _time_job(job):
    return _time_row(*job)


def build_jobs(args, loss: Loss):
    """Validate the whole grid up front; returns ``(columns, worker, jobs)``."""
    alphas = parse_real_list(args.alpha or DEFAULT_ALPHAS[args.mode], "alpha")
    if any(a <= 0 for a in alphas):
        raise UsageError("--alpha: values must be positive")
    if args.alpha0 is not None and not args.alpha0 > 0:
        raise UsageError("--alpha0 must be positive")
    default_n = "1e3..1e6" if args.mode == "n-sweep" else str(DEFAULT_STEPS)
    steps = parse_steps(args.N or default_n)
    alpha0 = DEFAULT_ALPHA0 if args.alpha0 is None else args.alpha0

    def params(alpha, n, a0=alpha0, time=None):
        return EvolutionParams(alpha, a0, loss.chi, loss.gamma, n, time)

    mode = args.mode
    if mode in ("coherence", "alpha-sweep", "n-sweep"):
        jobs = [(params(a, n), args.method) for a in alphas for n in steps]
        return COHERENCE_COLUMNS, _coherence_job, jobs
    if mode == "entanglement":
        jobs = [(params(a, n), args.method, args.sign) for a in alphas for n in steps]
        return ENTANGLEMENT_COLUMNS, _entanglement_row, jobs
    if mode == "time-sweep":
        if args.t_points < 1:
            raise UsageError("--t-points must be at least 1")
        if not args.gamma_t_max > 0:
            raise UsageError("--gamma-t-max must be positive")
        if loss.gamma == 0:
            raise UsageError("time-sweep needs a non-zero loss rate")
        t_max = args.gamma_t_max / loss.gamma
        times = [t_max * k / args.t_points for k in range(1, args.t_points + 1)]
        jobs = [(params(a, n, None, t), args.method) for a in alphas for n in steps for t in times]
        return TIME_COLUMNS, _time_job, jobs
    if mode == "oracle-check":
        from .fock import MAX_ORACLE_ALPHA

        for a in alphas:
            if a > MAX_ORACLE_ALPHA:
                raise DomainError(f"alpha={a} is outside the Fock oracle's range (alpha <= {MAX_ORACLE_ALPHA})")
        jobs = [(params(a, n, a if args.alpha0 is None else args.alpha0), args.sign, args.tol) for a in alphas for n in steps]
        return ORACLE_COLUMNS, _oracle_row, jobs
    raise UsageError(f"unknown mode {mode!r}")


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--alpha", help="initial amplitudes: list '300,3000' or decade range '1e2..1e4'")
    common.add_argument("--alpha0", type=float, help=f"target cat amplitude (default {DEFAULT_ALPHA0}; oracle-check: alpha)")
    common.add_argument("--Gamma", type=float, help=f"chi/gamma (default {DEFAULT_GAMMA_RATIO})")
    common.add_argument("--gamma", type=float, help="energy decay rate (with --chi)")
    common.add_argument("--chi", type=float, help="cross-Kerr rate (with --gamma)")
    common.add_argument("--db-per-km", type=float, help="fiber loss in dB/km (with --length-km)")
    common.add_argument("--length-km", type=float, help="fiber length giving a Kerr phase of pi")
    common.add_argument("--N", help="Trotter step counts: list or decade range '1e3..1e6'")
    common.add_argument("--sign", choices=["+", "-"], default="+", help="herald outcome")
    common.add_argument("--method", choices=["closed", "steps"], default="closed",
                        help="closed-form geometric sum or explicit step composition")
    common.add_argument("--out", help="CSV output path (default stdout)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    parser = argparse.ArgumentParser(prog="kerrcat", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        sp = sub.add_parser(mode, parents=[common], allow_abbrev=False)
        if mode == "time-sweep":
            sp.add_argument("--t-points", type=int, default=50)
            sp.add_argument("--gamma-t-max", type=float, default=1.0, help="last grid time in units of 1/gamma")
        if mode == "oracle-check":
            sp.add_argument("--tol", type=float, default=1e-3)
    return parser


def run(args) -> int:
    try:
        loss = resolve_loss(args)
        columns, worker, jobs = build_jobs(args, loss)
    except UsageError as exc:
        print(f"kerrcat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"kerrcat: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    try:
        if args.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                rows = list(pool.map(worker, jobs))
        else:
            rows = [worker(job) for job in jobs]
    except DomainError as exc:
        print(f"kerrcat: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except KerrCatError as exc:
        print(f"kerrcat: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE

    handle = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(fmt(x) for x in row)
    finally:
        if args.out:
            handle.close()

    status = EXIT_OK
    if args.mode == "oracle-check" and not all(row[-1] for row in rows):
        status = EXIT_TOLERANCE
    summary = {"mode": args.mode, "rows": len(rows), "out": args.out, "exit": status}
    if args.mode == "oracle-check":
        summary["result"] = "PASS" if status == EXIT_OK else "FAIL"
        summary["max_trace_distance"] = max(row[3] for row in rows)
    print(json.dumps(summary), file=sys.stderr)
    return status


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
