"""Command-line front end.

Subcommands walk the pipeline in increasing depth: validate, drifts,
stability, theta, solve, bound, verify, simulate.  Reports go to stdout
(or --out) as JSON, or CSV for the tabular commands.

Exit codes are a stable contract:
    0  success
    1  model validation failure
    2  file / parse / argument errors
    3  stability condition fails
    4  boundary drift condition fails, or a tilt override is infeasible
    5  oracle window exceeds the dense-solve memory guard

verify prints PASS/FAIL rows but still exits 0 when all stages ran;
the rows are the product, and scripts should parse them rather than
the exit code.

Heavy numeric imports happen inside main(), after RRW_QBD_THREADS has
been translated into the usual BLAS thread-count variables; importing
this module stays cheap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import List, Optional, Sequence, Tuple

from . import __version__

THREAD_ENV_VARS = (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
    "VECLIB_MAXIMUM_THREADS",
    "NUMBA_NUM_THREADS",
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_UNSTABLE = 3
EXIT_DRIFT = 4
EXIT_MEMORY = 5

DEFAULT_N_LIST = (5, 10, 20, 40)
DEFAULT_ORACLE_WINDOW = (300, 300)
DEFAULT_SIM_STEPS = 10_000_000


def _apply_thread_env() -> None:
    requested = os.environ.get("RRW_QBD_THREADS")
    if not requested:
        return
    for var in THREAD_ENV_VARS:
        os.environ.setdefault(var, requested)


def _fmt17(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _emit(args, report: dict, csv_rows: Optional[List[dict]] = None) -> None:
    fmt = getattr(args, "format", "json")
    if fmt == "csv" and csv_rows is not None:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(csv_rows[0].keys()))
        writer.writeheader()
        for row in csv_rows:
            writer.writerow({k: _fmt17(v) for k, v in row.items()})
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=2, sort_keys=True,
                          allow_nan=True) + "\n"
    out_path = getattr(args, "out", None)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_pair(text: str, what: str) -> Tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"{what} must be two comma-separated numbers")
    return float(parts[0]), float(parts[1])


def _parse_int_pair(text: str, what: str) -> Tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"{what} must be two comma-separated integers")
    return int(parts[0]), int(parts[1])


def _parse_n_list(args) -> List[int]:
    if getattr(args, "n_list", None):
        values = sorted({int(x) for x in args.n_list.split(",")})
    elif getattr(args, "n", None) is not None:
        values = [int(args.n)]
    else:
        values = list(DEFAULT_N_LIST)
    if any(v < 1 for v in values):
        raise ValueError("truncation levels must be >= 1")
    return values


def parse_functional(text: str):
    """Parse the --functional mini-syntax into a FunctionalSpec.

    ones | lyap:<alpha> | window:<k_lo>,<k_hi>,<i_lo>,<i_hi>
         | trunc1:<cap> | trunc2:<cap>
    """
    from .bounds import (ones, scaled_lyapunov, window_indicator,
                         truncated_coordinate)

    head, _, rest = text.partition(":")
    if head == "ones":
        return ones()
    if head == "lyap":
        return scaled_lyapunov(float(rest))
    if head == "window":
        parts = [int(x) for x in rest.split(",")]
        if len(parts) != 4:
            raise ValueError("window functional needs 4 integers")
        return window_indicator(*parts)
    if head in ("trunc1", "trunc2"):
        return truncated_coordinate(int(head[-1]), int(rest))
    raise ValueError(f"unknown functional {text!r}")


class _PipelineAbort(Exception):
    def __init__(self, code: int, report: dict):
        self.code = code
        self.report = report


def _load_and_validate(args) -> tuple:
    from .modelfile import load_model_with_params
    from .model import validate_spec

    spec, params = load_model_with_params(args.model)
    violations = validate_spec(spec)
    if violations:
        raise _PipelineAbort(EXIT_INVALID, {
            "model": args.model,
            "valid": False,
            "violations": violations,
        })
    return spec, params


def _utilization(params) -> Optional[list]:
    if params is None:
        return None
    from .model import jackson_utilization

    return list(jackson_utilization(params))


def _check_dynamics(spec, args, params=None) -> dict:
    from .model import check_stability, check_assumption2

    verdict = check_stability(spec)
    if not verdict.stable:
        raise _PipelineAbort(EXIT_UNSTABLE, {
            "model": args.model,
            "stable": False,
            "case": None,
            "utilization": _utilization(params),
            "diagnostics": verdict.diagnostics,
        })
    a2 = check_assumption2(spec)
    if not a2.holds:
        raise _PipelineAbort(EXIT_DRIFT, {
            "model": args.model,
            "stable": True,
            "case": verdict.case,
            "boundary_drift_condition": False,
            "diagnostics": a2.diagnostics,
        })
    return {"stable": True, "case": verdict.case,
            "stability_diagnostics": verdict.diagnostics,
            "assumption2_diagnostics": a2.diagnostics}


def _build_certificate(spec, args):
    from .certificate import (Tilt, build_certificate, corrupt_certificate,
                              gamma_all, in_feasible_region)

    theta = None
    theta_tilde = None
    if getattr(args, "theta", None):
        t1, t2 = _parse_pair(args.theta, "--theta")
        theta = Tilt(t1, t2)
        if not in_feasible_region(spec, theta):
            raise _PipelineAbort(EXIT_DRIFT, {
                "model": args.model,
                "error": "tilt override is infeasible",
                "theta": [t1, t2],
                "gammas": gamma_all(spec, (t1, t2)),
            })
    if getattr(args, "theta_tilde", None):
        t1, t2 = _parse_pair(args.theta_tilde, "--theta-tilde")
        theta_tilde = Tilt(t1, t2)
        if not in_feasible_region(spec, theta_tilde):
            raise _PipelineAbort(EXIT_DRIFT, {
                "model": args.model,
                "error": "tilt-tilde override is infeasible",
                "theta_tilde": [t1, t2],
                "gammas": gamma_all(spec, (t1, t2)),
            })
    kappa = getattr(args, "kappa", None)
    kwargs = {}
    if kappa is not None:
        kwargs["kappa"] = kappa
    try:
        cert = build_certificate(spec, theta=theta,
                                 theta_tilde=theta_tilde, **kwargs)
    except ValueError as exc:
        raise _PipelineAbort(EXIT_DRIFT, {
            "model": args.model,
            "error": str(exc),
        })
    scale = getattr(args, "debug_scale_c", None)
    if scale is not None and scale != 1.0:
        cert = corrupt_certificate(cert, scale)
    return cert


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    _load_and_validate(args)
    _emit(args, {"model": args.model, "valid": True, "violations": [],
                 "version": __version__})
    return EXIT_OK


def cmd_drifts(args) -> int:
    from .model import REGIONS, mean_drift, wedge

    spec, _ = _load_and_validate(args)
    drifts = {region: list(mean_drift(spec.law(region)))
              for region in REGIONS}
    mu_e = drifts["interior"]
    report = {
        "model": args.model,
        "mean_drifts": drifts,
        "wedges": {
            "interior_face1": wedge(mu_e, drifts["face1"]),
            "interior_face2": wedge(mu_e, drifts["face2"]),
            "face1_face2": wedge(drifts["face1"], drifts["face2"]),
        },
        "version": __version__,
    }
    _emit(args, report)
    return EXIT_OK


def cmd_stability(args) -> int:
    from .model import check_stability, check_assumption2

    spec, params = _load_and_validate(args)
    verdict = check_stability(spec)
    a2 = check_assumption2(spec)
    util = _utilization(params)
    report = {
        "model": args.model,
        "stable": verdict.stable,
        "case": verdict.case,
        "boundary_drift_condition": a2.holds,
        "utilization": util,
        "stability_diagnostics": verdict.diagnostics,
        "assumption2_diagnostics": a2.diagnostics,
        "version": __version__,
    }
    if util is not None and verdict.stable and max(util) >= 1.0:
        # Cooperative service widens the stable region beyond the per-node
        # utilization test: the idle server absorbs the overloaded node, so
        # a drift-stable model can carry rho >= 1 on one coordinate.
        report["note"] = (
            "per-node utilization exceeds 1 but the drift verdict is stable; "
            "cooperative service keeps the overloaded node drained"
        )
    _emit(args, report)
    return EXIT_OK if verdict.stable else EXIT_UNSTABLE


def cmd_theta(args) -> int:
    spec, params = _load_and_validate(args)
    dyn = _check_dynamics(spec, args, params)
    cert = _build_certificate(spec, args)
    report = {
        "model": args.model,
        "case": dyn["case"],
        "certificate": cert.to_dict(),
        "version": __version__,
    }
    _emit(args, report)
    return EXIT_OK


def cmd_solve(args) -> int:
    from . import qbd

    spec, params = _load_and_validate(args)
    _check_dynamics(spec, args, params)
    n_values = _parse_n_list(args)
    if len(n_values) != 1:
        raise ValueError("solve takes a single --n")
    started = time.perf_counter()
    sol = qbd.solve(spec, n_values[0])
    elapsed = time.perf_counter() - started
    report = {
        "model": args.model,
        "solution": sol.to_dict(),
        "balance_residual_levels_0_50": qbd.balance_residual(sol, 50),
        "timings": {"solve_seconds": elapsed} if args.timings else None,
        "version": __version__,
    }
    _emit(args, report)
    return EXIT_OK


def cmd_bound(args) -> int:
    from . import bounds, qbd

    spec, params = _load_and_validate(args)
    dyn = _check_dynamics(spec, args, params)
    cert = _build_certificate(spec, args)
    n_values = _parse_n_list(args)
    rel_tol = args.tail_tol if args.tail_tol is not None else 1e-12

    rows = []
    timings = {}
    for n in n_values:
        started = time.perf_counter()
        sol = qbd.solve(spec, n)
        rep = bounds.error_bound_E(sol, cert, rel_tol=rel_tol)
        timings[str(n)] = time.perf_counter() - started
        rows.append(rep)
    report = {
        "model": args.model,
        "case": dyn["case"],
        "certificate": cert.to_dict(),
        "bounds": [r.to_dict() for r in rows],
        "timings": timings if args.timings else None,
        "version": __version__,
    }
    csv_rows = [{"n": r.n, "E": r.E, "E_tilde": r.E_tilde,
                 "informative": r.informative} for r in rows]
    _emit(args, report, csv_rows)
    return EXIT_OK


def cmd_simulate(args) -> int:
    from . import oracle

    spec, params = _load_and_validate(args)
    _check_dynamics(spec, args, params)
    fspec = parse_functional(args.functional)
    cert = None
    if fspec.kind == "scaled_lyapunov":
        cert = _build_certificate(spec, args)
    result = oracle.simulate(spec, args.steps, args.seed, fspec, cert=cert)
    report = {
        "model": args.model,
        "simulation": result.to_dict(),
        "version": __version__,
    }
    _emit(args, report)
    return EXIT_OK


def _verify_rows(spec, cert, args) -> Tuple[List[dict], List[dict]]:
    """All verification rows, plus the per-(n, g) observed-error table."""
    import numpy as np

    from . import bounds, oracle, qbd
    from .certificate import check_drift_inequality, corrupt_certificate
    from .model import JacksonParams, check_stability, jackson_spec, \
        jackson_utilization

    rows: List[dict] = []
    table: List[dict] = []

    def add(check: str, ok: bool, observed, target) -> None:
        rows.append({
            "check": check,
            "pass": bool(ok),
            "observed": observed,
            "target": target,
        })

    n_values = _parse_n_list(args)
    rel_tol = args.tail_tol if args.tail_tol is not None else 1e-12

    # 1. drift inequality on the window, both tilts
    for variant in ("base", "tilde"):
        rep = check_drift_inequality(spec, cert, window=60, variant=variant)
        add(f"drift_inequality_{variant}", rep.passed,
            rep.max_rel_violation, rep.tol)

    # 2. QBD solver residuals
    solutions = {}
    for n in n_values:
        solutions[n] = qbd.solve(spec, n)
    worst_r = max(s.rate.residual for s in solutions.values())
    worst_balance = max(qbd.balance_residual(s, 50)
                        for s in solutions.values())
    add("rate_matrix_residual", worst_r < 1e-12, worst_r, 1e-12)
    add("stationary_balance_residual", worst_balance < 1e-10,
        worst_balance, 1e-10)

    # reference distribution
    M1, M2 = (args.oracle_window if args.oracle_window
              else DEFAULT_ORACLE_WINDOW)
    ref = oracle.dense_stationary(spec, M1, M2)
    eps_ref = ref.truncation_gap if ref.truncation_gap is not None else 0.0
    add("reference_truncation_gap", eps_ref < 1e-6, eps_ref, 1e-6)
    add("reference_residual", ref.residual < 1e-12, ref.residual, 1e-12)

    # 3. bound validity per validated functional and n, strong form
    reports = {n: bounds.error_bound_E(solutions[n], cert, rel_tol=rel_tol)
               for n in n_values}
    catalog = bounds.default_catalog()
    for fspec in catalog:
        valid, witness = bounds.validate_functional(fspec, cert)
        if not valid:
            rows.append({
                "check": f"bound_validity[{fspec.label}]",
                "pass": None,
                "observed": "SKIPPED (functional not dominated; "
                            f"witness state {witness['state']})",
                "target": None,
            })
            continue
        worst_gap = -np.inf
        for n in n_values:
            obs = oracle.reference_vs_qbd(spec, cert, solutions[n], ref,
                                          fspec)
            E_n = reports[n].E
            table.append({
                "n": n,
                "functional": fspec.label,
                "E_n": E_n,
                "observed_strong": obs.strong,
                "observed_weak": obs.weak,
                "pass": obs.strong <= E_n + eps_ref,
            })
            worst_gap = max(worst_gap, obs.strong - (E_n + eps_ref))
        add(f"bound_validity[{fspec.label}]", worst_gap <= 0.0,
            worst_gap, 0.0)

    # 4. ordering of the two bounds
    worst = max(reports[n].E - reports[n].E_tilde for n in n_values)
    add("bound_ordering_E_le_E_tilde", worst <= 0.0, worst, 0.0)

    # 5. stationary tilted-mass inequalities
    kk = np.arange(M1 + 1)[:, None]
    ii = np.arange(M2 + 1)[None, :]
    t1, t2 = cert.theta.as_tuple()
    v_grid = np.exp(t1 * kk + t2 * ii) / cert.c
    pi_v = float(np.sum(ref.pi_star * v_grid))
    add("stationary_v_mass", pi_v <= cert.b / cert.c + eps_ref,
        pi_v, cert.b / cert.c + eps_ref)
    for n in n_values:
        mass = bounds.tilted_stationary_mass(solutions[n], cert, "tilde",
                                             spec=spec)
        bound_val = (cert.b_tilde + mass.remainder_bound) / cert.c_tilde
        observed = mass.value / cert.c_tilde
        add(f"truncated_v_tilde_mass[n={n}]", observed <= bound_val,
            observed, bound_val)

    # 6. pointwise stationary tail bound on the top layer
    tt1, tt2 = cert.theta_tilde.as_tuple()
    worst_excess = -np.inf
    for n in (x for x in n_values if x <= 20):
        sol = solutions[n]
        for k in range(51):
            envelope = cert.b_tilde * np.exp(-tt1 * k - tt2 * n)
            excess = qbd.pi_at(sol, k, n) - envelope * (1.0 + 1e-12)
            worst_excess = max(worst_excess, excess)
    add("top_layer_tail_bound", worst_excess <= 0.0, worst_excess, 0.0)

    # 7. asymptotic decay slope of the closed-form bound
    slope = -(tt2 - t2)
    max_dev = max(
        abs((bounds.log_error_bound_E_tilde(n + 1, cert)
             - bounds.log_error_bound_E_tilde(n, cert)) - slope)
        for n in range(100, 200))
    add("E_tilde_decay_slope", max_dev <= 1e-6, max_dev, 1e-6)

    # 8. stability verdict equals the utilization test on random
    #    network parameters (library self-check, model-independent)
    rng = np.random.default_rng(args.seed)
    disagreements = 0
    tested = 0
    for _ in range(1000):
        raw = rng.uniform(0.05, 1.0, size=4)
        params = JacksonParams(
            lambda1=raw[0], lambda2=raw[1], sigma1=raw[2], sigma2=raw[3],
            q1=float(rng.uniform(0.05, 0.95)),
            q2=float(rng.uniform(0.05, 0.95)))
        rho1, rho2 = jackson_utilization(params)
        if min(abs(rho1 - 1.0), abs(rho2 - 1.0)) <= 1e-12:
            continue
        tested += 1
        verdict = check_stability(jackson_spec(params))
        if verdict.stable != (rho1 < 1.0 and rho2 < 1.0):
            disagreements += 1
    add("stability_equivalence_1000_draws", disagreements == 0,
        disagreements, 0)

    # 9. oracle self-consistency
    worst_dev = 0.0
    for trial in range(5):
        P = rng.dirichlet(np.ones(20), size=20)
        d1 = oracle.deviation_matrix(P, "fundamental_matrix")
        d2 = oracle.deviation_matrix(P, "partial_series")
        worst_dev = max(worst_dev, float(np.max(np.abs(d1.D - d2.D))))
    add("deviation_methods_agree", worst_dev < 1e-8, worst_dev, 1e-8)

    sim_specs = [f for f in catalog
                 if f.kind not in ("scaled_lyapunov",)]
    sim_steps = args.steps if args.steps else DEFAULT_SIM_STEPS
    seeds = list(range(args.seed, args.seed + 20))
    contained = {f.label: 0 for f in sim_specs}
    targets = {f.label: ref.functional_value(f, cert) for f in sim_specs}
    for seed in seeds:
        results = oracle.simulate_many(spec, sim_steps, seed, sim_specs,
                                       cert=cert)
        for res in results:
            lo, hi = res.ci()
            # eps_ref covers the reference's truncation; the absolute
            # cushion covers zero-variance functionals whose CI is a point
            slack = eps_ref * max(abs(targets[res.functional]), 1.0) + 1e-12
            if lo - slack <= targets[res.functional] <= hi + slack:
                contained[res.functional] += 1
    for f in sim_specs:
        add(f"simulation_ci_containment[{f.label}]",
            contained[f.label] >= 18, contained[f.label], 18)

    # diagnostic only: the deviation-bound inequality on a clamped
    # window (an infinite-chain statement read at finite size)
    dev_rep = oracle.check_deviation_bound(spec, cert, window=(40, 40),
                                           truncation_gap=eps_ref)
    rows.append({
        "check": "deviation_bound_margin(diagnostic)",
        "pass": None,
        "observed": dev_rep.margin,
        "target": dev_rep.diagnostic,
    })

    # 10. negative control: a corrupted certificate must be caught
    bad = corrupt_certificate(cert, 2.0)
    bad_rep = check_drift_inequality(spec, bad, window=60, variant="base")
    add("negative_control_corrupted_c_detected", not bad_rep.passed,
        bad_rep.max_rel_violation, "must exceed 1e-10")

    return rows, table


def cmd_verify(args) -> int:
    spec, params = _load_and_validate(args)
    dyn = _check_dynamics(spec, args, params)
    cert = _build_certificate(spec, args)
    started = time.perf_counter()
    rows, table = _verify_rows(spec, cert, args)
    elapsed = time.perf_counter() - started
    n_pass = sum(1 for r in rows if r["pass"] is True)
    n_fail = sum(1 for r in rows if r["pass"] is False)
    report = {
        "model": args.model,
        "case": dyn["case"],
        "certificate": cert.to_dict(),
        "checks": rows,
        "observed_errors": table,
        "summary": {"pass": n_pass, "fail": n_fail,
                    "skipped": len(rows) - n_pass - n_fail},
        "timings": {"verify_seconds": elapsed} if args.timings else None,
        "version": __version__,
    }
    csv_rows = table if table else None
    _emit(args, report, csv_rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rrwqbd",
        description="QBD truncation analysis of reflecting random walks "
                    "on the quadrant, with certified relative error "
                    "bounds.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, timings=True):
        p.add_argument("--model", required=True,
                       help="path to a TOML model file")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if timings:
            p.add_argument("--timings", action="store_true",
                           help="include wall-clock timings (breaks "
                                "byte-for-byte report reproducibility)")

    def tilt_flags(p):
        p.add_argument("--theta", help="tilt override as 't1,t2'")
        p.add_argument("--theta-tilde", help="larger tilt override as 't1,t2'")
        p.add_argument("--kappa", type=float,
                       help="fraction of the feasible ray step used for "
                            "the larger tilt (default 0.9)")
        p.add_argument("--debug-scale-c", type=float,
                       help="multiply the certificate's contraction "
                            "constants by this factor; negative-control "
                            "debugging only")

    p = sub.add_parser("validate", help="parse and validate a model file")
    common(p, timings=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("drifts", help="mean drifts and wedge products")
    common(p, timings=False)
    p.set_defaults(func=cmd_drifts)

    p = sub.add_parser("stability",
                       help="stability and boundary drift verdicts")
    common(p, timings=False)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("theta", help="search tilts and build the certificate")
    common(p, timings=False)
    tilt_flags(p)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("solve", help="solve the truncated chain at one n")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_solve, n_list=None)

    p = sub.add_parser("bound", help="error bounds E(n), E_tilde(n)")
    common(p)
    tilt_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--n-list", help="comma-separated truncation levels "
                                    "(default 5,10,20,40)")
    p.add_argument("--tail-tol", type=float,
                   help="relative tolerance of certified tail sums "
                        "(default 1e-12)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify",
                       help="run the full pipeline against the oracles")
    common(p)
    tilt_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--n-list")
    p.add_argument("--tail-tol", type=float)
    p.add_argument("--oracle-window", type=lambda s: _parse_int_pair(
        s, "--oracle-window"), help="dense reference window 'M1,M2' "
                                    "(default 300,300)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int,
                   help="simulation steps per seed (default 10000000)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte-Carlo estimate of pi.g")
    common(p, timings=False)
    tilt_flags(p)
    p.add_argument("--steps", type=int, default=DEFAULT_SIM_STEPS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--functional", default="ones",
                   help="ones | lyap:a | window:k0,k1,i0,i1 | truncN:cap")
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    _apply_thread_env()
    parser = build_parser()
    args = parser.parse_args(argv)
    from .modelfile import ModelFileError

    try:
        return args.func(args)
    except _PipelineAbort as abort:
        _emit(args, abort.report)
        return abort.code
    except (ModelFileError, ValueError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except MemoryError as exc:  # includes the oracle window guard
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_MEMORY


def _module_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    _module_entry()
