"""Command-line interface.

Exit codes: 0 ok, 2 usage or parse error, 3 domain error (e.g. a jump point),
4 phase-equation root not bracketed, 5 degenerate combination, 6 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys

import numpy as np

from . import __version__
from .conditions import verify_N_np
from .construction import KINDS, construct_uniform, interior_sign_changes
from .exact import estimate_n0, exact_value_integer_beta, exact_value_poisson, extremal_interpolant
from .exceptions import (DegenerateCombination, JumpPoint, KernApproxError, NoRootBracketed, SpecError)
from .kernels import KernelSpec, eval_kernel
from .oracle import best_l1_interp_scan, best_l1_lp, conv_sup_norm, l1_norm_residual

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_ROOT, EXIT_DEGENERATE, EXIT_IO = 0, 2, 3, 4, 5, 6
SCENARIOS = ("theorem2", "theorem5", "theorem6", "oracle-compare")
CSV_COLUMNS = ("spec-id", "n", "closed_form", "oracle_lp", "oracle_scan", "rel_gap", "certificate")

log = logging.getLogger("kernapprox")


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if x is None:
        return "-"
    return f"{x:.12g}"


def load_spec(path: str) -> KernelSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec {path} is not valid JSON: {exc}") from exc
    if isinstance(doc, dict) and "spec" in doc:
        doc = doc["spec"]
    return KernelSpec.from_dicts(doc)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for '{args.command}'")


def _emit(args, doc: dict, lines):
    if args.json:
        print(json.dumps(doc))
    else:
        for line in lines:
            print(line)


def cmd_eval(args) -> int:
    _require(args, "spec", "t")
    spec = load_spec(args.spec)
    value = eval_kernel(spec, args.t, tol=args.tol)
    _emit(args, {"spec": spec.to_dicts(), "t": args.t, "tol": args.tol, "value": value}, [fmt(value)])
    return EXIT_OK


def cmd_exact(args) -> int:
    _require(args, "spec", "n")
    spec = load_spec(args.spec)
    if not spec.is_pure_poisson:
        raise SpecError("'exact' needs a pure-Poisson spec")
    res = exact_value_poisson(spec, args.n)
    n0 = estimate_n0(spec)
    warn = args.n < n0
    if warn:
        print(f"warning: n < n0 ({args.n} < {n0}); the value is not certified as the best approximation",
              file=sys.stderr)
    doc = {"spec": spec.to_dicts(), "n": args.n, "n0": n0, "n_below_n0": warn, **res.to_dict()}
    _emit(args, doc, [f"value   {fmt(res.value)}", f"theta_n {fmt(res.theta_n)}", f"n0      {n0}"])
    return EXIT_OK


def _parse_params(kind, text):
    try:
        items = [s for s in text.split(",") if s.strip()]
        return [int(s) for s in items] if kind == "bernoulli" else [float(s) for s in items]
    except ValueError as exc:
        raise UsageError(f"bad --params {text!r}: {exc}") from exc


def cmd_construct(args) -> int:
    _require(args, "kind", "params", "n")
    params = _parse_params(args.kind, args.params)
    m = args.m if args.m is not None else len(params)
    if m < 2 or m != len(params):
        raise UsageError(f"construction needs m >= 2 parameters matching --m, got {len(params)} (m={m})")
    res = construct_uniform(args.kind, params, args.n, m)
    lp = best_l1_lp(res.spec, args.n, args.grid)
    oracle = lp.value / math.pi
    l1 = l1_norm_residual(res.residual) / math.pi
    closed = res.closed_form.value
    interior = interior_sign_changes(res)
    doc = res.to_dict()
    doc.update({"oracle_lp": oracle, "oracle_l1_residual": l1, "gap": abs(oracle - closed),
                "interior_sign_changes": interior.tolist(), "grid": args.grid})
    cert = res.certificate
    _emit(args, doc, [
        f"alpha*      {' '.join(fmt(a) for a in res.alpha_star)}",
        f"delta       {res.delta}",
        f"certificate {cert.verdict.value} (n={cert.n}, p={cert.p}, xi={fmt(cert.xi)}, count={cert.count})",
        f"node dev    {fmt(cert.max_node_deviation)}",
        f"closed form {fmt(closed)}",
        f"L1 residual {fmt(l1)}",
        f"oracle (LP) {fmt(oracle)}",
        f"gap         {fmt(abs(oracle - closed))}",
    ])
    return EXIT_OK


def _poly_for(spec, n, p, how):
    if how == "auto":
        how = "extremal" if spec.is_pure_poisson and p == 0 else "scan"
    if how == "extremal":
        return extremal_interpolant(spec, n)
    if how == "scan":
        return best_l1_interp_scan(spec, n, p).poly
    return best_l1_lp(spec, n).poly


def cmd_verify(args) -> int:
    _require(args, "spec", "n")
    spec = load_spec(args.spec)
    p = args.p or 0
    poly = _poly_for(spec, args.n, p, args.poly)
    cert = verify_N_np(spec, poly, args.n, p)
    doc = {"spec": spec.to_dicts(), **cert.to_dict()}
    _emit(args, doc, [f"verdict {cert.verdict.value}: {cert.reason}",
                      f"xi      {fmt(cert.xi)}", f"count   {cert.count}",
                      f"max dev {fmt(cert.max_node_deviation)}"])
    return EXIT_OK


def cmd_oracle(args) -> int:
    _require(args, "spec", "n")
    spec = load_spec(args.spec)
    p = args.p or 0
    lp = best_l1_lp(spec, args.n, args.grid)
    scan = best_l1_interp_scan(spec, args.n, p)
    sup = conv_sup_norm(spec, args.n + p)
    doc = {"spec": spec.to_dicts(), "n": args.n, "p": p, "grid": args.grid,
           "lp": lp.value / math.pi, "scan": scan.value / math.pi, "scan_xi": scan.xi,
           "conv_sup_norm": sup}
    lines = [f"LP/pi          {fmt(lp.value / math.pi)}", f"scan/pi        {fmt(scan.value / math.pi)}",
             f"conv sup norm  {fmt(sup)}"]
    if spec.is_pure_poisson and p == 0:
        cf = exact_value_poisson(spec, args.n, with_poly=False).value
        doc["closed_form"] = cf
        lines.append(f"closed form    {fmt(cf)}")
    _emit(args, doc, lines)
    return EXIT_OK


# -- tables -------------------------------------------------------------------

def _row(spec_id, n, closed, lp, scan, cert):
    gap = max(abs(lp - closed), abs(scan - closed)) / closed if closed else math.nan
    return [spec_id, n, fmt(closed), fmt(lp), fmt(scan), fmt(gap), cert]


def _theorem2_rows(grid, rng):
    for q in (0.3, 0.5, 0.7):
        for beta in (0, 1):
            spec = KernelSpec.poisson([1.0], [q], beta)
            n0 = estimate_n0(spec)
            for n in range(n0, n0 + 4):
                yield _poisson_row(f"poisson-q{q}-beta{beta}", spec, n, grid)


def _poisson_row(spec_id, spec, n, grid):
    if float(spec.terms[0].beta).is_integer():
        closed = exact_value_integer_beta(spec, n).value
    else:
        closed = exact_value_poisson(spec, n, with_poly=False).value
    lp = best_l1_lp(spec, n, grid).value / math.pi
    scan = best_l1_interp_scan(spec, n).value / math.pi
    cert = verify_N_np(spec, extremal_interpolant(spec, n), n, 0).verdict.value
    return _row(spec_id, n, closed, lp, scan, cert)


def _construct_rows(kind, param_sets, grid):
    for params in param_sets:
        for n in (1, 2, 3):
            res = construct_uniform(kind, params, n)
            lp = best_l1_lp(res.spec, n, grid).value / math.pi
            scan = best_l1_interp_scan(res.spec, n, res.m - 1).value / math.pi
            label = "-".join(str(x) for x in params)
            yield _row(f"{kind}-{label}", n, res.closed_form.value, lp, scan, res.certificate.verdict.value)


def _oracle_compare_rows(grid, rng):
    for i in range(6):
        m = int(rng.integers(1, 4))
        qs = np.sort(rng.uniform(0.1, 0.7, size=m))[::-1]
        alphas = rng.uniform(-1.0, 1.0, size=m)
        alphas[0] = 1.0
        beta = float(rng.choice([0.0, 1.0, 0.5]))
        spec = KernelSpec.poisson(alphas.round(6).tolist(), qs.round(6).tolist(), beta)
        n = estimate_n0(spec)
        yield _poisson_row(f"random{i}-m{m}-beta{beta}", spec, n, grid)


def cmd_table(args) -> int:
    if not args.scenario or args.scenario not in SCENARIOS:
        raise UsageError(f"scenario must be one of {', '.join(SCENARIOS)}")
    out_path = args.csv or args.output
    if out_path is None:
        raise UsageError("table needs an output path (positional or --csv)")
    rng = np.random.default_rng(args.seed)
    if args.scenario == "theorem2":
        rows = list(_theorem2_rows(args.grid, rng))
    elif args.scenario == "theorem5":
        rows = list(_construct_rows("bernoulli", [(1, 3), (1, 5), (3, 5)], args.grid))
    elif args.scenario == "theorem6":
        rows = list(_construct_rows("conj-poisson", [(0.3, 0.6), (0.2, 0.5)], args.grid))
    else:
        rows = list(_oracle_compare_rows(args.grid, rng))
    try:
        with open(out_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            writer.writerows(rows)
    except OSError as exc:
        print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
        return EXIT_IO
    if not args.json:
        print(f"wrote {len(rows)} rows to {out_path}")
    else:
        print(json.dumps({"scenario": args.scenario, "rows": len(rows), "path": out_path}))
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "exact": cmd_exact, "construct": cmd_construct, "verify": cmd_verify,
            "oracle": cmd_oracle, "table": cmd_table}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", metavar="PATH", help="kernel spec JSON document")
    common.add_argument("--n", type=int, help="approximating degree bound (degree n-1)")
    common.add_argument("--m", type=int, help="number of kernels in a construction")
    common.add_argument("--p", type=int, help="extra sign-change pairs in the certificate")
    common.add_argument("--grid", type=int, default=2048, help="LP sampling grid (default 2048)")
    common.add_argument("--tol", type=float, default=1e-12, help="evaluation tolerance")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--csv", metavar="PATH", help="CSV output path for 'table'")
    common.add_argument("--seed", type=int, default=42, help="seed for randomized fixtures")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="kernapprox", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a kernel at t")
    p.add_argument("--t", type=float, help="evaluation point")
    sub.add_parser("exact", parents=[common], help="closed-form best approximation of a Poisson combination")
    p = sub.add_parser("construct", parents=[common], help="extremal Bernoulli / conjugate Poisson combination")
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--params", help="comma-separated r_i (bernoulli) or q_i (conj-poisson)")
    p = sub.add_parser("verify", parents=[common], help="certify the uniform sign-change pattern")
    p.add_argument("--poly", choices=("auto", "extremal", "scan", "lp"), default="auto")
    sub.add_parser("oracle", parents=[common], help="numerical oracles for a spec")
    p = sub.add_parser("table", parents=[common], help="write a reproduction table as CSV")
    p.add_argument("scenario", nargs="?", default="")
    p.add_argument("output", nargs="?", help="CSV output path (alternative to --csv)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except JumpPoint as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NoRootBracketed as exc:
        print(f"root error: {exc}", file=sys.stderr)
        return EXIT_ROOT
    except DegenerateCombination as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (KernApproxError, ValueError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
