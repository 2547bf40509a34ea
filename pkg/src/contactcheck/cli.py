"""Command line entry point.

Exit codes: 0 all good, 1 an --expect assertion failed (or a requested
check errored / the oracle disagreed), 2 bad input, 3 an internal
consistency self-test failed.
"""

from __future__ import annotations

import argparse
import pathlib
import sys

from .manifold import KNOWN_CHECKS, ParseError, ValidationError, parse_spec, validate_spec
from .report import check_expectations, compute_tables, emit_json, emit_text, run_checks
from .riemann import InternalCheckError
from .scalars import ExprSyntaxError


def _parse_oracle_spec(text):
    opts = {"points": 10, "seed": 0, "step": 1e-5, "tol": 1e-6}
    casts = {"points": int, "seed": int, "step": float, "tol": float}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"bad oracle option {part!r}, expected key=value")
        key, _, value = part.partition("=")
        key = key.strip()
        if key not in opts:
            raise ValueError(f"unknown oracle option {key!r}")
        opts[key] = casts[key](value.strip())
    return opts


def _parse_expect(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"bad expectation {part!r}, expected name=status")
        name, _, status = part.partition("=")
        out.append((name.strip(), status.strip()))
    return out


def _describe(spec, state, out):
    n = spec.dim

    def nonzero(items):
        rows = [(idx, s.render()) for idx, s in items if not s.is_zero]
        return rows or [(None, "all zero")]

    print(f"instance {spec.name}: dim {n}, coords {', '.join(spec.coords)}", file=out)
    print("frame bracket coefficients c^k_ij ([E_i, E_j] = c^k_ij E_k):", file=out)
    for idx, txt in nonzero(
        ((k, i, j), state.coeffs.c[k][i][j])
        for k in range(n)
        for i in range(n)
        for j in range(i + 1, n)
    ):
        if idx is None:
            print(f"  {txt}", file=out)
        else:
            k, i, j = idx
            print(f"  c^{k}_{i}{j} = {txt}", file=out)
    print("connection coefficients (nabla_{E_i} E_j = gamma^k_ij E_k):", file=out)
    for idx, txt in nonzero(
        ((k, i, j), state.conn.gamma[k][i][j])
        for k in range(n)
        for i in range(n)
        for j in range(n)
    ):
        if idx is None:
            print(f"  {txt}", file=out)
        else:
            k, i, j = idx
            print(f"  gamma^{k}_{i}{j} = {txt}", file=out)
    print("curvature components (R(E_i, E_j)E_k on E_l):", file=out)
    for idx, txt in nonzero(
        ((l, i, j, k), state.curv.R[l][i][j][k])
        for l in range(n)
        for i in range(n)
        for j in range(i + 1, n)
        for k in range(n)
    ):
        if idx is None:
            print(f"  {txt}", file=out)
        else:
            l, i, j, k = idx
            print(f"  R^{l}_{i}{j}{k} = {txt}", file=out)
    print("eta components:", " ".join(e.render() for e in state.structure.eta), file=out)
    print("h components (h E_j = h^i_j E_i):", file=out)
    for idx, txt in nonzero(
        ((i, j), state.h.h[i][j]) for i in range(n) for j in range(n)
    ):
        if idx is None:
            print(f"  {txt}", file=out)
        else:
            i, j = idx
            print(f"  h^{idx[0]}_{idx[1]} = {txt}", file=out)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="contactcheck",
        description="Exact classification checks for chart-level contact "
        "metric manifold descriptions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run classification checks on a spec file")
    v.add_argument("file", help="path to the instance description")
    v.add_argument(
        "--checks",
        help="comma-separated subset of: " + ", ".join(KNOWN_CHECKS),
    )
    v.add_argument("--json", dest="json_out", metavar="OUT", help="write JSON report here")
    v.add_argument("--deta", choices=("half", "full"), help="override the d-eta convention")
    v.add_argument(
        "--expect",
        help="comma-separated name=status assertions; mismatch exits 1",
    )
    v.add_argument(
        "--oracle",
        metavar="OPTS",
        help="run the numeric cross-check; OPTS like points=N,seed=S,step=H,tol=T",
    )
    v.add_argument(
        "--trig-ext",
        action="store_true",
        help="enable sin/cos generators even if the file does not request them",
    )
    v.add_argument(
        "--describe",
        action="store_true",
        help="print brackets, connection, and curvature tables",
    )
    return parser


def cmd_verify(args, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        text = pathlib.Path(args.file).read_text()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=err)
        return 2

    checks_override = None
    if args.checks:
        checks_override = tuple(c.strip() for c in args.checks.split(",") if c.strip())
        unknown = [c for c in checks_override if c not in KNOWN_CHECKS]
        if unknown:
            print(f"error: unknown checks: {', '.join(unknown)}", file=err)
            return 2

    try:
        expectations = _parse_expect(args.expect) if args.expect else []
        oracle_opts = _parse_oracle_spec(args.oracle) if args.oracle else None
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return 2

    name = pathlib.Path(args.file).stem
    try:
        spec = parse_spec(
            text,
            name=name,
            trig=args.trig_ext,
            deta_override=args.deta,
            checks_override=checks_override,
        )
        validate_spec(spec)
    except (ParseError, ValidationError, ExprSyntaxError) as exc:
        print(f"error: {exc}", file=err)
        return 2

    try:
        report = run_checks(spec, oracle_options=oracle_opts)
    except InternalCheckError as exc:
        print(f"internal self-test failure: {exc}", file=err)
        return 3

    if args.describe:
        _describe(spec, compute_tables(spec, self_tests=False), out)

    print(emit_text(report), end="", file=out)

    if args.json_out:
        pathlib.Path(args.json_out).write_text(emit_json(report))

    status = 0
    mismatches = check_expectations(report, expectations)
    for name_, expected, actual in mismatches:
        print(f"expectation failed: {name_} expected {expected}, got {actual}", file=err)
        status = 1
    for rec in report.checks:
        if rec.status == "error":
            print(f"check {rec.name} errored: {rec.detail}", file=err)
            status = 1
    for r in report.oracle:
        if not r.passed:
            print(
                f"oracle disagreement on {r.tensor}: "
                f"max rel deviation {r.max_rel_deviation:.3e} > tol {r.tolerance:g}",
                file=err,
            )
            status = 1
    return status


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
