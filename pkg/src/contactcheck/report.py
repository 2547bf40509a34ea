"""Check orchestration and report rendering.

run_checks drives the full pipeline in dependency order; emit_text and
emit_json render a ClassificationReport deterministically (the JSON key
order is fixed so repeated runs are byte-identical).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__
from .contact import (
    assemble_contact,
    axiom_battery,
    contact_condition,
    h_tensor,
    nijenhuis_check,
    nullity_classify,
    phi_recurrence_solve,
    phi_symmetric_check,
    sasakian_check,
)
from .manifold import SingularFrame, structure_coeffs
from .oracle import (
    cross_validate_connection,
    cross_validate_curvature,
    sample_points,
)
from .riemann import (
    DimensionError,
    Verdict,
    Witness,
    check_3d_decomposition,
    check_constant_curvature,
    check_flat,
    check_locally_symmetric,
    curvature_tensor,
    koszul_connection,
    metric_frame,
    nabla_R,
    ricci,
    run_self_tests,
)

CHECK_ORDER = (
    "contact",
    "axioms",
    "nullity",
    "sasakian",
    "normality",
    "symmetric",
    "phi-symmetric",
    "phi-recurrent",
    "constant-curvature",
    "decomposition3d",
    "flat",
)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    status: str  # holds | refuted | trivial | skipped | error
    witness: Witness | None = None
    k: str | None = None
    lam: str | None = None
    recurrence_status: str | None = None
    recurrence_A: tuple | None = None
    detail: str | None = None


@dataclass
class ClassificationReport:
    instance: str
    dim: int
    convention: str
    excluded_locus: str
    checks: list = field(default_factory=list)
    oracle: list = field(default_factory=list)
    claim: dict | None = None
    version: str = __version__

    def record(self, name):
        for rec in self.checks:
            if rec.name == name:
                return rec
        raise KeyError(name)


@dataclass
class EngineState:
    """All computed tables for one instance, for reuse and inspection."""

    spec: object
    coeffs: object = None
    metric: object = None
    conn: object = None
    curv: object = None
    ncurv: object = None
    ricci: object = None
    structure: object = None
    h: object = None


def compute_tables(spec, self_tests=True):
    state = EngineState(spec=spec)
    state.coeffs = structure_coeffs(spec)
    state.metric = metric_frame(spec)
    state.conn = koszul_connection(spec, state.coeffs, state.metric)
    state.curv = curvature_tensor(spec, state.conn, state.coeffs)
    state.ncurv = nabla_R(spec, state.curv, state.conn)
    state.ricci = ricci(spec, state.curv, state.metric)
    state.structure = assemble_contact(spec, state.metric, state.coeffs)
    state.h = h_tensor(spec, state.coeffs)
    if self_tests:
        run_self_tests(
            spec, state.conn, state.coeffs, state.metric, state.curv, state.ncurv
        )
    return state


def _verdict_record(name, verdict, **extra):
    return CheckRecord(
        name=name,
        status=verdict.status,
        witness=verdict.witness,
        detail=verdict.detail,
        **extra,
    )


def run_checks(spec, oracle_options=None, long_identity=False, self_tests=True):
    """Execute the requested checks in dependency order and build the report."""
    report = ClassificationReport(
        instance=spec.name,
        dim=spec.dim,
        convention=spec.deta_convention,
        excluded_locus=spec.excluded_locus().render(),
    )

    try:
        state = compute_tables(spec, self_tests=self_tests)
        failure = None
    except SingularFrame as exc:
        state = None
        failure = str(exc)

    if spec.claimed_k is not None:
        report.claim = {
            "k": spec.claimed_k.render(),
            "constant": spec.claimed_k.is_constant(),
        }

    battery = None
    if state is not None and (
        "axioms" in spec.requested_checks or "normality" in spec.requested_checks
    ):
        battery = axiom_battery(
            spec,
            state.metric,
            state.structure,
            state.h,
            state.conn,
            state.curv,
            long_identity=long_identity,
        )

    for name in CHECK_ORDER:
        if name not in spec.requested_checks:
            continue
        if state is None:
            report.checks.append(CheckRecord(name=name, status="skipped", detail=failure))
            continue
        report.checks.append(_run_one(name, spec, state, battery))

    if oracle_options:
        points = sample_points(
            spec,
            oracle_options.get("points", 10),
            oracle_options.get("seed", 0),
        )
        step = oracle_options.get("step", 1e-5)
        tol = oracle_options.get("tol", 1e-6)
        report.oracle.append(
            cross_validate_connection(spec, state.conn, points, step=step, tol=tol)
        )
        report.oracle.append(
            cross_validate_curvature(
                spec, state.curv, points, step=step, tol=max(tol, 1e-4)
            )
        )
    return report


def _run_one(name, spec, state, battery):
    if name == "contact":
        verdict, total = contact_condition(spec, state.structure)
        detail = f"eta ^ (d eta)^n = {total.render()}"
        return CheckRecord(
            name=name, status=verdict.status, witness=verdict.witness, detail=detail
        )
    if name == "axioms":
        for idx, (axiom, verdict) in enumerate(battery):
            if verdict.status != "holds":
                w = verdict.witness
                indices = (idx,) + tuple(w.indices) if w else (idx,)
                expr = w.expr if w else ""
                return CheckRecord(
                    name=name,
                    status="refuted",
                    witness=Witness(indices, expr),
                    detail=f"axiom {axiom} fails",
                )
        return CheckRecord(name=name, status="holds")
    if name == "nullity":
        res = nullity_classify(
            spec, state.curv, state.structure, state.metric, state.ricci
        )
        if res.status == "fits":
            return CheckRecord(name=name, status="holds", k=res.k.render())
        return CheckRecord(
            name=name, status="refuted", witness=res.witness, detail=res.reason
        )
    if name == "sasakian":
        return _verdict_record(name, sasakian_check(spec, state.curv, state.structure))
    if name == "normality":
        phi_square_ok = True
        if battery is not None:
            phi_square_ok = all(
                v.status == "holds" for a, v in battery if a == "phi-square"
            )
        return _verdict_record(
            name,
            nijenhuis_check(
                spec, state.structure, state.coeffs, phi_square_ok=phi_square_ok
            ),
        )
    if name == "symmetric":
        return _verdict_record(name, check_locally_symmetric(spec, state.ncurv))
    if name == "phi-symmetric":
        return _verdict_record(
            name, phi_symmetric_check(spec, state.curv, state.ncurv, state.structure)
        )
    if name == "phi-recurrent":
        res = phi_recurrence_solve(spec, state.curv, state.ncurv, state.structure)
        status = {
            "recurrent": "holds",
            "trivial": "trivial",
            "zero-only": "refuted",
            "refuted": "refuted",
        }[res.status]
        return CheckRecord(
            name=name,
            status=status,
            witness=res.witness,
            recurrence_status=res.status,
            recurrence_A=tuple(a.render() for a in res.A) if res.A else None,
            detail="relation only holds with A = 0" if res.status == "zero-only" else None,
        )
    if name == "constant-curvature":
        res = check_constant_curvature(spec, state.curv, state.metric)
        if res.status == "fits":
            return CheckRecord(name=name, status="holds", lam=res.lam.render())
        return CheckRecord(
            name=name, status="refuted", witness=res.witness, detail=res.detail
        )
    if name == "decomposition3d":
        try:
            return _verdict_record(
                name, check_3d_decomposition(spec, state.curv, state.ricci, state.metric)
            )
        except DimensionError as exc:
            return CheckRecord(name=name, status="error", detail=str(exc))
    if name == "flat":
        return _verdict_record(name, check_flat(spec, state.curv))
    raise ValueError(f"unknown check {name!r}")


# ---------------------------------------------------------------------------
# rendering

def _witness_obj(w):
    if w is None:
        return None
    return {"indices": list(w.indices), "expr": w.expr}


def emit_json(report):
    """Serialize with a fixed key order; output is byte-stable."""
    checks = []
    for rec in report.checks:
        recurrence = None
        if rec.recurrence_status is not None:
            recurrence = {
                "status": rec.recurrence_status,
                "A": list(rec.recurrence_A) if rec.recurrence_A is not None else None,
            }
        checks.append(
            {
                "name": rec.name,
                "status": rec.status,
                "witness": _witness_obj(rec.witness),
                "constants": {"k": rec.k, "lambda": rec.lam},
                "recurrence": recurrence,
            }
        )
    oracle = [
        {
            "tensor": r.tensor,
            "max_abs_deviation": float(r.max_abs_deviation),
            "max_rel_deviation": float(r.max_rel_deviation),
            "points_tested": int(r.points_tested),
            "step": float(r.step),
            "tolerance": float(r.tolerance),
            "passed": bool(r.passed),
        }
        for r in report.oracle
    ]
    doc = {
        "instance": report.instance,
        "dim": report.dim,
        "convention": report.convention,
        "excluded_locus": report.excluded_locus,
        "checks": checks,
        "oracle": oracle,
        "version": report.version,
    }
    return json.dumps(doc, indent=2) + "\n"


def emit_text(report):
    lines = []
    lines.append(f"instance: {report.instance} (dim {report.dim})")
    lines.append(f"d-eta convention: {report.convention}")
    lines.append(f"excluded locus: {report.excluded_locus}")
    lines.append(
        "convention note: constant curvature fitted as "
        "R(X,Y)Z = lambda (g(Y,Z)X - g(X,Z)Y)"
    )
    if report.claim is not None:
        if report.claim["constant"]:
            lines.append(f"claimed k = {report.claim['k']}: constant")
        else:
            lines.append(
                f"claimed k = {report.claim['k']}: NOT constant -- "
                "rejected before any curvature comparison"
            )
    for rec in report.checks:
        line = f"  {rec.name:<18} {rec.status}"
        extras = []
        if rec.k is not None:
            extras.append(f"k = {rec.k}")
        if rec.lam is not None:
            extras.append(f"lambda = {rec.lam}")
        if rec.recurrence_status is not None:
            extras.append(f"recurrence: {rec.recurrence_status}")
            if rec.recurrence_A is not None:
                extras.append("A = [" + ", ".join(rec.recurrence_A) + "]")
        if rec.witness is not None:
            extras.append(
                f"witness {tuple(rec.witness.indices)} = {rec.witness.expr}"
            )
        if rec.detail:
            extras.append(rec.detail)
        if extras:
            line += "   (" + "; ".join(extras) + ")"
        lines.append(line)
    for r in report.oracle:
        lines.append(
            f"  oracle[{r.tensor}]   {'pass' if r.passed else 'FAIL'}"
            f"   max rel dev {r.max_rel_deviation:.3e} over {r.points_tested} points"
            f" (step {r.step:g}, tol {r.tolerance:g})"
        )
    lines.append(f"engine version {report.version}")
    return "\n".join(lines) + "\n"


def check_expectations(report, expectations):
    """Compare 'name=status' assertions against the report.

    'fits' is accepted as a synonym for 'holds' on the fitting checks."""
    mismatches = []
    by_name = {rec.name: rec for rec in report.checks}
    for name, expected in expectations:
        rec = by_name.get(name)
        actual = rec.status if rec is not None else "absent"
        normalized = expected
        if expected == "fits" and name in ("nullity", "constant-curvature"):
            normalized = "holds"
        if actual != normalized:
            mismatches.append((name, expected, actual))
    return mismatches
