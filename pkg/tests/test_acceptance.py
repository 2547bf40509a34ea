"""Top-level acceptance suite.

Each test is one acceptance criterion for the engine, stated in its
docstring; tolerances are exact (canonical-form zero) unless a numeric
tolerance is given explicitly.
"""

import dataclasses
import json
import pathlib

from contactcheck import (
    axiom_battery,
    check_3d_decomposition,
    check_constant_curvature,
    check_flat,
    check_locally_symmetric,
    cross_validate_connection,
    cross_validate_curvature,
    nullity_classify,
    phi_recurrence_solve,
    phi_symmetric_check,
    sasakian_check,
    nijenhuis_check,
    sample_points,
)
from contactcheck.cli import main as cli_main
from contactcheck.contact import nabla_eta
from contactcheck.riemann import (
    connection_residuals,
    curvature_residuals,
    second_bianchi_residuals,
)

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "contactcheck" / "data"
CEX = str(DATA / "nonconstant-k.cmspec")


def test_criterion_01_connection_golden(tables):
    """Koszul connection on the counterexample instance matches the
    hand-derived table entry for entry with zero tolerance."""
    gamma = tables["nonconstant-k"].conn.gamma
    expected = {
        (1, 0, 0): "(-2)/(x)",  # nabla_E1 E1 = -(2/x) E2
        (0, 0, 1): "(2)/(x)",   # nabla_E1 E2 =  (2/x) E1
        (2, 1, 0): "-2",        # nabla_E2 E1 = -2 E3
        (0, 1, 2): "2",         # nabla_E2 E3 =  2 E1
    }
    for k in range(3):
        for i in range(3):
            for j in range(3):
                want = expected.get((k, i, j))
                if want is None:
                    assert gamma[k][i][j].is_zero, (k, i, j)
                else:
                    assert gamma[k][i][j].render() == want, (k, i, j)


def test_criterion_02_nullity_refutation(tables, capsys):
    """R(E1, E2)E3 = -(4/x) E2 exactly; the constant-k nullity condition
    is refuted with that witness; the CLI assertion exits 0; and the
    claimed non-constant k is flagged."""
    st = tables["nonconstant-k"]
    assert st.curv.R[1][0][1][2].render() == "(-4)/(x)"
    assert all(st.curv.R[l][0][1][2].is_zero for l in (0, 2))
    res = nullity_classify(st.spec, st.curv, st.structure, st.metric, st.ricci)
    assert res.status == "refuted"
    assert tuple(res.witness.indices) == (1, 0, 1)
    assert res.witness.expr == "(-4)/(x)"
    assert cli_main(["verify", CEX, "--expect", "nullity=refuted"]) == 0
    out = capsys.readouterr().out
    assert "claimed k = (-4)/(x): NOT constant" in out


def test_criterion_03_axiom_battery(tables):
    """All contact metric structure axioms hold on the counterexample
    instance; h = diag(-1, 1, 0) on the frame; d eta(E1, E2) = -1 equals
    g(E1, phi E2) under the one-half convention."""
    st = tables["nonconstant-k"]
    battery = axiom_battery(
        st.spec, st.metric, st.structure, st.h, st.conn, st.curv, long_identity=True
    )
    for axiom, verdict in battery:
        assert verdict.status == "holds", axiom
    h = st.h.h
    assert h[0][0].as_rational() == -1 and h[1][1].as_rational() == 1
    assert all(
        h[i][j].is_zero for i in range(3) for j in range(3) if i != j or i == 2
    )
    assert st.structure.deta[0][1].as_rational() == -1
    g_e1_phie2 = sum(
        (st.spec.phi[i][1] * st.metric.g[0][i] for i in range(3)), st.spec.chart.zero
    )
    assert g_e1_phie2.as_rational() == -1


def test_criterion_04_3d_identity(tables):
    """The three-dimensional curvature decomposition closes symbolically
    on the counterexample and Heisenberg instances, and (nabla_W eta)(xi)
    vanishes on every contact metric corpus instance."""
    for name in ("nonconstant-k", "heisenberg"):
        st = tables[name]
        assert check_3d_decomposition(st.spec, st.curv, st.ricci, st.metric).status == "holds"
    for name in ("nonconstant-k", "heisenberg", "flat-contact"):
        st = tables[name]
        for w in range(st.spec.dim):
            total = st.spec.chart.zero
            for z in range(st.spec.dim):
                total = total + nabla_eta(st.spec, st.conn, st.structure, w, z) * st.spec.xi[z]
            assert total.is_zero, (name, w)


def test_criterion_05_sasakian_corpus(tables):
    """Heisenberg: nullity fits with k = 1, Sasakian holds, normality
    holds, locally phi-symmetric holds, and the recurrence solver does
    not return a genuine recurrence."""
    st = tables["heisenberg"]
    res = nullity_classify(st.spec, st.curv, st.structure, st.metric, st.ricci)
    assert res.status == "fits" and res.k.as_rational() == 1
    assert sasakian_check(st.spec, st.curv, st.structure).status == "holds"
    assert nijenhuis_check(st.spec, st.structure, st.coeffs).status == "holds"
    assert phi_symmetric_check(st.spec, st.curv, st.ncurv, st.structure).status == "holds"
    assert phi_recurrence_solve(st.spec, st.curv, st.ncurv, st.structure).status != "recurrent"


def test_criterion_06_constant_curvature_chain(tables):
    """Hyperbolic space: lambda = -1, nabla R = 0, and the recurrence
    relation admits only A = 0.  Flat instances: lambda = 0 with trivial
    recurrence."""
    st = tables["hyperbolic"]
    cc = check_constant_curvature(st.spec, st.curv, st.metric)
    assert cc.status == "fits" and cc.lam.as_rational() == -1
    assert check_locally_symmetric(st.spec, st.ncurv).status == "holds"
    rec = phi_recurrence_solve(st.spec, st.curv, st.ncurv, st.structure)
    assert rec.status == "zero-only" and all(a.is_zero for a in rec.A)
    for name in ("euclidean", "flat-contact"):
        st = tables[name]
        cc = check_constant_curvature(st.spec, st.curv, st.metric)
        assert cc.status == "fits" and cc.lam.as_rational() == 0
        assert phi_recurrence_solve(st.spec, st.curv, st.ncurv, st.structure).status == "trivial"


def test_criterion_07_recurrence_implies_flat(tables):
    """Across the full corpus (>= 6 instances including corrupted ones),
    no 3D instance simultaneously passes the axioms, fits a constant-k
    nullity, and carries a nonzero recurrence 1-form while being
    non-flat."""
    assert len(tables) >= 6
    for name, st in tables.items():
        if st.spec.dim != 3:
            continue
        battery = axiom_battery(st.spec, st.metric, st.structure, st.h, st.conn, st.curv)
        axioms_ok = all(v.status == "holds" for _, v in battery)
        fits = nullity_classify(st.spec, st.curv, st.structure, st.metric, st.ricci).status == "fits"
        rec = phi_recurrence_solve(st.spec, st.curv, st.ncurv, st.structure)
        recurrent_nonzero = rec.status == "recurrent" and any(not a.is_zero for a in rec.A)
        if axioms_ok and fits and recurrent_nonzero:
            assert check_flat(st.spec, st.curv).status == "holds", name


def test_criterion_08_riemannian_invariants(tables):
    """Metric compatibility, torsion-freeness, curvature antisymmetry,
    and both Bianchi identities are canonical zeros on every instance."""
    for name, st in tables.items():
        for tag, r in connection_residuals(st.spec, st.conn, st.coeffs, st.metric):
            assert r.is_zero, (name, tag)
        for tag, r in curvature_residuals(st.spec, st.curv, st.metric):
            assert r.is_zero, (name, tag)
        for tag, r in second_bianchi_residuals(st.spec, st.ncurv):
            assert r.is_zero, (name, tag)


def test_criterion_09_oracle_agreement(tables):
    """Symbolic connection and curvature agree with finite differences at
    10 seeded points within 1e-6 / 1e-4 relative tolerance on three
    instances, and a single corrupted component is detected."""
    for name in ("nonconstant-k", "heisenberg", "hyperbolic"):
        st = tables[name]
        pts = sample_points(st.spec, 10, seed=42)
        assert cross_validate_connection(st.spec, st.conn, pts, step=1e-5, tol=1e-6).passed, name
        assert cross_validate_curvature(st.spec, st.curv, pts, step=1e-5, tol=1e-4).passed, name
    st = tables["heisenberg"]
    gamma = [[list(row) for row in layer] for layer in st.conn.gamma]
    gamma[0][1][1] = gamma[0][1][1] + st.spec.chart.one
    bad = dataclasses.replace(
        st.conn,
        gamma=tuple(tuple(tuple(row) for row in layer) for layer in gamma),
    )
    pts = sample_points(st.spec, 5, seed=42)
    assert not cross_validate_connection(st.spec, bad, pts, step=1e-5, tol=1e-6).passed


def test_criterion_10_determinism_and_exit_codes(tmp_path, capsys, monkeypatch):
    """Repeated runs emit byte-identical JSON; the exit-code contract
    (0 ok, 1 failed expectation, 2 bad input, 3 internal failure) holds."""
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli_main(["verify", CEX, "--json", str(a)]) == 0
    assert cli_main(["verify", CEX, "--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["version"] and doc["instance"] == "nonconstant-k"

    assert cli_main(["verify", CEX, "--expect", "axioms=refuted"]) == 1
    assert cli_main(["verify", str(tmp_path / "nope.cmspec")]) == 2

    from contactcheck import cli
    from contactcheck.riemann import InternalCheckError

    def boom(spec, oracle_options=None):
        raise InternalCheckError("forced")

    monkeypatch.setattr(cli, "run_checks", boom)
    assert cli_main(["verify", CEX]) == 3
    capsys.readouterr()
