import pytest

from contactcheck import (
    axiom_battery,
    contact_condition,
    nijenhuis_check,
    nullity_classify,
    phi_recurrence_solve,
    phi_symmetric_check,
    sasakian_check,
)
from contactcheck.contact import AXIOM_NAMES, nabla_eta


def _battery(st, long_identity=False):
    return axiom_battery(
        st.spec, st.metric, st.structure, st.h, st.conn, st.curv,
        long_identity=long_identity,
    )


def test_axiom_battery_counterexample(tables):
    """Every structure axiom holds, including the quadratic curvature
    identity that ties R(X, Y)xi to eta and h."""
    st = tables["nonconstant-k"]
    for axiom, verdict in _battery(st, long_identity=True):
        assert verdict.status == "holds", axiom


def test_h_tensor_golden(tables):
    # h E1 = -E1, h E2 = E2, h E3 = 0
    h = tables["nonconstant-k"].h.h
    assert h[0][0].as_rational() == -1
    assert h[1][1].as_rational() == 1
    for i in range(3):
        for j in range(3):
            if i != j or i == 2:
                assert h[i][j].is_zero


def test_deta_convention(tables):
    """d eta(E1, E2) = -1 = g(E1, phi E2) under the one-half convention."""
    st = tables["nonconstant-k"]
    assert st.structure.deta[0][1].as_rational() == -1
    g_e1_phie2 = st.spec.chart.zero
    for i in range(3):
        g_e1_phie2 = g_e1_phie2 + st.spec.phi[i][1] * st.metric.g[0][i]
    assert g_e1_phie2.as_rational() == -1


def test_contact_condition(tables):
    holds = {"nonconstant-k", "heisenberg", "flat-contact", "darboux", "corrupted-phi"}
    for name, st in tables.items():
        verdict, _ = contact_condition(st.spec, st.structure)
        assert verdict.status == ("holds" if name in holds else "refuted"), name


def test_nullity_refuted_with_witness(tables):
    st = tables["nonconstant-k"]
    res = nullity_classify(st.spec, st.curv, st.structure, st.metric, st.ricci)
    assert res.status == "refuted"
    assert res.reason == "no-scalar-fits"
    assert tuple(res.witness.indices) == (1, 0, 1)
    assert res.witness.expr == "(-4)/(x)"


def test_claimed_k_nonconstant(counterexample):
    assert counterexample.claimed_k is not None
    assert counterexample.claimed_k.render() == "(-4)/(x)"
    assert not counterexample.claimed_k.is_constant()


def test_heisenberg_sasakian_chain(tables):
    st = tables["heisenberg"]
    res = nullity_classify(st.spec, st.curv, st.structure, st.metric, st.ricci)
    assert res.status == "fits" and res.k.as_rational() == 1
    assert sasakian_check(st.spec, st.curv, st.structure).status == "holds"
    assert nijenhuis_check(st.spec, st.structure, st.coeffs).status == "holds"
    assert phi_symmetric_check(st.spec, st.curv, st.ncurv, st.structure).status == "holds"
    rec = phi_recurrence_solve(st.spec, st.curv, st.ncurv, st.structure)
    assert rec.status != "recurrent"


def test_flat_contact_nullity_zero(tables):
    st = tables["flat-contact"]
    res = nullity_classify(st.spec, st.curv, st.structure, st.metric, st.ricci)
    assert res.status == "fits" and res.k.as_rational() == 0
    # h != 0, so flat-but-contact rather than Sasakian
    assert any(not st.h.h[i][j].is_zero for i in range(3) for j in range(3))


def test_recurrence_statuses(tables):
    def solve(name):
        st = tables[name]
        return phi_recurrence_solve(st.spec, st.curv, st.ncurv, st.structure)

    assert solve("euclidean").status == "trivial"
    assert solve("flat-contact").status == "trivial"
    assert solve("hyperbolic").status == "zero-only"
    assert solve("nonconstant-k").status == "refuted"


def test_hyperbolic_recurrence_A_zero(tables):
    st = tables["hyperbolic"]
    rec = phi_recurrence_solve(st.spec, st.curv, st.ncurv, st.structure)
    assert rec.A is not None
    assert all(a.is_zero for a in rec.A)


def test_nabla_eta_annihilates_xi(tables):
    """(nabla_W eta)(xi) = 0 on every contact metric instance."""
    contact_names = ("nonconstant-k", "heisenberg", "flat-contact")
    for name in contact_names:
        st = tables[name]
        n = st.spec.dim
        for w in range(n):
            val = nabla_eta_of_xi(st, w)
            assert val.is_zero, (name, w)


def nabla_eta_of_xi(st, w):
    n = st.spec.dim
    total = st.spec.chart.zero
    for z in range(n):
        total = total + nabla_eta(st.spec, st.conn, st.structure, w, z) * st.spec.xi[z]
    return total


def test_corrupted_phi_fails_axioms_only(tables):
    st = tables["corrupted-phi"]
    verdicts = dict(_battery(st))
    assert set(verdicts) >= set(AXIOM_NAMES)
    assert verdicts["phi-xi"].status == "refuted"
    assert verdicts["phi-square"].status == "refuted"
    # skip rule: normality is not decidable when phi-square fails
    v = nijenhuis_check(st.spec, st.structure, st.coeffs, phi_square_ok=False)
    assert v.status == "skipped"


def test_no_recurrent_nullity_nonflat_instance(tables):
    """Conjunction property across the corpus: a 3-dimensional instance
    that satisfies the structure axioms, fits a constant-k nullity
    condition, and admits a genuinely recurrent (nonzero A) relation must
    be flat."""
    from contactcheck import check_flat

    for name, st in tables.items():
        if st.spec.dim != 3:
            continue
        axioms_ok = all(v.status == "holds" for _, v in _battery(st))
        res = nullity_classify(st.spec, st.curv, st.structure, st.metric, st.ricci)
        rec = phi_recurrence_solve(st.spec, st.curv, st.ncurv, st.structure)
        recurrent_nonzero = rec.status == "recurrent" and rec.A is not None and any(
            not a.is_zero for a in rec.A
        )
        if axioms_ok and res.status == "fits" and recurrent_nonzero:
            assert check_flat(st.spec, st.curv).status == "holds", name
