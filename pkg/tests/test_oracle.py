import dataclasses

import pytest

from contactcheck import cross_validate_connection, cross_validate_curvature, sample_points
from contactcheck.oracle import fd_connection, fd_curvature, symbolic_coordinate_connection

INSTANCES = ("nonconstant-k", "heisenberg", "hyperbolic")


def test_sampling_is_deterministic(heisenberg):
    a = sample_points(heisenberg, 10, seed=42)
    b = sample_points(heisenberg, 10, seed=42)
    assert [p.values for p in a] == [p.values for p in b]
    c = sample_points(heisenberg, 10, seed=43)
    assert [p.values for p in a] != [p.values for p in c]


def test_samples_avoid_excluded_locus(counterexample):
    for p in sample_points(counterexample, 25, seed=1):
        assert p.values["x"] != 0


@pytest.mark.parametrize("name", INSTANCES)
def test_connection_agrees_with_finite_differences(name, tables):
    st = tables[name]
    points = sample_points(st.spec, 10, seed=42)
    rep = cross_validate_connection(st.spec, st.conn, points, step=1e-5, tol=1e-6)
    assert rep.passed, rep
    assert rep.points_tested == 10


@pytest.mark.parametrize("name", INSTANCES)
def test_curvature_agrees_with_finite_differences(name, tables):
    st = tables[name]
    points = sample_points(st.spec, 10, seed=42)
    rep = cross_validate_curvature(st.spec, st.curv, points, step=1e-5, tol=1e-4)
    assert rep.passed, rep


def test_injected_corruption_is_detected(tables):
    """Flipping a single connection entry must push the deviation past
    tolerance: the oracle is sensitive to one-component errors."""
    st = tables["heisenberg"]
    gamma = [[list(row) for row in layer] for layer in st.conn.gamma]
    gamma[2][0][1] = gamma[2][0][1] + st.spec.chart.one
    corrupted = dataclasses.replace(st.conn, gamma=tuple(
        tuple(tuple(row) for row in layer) for layer in gamma
    ))
    points = sample_points(st.spec, 5, seed=42)
    rep = cross_validate_connection(st.spec, corrupted, points, step=1e-5, tol=1e-6)
    assert not rep.passed
    assert rep.max_rel_deviation > 0.1


def test_step_halving_converges(tables):
    """Central differences are O(h^2): quartering the step should shrink
    the deviation for a smooth instance (up to roundoff floors)."""
    st = tables["hyperbolic"]
    points = sample_points(st.spec, 3, seed=7)
    coarse = cross_validate_connection(st.spec, st.conn, points, step=1e-1, tol=1.0)
    fine = cross_validate_connection(st.spec, st.conn, points, step=2.5e-2, tol=1.0)
    # O(h^2): a 4x step reduction should give ~16x, allow slack
    assert fine.max_abs_deviation < coarse.max_abs_deviation / 8


def test_fd_curvature_shape(tables):
    st = tables["heisenberg"]
    p = sample_points(st.spec, 1, seed=0)[0]
    R = fd_curvature(st.spec, p, step=1e-5)
    assert R.shape == (3, 3, 3, 3)
    # antisymmetry in the argument pair survives numerically
    assert abs(R[0][0][1][2] + R[0][1][0][2]) < 1e-6


def test_symbolic_coordinate_connection_matches_fd(tables):
    st = tables["nonconstant-k"]
    p = sample_points(st.spec, 1, seed=3)[0]
    table = symbolic_coordinate_connection(st.spec, st.conn)
    fd = fd_connection(st.spec, p, step=1e-5)
    fpoint = p.as_floats()
    for a in range(3):
        for b in range(3):
            for c in range(3):
                assert table[a][b][c].float_eval(fpoint) == pytest.approx(
                    fd[c][a][b], abs=1e-6, rel=1e-6
                )
