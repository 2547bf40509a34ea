"""Cross-check the symbolic tables against finite differences.

The oracle rebuilds the coordinate metric numerically from the frame
data and differentiates it by central differences, so it shares no code
path with the Koszul/curvature pipeline it validates.

Run as: python demos/numeric_cross_check.py
"""

from importlib import resources

from contactcheck import (
    compute_tables,
    cross_validate_connection,
    cross_validate_curvature,
    parse_spec,
    sample_points,
)

for name in ("nonconstant-k", "heisenberg", "hyperbolic"):
    text = (resources.files("contactcheck") / "data" / f"{name}.cmspec").read_text()
    spec = parse_spec(text, name=name)
    st = compute_tables(spec)
    pts = sample_points(spec, 10, seed=42)
    conn = cross_validate_connection(spec, st.conn, pts)
    curv = cross_validate_curvature(spec, st.curv, pts)
    print(f"{name}:")
    for rep in (conn, curv):
        print(
            f"  {rep.tensor:<10} {'pass' if rep.passed else 'FAIL'}"
            f"  max rel deviation {rep.max_rel_deviation:.3e}"
            f"  ({rep.points_tested} points, step {rep.step:g})"
        )
