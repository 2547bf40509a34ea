"""Walk through the refutation of a published classification claim.

A 3-manifold on the chart x != 0 was claimed to be an N(k) contact metric
manifold with k = -4/x.  Two independent observations sink the claim:

1. k in the nullity condition must be a *constant*; -4/x is not.
2. Even allowing a function k, no single scalar fits all components of
   R(X, Y)xi: the pair (E1, E2) forces R(E1, E2)xi = 0, yet the engine
   finds R(E1, E2)E3 = -(4/x) E2 != 0.

This script replays both observations from the exact symbolic tables.

Run as: python demos/refute_published_example.py
"""

from importlib import resources

from contactcheck import compute_tables, nullity_classify, parse_spec

text = (resources.files("contactcheck") / "data" / "nonconstant-k.cmspec").read_text()
spec = parse_spec(text, name="nonconstant-k")
st = compute_tables(spec)

print("Connection table (nonzero entries):")
for k in range(3):
    for i in range(3):
        for j in range(3):
            g = st.conn.gamma[k][i][j]
            if not g.is_zero:
                print(f"  nabla_E{i+1} E{j+1} has E{k+1}-component {g.render()}")

print("\nThe decisive curvature value:")
print("  R(E1, E2)E3 =", st.curv.R[1][0][1][2].render(), "* E2")

print("\nClaimed k from the instance file:", spec.claimed_k.render())
print("  constant?", spec.claimed_k.is_constant())

res = nullity_classify(spec, st.curv, st.structure, st.metric, st.ricci)
print("\nNullity classification:", res.status)
print("  reason:", res.reason)
print(
    "  witness: component",
    tuple(res.witness.indices),
    "of R(.,.)xi equals",
    res.witness.expr,
    "but the nullity model forces it to 0",
)
