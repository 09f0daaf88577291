"""
Recovering a sparse signal by l1 minimization
=============================================

Plant a sparse signal, observe ``y = A x`` and decode with basis pursuit.
On a tiny problem the answer is checked against exhaustive search.
"""

# %%
import numpy as np

from bgcsense import ConstructionConfig, basis_pursuit, bgc_construct, brute_force_l1, \
    generate_signal, realize_ternary

graph = bgc_construct(ConstructionConfig(50, 100, seed=0)).graph
a = realize_ternary(graph, seed=1)
x = generate_signal(100, k=8, signing="signed", seed=2)
out = basis_pursuit(a, a.entries @ x.dense()).score(x)
print("status:", out.status, " relative error: %.2e" % out.relative_error)
print("true support:     ", list(x.support))
print("recovered support:", np.flatnonzero(np.abs(out.estimate) > 1e-6).tolist())

# %%
# With too many nonzeros the l1 minimizer is some other vector.
x = generate_signal(100, k=30, signing="signed", seed=2)
out = basis_pursuit(a, a.entries @ x.dense()).score(x)
print("k=30 relative error: %.2f" % out.relative_error)

# %%
# A tiny instance: LP and exhaustive search agree on the optimum.
small = realize_ternary(bgc_construct(ConstructionConfig(6, 10, seed=4)).graph, seed=5)
y = small.entries @ generate_signal(10, 2, seed=6).dense()
print("LP objective %.6f, exhaustive %.6f" % (basis_pursuit(small, y).objective,
                                              brute_force_l1(small, y).objective))
