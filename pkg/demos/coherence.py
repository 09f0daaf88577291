"""
Coherence of binary, ternary and Gaussian matrices
==================================================

Binary and ternary matrices from the same graph share column-overlap
magnitudes, hence the same coherence and the same guaranteed sparsity
``k < (1/mu + 1) / 2``.
"""

# %%
from bgcsense import ConstructionConfig, bgc_construct, coherence, realize_binary, \
    realize_ternary, sample_gaussian

graph = bgc_construct(ConstructionConfig(150, 300, seed=3)).graph
for name, a in [("binary", realize_binary(graph)),
                ("ternary", realize_ternary(graph, seed=4)),
                ("gaussian", sample_gaussian(150, 300, seed=5))]:
    rep = coherence(a)
    print(f"{name:8s} mu={rep.mu:.4f}  guaranteed k <= {rep.k_bound}  worst pair {rep.argmax_pair}")

# %%
# For a graph matrix the coherence is set by the two sparsest columns
# that share a row: mu = 1 / sqrt(d_i d_j).
print("smallest column degree:", graph.var_degrees().min())
