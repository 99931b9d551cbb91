# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#   kernelspec:
#     display_name: Python 3 (ipykernel)
#     language: python
#     name: python3
# ---

# %% [markdown]
# ## Furthest-neighbor coresets on grid metrics
#
# Build a weighted grid, run the greedy and LP constructions, certify both.

# %%
from planar_coreset import DistanceOracle, greedy_coreset, lp_coreset, verify_coreset
from planar_coreset.coreset import dual_comatching_diagnostic
from planar_coreset.generators import grid, random_subdivision

g = random_subdivision(grid(10, 10, ("integer", 1, 5), seed=3), 20, seed=3)
oracle = DistanceOracle(g)
P = list(range(g.vertex_count))
print(g)

# %% [markdown]
# ### Sizes across epsilon

# %%
for eps in (0.5, 0.25, 0.1):
    gr = greedy_coreset(oracle, P, eps)
    lp = lp_coreset(oracle, P, eps, seed=0)
    tau = sum(b["tau_star"] for b in lp.buckets)
    print(f"eps={eps:<5} greedy |Q|={len(gr.Q):3d}  lp |Q|={len(lp.Q):3d}  "
          f"buckets={len(lp.buckets):3d}  sum tau*={tau:7.2f}")

# %% [markdown]
# ### Worst query vertex
#
# The report names the vertex whose furthest point is served least well.

# %%
lp = lp_coreset(oracle, P, 0.25, seed=1)
rep = verify_coreset(oracle, P, lp.Q, 0.25)
print(rep)
print("ratio >= 1 - eps:", rep.ratio >= 0.75)

# %% [markdown]
# ### Per-bucket LP data

# %%
for b in lp.buckets[:8]:
    print(f"i={b['i']:3d} sets={b['sets']:3d} tau*={b['tau_star']:.3f} "
          f"|X|={len(b['X'])} rounds={b['rounds']} fallback={b['fallback']}")

# %% [markdown]
# ### Dual diagnostic
#
# Rounds the packing dual of one bucket into a comatching at eps^2/4.

# %%
i = max(lp.buckets, key=lambda b: b["tau_star"])["i"]
print(dual_comatching_diagnostic(oracle, P, 0.25, i, seed=0))
