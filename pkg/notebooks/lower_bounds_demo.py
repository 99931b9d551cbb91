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
# ## Lower-bound families and Ramsey extraction

# %%
from scipy.sparse.csgraph import dijkstra

from planar_coreset import DistanceOracle
from planar_coreset.lowerbounds import (gen_planar_kd, gen_soko, gen_tree_k, planar_size_bound,
                                        verify_lower_bound)
from planar_coreset.structures import KTupleFamily, ramsey_extract, validate

# %% [markdown]
# ### Two binary trees joined by weighted matching edges
#
# Each top leaf is far (distance 2k+1) only from its mirror. The search
# horizon is raised past 2k+1 so the own distance is reported exactly.

# %%
for k in range(3, 9):
    g, pairs = gen_soko(k)
    rep = verify_lower_bound(g, [(l, [m]) for l, m in pairs], 1, 2 * k - 1, horizon=2 * k + 2)
    print(f"k={k} n={g.vertex_count:4d} size={rep.size:3d} own_min={rep.own_min} "
          f"cross_max={rep.cross_max} ok={rep.ok}")

g, pairs = gen_soko(3)
print("distances from the leftmost top leaf:",
      dijkstra(g.csr(), directed=False, indices=[7])[0].astype(int).tolist())

# %% [markdown]
# ### Tree with pendant paths: a (k, k)-comatching of size 2^k

# %%
for k in range(1, 9):
    g, entries = gen_tree_k(k)
    rep = verify_lower_bound(g, entries, k, k, horizon=k + 3)
    print(f"k={k} size={rep.size:4d} own_min={rep.own_min} cross_max={rep.cross_max}")

# %% [markdown]
# ### Nested cycle gadgets

# %%
for k, d in [(1, 4), (2, 2), (4, 1), (3, 4), (4, 4)]:
    g, entries = gen_planar_kd(k, d)
    rep = verify_lower_bound(g, entries, k, d)
    print(f"(k,d)=({k},{d}) n={g.vertex_count:5d} size={rep.size:4d} "
          f"bound={planar_size_bound(k, d):4d} ok={rep.ok}")

# %% [markdown]
# ### Ramsey extraction from the k=2 tree family

# %%
g, entries = gen_tree_k(2)
oracle = DistanceOracle(g)
fam = KTupleFamily(entries, 2, 3.0, 0.3)
out = ramsey_extract(oracle, fam)
print(out.kind, len(out), out.epsilon, bool(validate(oracle, out)))
