# %% [markdown]
# # When does a stationary state exist?
#
# For a bipartite marked component, shortages on the two sides must balance.
# Non-bipartite components can always be neutralized through an odd cycle.

# %%
from qwalk import fixtures as fx
from qwalk.graph import bipartition
from qwalk.spectral import materialize, one_eigenspace, project_initial
from qwalk.stationary import (
    ExistenceError,
    assign_non_bipartite,
    balance_unmarked_assignment,
    compute_shortages,
    construct_optimal,
    vertex_sums,
)

# %% [markdown]
# ## Two vertices, one marked
#
# The marked vertex has one unmarked neighbour and no marked edge to use, so
# its shortage cannot be neutralized.

# %%
g, m = fx.two_vertex_path()
try:
    construct_optimal(g, m)
except ExistenceError as exc:
    print(exc)
print("projection norm:", project_initial(one_eigenspace(materialize(g, m)))[0])

# %% [markdown]
# ## Two unmarked components
#
# Vertex 0 has two edges into one unmarked component and vertex 1 has three
# edges into the other. Balance needs 2a = 3b.

# %%
g, m = fx.disjoint_unmarked_pair()
bal = balance_unmarked_assignment(g, m)
print("assignment:", bal.assignment, "ratio:", bal.assignment[0] / bal.assignment[1])
print("shortages:", compute_shortages(g, m, bal.assignment).shortages)
state, rep = construct_optimal(g, m, bal.assignment)
print("stationary:", rep.is_stationary, "overlap:", rep.overlap_with_initial)

# %% [markdown]
# ## A bipartite component with seven vertices

# %%
g, m = fx.bipartite7_host()
bip = bipartition(g, range(7))
print("X:", bip.X, "Y:", bip.Y)
state, rep = construct_optimal(g, m)
print("overlap:", rep.overlap_with_initial)
print("spectral:", project_initial(one_eigenspace(materialize(g, m)))[0])

# %% [markdown]
# ## Odd cycles
#
# A 5-cycle with an extra vertex: the extra vertex is peeled first, then the
# closed form on the cycle handles whatever remains.

# %%
g = fx.five_cycle_with_chordal_vertex()
s = {v: float(v + 1) for v in range(6)}
values = assign_non_bipartite(g, range(6), s)
for e, val in sorted(values.items()):
    print(e, round(val, 6))
print("vertex sums:", {v: round(x, 12) for v, x in sorted(vertex_sums(values).items())})
