# %% [markdown]
# # Two oracles on the complete graph
#
# With k marked vertices the Grover step reaches 4k(k-1)/(2k-1)^2, while the
# SKW step (-I at marked vertices) reaches about 1/2. The SKW step has no
# stationary state overlapping the uniform start.

# %%
import math

from qwalk import fixtures as fx
from qwalk.graph import complete, marked_structure
from qwalk.spectral import materialize, one_eigenspace, project_initial
from qwalk.walk import Variant, simulate

n = 256
g = complete(n)
rt = math.sqrt(n)


def predicted_time(k, variant):
    if variant is Variant.SKW_U_PRIME:
        return math.pi * rt / (2 * math.sqrt(2 * k))
    if k == 1:
        return math.pi * rt / (2 * math.sqrt(2))
    return math.pi * rt / math.sqrt(2 * (2 * k - 1))


# The walk is periodic-ish, so look only at the first lobe, [0, 2 t*].
for k in (1, 2, 3):
    m = marked_structure(g, range(k))
    for variant in Variant:
        t_star = predicted_time(k, variant)
        step, p = simulate(g, m, variant, 2 * round(t_star)).peak()
        print(f"k={k} {variant.value:6s}: peak {p:.3f} at step {step:3d} (predicted {t_star:.1f})")
    if k >= 2:
        print(f"       predicted Grover peak {4 * k * (k - 1) / (2 * k - 1) ** 2:.3f}")

# %% [markdown]
# ## Stationary states under each oracle
#
# On the simplex with a fully marked clique, Grover has a stationary state
# near the uniform start; SKW has none.

# %%
g, m = fx.simplex_marked_clique(4)
for variant in Variant:
    basis = one_eigenspace(materialize(g, m, variant))
    norm, _ = project_initial(basis)
    print(f"{variant.value:6s}: eigenspace dimension {basis.dimension}, projection norm {norm:.6f}")
