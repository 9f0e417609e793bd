# %% [markdown]
# # Majority subsets of the cube and the halving strategy
#
# Given a set K holding more than half of {0,1}^n, Bob can keep the surviving
# part of K at least half of what it was each step.  The game ends inside K
# and the suspects are neighbours of b in K, so the cost is at most the
# largest degree of the subgraph K induces.

# %%
import numpy as np

from sandiego import KSet, k_halving_strategy, max_induced_degree, strategy_complexity, verify_theorem1
from sandiego.hypercube import halving_trace, min_max_degree

K = KSet.from_members(3, ["000", "001", "010", "011", "100"])
print(K.hex, K.size, K.majority)

# %%
deg = max_induced_degree(K)
print(deg.max_degree, deg.histogram)

# %%
s = k_halving_strategy(K)
print(halving_trace(K, s, (1, 2, 3), 1))  # counts shrink 5 -> 4 -> 2 -> 1
print(strategy_complexity(s).value, "<=", deg.max_degree)

# %%
report = verify_theorem1(K)
print(report.passed, report.checks)

# %% [markdown]
# How small can the max degree get?  Exhaustive over every majority set for
# small n, sampled at the tight size beyond that.

# %%
for n in (2, 3, 4):
    r = min_max_degree(n)
    print(n, r.value, r.witness.hex, r.examined)
print(min_max_degree(5, mode="sampled", seed=7, samples=300).value)

# %% [markdown]
# The membership mask as a numpy array, indexed by code.

# %%
arr = K.array()
print(arr.astype(np.uint8), np.flatnonzero(arr))
