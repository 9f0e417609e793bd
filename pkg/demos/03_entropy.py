# %% [markdown]
# # How much does b leak about the last city?
#
# With uniform π and z, compute the exact posterior of π(n) for each b and the
# conditional entropy in bits.

# %%
import math

from sandiego import BobStrategy, KSet, k_halving_strategy
from sandiego.game import random_table_strategy
from sandiego.entropy import conditional_entropy, conditional_entropy_direct, posterior_table

table = posterior_table(BobStrategy.constant(2))
for row in table.to_rows():
    print(row)
print(table.entropy())  # 0.5

# %%
K = KSet.from_members(3, ["000", "001", "010", "011", "100"])
h = conditional_entropy(k_halving_strategy(K))
print(h, math.log2(3) / 2)

# %% [markdown]
# Random table strategies: the two computation routes agree and the value
# stays in [0, log2 n].

# %%
for n in range(2, 7):
    s = random_table_strategy(n, n)
    a, b = conditional_entropy(s), conditional_entropy_direct(s)
    print(n, round(a, 6), abs(a - b) < 1e-12, round(math.log2(n), 6))
