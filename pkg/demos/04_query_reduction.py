# %% [markdown]
# # From parity to search
#
# A randomized decision tree that computes parity with probability 2/3 on a
# majority of inputs must also read the hidden coordinate π(n) of a clue
# string with probability at least 1/3.

# %%
from fractions import Fraction
import random

from sandiego import KSet
from sandiego.game import bits_to_str
from sandiego.query import (
    RandomizedAlgorithm,
    constant_tree,
    hard_distribution,
    parity_success_set,
    parity_tree,
    random_algorithm,
    theorem2_harness,
)

mix = RandomizedAlgorithm.mixture([("2/3", parity_tree(3)), ("1/3", constant_tree(3, 0))])
print(parity_success_set(mix) == KSet.full(3))
r = theorem2_harness(mix)
print(r.premise, r.search_success, r.passed)

# %% [markdown]
# The law of b when Bob plays the halving strategy for K: the input
# distribution that makes searching hard.

# %%
K = KSet.from_members(3, ["000", "001", "010", "011", "100"])
for code, p in sorted(hard_distribution(K).items()):
    print(bits_to_str(code, 3), p)

# %% [markdown]
# Random mixtures: whenever the premise holds, the search bound holds exactly.

# %%
rng = random.Random(1)
seen = []
while len(seen) < 20:
    alg = random_algorithm(4, rng)
    rep = theorem2_harness(alg)
    if rep.premise:
        assert rep.passed and rep.search_success >= Fraction(1, 3)
        seen.append(rep.search_success)
print(min(seen), sum(s < 1 for s in seen), "of", len(seen), "below 1")
