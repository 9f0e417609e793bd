# %% [markdown]
# # Playing one round
#
# Bob sees a secret ordering of the n cities, writes one bit per step, and the
# final bit is Alice's choice z.  Alice only sees the resulting string b.

# %%
from sandiego import BobStrategy, clue_string, run_game, strategy_complexity, suspect_set

const0 = BobStrategy.constant(3)
print(clue_string(const0, (1, 2, 3), 1))  # (0, 0, 1)
print(suspect_set(const0, (0, 0, 1)))  # {3}: only one city can sit under the 1

# %% [markdown]
# A constant strategy reveals nothing when z=0: every city is still a suspect.

# %%
out = run_game(const0, (2, 3, 1), 0)
print(out.b, sorted(out.suspects), out.cost)

# %%
print(strategy_complexity(const0))

# %% [markdown]
# The best strategy for n=3 found by exhaustive search over all tables.

# %%
from sandiego import exact_game_complexity

best = exact_game_complexity(3)
print(best.value)
