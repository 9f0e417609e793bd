"""Simulator and verification workbench for the Carmen Sandiego clue game."""

from .errors import CapExceeded, DimensionError, InvalidStrategy, InvalidTree, PremiseError, SandiegoError
from .game import (
    BobStrategy,
    GameOutcome,
    PartialClue,
    clue_string,
    exact_game_complexity,
    outcome_table,
    run_game,
    strategy_complexity,
    suspect_set,
)
from .hypercube import (
    KSet,
    induced_degree,
    k_halving_strategy,
    max_induced_degree,
    min_max_degree,
    restriction_count,
    verify_theorem1,
)
from .entropy import conditional_entropy, posterior_table
from .query import (
    DecisionTree,
    RandomizedAlgorithm,
    hard_distribution_sample,
    parity_success_set,
    run_tree,
    search_success_probability,
    theorem2_harness,
)

__version__ = "0.1.0"
