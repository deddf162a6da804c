"""Finite-memory strategy synthesis and verification for two-player games
on finite graphs with color-labeled edges.

The package builds memory skeletons, product arenas, prefix-/cyclic-cover
checks, memoryless equilibria on covered arenas (lifted to finite-memory
equilibria on arbitrary arenas), brute-force equilibrium verification, and
bounded refutation of the skeleton-relative monotony and selectivity of a
preference relation.
"""

from .arena import (
    Arena,
    ColorLasso,
    Edge,
    History,
    Lasso,
    arena_to_dot,
    as_one_player,
    num_choices,
    reachable_states,
    shortest_history,
    split_at,
    validate_arena,
)
from .automata import (
    Nfa,
    arena_of_nfa,
    chain_nfa,
    concat_gadget,
    enumerate_small_nfas,
    essential_states,
    monotony_gadget,
    nfa_from_words,
    nfa_to_dot,
    selectivity_gadget,
    star_gadget,
    trim_coaccessible,
    union_nfa,
)
from .conditions import (
    ConditionBudget,
    ConditionReport,
    HarnessReport,
    Violation,
    counterexample_harness,
    language_within_loop,
    test_monotony,
    test_selectivity,
)
from .covers import CoverReport, check_cyclic_cover, check_prefix_cover
from .preference import (
    PlaySet,
    PreferenceRelation,
    SupResult,
    compare_lassos,
    diverge_or_zero,
    gen_reach2,
    lasso_in_win,
    mean_payoff,
    parity,
    reachability,
    set_leq,
    set_lt,
    sup_of,
)
from .skeleton import (
    MemorySkeleton,
    product_many,
    product_skeletons,
    reachable_part,
    run_skeleton,
    skeleton_to_dot,
    trivial_skeleton,
    witness_word,
)
from .strategy import (
    CertifiedPair,
    LiftedStrategy,
    MealyStrategy,
    ProductArena,
    ScriptedStrategy,
    fix_opponent,
    lift_strategy,
    mealy_from_map,
    memoryless,
    mix_ne,
    ml_to_ufm,
    play_of,
    product_arena,
    reachable_product,
    restrict_product,
    ufm_to_ml,
    unique_strategy,
)
from .synthesis import (
    EquilibriumResult,
    SynthesisProblem,
    solve_covered,
    solve_general,
    step_focus,
)
from .verify import (
    UNRESTRICTED,
    DeviationClass,
    NeVerdict,
    best_response_within,
    enumerate_ne,
    is_ne_within,
    iter_memoryless,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
