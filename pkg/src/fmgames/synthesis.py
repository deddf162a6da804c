"""Equilibrium synthesis.

On covered arenas, memoryless equilibria are built by recursive edge
splitting: pick a choice state of the focused player, split its edges in
two, solve both subarenas, and keep the side whose committed play set
dominates under the focused player's relation.  The opponent half of each
focused solution is a one-bit side-switching strategy; crossing the two
focused solutions yields the memoryless pair.  On general arenas the same
construction runs on the product with the joint skeleton and is transported
back through the product correspondence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .arena import Arena, Edge, num_choices, shortest_history, split_at
from .covers import check_cyclic_cover, check_prefix_cover
from .errors import CoverViolationError
from .preference import PlaySet, PreferenceRelation, set_leq
from .skeleton import MemorySkeleton, product_many
from .strategy import (
    MealyStrategy,
    ProductArena,
    fix_opponent,
    mealy_from_map,
    memoryless,
    ml_to_ufm,
    reachable_product,
    unique_strategy,
)


@dataclass(frozen=True)
class SynthesisProblem:
    """Covered-arena synthesis instance.

    The four skeletons are the prefix/cycle monitors for player 1 and
    player 2; they may share objects.  `solve_covered` requires the matching
    cover checks to pass on (arena, s_cov).
    """

    arena: Arena
    s_cov: tuple[int, ...]
    pref: PreferenceRelation
    prefix_skel_1: MemorySkeleton
    cycle_skel_1: MemorySkeleton
    prefix_skel_2: MemorySkeleton
    cycle_skel_2: MemorySkeleton

    def skeletons(self) -> tuple[MemorySkeleton, ...]:
        return (
            self.prefix_skel_1,
            self.cycle_skel_1,
            self.prefix_skel_2,
            self.cycle_skel_2,
        )

    def deviation_skeleton(self) -> MemorySkeleton:
        # exact duplicates add nothing to the joint memory (their product's
        # reachable part is the diagonal), so keep one copy of each
        distinct = list(dict.fromkeys(self.skeletons()))
        return product_many(distinct)


@dataclass(frozen=True)
class SplitDecision:
    """One recursion step: where the arena was split and which side won."""

    focus: int
    state: int
    part: tuple[Edge, ...]
    witness_prefix: Optional[tuple[int, ...]]
    chose_first: bool


@dataclass(frozen=True)
class EquilibriumResult:
    sigma1: MealyStrategy
    sigma2: MealyStrategy
    starts: tuple[int, ...]
    deviation_skeleton: MemorySkeleton
    trace: tuple[SplitDecision, ...] = ()
    product: Optional[ProductArena] = None
    product_sigma1: Optional[MealyStrategy] = None
    product_sigma2: Optional[MealyStrategy] = None


@dataclass(frozen=True)
class SwitchingStrategy:
    """Opponent strategy of the split lemma: one bit of side memory.

    Follows the preferred side's strategy until the focused player exits the
    split state through the other side, then follows that side (and back).
    The memory reacts to edges, not colors, so this is not a Mealy strategy;
    it is traceable and finite, which is all the recursion needs.
    """

    owner: int
    split_state: int
    first_edges: frozenset[Edge]
    sigma_first: MealyStrategy
    sigma_other: MealyStrategy

    def initial_mem(self):
        return (True, self.sigma_first.initial_mem(), self.sigma_other.initial_mem())

    def step_mem(self, mem, edge: Edge):
        side, m_first, m_other = mem
        if edge.src == self.split_state:
            side = edge in self.first_edges
        return (
            side,
            self.sigma_first.step_mem(m_first, edge),
            self.sigma_other.step_mem(m_other, edge),
        )

    def action(self, mem, state: int) -> Edge:
        side, m_first, m_other = mem
        if side:
            return self.sigma_first.action(m_first, state)
        return self.sigma_other.action(m_other, state)


def _check_covers(problem: SynthesisProblem) -> None:
    checks = [
        ("prefix", problem.prefix_skel_1),
        ("cyclic", problem.cycle_skel_1),
        ("prefix", problem.prefix_skel_2),
        ("cyclic", problem.cycle_skel_2),
    ]
    for kind, sk in checks:
        if kind == "prefix":
            rep = check_prefix_cover(problem.arena, sk, problem.s_cov)
        else:
            rep = check_cyclic_cover(problem.arena, sk, problem.s_cov)
        if not rep.verdict:
            raise CoverViolationError(f"{kind}-cover check failed", report=rep)


class _Solver:
    """Recursion with memoization keyed by (edge set, focus player)."""

    def __init__(self, problem: SynthesisProblem):
        self.problem = problem
        self.rels = {1: problem.pref, 2: problem.pref.inverse()}
        self.focus_cache: dict = {}
        self.trace: list[SplitDecision] = []

    def solve_pair(self, arena: Arena) -> tuple[MealyStrategy, MealyStrategy]:
        """Memoryless pair: cross the two focused equilibria."""
        sigma1, _ = self.step_focus(arena, 1)
        sigma2, _ = self.step_focus(arena, 2)
        return sigma1, sigma2

    def step_focus(self, arena: Arena, focus: int):
        """Equilibrium whose focused half is memoryless.

        Returns (memoryless strategy of `focus`, opponent strategy; the
        latter is side-switching after a split, plain memoryless otherwise).
        """
        key = (arena.edges, focus)
        if key in self.focus_cache:
            return self.focus_cache[key]
        result = self._step_focus(arena, focus)
        self.focus_cache[key] = result
        return result

    def _step_focus(self, arena: Arena, focus: int):
        opponent = 2 if focus == 1 else 1
        choice_states = [
            s for s in arena.states_of(focus) if len(arena.out[s]) >= 2
        ]
        if not choice_states:
            sigma_focus = unique_strategy(arena, focus)
            if any(len(arena.out[s]) >= 2 for s in arena.states_of(opponent)):
                sigma_opp, _ = self.step_focus(arena, opponent)
            else:
                sigma_opp = unique_strategy(arena, opponent)
            return sigma_focus, sigma_opp

        t = choice_states[0]
        part = (arena.out[t][0],)
        arena_a, arena_b = split_at(arena, t, part)
        sigma_a_focus, sigma_a_opp = self._solved(arena_a, focus)
        sigma_b_focus, sigma_b_opp = self._solved(arena_b, focus)

        witness = shortest_history(arena, self.problem.s_cov, t)
        if witness is None:
            chose_first = True
        else:
            w = witness.colors
            side_a = self._committed_plays(arena_a, sigma_a_opp, t, w)
            side_b = self._committed_plays(arena_b, sigma_b_opp, t, w)
            # keep side a iff committing to b is no better than committing to a
            chose_first = set_leq(self.rels[focus], side_b, side_a)
        self.trace.append(
            SplitDecision(
                focus, t, part, None if witness is None else witness.colors, chose_first
            )
        )
        if chose_first:
            best_focus, best_opp, other_opp = sigma_a_focus, sigma_a_opp, sigma_b_opp
            first_edges = frozenset(part)
        else:
            best_focus, best_opp, other_opp = sigma_b_focus, sigma_b_opp, sigma_a_opp
            first_edges = frozenset(set(arena.out[t]) - set(part))
        switching = SwitchingStrategy(opponent, t, first_edges, best_opp, other_opp)
        return best_focus, switching

    def _solved(self, arena: Arena, focus: int) -> tuple[MealyStrategy, MealyStrategy]:
        """Memoryless pair of a subarena, ordered (focus strategy, opponent)."""
        s1, s2 = self.solve_pair(arena)
        return (s1, s2) if focus == 1 else (s2, s1)

    def _committed_plays(self, sub: Arena, sigma_opp: MealyStrategy, t: int, w) -> PlaySet:
        fixed = fix_opponent(sub, sigma_opp)
        start = fixed.pair_index(t, sigma_opp.skeleton.init)
        return PlaySet(fixed.arena, (start,), w)


def step_focus(problem: SynthesisProblem, focus: int):
    """Public entry for one focused solution (validates covers first)."""
    _check_covers(problem)
    solver = _Solver(problem)
    return solver.step_focus(problem.arena, focus)


def solve_covered(problem: SynthesisProblem) -> EquilibriumResult:
    """Memoryless equilibrium from the covered states of a covered arena."""
    _check_covers(problem)
    solver = _Solver(problem)
    sigma1, sigma2 = solver.solve_pair(problem.arena)
    return EquilibriumResult(
        sigma1,
        sigma2,
        tuple(problem.s_cov),
        problem.deviation_skeleton(),
        tuple(solver.trace),
    )


def solve_general(
    arena: Arena,
    pref: PreferenceRelation,
    prefix_skel_1: MemorySkeleton,
    cycle_skel_1: MemorySkeleton,
    prefix_skel_2: Optional[MemorySkeleton] = None,
    cycle_skel_2: Optional[MemorySkeleton] = None,
) -> EquilibriumResult:
    """Uniform finite-memory equilibrium on an arbitrary arena.

    Builds the product with the joint skeleton (prefix and cycle monitors of
    both players), restricted to states reachable from the initial memory,
    takes those states as the covered set, solves memorylessly there, and
    transports the pair back to Mealy strategies on the base arena.
    """
    if prefix_skel_2 is None:
        prefix_skel_2 = prefix_skel_1
    if cycle_skel_2 is None:
        cycle_skel_2 = cycle_skel_1
    joint = product_many([prefix_skel_1, prefix_skel_2, cycle_skel_1, cycle_skel_2])
    prod = reachable_product(arena, joint)
    s_cov = prod.covered_starts()
    problem = SynthesisProblem(
        prod.arena, s_cov, pref, joint, joint, joint, joint
    )
    covered = solve_covered(problem)
    sigma1 = ml_to_ufm(prod, covered.sigma1)
    sigma2 = ml_to_ufm(prod, covered.sigma2)
    return EquilibriumResult(
        sigma1,
        sigma2,
        tuple(range(arena.n_states)),
        joint,
        covered.trace,
        product=prod,
        product_sigma1=covered.sigma1,
        product_sigma2=covered.sigma2,
    )
