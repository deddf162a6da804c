"""Brute-force equilibrium checking and enumeration for small games.

Optimality is always verified within a declared deviation class, never
against a vague "all strategies": either the unrestricted best response
(computed as a supremum over the opponent-fixed arena, deviation class
`None`), or all Mealy strategies based on a given skeleton, enumerated as
memoryless strategies on the corresponding product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .arena import Arena, ColorLasso, Lasso
from .errors import BudgetExceededError
from .preference import PreferenceRelation
from .skeleton import MemorySkeleton
from .strategy import (
    CertifiedPair,
    MealyStrategy,
    ScriptedStrategy,
    fix_opponent,
    mealy_from_map,
    memoryless,
    play_of,
)


@dataclass(frozen=True)
class DeviationClass:
    """Per-player deviation bounds: all Mealy strategies based on a skeleton.

    A `None` skeleton means the unrestricted class, handled through best
    responses on the opponent-fixed arena instead of enumeration.
    """

    skeleton_1: Optional[MemorySkeleton] = None
    skeleton_2: Optional[MemorySkeleton] = None
    max_enumerated: int = 1_000_000

    def skeleton_of(self, player: int) -> Optional[MemorySkeleton]:
        return self.skeleton_1 if player == 1 else self.skeleton_2


UNRESTRICTED = DeviationClass()


@dataclass(frozen=True)
class Witness:
    player: int
    strategy: object  # traceable strategy improving that player's side
    start: int
    improved: ColorLasso


@dataclass(frozen=True)
class NeVerdict:
    verdict: bool
    values: dict[int, ColorLasso]  # start -> value class of the checked pair
    witness: Optional[Witness]

    def __bool__(self):
        return self.verdict


def best_response_within(
    a: Arena,
    rel: PreferenceRelation,
    sigma: MealyStrategy,
    start: int,
    dev_class: DeviationClass = UNRESTRICTED,
) -> Lasso:
    """The opponent's optimal achievable lasso against `sigma` from `start`.

    With an unrestricted class this is the supremum of the opponent's
    relation over the arena where `sigma` is fixed; with a skeleton class it
    is the best enumerated deviation's play.
    """
    opponent = 2 if sigma.owner == 1 else 1
    opp_rel = rel if opponent == 1 else rel.inverse()
    sk = dev_class.skeleton_of(opponent)
    if sk is None:
        fixed = fix_opponent(a, sigma)
        res = opp_rel.sup_play(fixed.arena, fixed.pair_index(start, sigma.skeleton.init))
        assert res.lasso is not None
        return _project_lasso(fixed, res.lasso)
    best = None
    best_colors = None
    for dev in iter_class_strategies(a, opponent, sk, [start], dev_class.max_enumerated):
        pair = (dev, sigma) if opponent == 1 else (sigma, dev)
        lasso = play_of(a, start, *pair)
        colors = lasso.colors().canonical()
        if best is None or opp_rel.compare(colors, best_colors) > 0:
            best, best_colors = lasso, colors
    assert best is not None
    return best


def _project_lasso(fixed, lasso: Lasso) -> Lasso:
    """Drop the memory component of a lasso traced on an opponent-fixed arena."""
    from .arena import Edge

    def proj(e: Edge) -> Edge:
        s, _ = fixed.pairs[e.src]
        s2, _ = fixed.pairs[e.dst]
        return Edge(s, e.color, s2)

    return Lasso(tuple(proj(e) for e in lasso.prefix), tuple(proj(e) for e in lasso.cycle))


def iter_class_strategies(
    a: Arena,
    player: int,
    sk: MemorySkeleton,
    starts: Sequence[int],
    budget: int,
) -> Iterator[MealyStrategy]:
    """All Mealy strategies of `player` based on `sk`, up to reachable behavior.

    Cells (memory, state) not reachable in the arena-skeleton product from
    the given starts are fixed to the first edge; the enumeration then ranges
    over the genuinely observable choices only, one memoryless product
    strategy per behavior.
    """
    reach: set[tuple[int, int]] = set()
    frontier = [(s, sk.init) for s in sorted(set(starts))]
    for node in frontier:
        reach.add(node)
    qi = 0
    while qi < len(frontier):
        s, m = frontier[qi]
        qi += 1
        for e in a.out[s]:
            nxt = (e.dst, sk.table[m][e.color])
            if nxt not in reach:
                reach.add(nxt)
                frontier.append(nxt)
    cells = sorted(
        (m, s)
        for (s, m) in reach
        if a.owners[s] == player and len(a.out[s]) >= 2
    )
    options = [a.out[s] for (_, s) in cells]
    total = 1
    for opts in options:
        total *= len(opts)
        if total > budget:
            raise BudgetExceededError(
                f"deviation class has more than {budget} strategies"
            )
    for combo in itertools.product(*options):
        choice = {cell: e for cell, e in zip(cells, combo)}
        yield mealy_from_map(a, player, sk, choice)


def is_ne_within(
    a: Arena,
    rel: PreferenceRelation,
    sigma1: MealyStrategy,
    sigma2: MealyStrategy,
    starts: Iterable[int],
    dev_class: DeviationClass = UNRESTRICTED,
) -> NeVerdict:
    """Check the equilibrium inequalities from each start within a class.

    Player 1 must not improve the play value by a class deviation, player 2
    must not worsen it.  The first failing (start, player, deviation) in
    deterministic order becomes the witness; unrestricted-class witnesses are
    scripted replays of the best-response lasso.
    """
    starts = sorted(set(starts))
    values: dict[int, ColorLasso] = {}
    for s in starts:
        values[s] = play_of(a, s, sigma1, sigma2).colors().canonical()
    for s in starts:
        for player in (1, 2):
            own_rel = rel if player == 1 else rel.inverse()
            fixed_sigma = sigma2 if player == 1 else sigma1
            sk = dev_class.skeleton_of(player)
            if sk is None:
                best = best_response_within(a, rel, fixed_sigma, s, dev_class)
                colors = best.colors().canonical()
                if own_rel.compare(colors, values[s]) > 0:
                    witness = Witness(player, ScriptedStrategy(player, best), s, colors)
                    return NeVerdict(False, values, witness)
            else:
                for dev in iter_class_strategies(
                    a, player, sk, [s], dev_class.max_enumerated
                ):
                    pair = (dev, sigma2) if player == 1 else (sigma1, dev)
                    colors = play_of(a, s, *pair).colors().canonical()
                    if own_rel.compare(colors, values[s]) > 0:
                        return NeVerdict(False, values, Witness(player, dev, s, colors))
    return NeVerdict(True, values, None)


def iter_memoryless(a: Arena, player: int) -> Iterator[MealyStrategy]:
    """All memoryless strategies of a player, in deterministic order."""
    states = a.states_of(player)
    options = [a.out[s] for s in states]
    for combo in itertools.product(*options):
        yield memoryless(a, player, dict(zip(states, combo)))


def enumerate_ne(
    a: Arena,
    rel: PreferenceRelation,
    starts: Iterable[int],
    budget: int = 1_000_000,
) -> list[CertifiedPair]:
    """All memoryless pairs that are equilibria within the memoryless class.

    Decided on the full play-value matrix: a pair passes from a start iff its
    value is simultaneously a column maximum (no player-1 row beats it) and a
    row minimum (no player-2 column undercuts it); a pair must pass from
    every requested start.
    """
    starts = sorted(set(starts))
    rows = list(iter_memoryless(a, 1))
    cols = list(iter_memoryless(a, 2))
    if len(rows) * len(cols) > budget:
        raise BudgetExceededError(
            f"{len(rows)}x{len(cols)} memoryless pairs exceed budget {budget}"
        )
    value = [
        [
            {s: play_of(a, s, r, c).colors().canonical() for s in starts}
            for c in cols
        ]
        for r in rows
    ]
    out = []
    for i, r in enumerate(rows):
        for j, c in enumerate(cols):
            ok = True
            for s in starts:
                v = value[i][j][s]
                if any(rel.compare(value[k][j][s], v) > 0 for k in range(len(rows))):
                    ok = False
                    break
                if any(rel.compare(value[i][k][s], v) < 0 for k in range(len(cols))):
                    ok = False
                    break
            if ok:
                out.append(CertifiedPair(r, c, tuple(starts)))
    return out
