"""Preference relations: total preorders on ultimately periodic color words.

Five built-in relations are provided; all of them attain their suprema over
the play set of a finite one-player arena with a lasso, which is what makes
the set-level comparisons below decidable here.  Quantitative comparisons
use exact rationals, never floats.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import _search
from .arena import Arena, ColorLasso, Lasso, reachable_states
from .errors import (
    NotOnePlayerError,
    NotQualitativeError,
    UnknownColorError,
)

KINDS = ("Reachability", "GenReach2", "Parity", "MeanPayoffLimInf", "DivergeOrZero")


@dataclass(frozen=True)
class SupResult:
    """Outcome of a supremum search: no play at all, or an attained lasso.

    `colors` is the value class representative: the search prefix prepended
    to the lasso's colors, in canonical form.
    """

    lasso: Optional[Lasso]
    colors: Optional[ColorLasso]

    @property
    def is_empty(self) -> bool:
        return self.lasso is None

    @staticmethod
    def empty() -> "SupResult":
        return SupResult(None, None)


@dataclass(frozen=True)
class PlaySet:
    """A set of plays: a one-player arena, start states, and a color prefix."""

    arena: Arena
    starts: tuple[int, ...]
    prefix: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "starts", tuple(self.starts))
        object.__setattr__(self, "prefix", tuple(self.prefix))


def _value_colors(prefix: Sequence[int], lasso: Lasso) -> ColorLasso:
    pre = tuple(prefix) + tuple(e.color for e in lasso.prefix)
    return ColorLasso(pre, tuple(e.color for e in lasso.cycle)).canonical()


def _attained(prefix, lasso) -> SupResult:
    return SupResult(lasso, _value_colors(prefix, lasso))


@dataclass(frozen=True)
class PreferenceRelation:
    """Total preorder on color lassos plus supremum search over play sets.

    Subclasses implement `_wins_or_value` semantics; the `negated` flag turns
    the relation into its inverse (the second player's view): comparisons
    flip and supremum searches minimize instead of maximize.
    """

    alphabet: tuple[str, ...]
    negated: bool = False

    # -- ordering ------------------------------------------------------------
    def compare(self, l1: ColorLasso, l2: ColorLasso) -> int:
        """-1, 0, 1 for strictly worse, equivalent, strictly better."""
        self._check_lasso(l1)
        self._check_lasso(l2)
        c = self._compare_base(l1, l2)
        return -c if self.negated else c

    def inverse(self) -> "PreferenceRelation":
        return dataclasses.replace(self, negated=not self.negated)

    def _check_lasso(self, l: ColorLasso) -> None:
        for c in l.prefix + l.cycle:
            if not (0 <= c < len(self.alphabet)):
                raise UnknownColorError(f"color {c} outside alphabet")

    # -- qualitative view ------------------------------------------------------
    def is_qualitative(self) -> bool:
        return True

    def wins(self, l: ColorLasso) -> bool:
        """Membership of the represented word in the (base) winning set."""
        raise NotQualitativeError(f"{type(self).__name__} has no winning set")

    def _compare_base(self, l1: ColorLasso, l2: ColorLasso) -> int:
        w1, w2 = self.wins(l1), self.wins(l2)
        return (w1 > w2) - (w1 < w2)

    # -- suprema ---------------------------------------------------------------
    def sup_play(self, arena: Arena, start: Optional[int], prefix: Sequence[int] = ()) -> SupResult:
        """Best attainable lasso class over the plays from `start`.

        The arena is traversed ownerlessly but must belong to a single player.
        Under the inverse relation this minimizes.
        """
        if not arena.is_one_player():
            raise NotOnePlayerError("supremum search needs a one-player arena")
        if start is None or arena.n_states == 0:
            return SupResult.empty()
        return self._best(arena, start, tuple(prefix), maximize=not self.negated)

    def _best(self, arena, start, prefix, maximize) -> SupResult:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Target-based qualitative relations (single and two-target reachability).


@dataclass(frozen=True)
class _TargetRelation(PreferenceRelation):
    """Win iff every target set is visited at least once."""

    targets: tuple[tuple[bool, ...], ...] = ()

    def wins(self, l: ColorLasso) -> bool:
        seen = l.prefix + l.cycle
        return all(any(flags[c] for c in seen) for flags in self.targets)

    def _missing_after(self, missing: frozenset[int], colors) -> frozenset[int]:
        for c in colors:
            missing = frozenset(i for i in missing if not self.targets[i][c])
        return missing

    def _best(self, arena, start, prefix, maximize) -> SupResult:
        missing0 = self._missing_after(frozenset(range(len(self.targets))), prefix)

        def successors(node):
            s, missing = node
            for e in arena.out[s]:
                yield e, (e.dst, self._missing_after(missing, (e.color,)))

        if maximize:
            order, parent = _search.bfs_paths((start, missing0), successors)
            for node in order:
                if not node[1]:
                    access = tuple(_search.path_from_parents(parent, node))
                    return _attained(prefix, _search.close_walk_to_lasso(arena, access, node[0]))
            return _attained(prefix, _search.first_walk_lasso(arena, start))

        # minimize: look for a play that never completes the targets
        def restricted(node):
            for e, nxt in successors(node):
                if nxt[1]:
                    yield e, nxt

        if missing0:
            order, parent = _search.bfs_paths((start, missing0), restricted)
            for node in order:
                cyc = _search.first_cycle_through(node, restricted)
                if cyc is not None:
                    access = tuple(_search.path_from_parents(parent, node))
                    return _attained(prefix, Lasso(access, tuple(cyc)))
        return _attained(prefix, _search.first_walk_lasso(arena, start))


def reachability(alphabet: Sequence[str], target: Sequence[bool]) -> PreferenceRelation:
    """Win iff a target-colored edge occurs."""
    return _TargetRelation(tuple(alphabet), False, (tuple(target),))


def gen_reach2(
    alphabet: Sequence[str], t1: Sequence[bool], t2: Sequence[bool]
) -> PreferenceRelation:
    """Win iff both target sets are visited (in any order)."""
    return _TargetRelation(tuple(alphabet), False, (tuple(t1), tuple(t2)))


# ---------------------------------------------------------------------------
# Parity.


@dataclass(frozen=True)
class ParityRelation(PreferenceRelation):
    """Win iff the maximum priority occurring in the lasso's cycle is even."""

    priorities: tuple[int, ...] = ()

    def wins(self, l: ColorLasso) -> bool:
        return max(self.priorities[c] for c in l.cycle) % 2 == 0

    def _best(self, arena, start, prefix, maximize) -> SupResult:
        want = 0 if maximize else 1
        within = set(reachable_states(arena, [start]))
        for cyc in _search.simple_cycles(arena, within):
            if max(self.priorities[e.color] for e in cyc) % 2 == want:
                root = cyc[0].src
                access = _access_path(arena, start, root)
                return _attained(prefix, Lasso(access, cyc))
        return _attained(prefix, _search.first_walk_lasso(arena, start))


def parity(alphabet: Sequence[str], priorities: Sequence[int]) -> PreferenceRelation:
    return ParityRelation(tuple(alphabet), False, tuple(priorities))


# ---------------------------------------------------------------------------
# Mean payoff (lim inf), exact rational comparisons.


@dataclass(frozen=True)
class MeanPayoffRelation(PreferenceRelation):
    """Order lassos by the exact mean weight of their cycles.

    The lim inf mean of an ultimately periodic word is its cycle mean, so the
    prefix plays no role in the value.
    """

    weights: tuple[int, ...] = ()

    def is_qualitative(self) -> bool:
        return False

    def value(self, l: ColorLasso) -> Fraction:
        return Fraction(sum(self.weights[c] for c in l.cycle), len(l.cycle))

    def _compare_base(self, l1, l2) -> int:
        v1, v2 = self.value(l1), self.value(l2)
        return (v1 > v2) - (v1 < v2)

    def _best(self, arena, start, prefix, maximize) -> SupResult:
        within = set(reachable_states(arena, [start]))
        best = None
        best_mean = None
        for cyc in _search.simple_cycles(arena, within):
            mean = Fraction(sum(self.weights[e.color] for e in cyc), len(cyc))
            better = best_mean is None or (mean > best_mean if maximize else mean < best_mean)
            if better:
                best, best_mean = cyc, mean
        if best is None:
            return SupResult.empty()
        access = _access_path(arena, start, best[0].src)
        return _attained(prefix, Lasso(access, best))


def mean_payoff(alphabet: Sequence[str], weights: Sequence[int]) -> PreferenceRelation:
    return MeanPayoffRelation(tuple(alphabet), False, tuple(weights))


# ---------------------------------------------------------------------------
# Diverging-or-rezeroing running total (qualitative, integer weights).


@dataclass(frozen=True)
class DivergeOrZeroRelation(PreferenceRelation):
    """Win iff the running total tends to +infinity or equals zero infinitely often.

    On a lasso this is decidable from the cycle sum: a positive cycle diverges;
    a zero cycle wins exactly when some position of the periodic part has
    running total zero; a negative cycle loses.
    """

    weights: tuple[int, ...] = ()

    def wins(self, l: ColorLasso) -> bool:
        total = sum(self.weights[c] for c in l.prefix)
        cycle_sum = sum(self.weights[c] for c in l.cycle)
        if cycle_sum > 0:
            return True
        if cycle_sum < 0:
            return False
        for c in l.cycle:
            total += self.weights[c]
            if total == 0:
                return True
        return False

    def _window(self, arena, r0: int) -> int:
        max_w = max([abs(w) for w in self.weights] + [1])
        return arena.n_states * max_w + 1 + abs(r0)

    def _best(self, arena, start, prefix, maximize) -> SupResult:
        r0 = sum(self.weights[c] for c in prefix)
        within = set(reachable_states(arena, [start]))
        # a strict-sign cycle settles the matter on its own
        for cyc in _search.simple_cycles(arena, within):
            s = sum(self.weights[e.color] for e in cyc)
            if (s > 0 and maximize) or (s < 0 and not maximize):
                access = _access_path(arena, start, cyc[0].src)
                return _attained(prefix, Lasso(access, cyc))
        # otherwise hunt for a zero-sum cycle with the right zero behavior,
        # monitoring the running total inside a saturation window
        bound = self._window(arena, r0)

        def successors(node):
            s, tot = node
            for e in arena.out[s]:
                t2 = tot + self.weights[e.color]
                if abs(t2) <= bound:
                    yield e, (e.dst, t2)

        order, parent = _search.bfs_paths((start, r0), successors)
        if maximize:
            for node in order:
                if node[1] == 0:
                    cyc = _search.first_cycle_through(node, successors)
                    if cyc is not None:
                        access = tuple(_search.path_from_parents(parent, node))
                        return _attained(prefix, Lasso(access, tuple(cyc)))
        else:

            def nonzero(node):
                for e, nxt in successors(node):
                    if nxt[1] != 0:
                        yield e, nxt

            for node in order:
                if node[1] == 0:
                    continue
                cyc = _search.first_cycle_through(node, nonzero)
                if cyc is not None:
                    access = tuple(_search.path_from_parents(parent, node))
                    return _attained(prefix, Lasso(access, tuple(cyc)))
        return _attained(prefix, _search.first_walk_lasso(arena, start))


def diverge_or_zero(alphabet: Sequence[str], weights: Sequence[int]) -> PreferenceRelation:
    return DivergeOrZeroRelation(tuple(alphabet), False, tuple(weights))


# ---------------------------------------------------------------------------
# Public operations.


def compare_lassos(rel: PreferenceRelation, l1: ColorLasso, l2: ColorLasso) -> int:
    """-1 if l1 is strictly worse than l2 under rel, 0 if equivalent, 1 if better."""
    return rel.compare(l1, l2)


def lasso_in_win(rel: PreferenceRelation, l: ColorLasso) -> bool:
    """Membership in the winning set of a qualitative relation.

    Unaffected by `inverse`: the winning set belongs to the base orientation.
    """
    if not rel.is_qualitative():
        raise NotQualitativeError("relation has no winning set")
    rel._check_lasso(l)
    return rel.wins(l)


def sup_of(rel: PreferenceRelation, ps: PlaySet) -> SupResult:
    """Supremum over a play set given by several start states."""
    best = SupResult.empty()
    for s in ps.starts:
        r = rel.sup_play(ps.arena, s, ps.prefix)
        if r.is_empty:
            continue
        if best.is_empty or rel.compare(r.colors, best.colors) > 0:
            best = r
    return best


def set_leq(rel: PreferenceRelation, ps1: PlaySet, ps2: PlaySet) -> bool:
    """Every play of ps1 is matched by one at least as good in ps2.

    Decided through the attained suprema; an empty left side is vacuously below
    everything.
    """
    s1 = sup_of(rel, ps1)
    if s1.is_empty:
        return True
    s2 = sup_of(rel, ps2)
    if s2.is_empty:
        return False
    return rel.compare(s1.colors, s2.colors) <= 0


def set_lt(rel: PreferenceRelation, ps1: PlaySet, ps2: PlaySet) -> bool:
    """Some play of ps2 strictly dominates every play of ps1."""
    s2 = sup_of(rel, ps2)
    if s2.is_empty:
        return False
    s1 = sup_of(rel, ps1)
    if s1.is_empty:
        return True
    return rel.compare(s1.colors, s2.colors) < 0


def _access_path(arena: Arena, start: int, target: int):
    from .arena import shortest_history

    h = shortest_history(arena, [start], target)
    assert h is not None, "access path within the reachable set must exist"
    return h.edges
