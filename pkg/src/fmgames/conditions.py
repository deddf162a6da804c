"""Bounded refutation of skeleton-relative monotony and selectivity, plus the
exhaustive harness for the game where one player needs unbounded memory.

Both properties quantify over all regular languages, so a "pass" here is
only evidence up to the enumeration budget; a returned violation, however,
is a hard counterexample and replays from its serialized form.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .arena import Arena, ColorLasso, Lasso, as_one_player
from .automata import (
    Nfa,
    concat_gadget,
    enumerate_small_nfas,
    probe_nfas,
    selectivity_gadget,
    star_gadget,
)
from .errors import AlphabetMismatchError, SearchExhaustedError
from .preference import PlaySet, PreferenceRelation, SupResult, lasso_in_win, sup_of
from .skeleton import MemorySkeleton, iter_skeletons, run_skeleton, words_reaching
from .strategy import MealyStrategy, fix_opponent, mealy_from_map, play_of


@dataclass(frozen=True)
class ConditionBudget:
    """Bounds for the refutation search; every field must be positive."""

    max_nfa_states: int = 2
    max_word_len: int = 2
    max_instances: int = 20_000
    max_nfas: int = 24
    time_limit_s: Optional[float] = None

    def __post_init__(self):
        for name in ("max_nfa_states", "max_word_len", "max_instances", "max_nfas"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.time_limit_s is not None and self.time_limit_s <= 0:
            raise ValueError("time_limit_s must be positive")


@dataclass(frozen=True)
class Violation:
    """A refuting instance; rebuilding its gadgets reproduces the failure."""

    kind: str  # "monotony" | "selectivity"
    memory_state: int
    w: tuple[int, ...]
    w2: Optional[tuple[int, ...]]  # monotony only
    k1: Nfa
    k2: Nfa
    k3: Optional[Nfa]  # selectivity only
    detail: str

    def replay(self, rel: PreferenceRelation) -> bool:
        """Re-derive the failed inequality from scratch; True iff it still fails."""
        if self.kind == "monotony":
            sup = _ConcatSups(rel)
            premise = _lt(sup.get(self.w, self.k1), sup.get(self.w, self.k2), rel)
            conclusion = _leq(sup.get(self.w2, self.k1), sup.get(self.w2, self.k2), rel)
            return premise and not conclusion
        lhs = _mixed_sup(rel, self.w, self.k1, self.k2, self.k3)
        rhs = _rhs_sup(rel, self.w, self.k1, self.k2, self.k3)
        return not _leq(lhs, rhs, rel)

    def to_dict(self) -> dict:
        from . import formats

        return {
            "kind": self.kind,
            "memory_state": self.memory_state,
            "w": list(self.w),
            "w2": None if self.w2 is None else list(self.w2),
            "k1": formats.serialize_nfa(self.k1),
            "k2": formats.serialize_nfa(self.k2),
            "k3": None if self.k3 is None else formats.serialize_nfa(self.k3),
            "detail": self.detail,
        }

    @staticmethod
    def from_dict(d: dict) -> "Violation":
        from . import formats

        return Violation(
            d["kind"],
            d["memory_state"],
            tuple(d["w"]),
            None if d["w2"] is None else tuple(d["w2"]),
            formats.parse_nfa(d["k1"]),
            formats.parse_nfa(d["k2"]),
            None if d["k3"] is None else formats.parse_nfa(d["k3"]),
            d["detail"],
        )


@dataclass(frozen=True)
class ConditionReport:
    property_name: str
    violation: Optional[Violation]
    instances_checked: int
    exhausted: bool
    coverage: dict
    passed_instances: tuple = ()

    @property
    def verdict(self) -> bool:
        """True when no violation was found (a budget-limited pass)."""
        return self.violation is None

    def __bool__(self):
        return self.verdict


def _cmp_sups(s1: SupResult, s2: SupResult, rel) -> Optional[int]:
    if s1.is_empty and s2.is_empty:
        return 0
    if s1.is_empty:
        return -2  # empty left: below everything
    if s2.is_empty:
        return 2
    return rel.compare(s1.colors, s2.colors)


def _leq(s1, s2, rel) -> bool:
    return _cmp_sups(s1, s2, rel) <= 0


def _lt(s1, s2, rel) -> bool:
    c = _cmp_sups(s1, s2, rel)
    return c < 0 and not s2.is_empty


class _ConcatSups:
    """Cache of suprema of the closures of w.K, realized through gadget arenas."""

    def __init__(self, rel: PreferenceRelation):
        self.rel = rel
        self.cache: dict = {}

    def get(self, w: tuple[int, ...], nfa: Nfa) -> SupResult:
        key = (w, id(nfa))
        if key not in self.cache:
            arena, start = concat_gadget(w, nfa)
            starts = () if start is None else (start,)
            self.cache[key] = sup_of(self.rel, PlaySet(arena, starts))
        return self.cache[key]


def _mixed_sup(rel, w, k1, k2, k3) -> SupResult:
    arena, start = selectivity_gadget(w, k1, k2, k3)
    starts = () if start is None else (start,)
    return sup_of(rel, PlaySet(arena, starts))


def _star_sup(rel, w, k) -> SupResult:
    arena, start = star_gadget(w, k)
    starts = () if start is None else (start,)
    return sup_of(rel, PlaySet(arena, starts))


def _rhs_sup(rel, w, k1, k2, k3) -> SupResult:
    """Supremum of the three-way union on the right of the mixing inequality."""
    concat = _ConcatSups(rel)
    best = SupResult.empty()
    for cand in (_star_sup(rel, w, k1), _star_sup(rel, w, k2), concat.get(w, k3)):
        if cand.is_empty:
            continue
        if best.is_empty or rel.compare(cand.colors, best.colors) > 0:
            best = cand
    return best


class _Budget:
    def __init__(self, budget: ConditionBudget):
        self.budget = budget
        self.checked = 0
        self.t0 = time.monotonic()

    def tick(self) -> bool:
        """Account one instance; False once the budget is exhausted."""
        if self.checked >= self.budget.max_instances:
            return False
        if (
            self.budget.time_limit_s is not None
            and time.monotonic() - self.t0 > self.budget.time_limit_s
        ):
            return False
        self.checked += 1
        return True


def _candidate_pool(alphabet, budget: ConditionBudget) -> list[Nfa]:
    """Chain/settle probes first, then the exhaustive bitmask stream."""
    pool = probe_nfas(alphabet, budget.max_nfa_states)
    pool.extend(enumerate_small_nfas(alphabet, budget.max_nfa_states, budget.max_nfas))
    return pool


def test_monotony(
    rel: PreferenceRelation,
    sk: MemorySkeleton,
    budget: ConditionBudget,
    record_instances: bool = False,
) -> ConditionReport:
    """Search for prefixes deemed equivalent by `sk` that disagree on a language pair.

    Enumerates reachable memory states, pairs of distinct words read up to the
    same memory state, and ordered pairs of small NFAs; whenever prepending w
    makes the closure of K1 strictly worse than that of K2, prepending any
    equivalent w2 must keep it no better.  The first failing instance is
    returned; otherwise the report is an (enumeration-bounded) pass.
    """
    if rel.alphabet != sk.alphabet:
        raise AlphabetMismatchError("relation and skeleton alphabets differ")
    nfas = _candidate_pool(rel.alphabet, budget)
    sups = _ConcatSups(rel)
    meter = _Budget(budget)
    passed = []
    exhausted = False
    words_seen = 0
    for m in sk.reachable:
        words = words_reaching(sk, m, budget.max_word_len)
        words_seen += len(words)
        for w in words:
            for w2 in words:
                if w2 == w:
                    continue
                for i1, k1 in enumerate(nfas):
                    for i2, k2 in enumerate(nfas):
                        if i1 == i2:
                            continue
                        if not meter.tick():
                            exhausted = True
                            break
                        if _lt(sups.get(w, k1), sups.get(w, k2), rel) and not _leq(
                            sups.get(w2, k1), sups.get(w2, k2), rel
                        ):
                            v = Violation(
                                "monotony",
                                m,
                                w,
                                w2,
                                k1,
                                k2,
                                None,
                                "prefix swap reverses the strict comparison",
                            )
                            return ConditionReport(
                                "monotony",
                                v,
                                meter.checked,
                                False,
                                _coverage(meter, len(nfas), words_seen),
                            )
                        if record_instances:
                            passed.append((m, w, w2, i1, i2))
                    if exhausted:
                        break
                if exhausted:
                    break
            if exhausted:
                break
        if exhausted:
            break
    return ConditionReport(
        "monotony",
        None,
        meter.checked,
        exhausted,
        _coverage(meter, len(nfas), words_seen),
        tuple(passed),
    )


def language_within_loop(nfa: Nfa, sk: MemorySkeleton, m: int) -> bool:
    """Exact check that every word of the language loops on memory state m.

    Runs the product of the NFA with the skeleton from (inits, m): every
    reachable accepting state must carry memory m.
    """
    if nfa.alphabet != sk.alphabet:
        raise AlphabetMismatchError("NFA and skeleton alphabets differ")
    finals = set(nfa.finals)
    seen = {(q, m) for q in nfa.inits}
    stack = sorted(seen)
    while stack:
        q, mem = stack.pop()
        if q in finals and mem != m:
            return False
        for _, c, q2 in nfa.out[q]:
            nxt = (q2, sk.table[mem][c])
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return True


def test_selectivity(
    rel: PreferenceRelation,
    sk: MemorySkeleton,
    budget: ConditionBudget,
    record_instances: bool = False,
) -> ConditionReport:
    """Search for profitable mixing of cycles that `sk` reads as memory loops.

    For each word w (and the memory state it reaches), language pairs K1, K2
    looping on that state, and an arbitrary K3, the closure of w(K1|K2)*K3
    must not beat the best of w.K1*, w.K2*, and w.K3.
    """
    if rel.alphabet != sk.alphabet:
        raise AlphabetMismatchError("relation and skeleton alphabets differ")
    nfas = _candidate_pool(rel.alphabet, budget)
    meter = _Budget(budget)
    passed = []
    exhausted = False
    words = _all_words(len(rel.alphabet), budget.max_word_len)
    loop_ok: dict[tuple[int, int], bool] = {}
    cat = _ConcatSups(rel)
    star_cache: dict = {}
    material = [_has_loop_material(n) for n in nfas]

    def ok(m: int, i: int) -> bool:
        if (m, i) not in loop_ok:
            loop_ok[(m, i)] = language_within_loop(nfas[i], sk, m)
        return loop_ok[(m, i)]

    def star(w, i) -> SupResult:
        if (w, i) not in star_cache:
            star_cache[(w, i)] = _star_sup(rel, w, nfas[i])
        return star_cache[(w, i)]

    for w in words:
        m = run_skeleton(sk, sk.init, w)
        for i1 in range(len(nfas)):
            if not ok(m, i1):
                continue
            for i2 in range(i1, len(nfas)):
                if not ok(m, i2):
                    continue
                for i3 in range(len(nfas)):
                    if not meter.tick():
                        exhausted = True
                        break
                    k1, k2, k3 = nfas[i1], nfas[i2], nfas[i3]
                    if not material[i1] and not material[i2]:
                        # both loop languages vanish beyond the empty word:
                        # the mixing inequality degenerates to w.K3 vs itself
                        if record_instances:
                            passed.append((m, w, i1, i2, i3))
                        continue
                    lhs = _mixed_sup(rel, w, k1, k2, k3)
                    rhs = SupResult.empty()
                    for cand in (star(w, i1), star(w, i2), cat.get(w, k3)):
                        if cand.is_empty:
                            continue
                        if rhs.is_empty or rel.compare(cand.colors, rhs.colors) > 0:
                            rhs = cand
                    if not _leq(lhs, rhs, rel):
                        v = Violation(
                            "selectivity",
                            m,
                            w,
                            None,
                            k1,
                            k2,
                            k3,
                            "mixed cycles beat every unmixed alternative",
                        )
                        return ConditionReport(
                            "selectivity",
                            v,
                            meter.checked,
                            False,
                            _coverage(meter, len(nfas), len(words)),
                        )
                    if record_instances:
                        passed.append((m, w, i1, i2, i3))
                if exhausted:
                    break
            if exhausted:
                break
        if exhausted:
            break
    return ConditionReport(
        "selectivity",
        None,
        meter.checked,
        exhausted,
        _coverage(meter, len(nfas), len(words)),
        tuple(passed),
    )


def _has_loop_material(nfa: Nfa) -> bool:
    """Does the language contain a non-empty word?"""
    return any(len(w) > 0 for w in nfa.language_upto(nfa.n_states))


def _all_words(n_colors: int, max_len: int) -> list[tuple[int, ...]]:
    import itertools

    out: list[tuple[int, ...]] = []
    for length in range(max_len + 1):
        out.extend(itertools.product(range(n_colors), repeat=length))
    return out


def _coverage(meter: _Budget, n_nfas: int, n_words: int) -> dict:
    return {
        "instances_checked": meter.checked,
        "nfas_drawn": n_nfas,
        "words_enumerated": n_words,
        "seconds": round(time.monotonic() - meter.t0, 3),
    }


# ---------------------------------------------------------------------------
# Exhaustive strategy-beating harness.


@dataclass(frozen=True)
class BeatenStrategy:
    skeleton_states: int
    actions: tuple  # (memory state, state, edge) triples, for the report
    beater: ColorLasso


@dataclass(frozen=True)
class HarnessReport:
    strategies_checked: int
    beaten: tuple[BeatenStrategy, ...]
    one_player_witness: ColorLasso


def counterexample_harness(
    arena: Arena,
    rel: PreferenceRelation,
    max_p1_skeleton_states: int,
    max_cycle_len: int,
    max_prefix_len: int = 8,
    start: int = 0,
) -> HarnessReport:
    """Beat every bounded-memory player-1 strategy, then win the one-player variant.

    (i) enumerates all player-1 Mealy strategies whose skeletons have at most
    the given number of states (up to isomorphism of the reachable part); for
    each, searches the opponent-fixed arena for a lasso losing for player 1
    with cycle length at most `max_cycle_len`.  Raises SearchExhaustedError if
    some strategy cannot be beaten within the bounds.
    (ii) on the all-player-1 variant, exhibits a winning lasso from `start`.
    """
    beaten = []
    checked = 0
    p1_states = arena.states_of(1)
    for sk in iter_skeletons(arena.alphabet, max_p1_skeleton_states):
        for sigma in _all_next_actions(arena, 1, sk, p1_states):
            checked += 1
            fixed = fix_opponent(arena, sigma)
            node = fixed.pair_index(start, sk.init)
            beater = _bounded_losing_lasso(
                fixed.arena, node, rel, max_prefix_len, max_cycle_len
            )
            if beater is None:
                raise SearchExhaustedError(
                    f"no beating lasso within bounds for a {sk.n_states}-state strategy"
                )
            acts = tuple(
                (m, s, sigma.actions[m][s]) for m in range(sk.n_states) for s in p1_states
            )
            beaten.append(BeatenStrategy(sk.n_states, acts, beater.colors().canonical()))
    variant = as_one_player(arena, 1)
    res = rel.sup_play(variant, start)
    if res.is_empty or not lasso_in_win(rel, res.colors):
        raise SearchExhaustedError("no winning lasso found in the one-player variant")
    return HarnessReport(checked, tuple(beaten), res.colors)


def _all_next_actions(arena: Arena, owner: int, sk: MemorySkeleton, states):
    import itertools

    cells = [(m, s) for m in range(sk.n_states) for s in states]
    options = [arena.out[s] for (_, s) in cells]
    for combo in itertools.product(*options):
        yield mealy_from_map(arena, owner, sk, dict(zip(cells, combo)))


def _bounded_losing_lasso(
    arena: Arena, start: int, rel: PreferenceRelation, max_prefix: int, max_cycle: int
) -> Optional[Lasso]:
    """First lasso (DFS order) losing for player 1 within the length bounds."""

    def dfs(walk: list, states: list) -> Optional[Lasso]:
        at = states[-1]
        for i, s in enumerate(states[:-1]):
            if s == at and i <= max_prefix and len(walk) - i <= max_cycle:
                cand = Lasso(tuple(walk[:i]), tuple(walk[i:]))
                if not lasso_in_win(rel, cand.colors()):
                    return cand
        if len(walk) >= max_prefix + max_cycle:
            return None
        for e in arena.out[at]:
            walk.append(e)
            states.append(e.dst)
            found = dfs(walk, states)
            if found is not None:
                return found
            walk.pop()
            states.pop()
        return None

    return dfs([], [start])
