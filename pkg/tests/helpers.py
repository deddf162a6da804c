"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random

import fmgames as fm


# ---------------------------------------------------------------------------
# Random instance generators (seeded, deterministic).


def random_arena(rng, max_states=5, n_colors=3, max_extra=2, one_player=False):
    """Sparse random non-blocking arena (few choice edges keeps synthesis fast)."""
    n = rng.randint(2, max_states)
    alphabet = tuple("abc"[:n_colors])
    owners = [1 if one_player else rng.choice([1, 2]) for _ in range(n)]
    edges = set()
    for s in range(n):
        edges.add((s, rng.randrange(n_colors), rng.randrange(n)))
    for _ in range(rng.randint(0, max_extra)):
        edges.add((rng.randrange(n), rng.randrange(n_colors), rng.randrange(n)))
    return fm.validate_arena(owners, sorted(edges), alphabet)


def random_skeleton(rng, alphabet, max_states=3):
    n = rng.randint(1, max_states)
    table = tuple(tuple(rng.randrange(n) for _ in alphabet) for _ in range(n))
    return fm.MemorySkeleton(n, 0, tuple(alphabet), table)


def random_mealy(rng, arena, owner, skeleton):
    choice = {}
    for m in range(skeleton.n_states):
        for s in arena.states_of(owner):
            choice[(m, s)] = rng.choice(arena.out[s])
    return fm.mealy_from_map(arena, owner, skeleton, choice)


def random_nfa(rng, alphabet, max_states=4):
    n = rng.randint(1, max_states)
    k = len(alphabet)
    delta = set(
        (rng.randrange(n), rng.randrange(k), rng.randrange(n))
        for _ in range(rng.randint(1, 2 * n))
    )
    inits = tuple(sorted({rng.randrange(n) for _ in range(rng.randint(1, 2))}))
    finals = tuple(sorted({rng.randrange(n) for _ in range(rng.randint(1, 2))}))
    return fm.Nfa(n, tuple(alphabet), tuple(sorted(delta)), inits, finals)


def random_color_lasso(rng, n_colors, max_len=4):
    pre = tuple(rng.randrange(n_colors) for _ in range(rng.randint(0, max_len)))
    cyc = tuple(rng.randrange(n_colors) for _ in range(rng.randint(1, max_len)))
    return fm.ColorLasso(pre, cyc)


# ---------------------------------------------------------------------------
# Canonical relations over the a/b/c test alphabet.


def gr2(alphabet):
    """Both-targets objective: 'b' is the first target, 'c' the second."""
    return fm.gen_reach2(
        alphabet, tuple(c == "b" for c in alphabet), tuple(c == "c" for c in alphabet)
    )


def prefix_monitor(alphabet):
    """Two-state monitor for the first target (color 'b')."""
    b = alphabet.index("b")
    table = tuple(
        tuple(1 if (m == 1 or c == b) else 0 for c in range(len(alphabet)))
        for m in (0, 1)
    )
    return fm.MemorySkeleton(2, 0, tuple(alphabet), table)


def progress_monitor(alphabet):
    """Three-state monitor: nothing seen / second target only / first target."""
    b, c = alphabet.index("b"), alphabet.index("c")
    rows = []
    for m in range(3):
        row = []
        for col in range(len(alphabet)):
            if m == 2:
                row.append(2)
            elif col == b:
                row.append(2)
            elif col == c:
                row.append(1)
            else:
                row.append(m)
        rows.append(tuple(row))
    return fm.MemorySkeleton(3, 0, tuple(alphabet), tuple(rows))


def matching_pennies():
    """Game with no memoryless equilibrium within the memoryless class.

    Player 1 commits (p or q), player 2 replies blindly (x or y); the pair
    wins exactly when the choices match, encoded through two target sets.
    """
    alphabet = ("p", "q", "x", "y", "n")
    owners = [1, 2, 1]
    edges = [
        (0, alphabet.index("p"), 1),
        (0, alphabet.index("q"), 1),
        (1, alphabet.index("x"), 2),
        (1, alphabet.index("y"), 2),
        (2, alphabet.index("n"), 2),
    ]
    arena = fm.validate_arena(owners, edges, alphabet)
    t1 = tuple(c in ("p", "y") for c in alphabet)
    t2 = tuple(c in ("q", "x") for c in alphabet)
    return arena, fm.gen_reach2(alphabet, t1, t2)


# ---------------------------------------------------------------------------
# Independent oracles.


def all_lassos(arena, start, max_prefix, max_cycle):
    """Exhaustive lasso enumeration by bounded DFS (oracle for suprema)."""
    out = []

    def dfs(walk, states):
        at = states[-1]
        for i, s in enumerate(states[:-1]):
            if s == at and i <= max_prefix and len(walk) - i <= max_cycle:
                out.append(fm.Lasso(tuple(walk[:i]), tuple(walk[i:])))
        if len(walk) >= max_prefix + max_cycle:
            return
        for e in arena.out[at]:
            walk.append(e)
            states.append(e.dst)
            dfs(walk, states)
            walk.pop()
            states.pop()

    dfs([], [start])
    return out


def closure_prefixes(nfa, max_len):
    """Color words of length <= max_len readable in the induced play arena."""
    arena, starts, _ = fm.arena_of_nfa(fm.trim_coaccessible(nfa))
    out = set()
    if starts:
        out.add(())
    level = [((), s) for s in sorted(starts)]
    for _ in range(max_len):
        nxt = []
        for w, s in level:
            for e in arena.out[s]:
                nxt.append((w + (e.color,), e.dst))
        level = nxt
        out.update(w for w, _ in level)
    return out


def extendable_prefixes(nfa, max_len):
    """Oracle for the closure's prefixes, via the subset graph only.

    A word is a prefix of some infinite word in the closure iff its subset
    state is non-empty and can reach a cycle of the (non-empty) subset graph;
    no appeal to essential states of the NFA itself.
    """
    nfa = fm.trim_coaccessible(nfa)
    if nfa.n_states == 0:
        return set()
    start = frozenset(nfa.inits)
    succ_cache: dict = {}

    def succs(sub):
        if sub not in succ_cache:
            succ_cache[sub] = [
                s2
                for c in range(len(nfa.alphabet))
                if (s2 := nfa.step(sub, c))
            ]
        return succ_cache[sub]

    # subsets that lie on or reach a cycle of the subset graph
    alive: dict = {}

    def reaches_cycle(sub, path):
        if sub in alive:
            return alive[sub]
        if sub in path:
            return True
        path.add(sub)
        result = any(reaches_cycle(s2, path) for s2 in succs(sub))
        path.discard(sub)
        alive[sub] = result
        return result

    out = set()
    level = [((), start)] if start else []
    if start and reaches_cycle(start, set()):
        out.add(())
    for _ in range(max_len):
        nxt = []
        for w, sub in level:
            for c in range(len(nfa.alphabet)):
                s2 = nfa.step(sub, c)
                if s2:
                    nxt.append((w + (c,), s2))
        level = nxt
        out.update(w for w, sub in level if reaches_cycle(sub, set()))
    return out


def words_upto(n_colors, max_len):
    out = []
    for length in range(max_len + 1):
        out.extend(itertools.product(range(n_colors), repeat=length))
    return out


class LiftedOrForced:
    """Replay a base strategy on an opponent-fixed arena.

    At product states whose base state belongs to the strategy's owner, take
    the lifted choice; elsewhere the fixed arena has a single edge left.
    """

    def __init__(self, fixed, tau):
        self.fixed = fixed
        self.tau = tau

    def initial_mem(self):
        return self.tau.initial_mem()

    def step_mem(self, mem, edge):
        return self.tau.step_mem(mem, edge)

    def action(self, mem, state):
        s, m = self.fixed.pairs[state]
        if self.fixed.base.owners[s] == self.tau.owner:
            e = self.tau.action(mem, s)
            m2 = self.fixed.skeleton.table[m][e.color]
            return fm.Edge(state, e.color, self.fixed.index[(e.dst, m2)])
        return self.fixed.arena.out[state][0]


def consistent_with(arena, sigma, lasso):
    """Does the lasso follow sigma's choices at sigma's states?"""
    mem = sigma.initial_mem()
    for e in lasso.unroll(2 * (len(lasso.prefix) + len(lasso.cycle))):
        if arena.owners[e.src] == sigma.owner and sigma.action(mem, e.src) != e:
            return False
        mem = sigma.step_mem(mem, e)
    return True
