"""Mealy-machine strategies, product arenas, and play generation.

A Mealy strategy is a memory skeleton plus a next-action function indexed
densely by (memory state, arena state).  Play tracing works against a small
protocol (initial memory / step on an observed edge / action), so the
synthesis code can also trace strategies whose memory reacts to edges
rather than colors (the side-switching strategies) and scripted witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .arena import Arena, Edge, Lasso
from .errors import (
    AlphabetMismatchError,
    CertificateMismatchError,
    DanglingEdgeError,
)
from .skeleton import MemorySkeleton, trivial_skeleton


@dataclass(frozen=True)
class MealyStrategy:
    """Finite-memory strategy of one player: skeleton + next-action table."""

    owner: int
    skeleton: MemorySkeleton
    actions: tuple[tuple[Optional[Edge], ...], ...]  # actions[m][state]

    def __post_init__(self):
        if self.owner not in (1, 2):
            raise DanglingEdgeError("owner must be 1 or 2")
        for m, row in enumerate(self.actions):
            for s, e in enumerate(row):
                if e is not None and e.src != s:
                    raise DanglingEdgeError(f"next action at state {s} starts at {e.src}")

    # play-tracing protocol -------------------------------------------------
    def initial_mem(self):
        return self.skeleton.init

    def step_mem(self, mem, edge: Edge):
        return self.skeleton.update(mem, edge.color)

    def action(self, mem, state: int) -> Edge:
        e = self.actions[mem][state]
        if e is None:
            raise DanglingEdgeError(f"strategy has no action at state {state}")
        return e

    @property
    def n_memory(self) -> int:
        return self.skeleton.n_states

    def is_memoryless(self) -> bool:
        return self.skeleton.n_states == 1


def mealy_from_map(
    arena: Arena,
    owner: int,
    skeleton: MemorySkeleton,
    choice: Mapping[tuple[int, int], Edge],
    default_rest: bool = True,
) -> MealyStrategy:
    """Build a strategy from a (mem, state) -> edge mapping.

    Owner states not covered get their first outgoing edge when
    `default_rest` is set; the table stays None on opponent states.
    """
    if skeleton.alphabet != arena.alphabet:
        raise AlphabetMismatchError("strategy skeleton must use the arena's alphabet")
    actions = []
    for m in range(skeleton.n_states):
        row: list[Optional[Edge]] = []
        for s in range(arena.n_states):
            if arena.owners[s] != owner:
                row.append(None)
                continue
            e = choice.get((m, s))
            if e is None:
                if not default_rest:
                    raise DanglingEdgeError(f"no action for memory {m}, state {s}")
                e = arena.out[s][0]
            if e not in arena.edge_set:
                raise DanglingEdgeError(f"chosen edge {e} is not in the arena")
            row.append(e)
        actions.append(tuple(row))
    return MealyStrategy(owner, skeleton, tuple(actions))


def memoryless(arena: Arena, owner: int, choice: Mapping[int, Edge]) -> MealyStrategy:
    """Memoryless strategy from a state -> edge mapping (trivial skeleton)."""
    sk = trivial_skeleton(arena.alphabet)
    return mealy_from_map(arena, owner, sk, {(0, s): e for s, e in choice.items()})


def validate_total(arena: Arena, sigma: MealyStrategy) -> None:
    """Check the strategy picks an arena edge at every (memory, owner state)."""
    for m in range(sigma.n_memory):
        for s in arena.states_of(sigma.owner):
            e = sigma.actions[m][s]
            if e is None or e not in arena.edge_set:
                raise DanglingEdgeError(f"strategy not total at memory {m}, state {s}")


@dataclass(frozen=True)
class ScriptedStrategy:
    """Replays a fixed lasso; memory is the position in the script.

    Only sound against a deterministic opponent that produced the lasso, which
    is how equilibrium witnesses are replayed.
    """

    owner: int
    lasso: Lasso

    def initial_mem(self):
        return 0

    def step_mem(self, mem, edge: Edge):
        script = self.lasso.prefix + self.lasso.cycle
        nxt = mem + 1
        if nxt >= len(script):
            nxt = len(self.lasso.prefix)
        return nxt

    def action(self, mem, state: int) -> Edge:
        script = self.lasso.prefix + self.lasso.cycle
        e = script[mem]
        if e.src != state:
            raise DanglingEdgeError("scripted strategy consulted off its play")
        return e


# ---------------------------------------------------------------------------
# Product arenas.


@dataclass(frozen=True)
class ProductArena:
    """Arena over (state, memory) pairs with provenance to its factors."""

    arena: Arena
    base: Arena
    skeleton: MemorySkeleton
    pairs: tuple[tuple[int, int], ...]  # product index -> (base state, memory)
    index: Mapping[tuple[int, int], int] = field(hash=False, compare=False)

    def pair_index(self, s: int, m: int) -> int:
        return self.index[(s, m)]

    def covered_starts(self) -> tuple[int, ...]:
        """Product states pairing any base state with the initial memory."""
        init = self.skeleton.init
        return tuple(i for i, (_, m) in enumerate(self.pairs) if m == init)


def product_arena(a: Arena, sk: MemorySkeleton) -> ProductArena:
    """Full product: states S x M, memory updated by edge colors.

    Edge ((s,m),c,(s',m')) exists iff (s,c,s') does and the skeleton maps
    (m,c) to m'.  Owners and non-blockingness carry over from the base.
    """
    if sk.alphabet != a.alphabet:
        raise AlphabetMismatchError("product needs matching alphabets")
    pairs = tuple((s, m) for s in range(a.n_states) for m in range(sk.n_states))
    index = {(s, m): i for i, (s, m) in enumerate(pairs)}
    edges = []
    for e in a.edges:
        for m in range(sk.n_states):
            m2 = sk.table[m][e.color]
            edges.append(Edge(index[(e.src, m)], e.color, index[(e.dst, m2)]))
    names = tuple(f"{a.state_names[s]}@{sk.state_names[m]}" for s, m in pairs)
    owners = tuple(a.owners[s] for s, _ in pairs)
    prod = Arena(owners, tuple(sorted(edges)), a.alphabet, names)
    return ProductArena(prod, a, sk, pairs, index)


def restrict_product(p: ProductArena, starts: Sequence[int]) -> ProductArena:
    """Reachable part of a product from the given product states (renumbered)."""
    from .arena import reachable_states

    keep = sorted(reachable_states(p.arena, starts))
    remap = {old: new for new, old in enumerate(keep)}
    edges = [
        Edge(remap[e.src], e.color, remap[e.dst])
        for e in p.arena.edges
        if e.src in remap and e.dst in remap
    ]
    arena = Arena(
        tuple(p.arena.owners[i] for i in keep),
        tuple(sorted(edges)),
        p.arena.alphabet,
        tuple(p.arena.state_names[i] for i in keep),
    )
    pairs = tuple(p.pairs[i] for i in keep)
    index = {pair: i for i, pair in enumerate(pairs)}
    return ProductArena(arena, p.base, p.skeleton, pairs, index)


def reachable_product(a: Arena, sk: MemorySkeleton) -> ProductArena:
    """Product restricted to states reachable from S x {initial memory}."""
    full = product_arena(a, sk)
    return restrict_product(full, full.covered_starts())


# ---------------------------------------------------------------------------
# Play generation.


def play_of(a: Arena, start: int, sig1, sig2) -> Lasso:
    """The unique play consistent with both strategies, detected as a lasso.

    The repetition key is the full triple (state, memory 1, memory 2); the
    cycle length is therefore at most |S| * |M1| * |M2|.
    """
    strategies = {1: sig1, 2: sig2}
    mems = {1: sig1.initial_mem(), 2: sig2.initial_mem()}
    seen: dict[tuple, int] = {}
    walk: list[Edge] = []
    state = start
    while True:
        key = (state, mems[1], mems[2])
        if key in seen:
            k = seen[key]
            return Lasso(tuple(walk[:k]), tuple(walk[k:]))
        seen[key] = len(walk)
        owner = a.owners[state]
        e = strategies[owner].action(mems[owner], state)
        if e not in a.edge_set:
            raise DanglingEdgeError(f"strategy chose {e}, not an edge of the arena")
        walk.append(e)
        mems = {i: strategies[i].step_mem(mems[i], e) for i in (1, 2)}
        state = e.dst


def unique_strategy(a: Arena, owner: int) -> MealyStrategy:
    """The only strategy of a player with no choices (first edge everywhere)."""
    return memoryless(a, owner, {})


# ---------------------------------------------------------------------------
# Transfer between finite-memory strategies on A and memoryless ones on A x M.


def ufm_to_ml(p: ProductArena, sigma: MealyStrategy) -> MealyStrategy:
    """Reinterpret a skeleton-based strategy on A as memoryless on A x M.

    `sigma` must be based on the product's skeleton; its choice at (m, s)
    becomes the choice at product state (s, m), lifted to the product edge.
    """
    if sigma.skeleton != p.skeleton:
        raise AlphabetMismatchError("strategy must be based on the product's skeleton")
    choice = {}
    for i, (s, m) in enumerate(p.pairs):
        if p.base.owners[s] != sigma.owner:
            continue
        e = sigma.actions[m][s]
        if e is None:
            continue
        m2 = p.skeleton.table[m][e.color]
        choice[i] = Edge(i, e.color, p.index[(e.dst, m2)])
    return memoryless(p.arena, sigma.owner, choice)


def ml_to_ufm(p: ProductArena, sigma: MealyStrategy) -> MealyStrategy:
    """Project a memoryless product strategy back to a Mealy strategy on the base.

    Product states absent from `p` (pruned as unreachable) default to the
    first base edge; such cells are never consulted in plays started at the
    initial memory.
    """
    if not sigma.is_memoryless():
        raise DanglingEdgeError("expected a memoryless strategy on the product")
    choice = {}
    for i, (s, m) in enumerate(p.pairs):
        if p.base.owners[s] != sigma.owner:
            continue
        e = sigma.actions[0][i]
        if e is None:
            continue
        s2, _ = p.pairs[e.dst]
        choice[(m, s)] = Edge(s, e.color, s2)
    return mealy_from_map(p.base, sigma.owner, p.skeleton, choice)


@dataclass(frozen=True)
class LiftedStrategy:
    """A base-arena strategy replayed on a product arena, memory unchanged.

    The action at product state (s, m) is the base action at s, lifted to the
    product edge; plays from (s, initial memory) carry the same colors as the
    base plays from s.
    """

    product: ProductArena
    base: MealyStrategy

    @property
    def owner(self) -> int:
        return self.base.owner

    def initial_mem(self):
        return self.base.initial_mem()

    def step_mem(self, mem, edge: Edge):
        return self.base.step_mem(mem, edge)  # colors agree with the base edge

    def action(self, mem, state: int) -> Edge:
        s, m = self.product.pairs[state]
        e = self.base.action(mem, s)
        m2 = self.product.skeleton.table[m][e.color]
        return Edge(state, e.color, self.product.index[(e.dst, m2)])


def lift_strategy(p: ProductArena, sigma: MealyStrategy) -> LiftedStrategy:
    return LiftedStrategy(p, sigma)


# ---------------------------------------------------------------------------
# Equilibrium records and mixing.


@dataclass(frozen=True)
class CertifiedPair:
    """A strategy pair together with the states it is certified from."""

    sigma1: MealyStrategy
    sigma2: MealyStrategy
    starts: tuple[int, ...]


def mix_ne(pair_a: CertifiedPair, pair_b: CertifiedPair) -> CertifiedPair:
    """Cross two equilibria certified from the same states: (sigma1_a, sigma2_b).

    In antagonistic games the crossed pair is again an equilibrium; callers
    re-verify through the verify module when they need a fresh certificate.
    """
    if tuple(pair_a.starts) != tuple(pair_b.starts):
        raise CertificateMismatchError("equilibria certified from different state sets")
    return CertifiedPair(pair_a.sigma1, pair_b.sigma2, tuple(pair_a.starts))


# ---------------------------------------------------------------------------
# Fixing one player's strategy.


def fix_opponent(a: Arena, sigma: MealyStrategy) -> ProductArena:
    """One-player arena left to sigma's opponent once sigma is fixed.

    States are (arena state, sigma memory); sigma's states keep only the
    chosen edge, opponent states keep all edges, and every state is handed to
    the opponent.  Infinite paths from (s, initial memory) project exactly to
    the plays of `a` from s consistent with sigma.
    """
    if sigma.skeleton.alphabet != a.alphabet:
        raise AlphabetMismatchError("strategy alphabet differs from the arena's")
    validate_total(a, sigma)
    sk = sigma.skeleton
    pairs = tuple((s, m) for s in range(a.n_states) for m in range(sk.n_states))
    index = {(s, m): i for i, (s, m) in enumerate(pairs)}
    other = 2 if sigma.owner == 1 else 1
    edges = []
    for i, (s, m) in enumerate(pairs):
        if a.owners[s] == sigma.owner:
            chosen = [sigma.actions[m][s]]
        else:
            chosen = list(a.out[s])
        for e in chosen:
            m2 = sk.table[m][e.color]
            edges.append(Edge(i, e.color, index[(e.dst, m2)]))
    names = tuple(f"{a.state_names[s]}@{sk.state_names[m]}" for s, m in pairs)
    arena = Arena((other,) * len(pairs), tuple(sorted(edges)), a.alphabet, names)
    return ProductArena(arena, a, sk, pairs, index)
