"""Game arenas: finite two-player graphs with color-labeled edges.

States are integer indices with an owner in {1, 2}; colors are integer
indices into a per-arena alphabet of color names.  Edges form a *set* of
(src, color, dst) triples, so parallel edges carrying the same color
collapse (the text-format parser documents this).  Everything here is
immutable and hashable so values can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import (
    BadPartitionError,
    BlockingStateError,
    DanglingEdgeError,
    NotAChoiceStateError,
)

Color = int


class Edge(NamedTuple):
    src: int
    color: int
    dst: int


@dataclass(frozen=True)
class Arena:
    """Non-blocking two-player game graph over a finite color alphabet."""

    owners: tuple[int, ...]
    edges: tuple[Edge, ...]
    alphabet: tuple[str, ...]
    state_names: tuple[str, ...]

    @property
    def n_states(self) -> int:
        return len(self.owners)

    @cached_property
    def out(self) -> tuple[tuple[Edge, ...], ...]:
        """Outgoing edges per state, sorted by (color, dst)."""
        buckets: list[list[Edge]] = [[] for _ in range(self.n_states)]
        for e in self.edges:
            buckets[e.src].append(e)
        return tuple(tuple(sorted(b, key=lambda e: (e.color, e.dst))) for b in buckets)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def states_of(self, player: int) -> tuple[int, ...]:
        return tuple(s for s, o in enumerate(self.owners) if o == player)

    def state_index(self, name: str) -> int:
        return self.state_names.index(name)

    def is_one_player(self) -> bool:
        return len(set(self.owners)) <= 1

    def __repr__(self):  # keep error messages short
        return f"Arena({self.n_states} states, {len(self.edges)} edges)"


def validate_arena(
    owners: Sequence[int],
    edges: Iterable[tuple[int, int, int]],
    alphabet: Sequence[str],
    state_names: Optional[Sequence[str]] = None,
) -> Arena:
    """Build an arena, checking the non-blocking and well-formedness invariants.

    Raises BlockingStateError if some state has no outgoing edge and
    DanglingEdgeError if an edge refers to an unknown state or color.
    """
    owners = tuple(owners)
    alphabet = tuple(alphabet)
    if state_names is None:
        state_names = tuple(f"s{i}" for i in range(len(owners)))
    else:
        state_names = tuple(state_names)
    if len(state_names) != len(owners):
        raise DanglingEdgeError("state_names and owners disagree in length")
    if any(o not in (1, 2) for o in owners):
        raise DanglingEdgeError("owners must be 1 or 2")
    n = len(owners)
    seen = set()
    for src, color, dst in edges:
        if not (0 <= src < n and 0 <= dst < n):
            raise DanglingEdgeError(f"edge ({src},{color},{dst}) references an unknown state")
        if not (0 <= color < len(alphabet)):
            raise DanglingEdgeError(f"edge ({src},{color},{dst}) references an unknown color")
        seen.add(Edge(src, color, dst))
    arena = Arena(owners, tuple(sorted(seen)), alphabet, state_names)
    for s in range(n):
        if not arena.out[s]:
            raise BlockingStateError(state_names[s])
    return arena


def num_choices(a: Arena) -> int:
    """Number of choices |E| - |S|; equals the sum over states of (outdeg - 1)."""
    return len(a.edges) - a.n_states


def split_at(a: Arena, t: int, part: Iterable[Edge]) -> tuple[Arena, Arena]:
    """Split the edges at state t: the first arena keeps `part`, the second its complement.

    `part` must be a non-empty proper subset of t's outgoing edges; all other
    edges are untouched and both results stay non-blocking.
    """
    at_t = set(a.out[t])
    if len(at_t) < 2:
        raise NotAChoiceStateError(f"state {a.state_names[t]} has fewer than 2 outgoing edges")
    part = set(part)
    if not part or not part < at_t:
        raise BadPartitionError("partition must be a non-empty proper subset of the edges at t")
    rest = tuple(e for e in a.edges if e.src != t)
    keep_a = tuple(sorted(rest + tuple(part)))
    keep_b = tuple(sorted(rest + tuple(at_t - part)))
    arena_a = Arena(a.owners, keep_a, a.alphabet, a.state_names)
    arena_b = Arena(a.owners, keep_b, a.alphabet, a.state_names)
    return arena_a, arena_b


@dataclass(frozen=True)
class History:
    """Finite chained edge sequence; `edges` may be empty (the empty history)."""

    start: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        at = self.start
        for e in self.edges:
            if e.src != at:
                raise DanglingEdgeError(f"history edges do not chain at {e}")
            at = e.dst

    @property
    def end(self) -> int:
        return self.edges[-1].dst if self.edges else self.start

    @property
    def colors(self) -> tuple[int, ...]:
        return tuple(e.color for e in self.edges)

    def __len__(self):
        return len(self.edges)


def shortest_history(a: Arena, sources: Iterable[int], target: int) -> Optional[History]:
    """Minimum-length history from `sources` to `target`, or None if unreachable.

    Ties break lexicographically by (source index, color id, destination index):
    sources are seeded in index order and edges expanded in sorted order, so the
    first BFS arrival is the canonical witness.  A target inside `sources`
    yields the empty history.
    """
    sources = sorted(set(sources))
    parent: dict[int, Optional[tuple[int, Edge]]] = {}
    queue = []
    for s in sources:
        if s not in parent:
            parent[s] = None
            queue.append(s)
    qi = 0
    while qi < len(queue):
        u = queue[qi]
        qi += 1
        if u == target:
            edges = []
            cur = u
            while parent[cur] is not None:
                prev, e = parent[cur]
                edges.append(e)
                cur = prev
            edges.reverse()
            return History(cur, tuple(edges))
        for e in a.out[u]:
            if e.dst not in parent:
                parent[e.dst] = (u, e)
                queue.append(e.dst)
    return None


def reachable_states(a: Arena, sources: Iterable[int]) -> tuple[int, ...]:
    """States reachable from `sources` (BFS order, deterministic)."""
    order = []
    seen = set()
    queue = sorted(set(sources))
    for s in queue:
        seen.add(s)
    qi = 0
    while qi < len(queue):
        u = queue[qi]
        qi += 1
        order.append(u)
        for e in a.out[u]:
            if e.dst not in seen:
                seen.add(e.dst)
                queue.append(e.dst)
    return tuple(order)


def restrict_to_states(a: Arena, keep: Iterable[int]) -> tuple[Arena, dict[int, int]]:
    """Sub-arena induced by `keep` (must stay non-blocking); returns (arena, old->new map)."""
    keep = sorted(set(keep))
    remap = {old: new for new, old in enumerate(keep)}
    edges = [
        Edge(remap[e.src], e.color, remap[e.dst])
        for e in a.edges
        if e.src in remap and e.dst in remap
    ]
    sub = validate_arena(
        [a.owners[s] for s in keep],
        edges,
        a.alphabet,
        [a.state_names[s] for s in keep],
    )
    return sub, remap


def as_one_player(a: Arena, player: int = 1) -> Arena:
    """Copy of the arena with every state handed to one player (owners ignored)."""
    return Arena((player,) * a.n_states, a.edges, a.alphabet, a.state_names)


# ---------------------------------------------------------------------------
# Lassos: ultimately periodic plays and color words.


def _primitive_root(cycle: tuple) -> tuple:
    n = len(cycle)
    for p in range(1, n + 1):
        if n % p == 0 and cycle[:p] * (n // p) == cycle:
            return cycle[:p]
    return cycle


def _canonical_parts(prefix: tuple, cycle: tuple) -> tuple[tuple, tuple]:
    """Shortest prefix and primitive cycle; the rotation is then forced.

    Two lassos denote the same infinite sequence iff their canonical parts
    are equal: the primitive eventual period of an ultimately periodic
    sequence is unique, maximal absorption of the cycle into the prefix
    (right-rotating as it goes) yields the unique shortest prefix, and
    distinct rotations of a primitive cycle spell distinct sequences.
    """
    cycle = _primitive_root(tuple(cycle))
    prefix = list(prefix)
    while prefix and prefix[-1] == cycle[-1]:
        prefix.pop()
        cycle = cycle[-1:] + cycle[:-1]
    return tuple(prefix), cycle


@dataclass(frozen=True)
class ColorLasso:
    """Ultimately periodic color word prefix . cycle^omega (cycle non-empty)."""

    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("lasso cycle must be non-empty")

    def canonical(self) -> "ColorLasso":
        p, c = _canonical_parts(self.prefix, self.cycle)
        return ColorLasso(p, c)

    def unroll(self, n: int) -> tuple[int, ...]:
        out = list(self.prefix)
        while len(out) < n:
            out.extend(self.cycle)
        return tuple(out[:n])

    def same_word(self, other: "ColorLasso") -> bool:
        return self.canonical() == other.canonical()


@dataclass(frozen=True)
class Lasso:
    """Ultimately periodic play: chained edge prefix plus a non-empty edge cycle."""

    prefix: tuple[Edge, ...]
    cycle: tuple[Edge, ...]

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("lasso cycle must be non-empty")
        seq = self.prefix + self.cycle
        for a, b in zip(seq, seq[1:]):
            if a.dst != b.src:
                raise DanglingEdgeError(f"lasso edges do not chain: {a} -> {b}")
        if self.cycle[-1].dst != self.cycle[0].src:
            raise DanglingEdgeError("lasso cycle does not close")
        if self.prefix and self.prefix[-1].dst != self.cycle[0].src:
            raise DanglingEdgeError("lasso prefix does not reach the cycle")

    @property
    def start(self) -> int:
        return (self.prefix + self.cycle)[0].src

    def canonical(self) -> "Lasso":
        p, c = _canonical_parts(self.prefix, self.cycle)
        return Lasso(p, c)

    def colors(self) -> ColorLasso:
        return ColorLasso(
            tuple(e.color for e in self.prefix), tuple(e.color for e in self.cycle)
        )

    def unroll(self, n: int) -> tuple[Edge, ...]:
        out = list(self.prefix)
        while len(out) < n:
            out.extend(self.cycle)
        return tuple(out[:n])

    def same_play(self, other: "Lasso") -> bool:
        return self.start == other.start and self.canonical() == other.canonical()


def mean_weight(cycle_weights: Sequence[int]) -> Fraction:
    """Exact mean of a cycle's weights."""
    return Fraction(sum(cycle_weights), len(cycle_weights))


# ---------------------------------------------------------------------------
# DOT export.


def arena_to_dot(a: Arena, name: str = "arena") -> str:
    """Graphviz text: circles for player-1 states, boxes for player-2."""
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for s in range(a.n_states):
        shape = "circle" if a.owners[s] == 1 else "box"
        lines.append(f'  n{s} [label="{a.state_names[s]}", shape={shape}];')
    for e in a.edges:
        lines.append(f'  n{e.src} -> n{e.dst} [label="{a.alphabet[e.color]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
