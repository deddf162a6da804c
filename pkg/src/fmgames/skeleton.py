"""Memory skeletons: deterministic color-reading automata without output.

A skeleton is (states, initial state, total update function); running it on
color words classifies finite histories.  Missing transitions are a
validation error rather than implicit self-loops, so modeling mistakes
surface early.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import AlphabetMismatchError, DanglingEdgeError, UnknownColorError


@dataclass(frozen=True)
class MemorySkeleton:
    n_states: int
    init: int
    alphabet: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]  # table[m][color] -> m'
    state_names: tuple[str, ...] = ()

    def __post_init__(self):
        if not (0 <= self.init < self.n_states):
            raise DanglingEdgeError("initial memory state out of range")
        if len(self.table) != self.n_states:
            raise DanglingEdgeError("update table must cover every memory state")
        for row in self.table:
            if len(row) != len(self.alphabet):
                raise DanglingEdgeError("update table must cover every color")
            if any(not (0 <= m < self.n_states) for m in row):
                raise DanglingEdgeError("update table references an unknown memory state")
        if not self.state_names:
            object.__setattr__(self, "state_names", tuple(f"m{i}" for i in range(self.n_states)))
        elif len(self.state_names) != self.n_states:
            raise DanglingEdgeError("state_names and n_states disagree")

    def update(self, m: int, color: int) -> int:
        if not (0 <= color < len(self.alphabet)):
            raise UnknownColorError(f"color {color} outside alphabet of size {len(self.alphabet)}")
        return self.table[m][color]

    @cached_property
    def reachable(self) -> tuple[int, ...]:
        """Memory states reachable from the initial one, BFS order."""
        order = [self.init]
        seen = {self.init}
        qi = 0
        while qi < len(order):
            m = order[qi]
            qi += 1
            for c in range(len(self.alphabet)):
                m2 = self.table[m][c]
                if m2 not in seen:
                    seen.add(m2)
                    order.append(m2)
        return tuple(order)


def run_skeleton(sk: MemorySkeleton, m: int, word: Sequence[int]) -> int:
    """Iterated update from m over a color word (monoid action)."""
    for c in word:
        m = sk.update(m, c)
    return m


def trivial_skeleton(alphabet: Sequence[str]) -> MemorySkeleton:
    """One memory state, every color self-loops."""
    alphabet = tuple(alphabet)
    return MemorySkeleton(1, 0, alphabet, ((0,) * len(alphabet),))


def product_skeletons(sk1: MemorySkeleton, sk2: MemorySkeleton) -> MemorySkeleton:
    """Formal product: state set M1 x M2, componentwise update.

    The full product is kept (no implicit reachability pruning) so state
    counts in reports match the formal construction; use `reachable_part`
    to prune explicitly.
    """
    if sk1.alphabet != sk2.alphabet:
        raise AlphabetMismatchError("skeleton product needs a shared alphabet")
    n2 = sk2.n_states
    names = tuple(
        f"{sk1.state_names[m1]}.{sk2.state_names[m2]}"
        for m1 in range(sk1.n_states)
        for m2 in range(n2)
    )
    table = tuple(
        tuple(
            sk1.table[m1][c] * n2 + sk2.table[m2][c]
            for c in range(len(sk1.alphabet))
        )
        for m1 in range(sk1.n_states)
        for m2 in range(n2)
    )
    return MemorySkeleton(
        sk1.n_states * n2, sk1.init * n2 + sk2.init, sk1.alphabet, table, names
    )


def product_many(skeletons: Sequence[MemorySkeleton]) -> MemorySkeleton:
    import functools

    return functools.reduce(product_skeletons, skeletons)


def reachable_part(sk: MemorySkeleton) -> MemorySkeleton:
    """Restriction to states reachable from the initial one (renumbered)."""
    keep = sorted(sk.reachable)
    remap = {old: new for new, old in enumerate(keep)}
    table = tuple(
        tuple(remap[sk.table[m][c]] for c in range(len(sk.alphabet))) for m in keep
    )
    return MemorySkeleton(
        len(keep), remap[sk.init], sk.alphabet, table, tuple(sk.state_names[m] for m in keep)
    )


def witness_word(
    sk: MemorySkeleton, m: int, m_target: int, max_len: int
) -> Optional[tuple[int, ...]]:
    """A shortest word leading from m to m_target, length <= max_len, or None.

    BFS expanding colors in ascending id order, so ties break deterministically.
    """
    if m == m_target:
        return ()
    frontier = {m: ()}
    seen = {m}
    for _ in range(max_len):
        nxt: dict[int, tuple[int, ...]] = {}
        for state in sorted(frontier):
            word = frontier[state]
            for c in range(len(sk.alphabet)):
                m2 = sk.table[state][c]
                if m2 == m_target:
                    return word + (c,)
                if m2 not in seen:
                    seen.add(m2)
                    nxt[m2] = word + (c,)
        if not nxt:
            return None
        frontier = nxt
    return None


def words_reaching(
    sk: MemorySkeleton, m_target: int, max_len: int
) -> tuple[tuple[int, ...], ...]:
    """All words of length <= max_len read from the initial state to m_target.

    Ordered by length then lexicographically by color ids.
    """
    out = []
    layer: list[tuple[int, tuple[int, ...]]] = [(sk.init, ())]
    if sk.init == m_target:
        out.append(())
    for _ in range(max_len):
        nxt = []
        for state, word in layer:
            for c in range(len(sk.alphabet)):
                m2 = sk.table[state][c]
                w2 = word + (c,)
                if m2 == m_target:
                    out.append(w2)
                nxt.append((m2, w2))
        layer = nxt
    return tuple(out)


def iter_skeletons(
    alphabet: Sequence[str], max_states: int
) -> Iterable[MemorySkeleton]:
    """Deterministic stream of skeletons up to isomorphism.

    Enumerates total update tables with initial state 0, keeps the reachable
    part renumbered in BFS order, and deduplicates the resulting canonical
    tables.  Used by the counterexample harness and test samplers.
    """
    alphabet = tuple(alphabet)
    k = len(alphabet)
    seen: set[tuple] = set()
    import itertools

    for n in range(1, max_states + 1):
        for flat in itertools.product(range(n), repeat=n * k):
            table = tuple(tuple(flat[m * k : (m + 1) * k]) for m in range(n))
            sk = MemorySkeleton(n, 0, alphabet, table)
            canon = _bfs_canonical(sk)
            key = (canon.n_states, canon.table)
            if key not in seen:
                seen.add(key)
                yield canon


def _bfs_canonical(sk: MemorySkeleton) -> MemorySkeleton:
    """Reachable part with states renumbered in BFS discovery order."""
    order = sk.reachable
    remap = {old: new for new, old in enumerate(order)}
    table = tuple(
        tuple(remap[sk.table[m][c]] for c in range(len(sk.alphabet))) for m in order
    )
    return MemorySkeleton(len(order), 0, sk.alphabet, table)


def skeleton_to_dot(sk: MemorySkeleton, name: str = "skeleton") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  init [shape=point, label=""];']
    for m in range(sk.n_states):
        lines.append(f'  m{m} [label="{sk.state_names[m]}", shape=circle];')
    lines.append(f"  init -> m{sk.init};")
    # group parallel transitions into one labeled edge
    grouped: dict[tuple[int, int], list[str]] = {}
    for m in range(sk.n_states):
        for c, name_c in enumerate(sk.alphabet):
            grouped.setdefault((m, sk.table[m][c]), []).append(name_c)
    for (m, m2), labels in sorted(grouped.items()):
        lines.append(f'  m{m} -> m{m2} [label="{",".join(labels)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
