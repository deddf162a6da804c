"""Deterministic graph searches shared by the preference and synthesis code.

All iteration orders are fixed (states ascending, edges sorted by
(color, dst)), so every caller gets byte-identical results across runs.
"""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, Iterator, Optional

from .arena import Arena, Edge, Lasso


def simple_cycles(a: Arena, within: Optional[set[int]] = None) -> Iterator[tuple[Edge, ...]]:
    """Yield simple cycles (distinct states, parallel colors distinguished).

    Cycles are rooted at their minimum state; roots ascend and the DFS follows
    sorted edges, so the order is deterministic.
    """
    states = sorted(within) if within is not None else range(a.n_states)
    allowed = set(states)

    def dfs(root: int, node: int, path: list[Edge], on_path: set[int]):
        for e in a.out[node]:
            if e.dst == root:
                yield tuple(path + [e])
            elif e.dst > root and e.dst in allowed and e.dst not in on_path:
                on_path.add(e.dst)
                path.append(e)
                yield from dfs(root, e.dst, path, on_path)
                path.pop()
                on_path.remove(e.dst)

    for root in states:
        yield from dfs(root, root, [], {root})


def first_walk_lasso(a: Arena, start: int) -> Lasso:
    """Lasso traced by always taking the first outgoing edge (lowest color, dst)."""
    seen = {start: 0}
    walk: list[Edge] = []
    at = start
    while True:
        e = a.out[at][0]
        walk.append(e)
        at = e.dst
        if at in seen:
            k = seen[at]
            return Lasso(tuple(walk[:k]), tuple(walk[k:]))
        seen[at] = len(walk)


def close_walk_to_lasso(a: Arena, access: tuple[Edge, ...], at: int) -> Lasso:
    """Extend a walk ending at `at` into a lasso via first-edge steps."""
    tail = first_walk_lasso(a, at)
    return Lasso(access + tail.prefix, tail.cycle)


Node = Hashable


def bfs_paths(
    start: Node, successors: Callable[[Node], Iterable[tuple[object, Node]]]
) -> tuple[list[Node], dict[Node, Optional[tuple[Node, object]]]]:
    """Generic BFS over an implicit graph; returns (visit order, parent links).

    `successors(n)` must yield (label, next_node) pairs in a fixed order.
    """
    parent: dict[Node, Optional[tuple[Node, object]]] = {start: None}
    order = [start]
    qi = 0
    while qi < len(order):
        u = order[qi]
        qi += 1
        for label, v in successors(u):
            if v not in parent:
                parent[v] = (u, label)
                order.append(v)
    return order, parent


def path_from_parents(
    parent: dict[Node, Optional[tuple[Node, object]]], target: Node
) -> list[object]:
    labels: list[object] = []
    cur = target
    while parent[cur] is not None:
        prev, label = parent[cur]
        labels.append(label)
        cur = prev
    labels.reverse()
    return labels


def first_cycle_through(
    start: Node, successors: Callable[[Node], Iterable[tuple[object, Node]]]
) -> Optional[list[object]]:
    """Shortest non-empty label path from `start` back to itself, or None."""
    parent: dict[Node, Optional[tuple[Node, object]]] = {start: None}
    queue: list[Node] = [start]
    qi = 0
    while qi < len(queue):
        u = queue[qi]
        qi += 1
        for label, v in successors(u):
            if v == start:
                return path_from_parents(parent, u) + [label]
            if v not in parent:
                parent[v] = (u, label)
                queue.append(v)
    return None
