"""Prefix-cover and cyclic-cover checks of a state set by a memory skeleton.

Both checks are reachability analyses of the arena-skeleton product; no
cycle is ever enumerated explicitly.  Reports carry either a per-state
memory assignment or a replayable violating witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from . import _search
from .arena import Arena, History
from .errors import AlphabetMismatchError
from .skeleton import MemorySkeleton


@dataclass(frozen=True)
class CoverReport:
    verdict: bool
    # prefix-cover case: arena state -> memory state, for states reachable
    # from the covered set; unreachable states are unconstrained (absent).
    assignment: dict[int, int]
    # on failure: two histories (prefix case), or history + cycle (cyclic case)
    violation: Optional[tuple[History, History]]

    def __bool__(self):
        return self.verdict


def _product_successors(a: Arena, sk: MemorySkeleton):
    def successors(node):
        s, m = node
        for e in a.out[s]:
            yield e, (e.dst, sk.table[m][e.color])

    return successors


def _check_alphabets(a: Arena, sk: MemorySkeleton):
    if a.alphabet != sk.alphabet:
        raise AlphabetMismatchError("cover check needs matching alphabets")


def check_prefix_cover(a: Arena, sk: MemorySkeleton, s_cov: Iterable[int]) -> CoverReport:
    """Do all histories from s_cov into a state reach one single memory state?

    The empty history counts, so covered states are pinned to the initial
    memory.  A violation is witnessed by two histories into the same arena
    state reaching distinct memory states.
    """
    _check_alphabets(a, sk)
    s_cov = sorted(set(s_cov))
    successors = _product_successors(a, sk)
    parent: dict[tuple, Optional[tuple]] = {}
    order = []
    for s in s_cov:
        node = (s, sk.init)
        if node not in parent:
            parent[node] = None
            order.append(node)
    qi = 0
    assignment: dict[int, int] = {}
    first_node: dict[int, tuple] = {}
    while qi < len(order):
        node = order[qi]
        qi += 1
        s, m = node
        if s in assignment and assignment[s] != m:
            return CoverReport(
                False,
                {},
                (_history_to(parent, first_node[s]), _history_to(parent, node)),
            )
        assignment.setdefault(s, m)
        first_node.setdefault(s, node)
        for label, nxt in successors(node):
            if nxt not in parent:
                parent[nxt] = (node, label)
                order.append(nxt)
    return CoverReport(True, assignment, None)


def check_cyclic_cover(a: Arena, sk: MemorySkeleton, s_cov: Iterable[int]) -> CoverReport:
    """Does every arena cycle read as a memory loop, from every reachable pair?

    For each product pair (s, m) reachable from the covered set, any product
    path of length >= 1 whose arena component returns to s must return with
    memory m; compositions of returns are covered by induction, so plain
    product reachability decides the property.
    """
    _check_alphabets(a, sk)
    s_cov = sorted(set(s_cov))
    successors = _product_successors(a, sk)
    start_nodes = [(s, sk.init) for s in s_cov]
    parent: dict[tuple, Optional[tuple]] = {}
    order = []
    for node in start_nodes:
        if node not in parent:
            parent[node] = None
            order.append(node)
    qi = 0
    while qi < len(order):
        node = order[qi]
        qi += 1
        for label, nxt in successors(node):
            if nxt not in parent:
                parent[nxt] = (node, label)
                order.append(nxt)
    for node in order:
        s, m = node
        # search forward for a return to s with a different memory
        inner_parent: dict[tuple, Optional[tuple]] = {node: None}
        inner_order = [node]
        qi = 0
        while qi < len(inner_order):
            cur = inner_order[qi]
            qi += 1
            for label, nxt in successors(cur):
                if nxt[0] == s and nxt[1] != m:
                    access = _history_to(parent, node)
                    cycle_edges = tuple(
                        _search.path_from_parents(inner_parent, cur)
                    ) + (label,)
                    return CoverReport(False, {}, (access, History(s, cycle_edges)))
                if nxt not in inner_parent and nxt != node:
                    inner_parent[nxt] = (cur, label)
                    inner_order.append(nxt)
    return CoverReport(True, {}, None)


def _history_to(parent: dict, node) -> History:
    edges = tuple(_search.path_from_parents(parent, node))
    cur = node
    while parent[cur] is not None:
        cur = parent[cur][0]
    return History(cur[0], edges)
