"""NFAs over colors, trimming, the induced one-player arenas, and the merged
gadget automata used for condition refutation.

State merging is always done by redirecting transitions onto the merged
state, never via epsilon transitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from .arena import Arena, Edge, validate_arena
from .errors import AlphabetMismatchError, DanglingEdgeError, EmptyLanguageError


@dataclass(frozen=True)
class Nfa:
    n_states: int
    alphabet: tuple[str, ...]
    delta: tuple[tuple[int, int, int], ...]  # (q, color, q'), sorted
    inits: tuple[int, ...]
    finals: tuple[int, ...]
    state_names: tuple[str, ...] = ()

    def __post_init__(self):
        for q, c, q2 in self.delta:
            if not (0 <= q < self.n_states and 0 <= q2 < self.n_states):
                raise DanglingEdgeError(f"transition ({q},{c},{q2}) references an unknown state")
            if not (0 <= c < len(self.alphabet)):
                raise DanglingEdgeError(f"transition ({q},{c},{q2}) references an unknown color")
        for q in self.inits + self.finals:
            if not (0 <= q < self.n_states):
                raise DanglingEdgeError("initial/final state out of range")
        object.__setattr__(self, "delta", tuple(sorted(set(self.delta))))
        object.__setattr__(self, "inits", tuple(sorted(set(self.inits))))
        object.__setattr__(self, "finals", tuple(sorted(set(self.finals))))
        if not self.state_names:
            object.__setattr__(self, "state_names", tuple(f"q{i}" for i in range(self.n_states)))

    @cached_property
    def out(self) -> tuple[tuple[tuple[int, int, int], ...], ...]:
        buckets: list[list] = [[] for _ in range(self.n_states)]
        for t in self.delta:
            buckets[t[0]].append(t)
        return tuple(tuple(b) for b in buckets)

    def step(self, states: frozenset[int], color: int) -> frozenset[int]:
        return frozenset(q2 for q in states for (_, c, q2) in self.out[q] if c == color)

    def accepts(self, word: Sequence[int]) -> bool:
        cur = frozenset(self.inits)
        for c in word:
            cur = self.step(cur, c)
            if not cur:
                return False
        return bool(cur & set(self.finals))

    def language_upto(self, max_len: int) -> set[tuple[int, ...]]:
        """All accepted words of length <= max_len (exact, by subset reading)."""
        out: set[tuple[int, ...]] = set()
        finals = set(self.finals)
        layer: dict[frozenset[int], None] = {frozenset(self.inits): None}
        words: list[tuple[tuple[int, ...], frozenset[int]]] = [((), frozenset(self.inits))]
        if finals & set(self.inits):
            out.add(())
        for _ in range(max_len):
            nxt = []
            for word, states in words:
                for c in range(len(self.alphabet)):
                    s2 = self.step(states, c)
                    if s2:
                        w2 = word + (c,)
                        if s2 & finals:
                            out.add(w2)
                        nxt.append((w2, s2))
            words = nxt
        return out

    def is_empty(self) -> bool:
        """True iff the recognized language is empty (no reachable final)."""
        seen = set(self.inits)
        stack = list(self.inits)
        finals = set(self.finals)
        while stack:
            q = stack.pop()
            if q in finals:
                return False
            for _, _, q2 in self.out[q]:
                if q2 not in seen:
                    seen.add(q2)
                    stack.append(q2)
        return True

    def accepts_epsilon(self) -> bool:
        return bool(set(self.inits) & set(self.finals))


def _restrict(n: Nfa, keep: Iterable[int]) -> Nfa:
    keep = sorted(set(keep))
    remap = {old: new for new, old in enumerate(keep)}
    return Nfa(
        len(keep),
        n.alphabet,
        tuple(
            (remap[q], c, remap[q2])
            for q, c, q2 in n.delta
            if q in remap and q2 in remap
        ),
        tuple(remap[q] for q in n.inits if q in remap),
        tuple(remap[q] for q in n.finals if q in remap),
        tuple(n.state_names[q] for q in keep),
    )


def trim_coaccessible(n: Nfa) -> Nfa:
    """Restriction to states from which a final state is reachable.

    Recognizes the same finite-word language; may return an empty automaton.
    """
    rev: list[list[int]] = [[] for _ in range(n.n_states)]
    for q, _, q2 in n.delta:
        rev[q2].append(q)
    seen = set(n.finals)
    stack = list(n.finals)
    while stack:
        q = stack.pop()
        for p in rev[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return _restrict(n, seen)


def essential_states(n: Nfa) -> tuple[int, ...]:
    """States from which an infinite path exists, i.e. states reaching a cycle."""
    # a state is on a cycle iff it can reach itself in >= 1 step
    on_cycle = set()
    for q in range(n.n_states):
        stack = [q2 for (_, _, q2) in n.out[q]]
        seen = set(stack)
        while stack:
            u = stack.pop()
            if u == q:
                on_cycle.add(q)
                break
            for _, _, q2 in n.out[u]:
                if q2 not in seen:
                    seen.add(q2)
                    stack.append(q2)
    # add everything that reaches a cycle
    rev: list[list[int]] = [[] for _ in range(n.n_states)]
    for q, _, q2 in n.delta:
        rev[q2].append(q)
    seen = set(on_cycle)
    stack = list(on_cycle)
    while stack:
        q = stack.pop()
        for p in rev[q]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return tuple(sorted(seen))


def arena_of_nfa(n: Nfa) -> tuple[Arena, tuple[int, ...], dict[int, int]]:
    """One-player arena on the essential states of a trimmed NFA.

    Returns (arena, essential initial states as arena indices, nfa->arena map).
    The color words of plays from the essential initial states are exactly the
    infinite words whose finite prefixes are all prefixes of the language.
    """
    ess = essential_states(n)
    remap = {old: new for new, old in enumerate(ess)}
    edges = [
        Edge(remap[q], c, remap[q2])
        for q, c, q2 in n.delta
        if q in remap and q2 in remap
    ]
    # essential states always keep an outgoing edge among essential states
    arena = validate_arena(
        [1] * len(ess), edges, n.alphabet, [n.state_names[q] for q in ess]
    )
    starts = tuple(remap[q] for q in n.inits if q in remap)
    return arena, starts, remap


def union_nfa(n1: Nfa, n2: Nfa) -> Nfa:
    """Disjoint union recognizing the union language."""
    if n1.alphabet != n2.alphabet:
        raise AlphabetMismatchError("union needs a shared alphabet")
    off = n1.n_states
    return Nfa(
        n1.n_states + n2.n_states,
        n1.alphabet,
        n1.delta + tuple((q + off, c, q2 + off) for q, c, q2 in n2.delta),
        n1.inits + tuple(q + off for q in n2.inits),
        n1.finals + tuple(q + off for q in n2.finals),
        tuple(f"a.{s}" for s in n1.state_names) + tuple(f"b.{s}" for s in n2.state_names),
    )


def chain_nfa(word: Sequence[int], alphabet: Sequence[str]) -> Nfa:
    """Deterministic chain recognizing exactly {word}, with |word|+1 states."""
    word = tuple(word)
    delta = tuple((i, c, i + 1) for i, c in enumerate(word))
    return Nfa(len(word) + 1, tuple(alphabet), delta, (0,), (len(word),))


def nfa_from_words(words: Iterable[Sequence[int]], alphabet: Sequence[str]) -> Nfa:
    """Prefix-tree acceptor for a finite language (fixture helper)."""
    alphabet = tuple(alphabet)
    nodes: dict[tuple[int, ...], int] = {(): 0}
    finals = set()
    delta = []
    for w in sorted(tuple(x) for x in words):
        for i in range(len(w)):
            p, q = w[:i], w[: i + 1]
            if q not in nodes:
                nodes[q] = len(nodes)
                delta.append((nodes[p], w[i], nodes[q]))
        finals.add(nodes[w])
    return Nfa(len(nodes), alphabet, tuple(delta), (0,), tuple(sorted(finals)))


# ---------------------------------------------------------------------------
# Normalization used by the gadget constructions.


def _single_init_no_in(n: Nfa) -> Nfa:
    """Equivalent NFA with one initial state that has no ingoing transition."""
    fresh = n.n_states
    delta = list(n.delta)
    for q, c, q2 in n.delta:
        if q in n.inits:
            delta.append((fresh, c, q2))
    finals = list(n.finals)
    if n.accepts_epsilon():
        finals.append(fresh)
    return Nfa(
        n.n_states + 1,
        n.alphabet,
        tuple(delta),
        (fresh,),
        tuple(finals),
        n.state_names + ("in",),
    )


def _single_final_no_out(n: Nfa) -> Nfa:
    """Equivalent NFA with one final state that has no outgoing transition.

    Requires a language without the empty word.
    """
    if n.accepts_epsilon():
        raise EmptyLanguageError("single-final normalization needs an epsilon-free language")
    fresh = n.n_states
    delta = list(n.delta)
    finals = set(n.finals)
    for q, c, q2 in n.delta:
        if q2 in finals:
            delta.append((q, c, fresh))
    return Nfa(
        n.n_states + 1,
        n.alphabet,
        tuple(delta),
        n.inits,
        (fresh,),
        n.state_names + ("fin",),
    )


def _strip_epsilon(n: Nfa) -> Nfa:
    """Remove the empty word from the language.

    De-finalizing initial states is only sound once the initial state has no
    ingoing transition (otherwise words re-entering it would be lost), so
    normalize first.
    """
    if not n.accepts_epsilon():
        return n
    m = _single_init_no_in(n)
    return Nfa(
        m.n_states,
        m.alphabet,
        m.delta,
        m.inits,
        tuple(q for q in m.finals if q not in m.inits),
        m.state_names,
    )


def _merge(
    parts: Sequence[Nfa],
    merged_states: Sequence[tuple[int, int]],
    inits: Sequence[tuple[int, int]],
    finals_extra_t: bool,
    alphabet: Sequence[str],
) -> Nfa:
    """Glue component NFAs, fusing `merged_states` (part, state) into one state t.

    Transitions are redirected onto t (covering the corner where a single
    transition joins two fused states); finals are the parts' finals minus the
    fused ones, plus t itself when `finals_extra_t`.  Initial states are given
    as (part, state) keys.
    """
    merged = set(merged_states)
    index: dict[tuple[int, int], int] = {}
    names = ["t"]
    t = 0
    for p, n in enumerate(parts):
        for q in range(n.n_states):
            if (p, q) in merged:
                index[(p, q)] = t
            else:
                index[(p, q)] = len(names)
                names.append(f"p{p}.{n.state_names[q]}")
    delta = []
    for p, n in enumerate(parts):
        for q, c, q2 in n.delta:
            delta.append((index[(p, q)], c, index[(p, q2)]))
    finals = {index[(p, q)] for p, n in enumerate(parts) for q in n.finals if (p, q) not in merged}
    if finals_extra_t:
        finals.add(t)
    return Nfa(
        len(names),
        tuple(alphabet),
        tuple(delta),
        tuple(sorted({index[i] for i in inits})),
        tuple(sorted(finals)),
        tuple(names),
    )


def monotony_gadget(
    w: Sequence[int],
    w2: Sequence[int],
    n1: Nfa,
    n2: Nfa,
) -> tuple[Arena, Optional[int], Optional[int]]:
    """Merged automaton whose plays realize the closures of w(K1|K2) and w2(K1|K2).

    Two chains (for the words w and w2) feed a fused state t that branches
    into the two language automata; the result is converted to its one-player
    arena.  Returns (arena, start for w, start for w2); a start is None when
    no play leaves it (empty closure).
    """
    alphabet = n1.alphabet
    if n2.alphabet != alphabet:
        raise AlphabetMismatchError("gadget components need a shared alphabet")
    if n1.is_empty() or n2.is_empty():
        raise EmptyLanguageError("gadget needs non-empty languages")
    k1 = trim_coaccessible(_single_init_no_in(n1))
    k2 = trim_coaccessible(_single_init_no_in(n2))
    cw, cw2 = chain_nfa(w, alphabet), chain_nfa(w2, alphabet)
    parts = [cw, cw2, k1, k2]
    fused = [
        (0, cw.finals[0]),
        (1, cw2.finals[0]),
        (2, k1.inits[0]),
        (3, k2.inits[0]),
    ]
    t_final = k1.accepts_epsilon() or k2.accepts_epsilon()
    merged = _merge(parts, fused, [(0, 0), (1, 0)], t_final, alphabet)
    merged = trim_coaccessible(merged)
    # state names survive trimming; locate the two chain entries
    arena, _, _ = arena_of_nfa(merged)
    start_w = _find_state(arena, "p0.q0") if w else _find_state(arena, "t")
    start_w2 = _find_state(arena, "p1.q0") if w2 else _find_state(arena, "t")
    return arena, start_w, start_w2


def selectivity_gadget(
    w: Sequence[int],
    n1: Nfa,
    n2: Nfa,
    n3: Nfa,
) -> tuple[Arena, Optional[int]]:
    """Merged automaton whose plays realize the closure of w(K1|K2)*K3.

    The chain for w runs into a fused state t; K1's and K2's entry and exit
    are both fused into t (creating the cycles), K3's entry likewise.  The
    empty word is removed from K1 and K2 beforehand, which does not change
    the starred language.
    """
    alphabet = n1.alphabet
    if n2.alphabet != alphabet or n3.alphabet != alphabet:
        raise AlphabetMismatchError("gadget components need a shared alphabet")
    loops = []
    for n in (n1, n2):
        stripped = _strip_epsilon(n)
        if stripped.is_empty():
            continue
        k = _single_final_no_out(trim_coaccessible(_single_init_no_in(stripped)))
        loops.append(k)
    if not loops:
        raise EmptyLanguageError("gadget needs a non-empty K1 or K2 beyond the empty word")
    if n3.is_empty():
        raise EmptyLanguageError("gadget needs a non-empty K3")
    k3 = trim_coaccessible(_single_init_no_in(n3))
    cw = chain_nfa(w, alphabet)
    parts = [cw] + loops + [k3]
    fused = [(0, cw.finals[0])]
    for p, k in enumerate(loops, start=1):
        fused.append((p, k.inits[0]))
        fused.append((p, k.finals[0]))
    fused.append((len(parts) - 1, k3.inits[0]))
    merged = _merge(parts, fused, [(0, 0)], k3.accepts_epsilon(), alphabet)
    merged = trim_coaccessible(merged)
    arena, _, _ = arena_of_nfa(merged)
    start = _find_state(arena, "p0.q0") if w else _find_state(arena, "t")
    return arena, start


def _find_state(arena: Arena, name: str) -> Optional[int]:
    try:
        return arena.state_names.index(name)
    except ValueError:
        return None


def concat_gadget(w: Sequence[int], n: Nfa) -> tuple[Arena, Optional[int]]:
    """Plays realizing the closure of w.K: the monotony gadget with both branches K."""
    arena, start, _ = monotony_gadget(w, w, n, n)
    return arena, start


def star_gadget(w: Sequence[int], n: Nfa) -> tuple[Arena, Optional[int]]:
    """Plays realizing the closure of w.K*: the loop gadget with K3 = {empty word}."""
    eps = Nfa(1, n.alphabet, (), (0,), (0,))
    stripped = _strip_epsilon(n)
    if stripped.is_empty():
        # K* = {empty}: the closure of w alone has no infinite continuation
        return Arena((), (), tuple(n.alphabet), ()), None
    return selectivity_gadget(w, stripped, stripped, eps)


# ---------------------------------------------------------------------------
# Exhaustive small-NFA enumeration (refutation search space).


def enumerate_small_nfas(
    alphabet: Sequence[str], max_states: int, budget: Optional[int] = None
) -> Iterator[Nfa]:
    """Deterministic stream of trimmed, non-empty-language NFAs.

    Order: state count, then transition bitmask, then final-set bitmask; the
    initial state is always q0.  Trimmed duplicates (same trimmed shape) are
    not deduplicated, empty languages are skipped, and at most `budget`
    automata are yielded.
    """
    alphabet = tuple(alphabet)
    k = len(alphabet)
    count = 0
    for n in range(1, max_states + 1):
        slots = [(q, c, q2) for q in range(n) for c in range(k) for q2 in range(n)]
        for mask in range(1 << len(slots)):
            delta = tuple(t for i, t in enumerate(slots) if mask >> i & 1)
            for fmask in range(1, 1 << n):
                finals = tuple(q for q in range(n) if fmask >> q & 1)
                cand = Nfa(n, alphabet, delta, (0,), finals)
                if cand.is_empty():
                    continue
                trimmed = trim_coaccessible(cand)
                if budget is not None and count >= budget:
                    return
                count += 1
                yield trimmed


def probe_nfas(alphabet: Sequence[str], max_states: int) -> list[Nfa]:
    """Deterministic chain and chain-settle probes within a state bound.

    For every word u with |u| < max_states: the chain for {u}, and for every
    color c the "settle" automaton recognizing u.c* (chain plus a c-loop on
    the final state).  These shapes reach refuting witnesses that sit far too
    deep in the exhaustive bitmask order.
    """
    import itertools

    alphabet = tuple(alphabet)
    out: list[Nfa] = []
    for length in range(max_states):
        for u in itertools.product(range(len(alphabet)), repeat=length):
            out.append(chain_nfa(u, alphabet))
            last = len(u)
            for c in range(len(alphabet)):
                settle = Nfa(
                    last + 1,
                    alphabet,
                    tuple((i, x, i + 1) for i, x in enumerate(u)) + ((last, c, last),),
                    (0,),
                    (last,),
                )
                out.append(settle)
    return out


def nfa_to_dot(n: Nfa, name: str = "nfa") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    finals = set(n.finals)
    for q in range(n.n_states):
        shape = "doublecircle" if q in finals else "circle"
        lines.append(f'  q{q} [label="{n.state_names[q]}", shape={shape}];')
    for i, q in enumerate(n.inits):
        lines.append(f'  i{i} [shape=point, label=""];')
        lines.append(f"  i{i} -> q{q};")
    for q, c, q2 in n.delta:
        lines.append(f'  q{q} -> q{q2} [label="{n.alphabet[c]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
