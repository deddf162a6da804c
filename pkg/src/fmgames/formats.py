"""Line-oriented text formats (.arena, .skel, .nfa, .pref, .strat) and parsing.

Serializers emit a canonical form (fixed ordering), so parse/serialize
round-trips are exact on canonical files.  Comments start with '#'.
Because arena edges form a set of (src, color, dst) triples, parallel
edges with the same color collapse into one.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .arena import Arena, Edge, validate_arena
from .automata import Nfa, trim_coaccessible
from .errors import FormatError, UnknownColorError
from .preference import (
    PreferenceRelation,
    diverge_or_zero,
    gen_reach2,
    mean_payoff,
    parity,
    reachability,
)
from .skeleton import MemorySkeleton
from .strategy import MealyStrategy, mealy_from_map


def _lines(text: str) -> list[list[str]]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line.split())
    return out


def _alphabet_of(fields: list[str], line: str) -> tuple[str, ...]:
    if not line.startswith("alphabet:"):
        raise FormatError("expected an 'alphabet:' header line")
    return tuple(fields)


# ---------------------------------------------------------------------------
# .arena


def parse_arena(text: str) -> Arena:
    alphabet: Optional[tuple[str, ...]] = None
    names: list[str] = []
    owners: list[int] = []
    edges: list[tuple[int, int, int]] = []
    for fields in _lines(text):
        if fields[0] == "alphabet:":
            alphabet = tuple(fields[1:])
        elif fields[0] == "state":
            if len(fields) != 3 or fields[2] not in ("P1", "P2"):
                raise FormatError(f"bad state line: {' '.join(fields)}")
            names.append(fields[1])
            owners.append(1 if fields[2] == "P1" else 2)
        elif fields[0] == "edge":
            if alphabet is None:
                raise FormatError("edge before alphabet declaration")
            if len(fields) != 4:
                raise FormatError(f"bad edge line: {' '.join(fields)}")
            src, color, dst = fields[1], fields[2], fields[3]
            try:
                edges.append((names.index(src), alphabet.index(color), names.index(dst)))
            except ValueError as exc:
                raise FormatError(f"unknown state or color in edge: {' '.join(fields)}") from exc
        else:
            raise FormatError(f"unknown directive: {fields[0]}")
    if alphabet is None:
        raise FormatError("missing alphabet")
    return validate_arena(owners, edges, alphabet, names)


def serialize_arena(a: Arena) -> str:
    lines = ["alphabet: " + " ".join(a.alphabet)]
    for s in range(a.n_states):
        lines.append(f"state {a.state_names[s]} {'P1' if a.owners[s] == 1 else 'P2'}")
    for e in a.edges:
        lines.append(
            f"edge {a.state_names[e.src]} {a.alphabet[e.color]} {a.state_names[e.dst]}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# .skel


def parse_skeleton(text: str) -> MemorySkeleton:
    alphabet: Optional[tuple[str, ...]] = None
    names: list[str] = []
    init: Optional[str] = None
    upd: dict[tuple[int, int], int] = {}
    for fields in _lines(text):
        if fields[0] == "alphabet:":
            alphabet = tuple(fields[1:])
        elif fields[0] == "state":
            names.append(fields[1])
        elif fields[0] == "init":
            init = fields[1]
        elif fields[0] == "upd":
            if alphabet is None:
                raise FormatError("upd before alphabet declaration")
            m, color, m2 = fields[1], fields[2], fields[3]
            try:
                upd[(names.index(m), alphabet.index(color))] = names.index(m2)
            except ValueError as exc:
                raise FormatError(f"unknown state or color: {' '.join(fields)}") from exc
        else:
            raise FormatError(f"unknown directive: {fields[0]}")
    if alphabet is None or init is None or not names:
        raise FormatError("skeleton needs alphabet, states and init")
    table = []
    for m in range(len(names)):
        row = []
        for c in range(len(alphabet)):
            if (m, c) not in upd:
                raise FormatError(
                    f"missing update for state {names[m]} on color {alphabet[c]}"
                )
            row.append(upd[(m, c)])
        table.append(tuple(row))
    return MemorySkeleton(len(names), names.index(init), alphabet, tuple(table), tuple(names))


def serialize_skeleton(sk: MemorySkeleton) -> str:
    lines = ["alphabet: " + " ".join(sk.alphabet)]
    for name in sk.state_names:
        lines.append(f"state {name}")
    lines.append(f"init {sk.state_names[sk.init]}")
    for m in range(sk.n_states):
        for c in range(len(sk.alphabet)):
            lines.append(
                f"upd {sk.state_names[m]} {sk.alphabet[c]} {sk.state_names[sk.table[m][c]]}"
            )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# .nfa


def parse_nfa(text: str) -> Nfa:
    alphabet: Optional[tuple[str, ...]] = None
    names: list[str] = []
    inits: list[int] = []
    finals: list[int] = []
    delta: list[tuple[int, int, int]] = []
    for fields in _lines(text):
        if fields[0] == "alphabet:":
            alphabet = tuple(fields[1:])
        elif fields[0] == "state":
            idx = len(names)
            names.append(fields[1])
            for flag in fields[2:]:
                if flag == "init":
                    inits.append(idx)
                elif flag == "fin":
                    finals.append(idx)
                else:
                    raise FormatError(f"unknown state flag {flag}")
        elif fields[0] == "trans":
            if alphabet is None:
                raise FormatError("trans before alphabet declaration")
            q, color, q2 = fields[1], fields[2], fields[3]
            try:
                delta.append((names.index(q), alphabet.index(color), names.index(q2)))
            except ValueError as exc:
                raise FormatError(f"unknown state or color: {' '.join(fields)}") from exc
        else:
            raise FormatError(f"unknown directive: {fields[0]}")
    if alphabet is None:
        raise FormatError("missing alphabet")
    return Nfa(len(names), alphabet, tuple(delta), tuple(inits), tuple(finals), tuple(names))


def serialize_nfa(n: Nfa) -> str:
    lines = ["alphabet: " + " ".join(n.alphabet)]
    inits, finals = set(n.inits), set(n.finals)
    for q, name in enumerate(n.state_names):
        flags = (" init" if q in inits else "") + (" fin" if q in finals else "")
        lines.append(f"state {name}{flags}")
    for q, c, q2 in n.delta:
        lines.append(f"trans {n.state_names[q]} {n.alphabet[c]} {n.state_names[q2]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# .pref: kind plus per-color attribute lines, bound to an alphabet at use time.


PREF_KINDS = ("Reachability", "GenReach2", "Parity", "MeanPayoffLimInf", "DivergeOrZero")


def parse_pref(text: str) -> "PrefSpec":
    kind: Optional[str] = None
    attrs: dict[str, dict[str, str]] = {}
    for fields in _lines(text):
        if fields[0] == "kind:":
            kind = fields[1]
            if kind not in PREF_KINDS:
                raise FormatError(f"unknown relation kind {kind}")
        elif fields[0] == "attr":
            color = fields[1]
            table = {}
            for item in fields[2:]:
                if "=" not in item:
                    raise FormatError(f"bad attribute {item}")
                key, value = item.split("=", 1)
                table[key] = value
            attrs[color] = table
        else:
            raise FormatError(f"unknown directive: {fields[0]}")
    if kind is None:
        raise FormatError("missing kind")
    return PrefSpec(kind, attrs)


class PrefSpec:
    """Parsed .pref content; `bind` attaches it to a concrete alphabet."""

    def __init__(self, kind: str, attrs: dict[str, dict[str, str]]):
        self.kind = kind
        self.attrs = attrs

    def bind(self, alphabet: Sequence[str]) -> PreferenceRelation:
        alphabet = tuple(alphabet)

        def attr(color: str, key: str, default=None):
            table = self.attrs.get(color, {})
            if key in table:
                return table[key]
            if default is None:
                raise UnknownColorError(f"color {color} lacks required attribute {key}")
            return default

        if self.kind in ("MeanPayoffLimInf", "DivergeOrZero"):
            weights = tuple(int(attr(c, "weight")) for c in alphabet)
            maker = mean_payoff if self.kind == "MeanPayoffLimInf" else diverge_or_zero
            return maker(alphabet, weights)
        if self.kind == "Parity":
            priorities = tuple(int(attr(c, "priority")) for c in alphabet)
            return parity(alphabet, priorities)
        targets = {c: attr(c, "targets", default="").split(",") for c in alphabet}
        t1 = tuple("T1" in targets[c] for c in alphabet)
        t2 = tuple("T2" in targets[c] for c in alphabet)
        if self.kind == "Reachability":
            return reachability(alphabet, t1)
        return gen_reach2(alphabet, t1, t2)

    def serialize(self) -> str:
        lines = [f"kind: {self.kind}"]
        for color in sorted(self.attrs):
            items = " ".join(f"{k}={v}" for k, v in sorted(self.attrs[color].items()))
            lines.append(f"attr {color} {items}".rstrip())
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# .strat: inline skeleton block plus 'owner' and 'act' lines.


def parse_strategy(text: str, arena: Arena) -> MealyStrategy:
    skel_lines = []
    owner: Optional[int] = None
    acts = []
    for fields in _lines(text):
        if fields[0] in ("alphabet:", "state", "init", "upd"):
            skel_lines.append(" ".join(fields))
        elif fields[0] == "owner":
            owner = 1 if fields[1] == "P1" else 2
        elif fields[0] == "act":
            acts.append(fields[1:])
        else:
            raise FormatError(f"unknown directive: {fields[0]}")
    if owner is None:
        raise FormatError("missing owner line")
    sk = parse_skeleton("\n".join(skel_lines) + "\n")
    if sk.alphabet != arena.alphabet:
        raise FormatError("strategy alphabet differs from the arena's")
    choice = {}
    for m_name, s_name, color, dst in acts:
        try:
            m = sk.state_names.index(m_name)
            s = arena.state_names.index(s_name)
            e = Edge(s, arena.alphabet.index(color), arena.state_names.index(dst))
        except ValueError as exc:
            raise FormatError(f"bad act line: {m_name} {s_name} {color} {dst}") from exc
        choice[(m, s)] = e
    return mealy_from_map(arena, owner, sk, choice, default_rest=False)


def serialize_strategy(sigma: MealyStrategy, arena: Arena) -> str:
    lines = [serialize_skeleton(sigma.skeleton).rstrip("\n")]
    lines.append(f"owner {'P1' if sigma.owner == 1 else 'P2'}")
    sk = sigma.skeleton
    for m in range(sk.n_states):
        for s in arena.states_of(sigma.owner):
            e = sigma.actions[m][s]
            if e is None:
                continue
            lines.append(
                f"act {sk.state_names[m]} {arena.state_names[s]} "
                f"{arena.alphabet[e.color]} {arena.state_names[e.dst]}"
            )
    return "\n".join(lines) + "\n"
