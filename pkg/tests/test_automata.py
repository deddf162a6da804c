import random

import pytest

import fmgames as fm
from fmgames.automata import probe_nfas
from fmgames.errors import EmptyLanguageError

from helpers import closure_prefixes, extendable_prefixes, random_nfa

AB = ("a", "b")
NTT = ("n", "t1", "t2")


def nfa(alphabet, n, delta, inits, finals):
    return fm.Nfa(n, alphabet, tuple(delta), tuple(inits), tuple(finals))


def loop_acceptor(alphabet, color):
    return nfa(alphabet, 1, [(0, color, 0)], [0], [0])


def test_trim_removes_dead_sink():
    n = nfa(AB, 3, [(0, 0, 1), (0, 1, 2), (1, 0, 1)], [0], [1])
    t = fm.trim_coaccessible(n)
    assert t.n_states == 2  # the sink state 2 cannot reach a final
    assert t.language_upto(3) == n.language_upto(3)


def test_trim_identity_on_coaccessible():
    n = loop_acceptor(AB, 0)
    assert fm.trim_coaccessible(n) == n


def test_trim_empty_language():
    n = nfa(AB, 2, [(0, 0, 1)], [0], [])
    assert fm.trim_coaccessible(n).n_states == 0


def test_essential_states():
    # chain recognizing one word: no cycles at all
    chain = fm.chain_nfa((0, 1), AB)
    assert fm.essential_states(chain) == ()
    # a* loop: the single state is essential
    assert fm.essential_states(loop_acceptor(AB, 0)) == (0,)
    # a state reaching a cycle is essential too
    n = nfa(AB, 2, [(0, 0, 1), (1, 1, 1)], [0], [1])
    assert fm.essential_states(n) == (0, 1)


def test_arena_of_finite_language_is_empty():
    arena, starts, _ = fm.arena_of_nfa(fm.chain_nfa((0, 1), AB))
    assert arena.n_states == 0 and starts == ()


def test_arena_of_loop():
    arena, starts, _ = fm.arena_of_nfa(loop_acceptor(AB, 0))
    assert arena.n_states == 1 and starts == (0,)
    assert closure_prefixes(loop_acceptor(AB, 0), 5) == {(0,) * k for k in range(6)}


def test_arena_of_settle():
    # t2 then n-loop: the closure is the single word t2 n n n ...
    n = nfa(NTT, 2, [(0, 2, 1), (1, 0, 1)], [0], [1])
    prefixes = closure_prefixes(n, 6)
    expected = {()} | {(2,) + (0,) * k for k in range(6)}
    assert prefixes == expected


def test_union_nfa_examples():
    n1 = loop_acceptor(AB, 0)
    n2 = loop_acceptor(AB, 1)
    u = fm.union_nfa(n1, n2)
    assert closure_prefixes(u, 6) == closure_prefixes(n1, 6) | closure_prefixes(n2, 6)
    # union with itself and with an empty language change nothing
    assert closure_prefixes(fm.union_nfa(n1, n1), 6) == closure_prefixes(n1, 6)
    empty = nfa(AB, 1, [], [0], [])
    assert closure_prefixes(fm.union_nfa(n1, empty), 6) == closure_prefixes(n1, 6)


def test_union_closure_property():
    rng = random.Random(21)
    for _ in range(60):
        n1 = random_nfa(rng, NTT)
        n2 = random_nfa(rng, NTT)
        u = fm.union_nfa(n1, n2)
        assert closure_prefixes(u, 8) == closure_prefixes(n1, 8) | closure_prefixes(n2, 8)


def test_closure_prefixes_match_subset_oracle():
    # the induced-arena reading of the closure agrees with an oracle that
    # only ever looks at the subset graph of the trimmed automaton
    rng = random.Random(8)
    for _ in range(80):
        n = random_nfa(rng, NTT)
        assert closure_prefixes(n, 6) == extendable_prefixes(n, 6)


def test_closure_empty_iff_no_essential_init():
    rng = random.Random(9)
    for _ in range(60):
        n = fm.trim_coaccessible(random_nfa(rng, AB))
        arena, starts, _ = fm.arena_of_nfa(n)
        ess_inits = [q for q in n.inits if q in fm.essential_states(n)]
        assert bool(starts) == bool(ess_inits)
        assert (closure_prefixes(n, 4) == set()) == (not ess_inits)


# ---------------------------------------------------------------------------
# Gadgets.


def unroll_set(words, max_len):
    """All prefixes (up to max_len) of the given ultimately periodic words."""
    out = set()
    for pre, cyc in words:
        w = list(pre)
        while len(w) < max_len:
            w.extend(cyc)
        for k in range(max_len + 1):
            out.add(tuple(w[:k]))
    return out


def test_monotony_gadget_languages():
    k1 = loop_acceptor(NTT, 0)  # n*
    k2 = nfa(NTT, 2, [(0, 2, 1), (1, 0, 1)], [0], [1])  # t2 n*
    arena, start_w, start_w2 = fm.monotony_gadget((1,), (0,), k1, k2)
    # plays from the w-chain spell t1 n^w and t1 t2 n^w
    got = set()
    level = [((), start_w)]
    for _ in range(6):
        nxt = []
        for w, s in level:
            for e in arena.out[s]:
                nxt.append((w + (e.color,), e.dst))
        level = nxt
        got.update(w for w, _ in level)
    got.add(())
    assert got == unroll_set([((1,), (0,)), ((1, 2), (0,))], 6)


def test_monotony_gadget_identical_sides():
    k = loop_acceptor(NTT, 0)
    arena, s1, s2 = fm.monotony_gadget((1,), (1,), k, k)
    ps1 = fm.PlaySet(arena, (s1,))
    ps2 = fm.PlaySet(arena, (s2,))
    rel = fm.gen_reach2(NTT, (False, True, False), (False, False, True))
    assert fm.set_leq(rel, ps1, ps2) and fm.set_leq(rel, ps2, ps1)


def test_monotony_gadget_empty_language():
    empty = nfa(NTT, 1, [], [0], [])
    with pytest.raises(EmptyLanguageError):
        fm.monotony_gadget((1,), (0,), empty, loop_acceptor(NTT, 0))


def test_selectivity_gadget_languages():
    alphabet = ("a", "b", "c", "d")
    ka = nfa(alphabet, 1, [], [0], [0])
    ka = fm.chain_nfa((0,), alphabet)  # {a}
    kb = fm.chain_nfa((1,), alphabet)  # {b}
    kc = nfa(alphabet, 2, [(0, 2, 1), (1, 3, 1)], [0], [1])  # c d*
    arena, start = fm.selectivity_gadget((), ka, kb, kc)
    prefixes = set()
    level = [((), start)]
    for _ in range(6):
        nxt = []
        for w, s in level:
            for e in arena.out[s]:
                nxt.append((w + (e.color,), e.dst))
        level = nxt
        prefixes.update(w for w, _ in level)
    # mixing the a- and b-cycles forever is a play
    assert (0, 1, 0, 1, 0, 1) in prefixes
    assert (1, 1, 0, 0, 1, 0) in prefixes
    # and so is leaving into c d^w after any number of cycles
    assert (2, 3, 3, 3, 3, 3) in prefixes
    assert (0, 1, 2, 3, 3, 3) in prefixes
    # but nothing continues after skipping the exit language
    assert (2, 2) not in prefixes and (3,) not in prefixes


def test_selectivity_gadget_single_word():
    alphabet = ("a",)
    k = fm.chain_nfa((0,), alphabet)
    arena, start = fm.selectivity_gadget((), k, k, k)
    got = closure_like(arena, start, 5)
    assert got == {(0,) * i for i in range(6)}


def closure_like(arena, start, max_len):
    out = {()}
    level = [((), start)] if start is not None else []
    for _ in range(max_len):
        nxt = []
        for w, s in level:
            for e in arena.out[s]:
                nxt.append((w + (e.color,), e.dst))
        level = nxt
        out.update(w for w, _ in level)
    return out


def test_selectivity_gadget_empty_k3():
    alphabet = ("a",)
    k = fm.chain_nfa((0,), alphabet)
    empty = nfa(alphabet, 1, [], [0], [])
    with pytest.raises(EmptyLanguageError):
        fm.selectivity_gadget((), k, k, empty)


def test_selectivity_gadget_epsilon_loops_are_stripped():
    # K1 = (aa)* (with the empty word) still contributes its aa-cycles
    alphabet = ("a", "b")
    k1 = nfa(alphabet, 2, [(0, 0, 1), (1, 0, 0)], [0], [0])  # (aa)*
    k3 = nfa(alphabet, 2, [(0, 1, 1), (1, 1, 1)], [0], [1])  # b b*
    arena, start = fm.selectivity_gadget((), k1, k1, k3)
    got = closure_like(arena, start, 5)
    assert (0, 0, 0, 0, 1) in got
    assert (0, 0, 1, 1, 1) in got
    # an odd run of a's never completes a cycle, so it cannot exit
    assert (0, 1) not in got


def test_star_gadget():
    alphabet = ("a", "b")
    k = fm.chain_nfa((0,), alphabet)
    arena, start = fm.star_gadget((1,), k)
    got = closure_like(arena, start, 4)
    assert got == {(), (1,), (1, 0), (1, 0, 0), (1, 0, 0, 0)}
    # the star of {empty word} has no infinite continuation at all
    eps_only = nfa(alphabet, 1, [], [0], [0])
    arena2, start2 = fm.star_gadget((1,), eps_only)
    assert start2 is None


def test_enumerate_small_nfas():
    singles = list(fm.enumerate_small_nfas(("a",), 1))
    assert any(n.language_upto(2) == {(), (0,), (0, 0)} for n in singles)
    assert list(fm.enumerate_small_nfas(("a",), 1, budget=0)) == []
    # over a two-letter alphabet the one-state stream has exactly the four
    # star languages (empty-language automata are skipped)
    pairs = list(fm.enumerate_small_nfas(AB, 1))
    assert len(pairs) == 4
    langs = {frozenset(n.language_upto(1)) for n in pairs}
    assert langs == {
        frozenset({()}),
        frozenset({(), (0,)}),
        frozenset({(), (1,)}),
        frozenset({(), (0,), (1,)}),
    }
    # every yielded automaton is trimmed and non-empty
    for n in fm.enumerate_small_nfas(AB, 2, budget=50):
        assert not n.is_empty()
        assert fm.trim_coaccessible(n).n_states == n.n_states


def test_probe_nfas_shapes():
    probes = probe_nfas(NTT, 3)
    langs = [frozenset(p.language_upto(3)) for p in probes]
    # the settle probes include "one color then settle on another"
    assert frozenset({(2,), (2, 0), (2, 0, 0)}) in langs
    assert all(p.n_states <= 3 for p in probes)


def test_nfa_dot():
    dot = fm.nfa_to_dot(loop_acceptor(AB, 0))
    assert "doublecircle" in dot
