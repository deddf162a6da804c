import itertools
import random
from fractions import Fraction

import pytest

import fmgames as fm
from fmgames import fixtures
from fmgames.errors import NotOnePlayerError, NotQualitativeError, UnknownColorError

from helpers import all_lassos, gr2, random_arena, random_color_lasso

NTT = ("n", "t1", "t2")
Z = ("-1", "0", "1")


def cl(pre, cyc):
    return fm.ColorLasso(tuple(pre), tuple(cyc))


def builtin_relations(alphabet=("a", "b", "c")):
    return [
        fm.reachability(alphabet, (False, True, False)),
        fm.gen_reach2(alphabet, (False, True, False), (False, False, True)),
        fm.parity(alphabet, (0, 1, 2)),
        fm.mean_payoff(alphabet, (-1, 0, 2)),
        fm.diverge_or_zero(alphabet, (-1, 0, 1)),
    ]


# ---------------------------------------------------------------------------
# compare


def test_mean_payoff_compare_examples():
    rel = fm.mean_payoff(Z, (-1, 0, 1))
    one, zero_two = cl((), ("1",)), cl((), ("0", "2"))
    # encode color indices directly: weights (-1, 0, 1)
    assert rel.compare(cl((), (2,)), cl((), (1, 2))) == 1  # mean 1 vs 1/2
    assert rel.compare(cl((), (2,)), cl((), (2, 2))) == 0  # both mean 1
    # lim inf ignores finite prefixes
    assert rel.compare(cl((2,), (1,)), cl((), (1,))) == 0
    assert rel.value(cl((), (1, 2))) == Fraction(1, 2)


def test_gen_reach2_compare_example():
    rel = fm.gen_reach2(NTT, (False, True, False), (False, False, True))
    left = cl((1, 2), (0,))  # t1 t2 n^w: both targets
    right = cl((0,), (0,))  # n^w
    assert rel.compare(left, right) == 1
    assert rel.compare(right, left) == -1


def test_compare_unknown_color():
    rel = fm.mean_payoff(("a",), (1,))
    with pytest.raises(UnknownColorError):
        rel.compare(cl((), (3,)), cl((), (0,)))


def test_compare_total_preorder_on_samples():
    rng = random.Random(0)
    for rel in builtin_relations():
        lassos = [random_color_lasso(rng, 3) for _ in range(12)]
        triples = list(itertools.product(lassos, repeat=3))[:1100]
        assert len(triples) >= 1000
        for x, y, z in triples:
            cxy, cyx = rel.compare(x, y), rel.compare(y, x)
            assert cxy == -cyx  # totality with a consistent order
            if cxy <= 0 and rel.compare(y, z) <= 0:
                assert rel.compare(x, z) <= 0  # transitivity


def test_compare_invariant_under_representation():
    rng = random.Random(1)
    for rel in builtin_relations():
        for _ in range(200):
            l = random_color_lasso(rng, 3)
            variant = fm.ColorLasso(l.prefix + l.cycle, l.cycle * 2)
            assert rel.compare(l, variant) == 0


def test_qualitative_two_classes():
    rng = random.Random(2)
    for rel in builtin_relations():
        if not rel.is_qualitative():
            continue
        lassos = [random_color_lasso(rng, 3) for _ in range(40)]
        winners = [l for l in lassos if fm.lasso_in_win(rel, l)]
        losers = [l for l in lassos if not fm.lasso_in_win(rel, l)]
        for a, b in itertools.product(winners, winners):
            assert rel.compare(a, b) == 0
        for a, b in itertools.product(losers, losers):
            assert rel.compare(a, b) == 0
        if winners and losers:
            assert rel.compare(losers[0], winners[0]) == -1


# ---------------------------------------------------------------------------
# lasso_in_win


def test_diverge_or_zero_membership():
    rel = fixtures.zero_reset_pref()  # colors ("-1", "1")
    up, down = 1, 0
    assert fm.lasso_in_win(rel, cl((), (up,)))  # totals grow forever
    assert fm.lasso_in_win(rel, cl((up,), (down, up)))  # totals 1,0,1,0,...
    assert not fm.lasso_in_win(rel, cl((up,), (up, down)))  # totals 1,2,1,2,...
    # cycle sum 0 with no zero inside the periodic part loses
    rel3 = fm.diverge_or_zero(Z, (-1, 0, 1))
    assert not fm.lasso_in_win(rel3, cl((2,), (1,)))  # total pinned at 1
    assert fm.lasso_in_win(rel3, cl((), (1,)))  # total pinned at 0


def test_lasso_in_win_requires_qualitative():
    with pytest.raises(NotQualitativeError):
        fm.lasso_in_win(fm.mean_payoff(("a",), (1,)), cl((), (0,)))


# ---------------------------------------------------------------------------
# sup_play


def test_sup_mean_payoff_on_duel():
    a = fm.as_one_player(fixtures.plus_minus_loops())
    rel = fm.mean_payoff(a.alphabet, (-1, 1))
    res = rel.sup_play(a, a.state_index("s1"))
    assert rel.value(res.colors) == 1  # the +1 self-loop
    assert res.lasso.cycle == (fm.Edge(1, 1, 1),)


def test_sup_requires_one_player():
    rel = fm.mean_payoff(("-1", "1"), (-1, 1))
    with pytest.raises(NotOnePlayerError):
        rel.sup_play(fixtures.plus_minus_loops(), 0)


def test_sup_with_prefix_on_settle_arena():
    # closure of t1 n*: after a t2 prefix the continuation wins
    n = fm.Nfa(2, NTT, ((0, 1, 1), (1, 0, 1)), (0,), (1,))
    arena, starts, _ = fm.arena_of_nfa(fm.trim_coaccessible(n))
    rel = gr2_ntt()
    res = rel.sup_play(arena, starts[0], prefix=(2,))
    assert fm.lasso_in_win(rel, res.colors)
    res2 = rel.sup_play(arena, starts[0])
    assert not fm.lasso_in_win(rel, res2.colors)


def gr2_ntt():
    return fm.gen_reach2(NTT, (False, True, False), (False, False, True))


def test_sup_empty_play_set():
    chain = fm.chain_nfa((0, 1), ("a", "b"))
    arena, starts, _ = fm.arena_of_nfa(chain)
    rel = fm.reachability(("a", "b"), (True, False))
    assert starts == ()
    assert fm.sup_of(rel, fm.PlaySet(arena, starts)).is_empty


def test_sup_dominates_all_lassos():
    # per built-in: the returned supremum weakly dominates every lasso of the arena
    rng = random.Random(5)
    for rel in builtin_relations():
        for _ in range(100):
            a = random_arena(rng, 4, 3, 2, one_player=True)
            for s in range(a.n_states):
                sup = rel.sup_play(a, s)
                for lasso in all_lassos(a, s, a.n_states, a.n_states):
                    assert rel.compare(lasso.colors().canonical(), sup.colors) <= 0
        inv = rel.inverse()
        for _ in range(20):
            a = random_arena(rng, 4, 3, 2, one_player=True)
            for s in range(a.n_states):
                sup = inv.sup_play(a, s)
                for lasso in all_lassos(a, s, a.n_states, a.n_states):
                    assert inv.compare(lasso.colors().canonical(), sup.colors) <= 0


def test_sup_lasso_is_realizable():
    rng = random.Random(6)
    for rel in builtin_relations():
        for _ in range(40):
            a = random_arena(rng, 4, 3, 2, one_player=True)
            for s in range(a.n_states):
                res = rel.sup_play(a, s)
                assert res.lasso.start == s
                for e in res.lasso.prefix + res.lasso.cycle:
                    assert e in a.edge_set


# ---------------------------------------------------------------------------
# set comparisons


def settle_nfa(first, loop):
    return fm.Nfa(2, NTT, ((0, first, 1), (1, loop, 1)), (0,), (1,))


def test_set_comparisons_on_closures():
    rel = gr2_ntt()
    # [t1 . t2 n*] (winning) vs [t1 . t1 n*] (losing)
    win_arena, win_start = fm.concat_gadget((1,), settle_nfa(2, 0))
    lose_arena, lose_start = fm.concat_gadget((1,), settle_nfa(1, 0))
    win = fm.PlaySet(win_arena, (win_start,))
    lose = fm.PlaySet(lose_arena, (lose_start,))
    assert not fm.set_lt(rel, win, lose)
    assert fm.set_lt(rel, lose, win)
    assert fm.set_leq(rel, lose, win) and not fm.set_leq(rel, win, lose)


def test_set_comparisons_identical_sides():
    rel = gr2_ntt()
    arena, start = fm.concat_gadget((1,), settle_nfa(2, 0))
    ps = fm.PlaySet(arena, (start,))
    assert fm.set_leq(rel, ps, ps) and not fm.set_lt(rel, ps, ps)


def test_set_comparisons_empty_sides():
    rel = gr2_ntt()
    arena, start = fm.concat_gadget((1,), settle_nfa(2, 0))
    nonempty = fm.PlaySet(arena, (start,))
    empty = fm.PlaySet(arena, ())
    assert fm.set_leq(rel, empty, nonempty)
    assert fm.set_lt(rel, empty, nonempty)
    assert not fm.set_lt(rel, nonempty, empty)
    assert not fm.set_lt(rel, empty, empty)
    assert fm.set_leq(rel, empty, empty)


# ---------------------------------------------------------------------------
# inverse


def test_double_inverse_is_identity():
    rng = random.Random(7)
    for rel in builtin_relations():
        twice = rel.inverse().inverse()
        for _ in range(100):
            a, b = random_color_lasso(rng, 3), random_color_lasso(rng, 3)
            assert rel.compare(a, b) == twice.compare(a, b)


def test_mean_payoff_inverse_flips():
    rel = fm.mean_payoff(Z, (-1, 0, 1)).inverse()
    assert rel.compare(cl((), (0,)), cl((), (2,))) == 1  # -1 beats +1 inverted


def test_inverse_sup_finds_losing_lasso():
    rel = gr2_ntt()
    a = fixtures.two_target_loop()
    res = rel.inverse().sup_play(a, a.state_index("s1"))
    assert not fm.lasso_in_win(rel, res.colors)
    # winning set membership is unaffected by the inversion
    assert fm.lasso_in_win(rel.inverse(), cl((1, 2), (0,)))
