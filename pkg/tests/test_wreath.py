"""Decorated tree elements, the level functor, and ball agreement."""

from __future__ import annotations

import random

import pytest

from griglab import words as W
from griglab import wreath as Wr
from griglab.marked import (
    FreeGroup,
    GammaFree,
    MatrixHGroup,
    TrivialGroup,
    product,
)

OM = W.FIRST_OMEGA


def closure(g, cap=100000):
    seen = {g.identity()}
    frontier = [g.identity()]
    while frontier:
        nxt = []
        for x in frontier:
            for i in range(g.k):
                y = g.mul(x, g.generator(i))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        assert len(seen) <= cap, "closure larger than expected"
    return seen


def rand_elem(rng, g, n=10):
    return g.evaluate([rng.randrange(4) for _ in range(rng.randrange(0, n))])


# ------------------------------------------------------------ raw elements


def test_interning_makes_equal_words_identical():
    g = Wr.grig(OM, 3)
    x = g.evaluate("abab")
    y = g.evaluate("abab")
    assert x is y


def test_group_axioms_on_decorated_elements():
    rng = random.Random(3)
    for g in (Wr.grig(OM, 3), Wr.iterate_functor(OM, 2, MatrixHGroup())):
        e = g.identity()
        for _ in range(60):
            x, y, z = (rand_elem(rng, g) for _ in range(3))
            assert g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z))
            assert g.mul(x, g.inv(x)) == e
            assert g.mul(g.inv(x), x) == e
            assert g.mul(x, e) == x


def test_generators_are_involutions_with_klein_relation():
    for base in (TrivialGroup(), MatrixHGroup(), GammaFree()):
        for x in (0, 1, 2):
            g = Wr.apply_functor(x, base)
            e = g.identity()
            for i in range(4):
                s = g.generator(i)
                assert g.mul(s, s) == e
            assert g.evaluate("bcd") == e
            assert g.mul(g.generator(1), g.generator(2)) == g.generator(3)


def test_functor_rejects_wrong_marking():
    with pytest.raises(ValueError):
        Wr.apply_functor(0, FreeGroup(2))
    with pytest.raises(ValueError):
        Wr.apply_functor(3, TrivialGroup())


def test_depth_and_letters_track_base():
    H = MatrixHGroup()
    g1 = Wr.apply_functor(2, H)
    assert g1.depth == 1 and g1.omega_prefix == (2,)
    g2 = Wr.apply_functor(0, g1)
    assert g2.depth == 2 and g2.omega_prefix == (0, 2)
    t = Wr.iterate_functor(OM, 3, H)
    assert t.depth == 3 and t.omega_prefix == (0, 1, 2)


# ------------------------------------------------------------ the action


def test_action_of_the_swap_generator():
    g = Wr.grig(OM, 3)
    a = g.generator(0)
    assert Wr.act(a, (0, 1, 1)) == (1, 1, 1)
    assert Wr.act(a, (1, 0, 0)) == (0, 0, 0)
    assert Wr.leaf_permutation(a, 1) == (1, 0)


def test_action_is_a_homomorphism_to_permutations():
    rng = random.Random(9)
    g = Wr.grig(OM, 3)
    for _ in range(40):
        x, y = rand_elem(rng, g), rand_elem(rng, g)
        px = Wr.leaf_permutation(x, 3)
        py = Wr.leaf_permutation(y, 3)
        pxy = Wr.leaf_permutation(g.mul(x, y), 3)
        # left action: (xy) acts as: apply y, then x
        composed = tuple(px[py[v]] for v in range(8))
        assert pxy == composed


def test_level_three_action_is_transitive():
    g = Wr.grig(OM, 3)
    perms = [Wr.leaf_permutation(g.generator(i), 3) for i in range(4)]
    orbit = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for p in perms:
                if p[v] not in orbit:
                    orbit.add(p[v])
                    nxt.append(p[v])
        frontier = nxt
    assert orbit == set(range(8))


# ------------------------------------------------------------ portraits


def test_portrait_bits():
    g = Wr.grig(OM, 2)
    assert Wr.portrait(g.identity()).is_trivial
    pa = Wr.portrait(g.generator(0))
    assert pa.bits == 1 and pa.bit(0, 0) == 1 and pa.bit(1, 0) == 0
    with pytest.raises(ValueError):
        pa.bit(2, 0)
    rt = Wr.Portrait.from_json(pa.to_json())
    assert rt == pa


def test_portrait_group_sizes():
    # the first four portrait groups have known orders
    for lvl, size in ((1, 2), (2, 8), (3, 128), (4, 4096)):
        assert len(closure(Wr.grig(OM, lvl))) == size


def test_generator_collapse_at_low_levels():
    g2 = Wr.grig(OM, 2)
    assert g2.generator(3) == g2.identity()  # d dies two levels down
    assert g2.generator(1) == g2.generator(2)
    g3 = Wr.grig(OM, 3)
    gens = g3.generators()
    assert len(set(gens)) == 4
    assert g3.identity() not in gens


def test_truncation_is_a_quotient():
    # triviality at a deeper level forces triviality at a shallower one
    rng = random.Random(31)
    g4, g3 = Wr.grig(OM, 4), Wr.grig(OM, 3)
    for _ in range(200):
        w = [rng.randrange(4) for _ in range(rng.randrange(0, 14))]
        if g4.evaluate(w) == g4.identity():
            assert g3.evaluate(w) == g3.identity()
    assert g3.evaluate("d") != g3.identity()


# ------------------------------------------------------------ eta words


def test_eta_trivial_one_level_deeper_and_in_portrait_groups():
    H = MatrixHGroup()
    for k in range(3):
        w = W.eta_word(OM, k)
        deeper = Wr.iterate_functor(OM, k + 1, H)
        assert deeper.evaluate(w) == deeper.identity()
        for j in (k, k + 1, k + 3):
            gj = Wr.grig(OM, max(j, 1))
            assert gj.evaluate(w) == gj.identity()


def test_eta_survives_at_its_own_level_with_single_leaf():
    H = MatrixHGroup()
    for k in (1, 2):
        w = W.eta_word(OM, k)
        gk = Wr.iterate_functor(OM, k, H)
        v = gk.evaluate(w)
        assert v != gk.identity()
        assert Wr.portrait(v).is_trivial
        nt = Wr.nontrivial_leaves(v, H.identity())
        assert len(nt) == 1
        addr, leafval = nt[0]
        assert addr == (1,) * k
        expected = H.evaluate(W.phi_twist(W.base_relator(), -OM.letter(k + 1)))
        assert leafval == expected


def test_eta_level_zero_in_matrix_group():
    H = MatrixHGroup()
    w = W.eta_word(OM, 0)
    assert H.evaluate(w) != H.identity()


# ------------------------------------------------------------ agreement


def test_agreement_radius_identical_groups():
    g = Wr.grig(OM, 3)
    assert Wr.ball_agreement_radius(g, g, 5) == 5


def test_agreement_radius_detects_generator_collapse():
    assert Wr.ball_agreement_radius(Wr.grig(OM, 2), Wr.grig(OM, 7), 4) == 0


def test_agreement_radius_on_cyclic_groups():
    from griglab.marked import CyclicGroup

    assert Wr.ball_agreement_radius(CyclicGroup(4), CyclicGroup(8), 5) == 1
    assert Wr.ball_agreement_radius(CyclicGroup(9), CyclicGroup(9), 6) == 6


def test_agreement_radius_rejects_mismatched_markings():
    with pytest.raises(ValueError):
        Wr.ball_agreement_radius(GammaFree(), FreeGroup(2), 2)


def test_contraction_at_small_depth():
    H = MatrixHGroup()
    for m, M in ((1, 5), (2, 6)):
        n = 2**m - 1
        r = Wr.ball_agreement_radius(
            Wr.iterate_functor(OM, m, H), Wr.grig(OM, M), n
        )
        assert r == n


def test_agreement_with_deep_portrait_group_nondecreasing_in_tower():
    H = MatrixHGroup()
    gm = Wr.grig(OM, 7)
    prev = -1
    for i in range(4):
        t = Wr.iterate_functor(OM, i, H) if i else H
        r = Wr.ball_agreement_radius(t, gm, 4)
        assert r >= prev
        prev = r
    assert prev == 4


def test_gamma_free_matches_small_balls():
    # the involutive base covers every pattern until the first relation
    r = Wr.ball_agreement_radius(GammaFree(), Wr.grig(OM, 7), 4)
    assert r == 3


def test_product_compatibility_of_the_functor():
    H = MatrixHGroup()
    G2 = Wr.grig(OM, 2)
    for x in (0, 1, 2):
        lhs = Wr.apply_functor(x, product([H, G2]))
        rhs = product([Wr.apply_functor(x, H), Wr.apply_functor(x, G2)])
        assert Wr.ball_agreement_radius(lhs, rhs, 3) == 3
