"""Truncated family members, separation witnesses, kernel sections."""

from __future__ import annotations

import random

import pytest

from griglab import family as F
from griglab.marked import product
from griglab.words import FIRST_OMEGA as OM
from griglab.words import OmegaWord, eta_word
from griglab.wreath import ball_agreement_radius, grig


def test_activation_margin():
    assert F.activation_margin(OM) == 3
    # a sequence that starves d for three letters from some shift
    assert F.activation_margin(OmegaWord("", "0001")) >= 4
    # constant sequences starve forever; the starved letter needs no margin
    assert F.activation_margin(OmegaWord("", "0")) == 2


def test_truncation_level_values():
    assert [F.truncation_level(n, OM) for n in (1, 3, 7, 8)] == [5, 6, 7, 8]
    assert F.truncation_level(0, OM) == 1
    with pytest.raises(ValueError):
        F.truncation_level(-1, OM)


def test_gjspec_normalization_and_json():
    s = F.GJSpec(OM, (3, 1, 3), 8)
    assert s.J == (1, 3)
    data = s.to_json()
    assert data == {
        "omega": {"pre": "", "period": "012"},
        "J": [1, 3],
        "radius": 8,
    }
    assert F.GJSpec.from_json(data) == s
    with pytest.raises(ValueError):
        F.GJSpec(OM, (0, 2), 4)


def test_build_structure():
    g = F.build_GJ(F.GJSpec(OM, (1, 3), 3))
    assert g.truncation == 6
    assert len(g.factors) == 7
    assert g.component_labels[0] == "level 1 decorated"
    assert g.component_labels[1] == "level 2 plain"
    assert g.component_labels[2] == "level 3 decorated"
    assert g.component_labels[-1] == "tail"
    with pytest.raises(ValueError):
        F.build_GJ(F.GJSpec(OmegaWord("", "1"), (), 2))


def test_continuity_probe():
    # levels outside the truncation window cannot affect radius-n balls
    for J, Jcut, n in (((1, 30), (1,), 3), ((9, 40), (), 2)):
        ga = F.build_GJ(F.GJSpec(OM, J, n))
        gb = F.build_GJ(F.GJSpec(OM, Jcut, n))
        assert ball_agreement_radius(ga, gb, n) == n


def test_empty_family_member_matches_tail():
    n = 3
    g = F.build_GJ(F.GJSpec(OM, (), n))
    tail = grig(OM, g.truncation)
    assert ball_agreement_radius(g, tail, n) == n


def test_monotone_surjection_structure():
    rng = random.Random(17)
    small = F.build_GJ(F.GJSpec(OM, (1,), 2))
    big = F.build_GJ(F.GJSpec(OM, (1, 2), 2))
    for _ in range(120):
        w = [rng.randrange(4) for _ in range(rng.randrange(0, 12))]
        if big.evaluate(w) == big.identity():
            assert small.evaluate(w) == small.identity()


def test_chabauty_floor():
    # dropping a deeper level perturbs balls only beyond radius 2^m - 1
    prev = -1
    for m, n in ((1, 1), (2, 3)):
        ga = F.build_GJ(F.GJSpec(OM, (m,), n))
        gb = F.build_GJ(F.GJSpec(OM, (), n))
        r = ball_agreement_radius(ga, gb, n)
        assert r >= min(2**m - 1, n)
        assert r >= prev
        prev = r


def test_witness_reports():
    rep = F.separation_witness(OM, (), (1,), 1)
    assert rep["ok"]
    assert rep["word_length"] == 128
    assert rep["nontrivial_at_level_i"]
    assert rep["portrait_trivial_at_level_i"]
    assert rep["trivial_one_level_deeper"]
    assert len(rep["witness_leaves"]) == 1
    assert rep["witness_leaves"][0]["address"] == "1"

    rep = F.separation_witness(OM, (1,), (1, 2), 2)
    assert rep["ok"]
    assert rep["lower_decorated_nontrivial_info"] == {1: True}
    assert rep["leaf_matches_twisted_relator"]

    rep = F.separation_witness(OM, (), (2,), 2)
    assert rep["ok"]
    assert all(rep["plain_components_trivial"].values())


def test_witness_preconditions():
    with pytest.raises(ValueError):
        F.separation_witness(OM, (1,), (1,), 1)
    with pytest.raises(ValueError):
        F.separation_witness(OM, (1,), (1, 2), 1)


def test_kernel_section_small_cases():
    gam = product([grig(OM, 3), grig(OM, 1)], ["finite", "tail"])
    ks = F.finite_kernel_section(gam, 2)
    assert gam.evaluate("d") in ks
    for x in ks:
        assert F.is_kernel_section_element(gam, x)

    g0 = F.build_GJ(F.GJSpec(OM, (), 2))
    assert F.finite_kernel_section(g0, 2) == set()


def test_trivial_tail_section_is_all_nontrivial_elements():
    from griglab.marked import TrivialGroup
    from griglab.cayley import bfs_ball

    gam = product([grig(OM, 2), TrivialGroup()], ["finite", "tail"])
    ks = F.finite_kernel_section(gam, 3)
    ball = bfs_ball(gam, 3)
    nontrivial = {x for x in ball.vertices if x != gam.identity()}
    assert ks == nontrivial


def test_eta_element_is_kernel_section_member():
    g1 = F.build_GJ(F.GJSpec(OM, (1,), 2))
    x = g1.evaluate(eta_word(OM, 1))
    assert F.is_kernel_section_element(g1, x)
