"""Graphic and signed (cographic) matroids of double covers."""

from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FREE_COVER_FIXTURES, load_cover, load_graph
from tropprym.matroid import (
    GraphicMatroidView,
    SignedMatroidView,
    is_unbalanced,
    kirchhoff_count,
    spanning_trees,
)
from tropprym.poly import Polynomial
from tropprym.randomgen import random_cover, random_graph


def test_theta_spanning_trees_are_single_edges():
    trees = spanning_trees(load_graph("theta"))
    assert sorted(trees, key=sorted) == [
        frozenset({"a"}), frozenset({"b"}), frozenset({"c"})
    ]


def test_loop_spanning_tree_is_empty():
    from tropprym.graph import Graph

    g = Graph({"v": 0}, {"e": ("v", "v")})
    assert spanning_trees(g) == [frozenset()]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 3))
def test_spanning_tree_count_matches_kirchhoff(seed, genus):
    g = random_graph(random.Random(seed), genus, max_vertices=5)
    assert len(spanning_trees(g)) == kirchhoff_count(g)


def test_dumbbell_cographic_bases():
    view = SignedMatroidView(load_cover("dumbbell_cover"))
    got = {frozenset(b): (c, i) for b, c, i in view.cographic_bases()}
    assert got == {
        frozenset({"f"}): (2, 4),
        frozenset({"g1"}): (1, 1),
        frozenset({"g2"}): (1, 1),
    }


def test_two_loops_cographic_bases():
    view = SignedMatroidView(load_cover("two_loops_cover"))
    got = {frozenset(b): i for b, _, i in view.cographic_bases()}
    assert got == {frozenset({"g1"}): 1, frozenset({"g2"}): 1}


def test_fs2_contracted_unique_basis_index_4():
    # ground set of size t: the single basis is everything, two components
    view = SignedMatroidView(load_cover("fs2_contracted_cover"))
    assert [(set(b), c, i) for b, c, i in view.cographic_bases()] == [
        ({"e", "f"}, 2, 4)
    ]


def test_dumbbell_edge_indices():
    view = SignedMatroidView(load_cover("dumbbell_cover"))
    assert view.edge_index("f") == 4
    assert view.edge_index("g1") == 1
    assert view.edge_index("g2") == 1


def test_theta_odd_edge_indices_all_one():
    view = SignedMatroidView(load_cover("theta_odd_cover"))
    assert [view.edge_index(e) for e in ("a", "b", "c")] == [1, 1, 1]


def test_dumbbell_independent_index():
    cover = load_cover("dumbbell_cover")
    view = SignedMatroidView(cover)
    lf = {e: Polynomial.coerce(form) for e, form in cover.base.lengths.items()}

    weight, index = view.independent_index(frozenset({"g1"}))
    assert (weight, index) == (lf["f"] * lf["g2"], 4)
    weight, index = view.independent_index(frozenset({"g2"}))
    assert (weight, index) == (lf["f"] * lf["g1"], 4)
    weight, index = view.independent_index(frozenset({"f"}))
    assert (weight, index) == (lf["g1"] * lf["g2"], 1)


def test_fs_sets_on_fixtures():
    assert SignedMatroidView(load_cover("theta_odd_cover")).fs_sets(2) == []
    fs2 = SignedMatroidView(load_cover("fs2_cover")).fs_sets(2)
    assert fs2 == [frozenset({"e", "f"})]
    prism = SignedMatroidView(load_cover("prism_cover"))
    assert prism.fs_sets(2) == []
    assert prism.fs_sets(3) == [frozenset({"r1", "r2", "r3"})]


def test_is_unbalanced_examples():
    cover = load_cover("dumbbell_cover")
    # odd loop; even cycle is exercised through theta_odd below
    assert cover.is_unbalanced(["u1"], ["g1"])
    theta_odd = load_cover("theta_odd_cover")
    assert theta_odd.is_unbalanced(["u", "w"], ["a", "c"])
    assert not theta_odd.is_unbalanced(["u", "w"], ["a", "b"])
    assert not theta_odd.is_unbalanced(["u", "w"], ["a"])


def test_unbalanced_free_function_matches_method():
    cover = load_cover("fs2_cover")
    view = SignedMatroidView(cover)
    for vs, es in view.components_removed(["e", "f"]):
        assert is_unbalanced(cover, vs, es) == cover.is_unbalanced(vs, es)


@pytest.mark.parametrize("name", FREE_COVER_FIXTURES)
def test_duality_graphic_iff_cocomplement(name):
    cover = load_cover(name)
    view = SignedMatroidView(cover)
    ground = set(view.ground)
    t = view.t
    cobases = {frozenset(b) for b, _, _ in view.cographic_bases()}
    gbases = {frozenset(b) for b, _ in view.graphic_bases()}
    for subset in map(frozenset, combinations(sorted(ground), t)):
        complement = frozenset(ground) - subset
        assert (subset in cobases) == (complement in gbases)


@pytest.mark.parametrize("name", FREE_COVER_FIXTURES)
def test_cographic_basis_size_is_torus_rank(name):
    cover = load_cover(name)
    view = SignedMatroidView(cover)
    for b, _, _ in view.cographic_bases():
        assert len(b) == cover.torus_rank()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9), st.integers(2, 4))
def test_random_cover_duality_and_rank(seed, genus):
    cover = random_cover(random.Random(seed), genus)
    view = SignedMatroidView(cover)
    t = view.t
    assert t == cover.torus_rank()
    cobases = {frozenset(b) for b, _, _ in view.cographic_bases()}
    gbases = {frozenset(b) for b, _ in view.graphic_bases()}
    assert {frozenset(view.ground) - b for b in cobases} == gbases
    for b in cobases:
        assert len(b) == t


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**9))
def test_fs_sets_form_antichain(seed):
    cover = random_cover(random.Random(seed), 4)
    view = SignedMatroidView(cover)
    all_sets = [s for n in (2, 3) for s in view.fs_sets(n)]
    for a in all_sets:
        for b in all_sets:
            assert not (a < b)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**9), st.integers(2, 4))
def test_fs_sets_match_matroidal_characterization(seed, genus):
    cover = random_cover(random.Random(seed), genus)
    view = SignedMatroidView(cover)
    for n in (2, 3):
        assert view.fs_sets(n) == view.fs_sets_matroidal(n)


def test_graphic_view_bases_on_theta():
    view = GraphicMatroidView(load_graph("theta"))
    assert view.rank == 1
    assert sorted(view.bases(), key=sorted) == [
        frozenset({"a"}), frozenset({"b"}), frozenset({"c"})
    ]
