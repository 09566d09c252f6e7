"""Metric multigraph core: genus accounting, contraction, stabilization,
canonical codes."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_graph
from tropprym.graph import Graph, GraphError
from tropprym.poly import LinearForm
from tropprym.randomgen import random_graph


def test_theta_genus():
    assert load_graph("theta").genus() == 2


def test_vertex_genus_counts():
    g = Graph({"v": 1}, {"e": ("v", "v")}, {"e": LinearForm.variable("e")})
    assert g.genus() == 2
    assert g.b1() == 1


def test_contract_theta_edge_merges_vertices():
    theta = load_graph("theta")
    c = theta.contract(["a"])
    assert len(c.vertices) == 1
    assert len(c.edge_ends) == 2
    assert all(c.is_loop(e) for e in c.edge_ends)
    assert c.genus() == 2


def test_contract_loop_raises_vertex_genus():
    g = Graph({"v": 0, "w": 0}, {"l": ("v", "v"), "e": ("v", "w")})
    c = g.contract(["l"])
    assert set(c.edge_ends) == {"e"}
    assert sum(c.vertices.values()) == 1
    assert c.genus() == g.genus() == 1


def test_stabilize_merges_series_edges():
    # theta with one subdivided edge: lengths a1 + a2 merge into one edge
    g = Graph(
        {"u": 0, "w": 0, "m": 0},
        {
            "a1": ("u", "m"),
            "a2": ("m", "w"),
            "b": ("u", "w"),
            "c": ("u", "w"),
        },
    )
    s = g.stabilize()
    assert len(s.vertices) == 2
    assert len(s.edge_ends) == 3
    merged = [f for f in s.lengths.values()
              if f == g.lengths["a1"] + g.lengths["a2"]]
    assert len(merged) == 1
    assert s.canonical_code() == load_graph("theta").canonical_code()


def test_canonical_code_distinguishes_theta_from_dumbbell():
    assert (load_graph("theta").canonical_code()
            != load_graph("dumbbell").canonical_code())


def test_canonical_code_ignores_relabeling():
    theta = load_graph("theta")
    relabeled = Graph(
        {"x1": 0, "x2": 0},
        {"p": ("x1", "x2"), "q": ("x2", "x1"), "r": ("x1", "x2")},
    )
    assert theta.canonical_code() == relabeled.canonical_code()


def test_invalid_genus_rejected():
    with pytest.raises(GraphError):
        Graph({"v": -1}, {})


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 4))
def test_euler_characteristic_sum(seed, genus):
    g = random_graph(random.Random(seed), genus)
    assert g.euler_char_total() == 2 - 2 * g.genus()
    assert g.euler_char_total() == sum(g.euler_char(v) for v in g.vertices)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 4), st.integers(0, 10**6))
def test_contraction_preserves_genus(seed, genus, pick):
    g = random_graph(random.Random(seed), genus)
    edges = g.edge_vector()
    rng = random.Random(pick)
    subset = [e for e in edges if rng.random() < 0.5]
    assert g.contract(subset).genus() == g.genus()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(2, 4))
def test_stabilize_idempotent(seed, genus):
    g = random_graph(random.Random(seed), genus)
    s = g.stabilize()
    t = s.stabilize()
    assert s.canonical_code(with_lengths=True) == t.canonical_code(with_lengths=True)
    assert s.is_stable()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 4), st.integers(0, 10**6))
def test_canonical_code_invariant_under_relabeling(seed, genus, shuffle_seed):
    g = random_graph(random.Random(seed), genus)
    rng = random.Random(shuffle_seed)
    vperm = {v: f"rv{i}" for i, v in enumerate(
        sorted(g.vertices, key=lambda v: rng.random()))}
    eperm = {e: f"re{i}" for i, e in enumerate(
        sorted(g.edge_ends, key=lambda e: rng.random()))}
    flipped = {
        eperm[e]: ((vperm[u], vperm[w]) if rng.random() < 0.5
                   else (vperm[w], vperm[u]))
        for e, (u, w) in g.edge_ends.items()
    }
    h = Graph(
        {vperm[v]: gen for v, gen in g.vertices.items()},
        flipped,
        {eperm[e]: form for e, form in g.lengths.items()},
    )
    assert g.canonical_code() == h.canonical_code()
