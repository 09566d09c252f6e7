"""Random graphs, lengths and double covers for statistical checks.

Every generator takes an explicit ``random.Random`` so callers control the
seed; the same seed always produces the same objects.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .graph import Graph
from .morphism import DoubleCover
from .poly import LinearForm

__all__ = [
    "random_rational",
    "random_lengths",
    "random_graph",
    "random_free_cover",
    "random_cover",
]


def random_rational(rng: random.Random, lo: int = 1, hi: int = 48,
                    den: int = 6) -> Fraction:
    """A positive rational in [lo/den, hi/den]."""
    return Fraction(rng.randint(lo, hi), den)


def random_lengths(rng: random.Random, g: Graph) -> dict:
    return {e: LinearForm.constant(random_rational(rng))
            for e in g.edge_ends}


def random_graph(rng: random.Random, genus: int, max_vertices: int = 6,
                 numeric: bool = True) -> Graph:
    """A connected multigraph of the given cycle rank: a random tree plus
    `genus` extra edges (loops and parallel edges allowed)."""
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    n = rng.randint(1, max_vertices)
    vertices = {f"u{i}": 0 for i in range(n)}
    names = list(vertices)
    edges: dict = {}
    for i in range(1, n):
        edges[f"e{len(edges)}"] = (names[rng.randrange(i)], names[i])
    for _ in range(genus):
        edges[f"e{len(edges)}"] = (rng.choice(names), rng.choice(names))
    g = Graph(vertices, edges)
    if numeric:
        g = g.with_lengths(random_lengths(rng, g))
    return g


def random_free_cover(rng: random.Random, genus: int,
                      max_vertices: int = 6, numeric: bool = True) -> DoubleCover:
    """A connected free double cover over a random base of the given genus."""
    if genus < 1:
        raise ValueError("a connected free cover needs genus >= 1")
    while True:
        base = random_graph(rng, genus, max_vertices, numeric)
        signs = {e: rng.choice((1, -1)) for e in base.edge_ends}
        cover = DoubleCover(base, signs)
        if cover.is_connected_cover():
            return cover


def random_cover(rng: random.Random, genus: int, max_vertices: int = 6,
                 numeric: bool = True) -> DoubleCover:
    """A connected double cover, possibly dilated: a free cover with, half of
    the time, an extra dilated loop hung on a random base vertex (which
    raises the base cycle rank by one)."""
    free = random_free_cover(rng, genus, max_vertices, numeric)
    if rng.random() < 0.5:
        return free
    base = free.base
    v = rng.choice(sorted(base.vertices))
    eid = f"d{len(base.edge_ends)}"
    vertices = dict(base.vertices)
    edges = dict(base.edge_ends)
    edges[eid] = (v, v)
    lengths = dict(base.lengths)
    if numeric:
        lengths[eid] = LinearForm.constant(random_rational(rng))
    signs = dict(free.signs)
    signs[eid] = "dilated"
    return DoubleCover(Graph(vertices, edges, lengths), signs)
