"""Graphic and signed (co)graphic matroids.

The graphic matroid of a graph has the spanning trees as bases.  A double
cover adds a second structure on the undilated edges: a set F is independent
for the *signed cographic* matroid when every component of the base minus F
is unbalanced (has connected preimage), and the *signed graphic* matroid is
its dual.  Bases carry an index 4^(c-1) read off the component count of the
complement, and edges/near-bases carry derived indices used by the moment
formulas.  Ground sets stay small (<= 12 edges), so enumeration is exhaustive
by design.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .graph import EdgeId, Graph, GraphError, VertexId, idkey
from .morphism import CoverError, DoubleCover
from .poly import Polynomial


def _set_key(edges: Iterable[EdgeId]) -> tuple:
    return tuple(sorted(edges, key=idkey))


def _sorted_sets(sets: Iterable[frozenset]) -> list[frozenset]:
    return sorted(sets, key=_set_key)


# ---------------------------------------------------------------------------
# graphic matroid of a plain graph
# ---------------------------------------------------------------------------


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


def is_acyclic(g: Graph, edges: Iterable[EdgeId]) -> bool:
    uf = _UnionFind(g.vertices)
    for e in edges:
        u, v = g.edge_ends[e]
        if u == v or not uf.union(u, v):
            return False
    return True


def graphic_rank(g: Graph) -> int:
    return len(g.vertices) - len(g.components())


def kirchhoff_count(g: Graph) -> int:
    """Number of spanning trees via the reduced Laplacian determinant."""
    verts = g.vertex_list()
    if len(verts) == 1:
        return 1
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    lap = [[Fraction(0)] * n for _ in range(n)]
    for e, (u, v) in g.edge_ends.items():
        if u == v:
            continue
        iu, iv = index[u], index[v]
        lap[iu][iu] += 1
        lap[iv][iv] += 1
        lap[iu][iv] -= 1
        lap[iv][iu] -= 1
    size = n - 1
    mat = [row[:size] for row in lap[:size]]
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if mat[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = Fraction(1) / mat[col][col]
        for r in range(col + 1, size):
            factor = mat[r][col] * inv
            if factor:
                for c in range(col, size):
                    mat[r][c] -= factor * mat[col][c]
    if det.denominator != 1:
        raise GraphError("non-integer spanning tree count")
    return int(det)


def spanning_trees(g: Graph) -> list[frozenset]:
    """Edge sets of all spanning trees, checked against Kirchhoff's count."""
    if not g.is_connected():
        raise GraphError("disconnected")
    rank = len(g.vertices) - 1
    edges = g.edge_vector()
    out = []
    for combo in combinations(edges, rank):
        if is_acyclic(g, combo):
            out.append(frozenset(combo))
    expected = kirchhoff_count(g)
    if len(out) != expected:
        raise GraphError(
            f"spanning tree scan found {len(out)}, Kirchhoff expects {expected}"
        )
    return _sorted_sets(out)


def independent_sets_k(g: Graph, k: int) -> list[frozenset]:
    """All acyclic edge sets of size k."""
    rank = graphic_rank(g)
    if k < 0 or k > rank:
        raise GraphError(f"independent-set size {k} out of range 0..{rank}")
    out = []
    for combo in combinations(g.edge_vector(), k):
        if is_acyclic(g, combo):
            out.append(frozenset(combo))
    return _sorted_sets(out)


class GraphicMatroidView:
    """Eager basis list plus on-demand sized independent sets."""

    __slots__ = ("graph", "rank", "bases", "_independent_k")

    def __init__(self, graph: Graph):
        self.graph = graph
        self.rank = len(graph.vertices) - 1
        self.bases = spanning_trees(graph)
        self._independent_k: dict[int, list[frozenset]] = {}

    def independent_k(self, k: int) -> list[frozenset]:
        if k not in self._independent_k:
            self._independent_k[k] = independent_sets_k(self.graph, k)
        return self._independent_k[k]


# ---------------------------------------------------------------------------
# signed matroids of a double cover
# ---------------------------------------------------------------------------


class SignedMatroidView:
    """Signed cographic matroid M* and its dual M on the undilated edges.

    Cographic independence: every component of base minus F is unbalanced.
    Bases of M are complements of bases of M*; the index of either is
    4^(c-1) with c the component count of base minus the cographic basis.
    """

    __slots__ = (
        "cover",
        "ground",
        "t",
        "v_ud",
        "_cographic",
        "_graphic",
        "_unbalanced_cache",
    )

    def __init__(self, cover: DoubleCover):
        self.cover = cover
        self.t = cover.torus_rank()
        self.ground: tuple = tuple(
            sorted(cover.undilated_edges(), key=idkey)
        )
        self.v_ud = len(cover.undilated_vertices())
        if self.t != len(self.ground) - self.v_ud:
            raise CoverError(
                "torus rank disagrees with undilated edge/vertex count"
            )
        self._unbalanced_cache: dict[frozenset, bool] = {}
        self._cographic: list[tuple[frozenset, int, int]] | None = None
        self._graphic: list[tuple[frozenset, int]] | None = None

    # -- independence oracles ------------------------------------------------

    def _component_unbalanced(self, cverts: frozenset, cedges: frozenset) -> bool:
        key = cverts | {("edge", e) for e in cedges}
        key = frozenset(key)
        hit = self._unbalanced_cache.get(key)
        if hit is None:
            hit = self.cover.is_unbalanced(cverts, cedges)
            self._unbalanced_cache[key] = hit
        return hit

    def components_removed(self, F: Iterable[EdgeId]) -> list[tuple[frozenset, frozenset]]:
        return self.cover.base.components(removed_edges=F)

    def cographic_independent(self, F: Iterable[EdgeId]) -> bool:
        F = set(F)
        if not F <= set(self.ground):
            raise CoverError("set contains dilated or unknown edges")
        return all(
            self._component_unbalanced(cv, ce)
            for cv, ce in self.components_removed(F)
        )

    def cographic_rank(self, subset: Iterable[EdgeId]) -> int:
        """Greedy matroid rank of a subset of the ground set."""
        current: set = set()
        for e in sorted(subset, key=idkey):
            if self.cographic_independent(current | {e}):
                current.add(e)
        return len(current)

    def graphic_independent(self, F: Iterable[EdgeId]) -> bool:
        """Dual-rank test: F independent in M iff rank*(ground minus F) = t."""
        F = set(F)
        if not F <= set(self.ground):
            raise CoverError("set contains dilated or unknown edges")
        return self.cographic_rank(set(self.ground) - F) == self.t

    # -- basis enumeration -----------------------------------------------------

    def cographic_bases(self) -> list[tuple[frozenset, int, int]]:
        """All (F, c(F), i(F)) with F a basis of M*, i(F) = 4^(c(F)-1)."""
        if self._cographic is None:
            out = []
            for combo in combinations(self.ground, self.t):
                comps = self.components_removed(combo)
                if all(self._component_unbalanced(cv, ce) for cv, ce in comps):
                    c = len(comps)
                    out.append((frozenset(combo), c, 4 ** (c - 1)))
            out.sort(key=lambda row: _set_key(row[0]))
            self._cographic = out
        return self._cographic

    def graphic_bases(self) -> list[tuple[frozenset, int]]:
        """All (B, i(B)) with B a basis of M (complement of a basis of M*)."""
        if self._graphic is None:
            ground = set(self.ground)
            out = [
                (frozenset(ground - F), idx)
                for F, _c, idx in self.cographic_bases()
            ]
            out.sort(key=lambda row: _set_key(row[0]))
            self._graphic = out
        return self._graphic

    def graphic_independent_sets(self, k: int) -> list[frozenset]:
        if k < 0 or k > self.v_ud:
            raise CoverError(f"independent-set size {k} out of range 0..{self.v_ud}")
        out = [
            frozenset(combo)
            for combo in combinations(self.ground, k)
            if self.graphic_independent(combo)
        ]
        return _sorted_sets(out)

    # -- indices ----------------------------------------------------------------

    def edge_index(self, e: EdgeId) -> int:
        """4 iff e is a bridge with both sides unbalanced, else 1."""
        if e not in set(self.ground):
            raise CoverError(f"edge {e!r} is dilated or unknown")
        comps = self.components_removed({e})
        if len(comps) == 2 and all(
            self._component_unbalanced(cv, ce) for cv, ce in comps
        ):
            return 4
        return 1

    def basis_index(self, B: frozenset) -> int:
        """Index of a graphic basis (via its cographic complement)."""
        F = set(self.ground) - set(B)
        comps = self.components_removed(F)
        if not all(self._component_unbalanced(cv, ce) for cv, ce in comps):
            raise CoverError("not a basis of the signed graphic matroid")
        return 4 ** (len(comps) - 1)

    def cut_set(self, F: frozenset) -> list[EdgeId]:
        """Edges whose addition turns a corank-1 independent set into a basis."""
        basis_sets = {B for B, _ in self.graphic_bases()}
        return sorted(
            (e for e in set(self.ground) - set(F) if frozenset(F | {e}) in basis_sets),
            key=idkey,
        )

    def independent_index(self, F: Iterable[EdgeId]) -> tuple[Polynomial, int]:
        """(weight, index) of a corank-1 independent set of M.

        weight = product of the lengths over the complementary undilated
        edges; index = min over the cut set of i(F+e) * i(e).
        """
        F = frozenset(F)
        if len(F) != self.v_ud - 1:
            raise CoverError(
                f"expected {self.v_ud - 1} edges, got {len(F)}"
            )
        if not self.graphic_independent(F):
            raise CoverError("set is dependent in the signed graphic matroid")
        boundary = self.cut_set(F)
        if not boundary:
            raise CoverError("empty cut set")
        index = min(
            self.basis_index(frozenset(F | {e})) * self.edge_index(e)
            for e in boundary
        )
        lengths = self.cover.base.lengths
        weight = Polynomial.product(
            lengths[e] for e in set(self.ground) - F
        )
        return weight, index

    # -- FS sets -----------------------------------------------------------------

    def fs_sets(self, n: int) -> list[frozenset]:
        """All FS_n-sets: removal leaves exactly two unbalanced components
        while every proper subset leaves the base connected."""
        if n < 2:
            raise CoverError("FS sets need n >= 2")
        out = []
        for combo in combinations(self.ground, n):
            comps = self.components_removed(combo)
            if len(comps) != 2:
                continue
            if not all(self._component_unbalanced(cv, ce) for cv, ce in comps):
                continue
            if any(
                len(self.components_removed(sub)) != 1
                for k in range(n)
                for sub in combinations(combo, k)
            ):
                continue
            out.append(frozenset(combo))
        return _sorted_sets(out)

    def fs_sets_matroidal(self, n: int) -> list[frozenset]:
        """Cross-check variant: F independent for M*, every basis containing F
        has index >= 4, and no nonempty proper subset has both properties."""
        if n < 2:
            raise CoverError("FS sets need n >= 2")
        bases = self.cographic_bases()

        def qualifies(F: frozenset) -> bool:
            if not self.cographic_independent(F):
                return False
            containing = [row for row in bases if F <= row[0]]
            return bool(containing) and all(idx >= 4 for _f, _c, idx in containing)

        out = []
        for combo in combinations(self.ground, n):
            F = frozenset(combo)
            if not qualifies(F):
                continue
            if any(
                qualifies(frozenset(sub))
                for k in range(1, n)
                for sub in combinations(combo, k)
            ):
                continue
            out.append(F)
        return _sorted_sets(out)


# ---------------------------------------------------------------------------
# free-function façade used by the CLI and the moment formulas
# ---------------------------------------------------------------------------


def signed_cographic_bases(cover: DoubleCover) -> list[tuple[frozenset, int, int]]:
    return SignedMatroidView(cover).cographic_bases()


def edge_index(cover: DoubleCover, e: EdgeId) -> int:
    return SignedMatroidView(cover).edge_index(e)


def independent_index(cover: DoubleCover, F: Iterable[EdgeId]) -> tuple[Polynomial, int]:
    return SignedMatroidView(cover).independent_index(F)


def fs_sets(cover: DoubleCover, n: int) -> list[frozenset]:
    return SignedMatroidView(cover).fs_sets(n)


def is_unbalanced(
    cover: DoubleCover,
    vertex_set: Iterable[VertexId],
    edge_set: Iterable[EdgeId],
) -> bool:
    verts = set(vertex_set)
    edges = set(edge_set)
    comps = cover.base.components(vertex_subset=verts, edge_subset=edges)
    if len(comps) != 1:
        raise CoverError("subgraph is not connected")
    return cover.is_unbalanced(verts, edges)
