"""Harmonic morphisms of graphs and double covers in the signed-graph encoding.

A double cover is stored base-side: each edge carries +1, -1, or "dilated",
and vertices may additionally be marked dilated (required when they have no
dilated edge but a connected fiber). The degree-2 total space is built on
demand by `expand`.

Sign conventions: the two lifts of an undilated vertex v are (v, +1) and
(v, -1); the single lift of a dilated vertex is (v, 0). The lift (e, s) of an
undilated edge e = (u, w) runs from the s-lift of u to the (s*sign(e))-lift
of w.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .graph import EdgeId, Graph, GraphError, VertexId, idkey
from .poly import LinearForm

DILATED = "dilated"


class CoverError(ValueError):
    pass


class MorphismError(ValueError):
    pass


# ---------------------------------------------------------------------------
# harmonic morphisms
# ---------------------------------------------------------------------------


class HarmonicMorphism:
    """A map of graphs with local degrees, harmonic at every vertex.

    half_edge_map sends (edge, slot) to (edge, slot); it must commute with
    the root maps and pair involution, and may not contract edges.
    """

    __slots__ = ("source", "target", "vertex_map", "half_edge_map",
                 "vertex_degree", "edge_degree")

    def __init__(
        self,
        source: Graph,
        target: Graph,
        vertex_map: Mapping[VertexId, VertexId],
        half_edge_map: Mapping[tuple, tuple],
        vertex_degree: Mapping[VertexId, int],
        edge_degree: Mapping[EdgeId, int],
        *,
        validate: bool = True,
    ):
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map)
        self.half_edge_map = dict(half_edge_map)
        self.vertex_degree = dict(vertex_degree)
        self.edge_degree = dict(edge_degree)
        if validate:
            self._validate()

    def edge_image(self, e: EdgeId) -> EdgeId:
        return self.half_edge_map[(e, 0)][0]

    def _validate(self) -> None:
        src, tgt = self.source, self.target
        for v in src.vertices:
            if self.vertex_map.get(v) not in tgt.vertices:
                raise MorphismError(f"vertex {v!r} unmapped or mapped outside target")
            if self.vertex_degree.get(v, 0) < 1:
                raise MorphismError(f"vertex {v!r} needs a positive local degree")
        for e in src.edge_ends:
            h0, h1 = self.half_edge_map.get((e, 0)), self.half_edge_map.get((e, 1))
            if h0 is None or h1 is None:
                raise MorphismError(f"edge {e!r} has unmapped half-edges")
            if h0[0] != h1[0] or {h0[1], h1[1]} != {0, 1}:
                raise MorphismError(f"edge {e!r} does not commute with the involution")
            if self.edge_degree.get(e, 0) < 1:
                raise MorphismError(f"edge {e!r} needs a positive local degree")
            for slot in (0, 1):
                he = (e, slot)
                if self.vertex_map[src.root(he)] != tgt.root(self.half_edge_map[he]):
                    raise MorphismError(f"half-edge {he!r} does not commute with roots")
            # metric compatibility
            if tgt.lengths[h0[0]] != src.lengths[e] * self.edge_degree[e]:
                raise MorphismError(
                    f"edge {e!r}: target length != local degree * source length")
        # harmonicity at every source vertex over every target half-edge
        for v in src.vertices:
            dv = self.vertex_degree[v]
            image = self.vertex_map[v]
            for H in tgt.incident(image):
                total = 0
                for h in src.incident(v):
                    if self.half_edge_map[(h[0], h[1])] == H:
                        total += self.edge_degree[h[0]]
                if total != dv:
                    raise MorphismError(
                        f"not harmonic at {v!r} over half-edge {H!r}: {total} != {dv}")

    # -- degrees and ramification ------------------------------------------

    def global_degree(self) -> int:
        if not self.target.is_connected():
            raise MorphismError("target disconnected")
        fiber_sums: set[int] = set()
        for V in self.target.vertices:
            fiber_sums.add(sum(d for v, d in self.vertex_degree.items()
                               if self.vertex_map[v] == V))
        for E in self.target.edge_ends:
            fiber_sums.add(sum(d for e, d in self.edge_degree.items()
                               if self.edge_image(e) == E))
        if len(fiber_sums) != 1:
            raise MorphismError("not harmonic")
        return fiber_sums.pop()

    def ramification(self, v: VertexId) -> int:
        return (self.vertex_degree[v] * self.target.euler_char(self.vertex_map[v])
                - self.source.euler_char(v))

    def total_ramification(self) -> int:
        return sum(self.ramification(v) for v in self.source.vertices)

    def is_effective(self) -> bool:
        return all(self.ramification(v) >= 0 for v in self.source.vertices)

    def is_unramified(self) -> bool:
        return all(self.ramification(v) == 0 for v in self.source.vertices)

    # -- contraction ----------------------------------------------------------

    def contract(self, target_edges: Iterable[EdgeId]) -> "HarmonicMorphism":
        """Contract target edges and their full preimage; degrees of merged
        vertices become the degree of the restriction over the collapsed piece."""
        F = set(target_edges)
        new_target, tv_map = self.target.contract_with_map(F)
        pre_F = {e for e in self.source.edge_ends if self.edge_image(e) in F}
        new_source, sv_map = self.source.contract_with_map(pre_F)

        new_vertex_map = {}
        for v in self.source.vertices:
            new_vertex_map[sv_map[v]] = tv_map[self.vertex_map[v]]

        # local degree of a merged vertex: fiber-sum of old degrees over one
        # representative vertex of the collapsed target component
        new_vdeg: dict = {}
        for new_v in new_source.vertices:
            members = [v for v in self.source.vertices if sv_map[v] == new_v]
            if len(members) == 1 and members[0] == new_v and tv_map[self.vertex_map[new_v]] == self.vertex_map[new_v]:
                new_vdeg[new_v] = self.vertex_degree[new_v]
                continue
            image_members = {self.vertex_map[v] for v in members}
            rep = min(image_members, key=idkey)
            new_vdeg[new_v] = sum(self.vertex_degree[v] for v in members
                                  if self.vertex_map[v] == rep)
        new_hmap = {}
        new_edeg = {}
        for e in new_source.edge_ends:
            new_hmap[(e, 0)] = self.half_edge_map[(e, 0)]
            new_hmap[(e, 1)] = self.half_edge_map[(e, 1)]
            new_edeg[e] = self.edge_degree[e]
        return HarmonicMorphism(new_source, new_target, new_vertex_map,
                                new_hmap, new_vdeg, new_edeg)

    def __repr__(self) -> str:
        return (f"HarmonicMorphism({self.source!r} -> {self.target!r})")


def identity_morphism(g: Graph) -> HarmonicMorphism:
    return HarmonicMorphism(
        g, g,
        {v: v for v in g.vertices},
        {h: h for h in g.half_edges()},
        {v: 1 for v in g.vertices},
        {e: 1 for e in g.edge_ends},
    )


# ---------------------------------------------------------------------------
# double covers
# ---------------------------------------------------------------------------


def _lift_vertex(v: VertexId, s: int, dilated: frozenset) -> tuple:
    return (v, 0) if v in dilated else (v, s)


class DoubleCover:
    __slots__ = ("base", "signs", "dilated_vertices", "_expansion")

    def __init__(
        self,
        base: Graph,
        signs: Mapping[EdgeId, int | str],
        dilated_vertices: Iterable[VertexId] = (),
    ):
        self.base = base
        self.signs: dict = {}
        for e in base.edge_ends:
            s = signs.get(e)
            if s not in (1, -1, DILATED):
                raise CoverError(f"edge {e!r} has invalid sign {s!r}")
            self.signs[e] = s
        dil = set(dilated_vertices)
        for v in dil:
            if v not in base.vertices:
                raise CoverError(f"unknown dilated vertex {v!r}")
        for e, s in self.signs.items():
            if s == DILATED:
                dil.update(base.edge_ends[e])
        self.dilated_vertices = frozenset(dil)
        self._check_dilation()
        self._expansion = None

    def _check_dilation(self) -> None:
        for v in self.dilated_vertices:
            dval = self.dilated_valence(v)
            if dval % 2 != 0:
                raise CoverError(f"invalid dilation: odd dilated valence at {v!r}")
            if dval == 0 and self.base.vertices[v] < 1:
                raise CoverError(
                    f"invalid dilation: isolated dilated vertex {v!r} needs genus >= 1")

    def dilated_valence(self, v: VertexId) -> int:
        n = 0
        for (e, _slot) in self.base.incident(v):
            if self.signs[e] == DILATED:
                n += 1
        return n

    def is_dilated_vertex(self, v: VertexId) -> bool:
        return v in self.dilated_vertices

    def is_free(self) -> bool:
        return not self.dilated_vertices

    def undilated_edges(self) -> list[EdgeId]:
        return [e for e in self.base.edge_vector() if self.signs[e] != DILATED]

    def dilated_edges(self) -> list[EdgeId]:
        return [e for e in self.base.edge_vector() if self.signs[e] == DILATED]

    def undilated_vertices(self) -> list[VertexId]:
        return [v for v in self.base.vertex_list() if v not in self.dilated_vertices]

    # -- expansion --------------------------------------------------------------

    def expand(self) -> HarmonicMorphism:
        """The degree-2 unramified harmonic morphism this marking encodes."""
        if self._expansion is not None:
            return self._expansion
        base = self.base
        dil = self.dilated_vertices
        vertices: dict = {}
        vdeg_src: dict = {}
        vmap: dict = {}
        for v, g in base.vertices.items():
            if v in dil:
                lift = (v, 0)
                vertices[lift] = 2 * g - 1 + self.dilated_valence(v) // 2
                vdeg_src[lift] = 2
                vmap[lift] = v
            else:
                for s in (1, -1):
                    vertices[(v, s)] = g
                    vdeg_src[(v, s)] = 1
                    vmap[(v, s)] = v
        edges: dict = {}
        lengths: dict = {}
        hmap: dict = {}
        edeg: dict = {}
        for e, (u, w) in base.edge_ends.items():
            s = self.signs[e]
            if s == DILATED:
                lift = (e, 0)
                edges[lift] = ((u, 0), (w, 0))
                lengths[lift] = base.lengths[e] * Fraction(1, 2)
                edeg[lift] = 2
                hmap[(lift, 0)] = (e, 0)
                hmap[(lift, 1)] = (e, 1)
            else:
                for t in (1, -1):
                    lift = (e, t)
                    edges[lift] = (_lift_vertex(u, t, dil), _lift_vertex(w, t * s, dil))
                    lengths[lift] = base.lengths[e]
                    edeg[lift] = 1
                    hmap[(lift, 0)] = (e, 0)
                    hmap[(lift, 1)] = (e, 1)
        total = Graph(vertices, edges, lengths)
        morphism = HarmonicMorphism(total, base, vmap, hmap, vdeg_src, edeg)
        self._expansion = morphism
        return morphism

    def total_graph(self) -> Graph:
        return self.expand().source

    def involution(self) -> dict:
        """The deck transformation on total-graph vertices and edges."""
        flip = {}
        for lift in self.total_graph().vertices:
            v, s = lift
            flip[lift] = (v, -s)
        for lift in self.total_graph().edge_ends:
            e, s = lift
            flip[lift] = (e, -s)
        return flip

    def is_connected_cover(self) -> bool:
        return self.total_graph().is_connected()

    def torus_rank(self) -> int:
        total = self.total_graph()
        if not total.is_connected():
            raise CoverError("disconnected total space")
        return total.b1() - self.base.b1()

    # -- gauge normalization -----------------------------------------------------

    def normalized_signs(self) -> dict:
        """Gauge-fixed sign vector: +1 on a spanning forest of the undilated
        part and on every edge touching a dilated vertex (where signs are
        immaterial). Two markings encode the same cover iff these agree."""
        base = self.base
        eta: dict = {}
        live_edges = [e for e in self.undilated_edges()
                      if not (set(base.edge_ends[e]) & self.dilated_vertices)]
        for cverts, cedges in base.components(vertex_subset=self.undilated_vertices(),
                                              edge_subset=live_edges):
            root = min(cverts, key=idkey)
            eta[root] = 1
            # BFS through a deterministic spanning tree, forcing tree signs +1
            frontier = [root]
            seen = {root}
            while frontier:
                nxt = []
                for x in sorted(frontier, key=idkey):
                    for (e, slot) in sorted(base.incident(x), key=lambda h: (idkey(h[0]), h[1])):
                        if e not in cedges or base.is_loop(e):
                            continue
                        y = base.edge_ends[e][1 - slot]
                        if y in seen:
                            continue
                        seen.add(y)
                        eta[y] = eta[x] * self.signs[e]
                        nxt.append(y)
                frontier = nxt
        out: dict = {}
        for e in self.base.edge_vector():
            s = self.signs[e]
            if s == DILATED:
                out[e] = DILATED
                continue
            u, w = base.edge_ends[e]
            if u in self.dilated_vertices or w in self.dilated_vertices:
                out[e] = 1
                continue
            out[e] = eta.get(u, 1) * s * eta.get(w, 1)
        return out

    def same_cover(self, other: "DoubleCover") -> bool:
        return (self.base.vertices == other.base.vertices
                and self.base.edge_ends == other.base.edge_ends
                and self.dilated_vertices == other.dilated_vertices
                and self.normalized_signs() == other.normalized_signs())

    # -- contraction --------------------------------------------------------------

    def contract(self, edges: Iterable[EdgeId]) -> "DoubleCover":
        """Contract base edges together with their full preimage.

        A collapsed component becomes dilated iff it was unbalanced (dilated
        material or an odd cycle); signs of surviving edges are transported by
        the gauge that labels each balanced collapsed piece consistently.
        """
        F = set(edges)
        base = self.base
        new_base, vmap = base.contract_with_map(F)
        spanned: set = set()
        for e in F:
            spanned.update(base.edge_ends[e])
        eta: dict = {}
        new_dilated: set = set()
        for cverts, cedges in base.components(vertex_subset=spanned, edge_subset=F):
            rep = min(cverts, key=idkey)
            if self._subset_unbalanced(cverts, cedges):
                new_dilated.add(vmap[rep])
                continue
            # balanced: assign each vertex the side its +1 lift lands on
            eta[rep] = 1
            frontier = [rep]
            seen = {rep}
            while frontier:
                nxt = []
                for x in sorted(frontier, key=idkey):
                    for (e, slot) in sorted(base.incident(x), key=lambda h: (idkey(h[0]), h[1])):
                        if e not in cedges or base.is_loop(e):
                            continue
                        y = base.edge_ends[e][1 - slot]
                        if y in seen:
                            continue
                        seen.add(y)
                        eta[y] = eta[x] * self.signs[e]
                        nxt.append(y)
                frontier = nxt
        for v in self.dilated_vertices:
            new_dilated.add(vmap[v])
        new_signs: dict = {}
        for e in new_base.edge_ends:
            s = self.signs[e]
            if s == DILATED:
                new_signs[e] = DILATED
                continue
            u, w = base.edge_ends[e]
            new_signs[e] = eta.get(u, 1) * s * eta.get(w, 1)
        return DoubleCover(new_base, new_signs, new_dilated)

    def _subset_unbalanced(self, cverts: frozenset, cedges: frozenset) -> bool:
        if cverts & self.dilated_vertices:
            return True
        if any(self.signs[e] == DILATED for e in cedges):
            return True
        # odd cycle test by sign potentials
        pot: dict = {}
        for start in sorted(cverts, key=idkey):
            if start in pot:
                continue
            pot[start] = 1
            stack = [start]
            while stack:
                x = stack.pop()
                for (e, slot) in self.base.incident(x):
                    if e not in cedges:
                        continue
                    y = self.base.edge_ends[e][1 - slot]
                    want = pot[x] * self.signs[e]
                    if y not in pot:
                        pot[y] = want
                        stack.append(y)
                    elif pot[y] != want:
                        return True
        return False

    def is_unbalanced(self, vertex_set: Iterable[VertexId], edge_set: Iterable[EdgeId]) -> bool:
        """Connected subgraph has connected preimage?  Computed on the expansion."""
        verts = set(vertex_set)
        edges = set(edge_set)
        total = self.total_graph()
        lift_verts = [lv for lv in total.vertices if lv[0] in verts]
        lift_edges = [le for le in total.edge_ends if le[0] in edges]
        comps = total.components(vertex_subset=lift_verts, edge_subset=lift_edges)
        if not lift_verts:
            raise CoverError("empty subgraph")
        return len(comps) == 1

    # -- stabilization ------------------------------------------------------------

    def stabilize(self) -> "DoubleCover":
        """Stabilize the base; signs multiply along merged chains."""
        stable, edge_map, removed = self.base.stabilize_with_map()
        for e in removed:
            if self.signs[e] == DILATED:
                raise CoverError("cannot trim a dilated edge")
        new_signs: dict = {}
        for e, chain in edge_map.items():
            chain_signs = [self.signs[c] for c in chain]
            if DILATED in chain_signs:
                if set(chain_signs) != {DILATED}:
                    raise CoverError("mixed dilated/undilated chain")
                new_signs[e] = DILATED
            else:
                s = 1
                for cs in chain_signs:
                    s *= cs
                new_signs[e] = s
        new_dilated = {v for v in self.dilated_vertices if v in stable.vertices}
        return DoubleCover(stable, new_signs, new_dilated)

    def reduce_genus_one(self) -> "DoubleCover":
        """Minimal model for a genus-1 base (single loop or bare vertex)."""
        reduced, edge_map, _removed = self.base.reduce_genus_one()
        new_signs: dict = {}
        for e, chain in edge_map.items():
            chain_signs = [self.signs[c] for c in chain]
            if DILATED in chain_signs:
                if set(chain_signs) != {DILATED}:
                    raise CoverError("mixed dilated/undilated chain")
                new_signs[e] = DILATED
            else:
                s = 1
                for cs in chain_signs:
                    s *= cs
                new_signs[e] = s
        new_dilated = {v for v in self.dilated_vertices if v in reduced.vertices}
        return DoubleCover(reduced, new_signs, new_dilated)

    # -- surgery for the moment formulas -------------------------------------------

    def restrict(
        self,
        vertex_set: Iterable[VertexId],
        edge_set: Iterable[EdgeId],
        extra_dilated: Iterable[VertexId] = (),
        genus_floor: Mapping[VertexId, int] | None = None,
    ) -> "DoubleCover":
        """Sub-double-cover on a subgraph of the base.

        extra_dilated marks cut vertices whose fibers are forced connected by
        the ambient cover; genus_floor lifts vertex genera where the marking
        alone would violate the dilation constraint (the weight polynomials
        never see vertex genus, so this is pure bookkeeping).
        """
        verts = set(vertex_set)
        floor = dict(genus_floor or {})
        vs = {v: max(self.base.vertices[v], floor.get(v, 0)) for v in verts}
        es = {e: self.base.edge_ends[e] for e in edge_set}
        ls = {e: self.base.lengths[e] for e in es}
        sub = Graph(vs, es, ls)
        signs = {e: self.signs[e] for e in es}
        dil = (self.dilated_vertices & verts) | set(extra_dilated)
        return DoubleCover(sub, signs, dil)

    def attach_odd_loop(self, v: VertexId, loop_id: EdgeId, length: LinearForm) -> "DoubleCover":
        """Undo the contraction that dilated v: add a sign -1 loop and drop
        one unit of genus together with the dilation mark."""
        if v not in self.dilated_vertices or self.dilated_valence(v) != 0:
            raise CoverError(f"{v!r} is not an isolated dilated vertex")
        if loop_id in self.base.edge_ends:
            raise CoverError(f"edge id {loop_id!r} already in use")
        vertices = dict(self.base.vertices)
        vertices[v] -= 1
        edges = dict(self.base.edge_ends)
        edges[loop_id] = (v, v)
        lengths = dict(self.base.lengths)
        lengths[loop_id] = length
        signs = dict(self.signs)
        signs[loop_id] = -1
        dil = set(self.dilated_vertices) - {v}
        return DoubleCover(Graph(vertices, edges, lengths), signs, dil)


# ---------------------------------------------------------------------------
# free-cover enumeration
# ---------------------------------------------------------------------------


def enumerate_free_covers(g: Graph) -> list[DoubleCover]:
    """All connected free double covers: nonzero sign classes with a spanning
    tree gauged to +1. Exactly 2^b1 - 1 of them."""
    if not g.is_connected():
        raise GraphError("disconnected")
    tree = set(g.spanning_tree())
    co_tree = [e for e in g.edge_vector() if e not in tree]
    if not co_tree:
        raise CoverError("first Betti number is zero: no connected free covers")
    covers = []
    for mask in range(1, 1 << len(co_tree)):
        signs = {e: 1 for e in g.edge_ends}
        for i, e in enumerate(co_tree):
            if mask >> i & 1:
                signs[e] = -1
        covers.append(DoubleCover(g, signs))
    return covers


# ---------------------------------------------------------------------------
# towers
# ---------------------------------------------------------------------------


class Tower:
    """A free double cover together with a degree-3 map of its base to a tree."""

    __slots__ = ("cover", "trig")

    def __init__(self, cover: DoubleCover, trig: HarmonicMorphism, *, validate: bool = True):
        self.cover = cover
        self.trig = trig
        if validate:
            if trig.source is not cover.base and trig.source.edge_ends != cover.base.edge_ends:
                raise MorphismError("trigonal map must start at the cover's base")
            if not cover.is_free():
                raise CoverError("tower needs a free cover")
            if trig.target.b1() != 0:
                raise MorphismError("trigonal target must be a tree")
            if trig.global_degree() != 3:
                raise MorphismError("trigonal map must have degree 3")
            if not trig.is_effective():
                raise MorphismError("trigonal map must be effective")

    def tree(self) -> Graph:
        return self.trig.target
