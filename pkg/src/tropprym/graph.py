"""Half-edge multigraphs with vertex genera and symbolic edge lengths.

A graph stores vertices (id -> genus), edges (id -> ordered endpoint pair;
loops repeat the vertex), and a LinearForm length per edge. A half-edge is the
pair (edge id, slot) with slot 0/1 selecting an endpoint; the involution swaps
slots, the root map reads the endpoint. Instances are treated as immutable.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .poly import LinearForm

VertexId = Hashable
EdgeId = Hashable


class GraphError(ValueError):
    pass


def idkey(x) -> tuple:
    """Deterministic sort key for mixed int/str ids."""
    return (isinstance(x, str), x)


class Graph:
    __slots__ = ("vertices", "edge_ends", "lengths", "_incidence")

    def __init__(
        self,
        vertices: Mapping[VertexId, int],
        edge_ends: Mapping[EdgeId, tuple],
        lengths: Mapping[EdgeId, LinearForm] | None = None,
        *,
        check_lengths: bool = True,
    ):
        self.vertices: dict[VertexId, int] = dict(vertices)
        self.edge_ends: dict[EdgeId, tuple] = {}
        for e, ends in edge_ends.items():
            u, v = ends
            if u not in self.vertices or v not in self.vertices:
                raise GraphError(f"edge {e!r} has unknown endpoint")
            self.edge_ends[e] = (u, v)
        for v, g in self.vertices.items():
            if not isinstance(g, int) or g < 0:
                raise GraphError(f"vertex {v!r} has invalid genus {g!r}")
        self.lengths: dict[EdgeId, LinearForm] = {}
        lengths = lengths or {}
        for e in self.edge_ends:
            form = lengths.get(e)
            if form is None:
                form = LinearForm.variable(f"len_{e}")
            else:
                form = LinearForm.coerce(form)
            if check_lengths and not form.is_valid_length():
                raise GraphError(f"edge {e!r} has invalid length {form}")
            self.lengths[e] = form
        inc: dict[VertexId, list] = {v: [] for v in self.vertices}
        for e, (u, v) in self.edge_ends.items():
            inc[u].append((e, 0))
            inc[v].append((e, 1))
        self._incidence = inc

    # -- basic structure -----------------------------------------------------

    def half_edges(self) -> list[tuple]:
        out = []
        for e in self.edge_ends:
            out.append((e, 0))
            out.append((e, 1))
        return out

    def root(self, half_edge: tuple) -> VertexId:
        e, slot = half_edge
        return self.edge_ends[e][slot]

    def incident(self, v: VertexId) -> list[tuple]:
        """Half-edges rooted at v (a loop contributes both of its half-edges)."""
        return list(self._incidence[v])

    def valence(self, v: VertexId) -> int:
        if v not in self.vertices:
            raise GraphError(f"unknown vertex {v!r}")
        return len(self._incidence[v])

    def genus_of(self, v: VertexId) -> int:
        return self.vertices[v]

    def euler_char(self, v: VertexId) -> int:
        if v not in self.vertices:
            raise GraphError(f"unknown vertex {v!r}")
        return 2 - 2 * self.vertices[v] - self.valence(v)

    def is_loop(self, e: EdgeId) -> bool:
        u, v = self.edge_ends[e]
        return u == v

    def edge_vector(self) -> list[EdgeId]:
        return sorted(self.edge_ends, key=idkey)

    def vertex_list(self) -> list[VertexId]:
        return sorted(self.vertices, key=idkey)

    # -- connectivity ---------------------------------------------------------

    def components(
        self,
        removed_edges: Iterable[EdgeId] = (),
        vertex_subset: Iterable[VertexId] | None = None,
        edge_subset: Iterable[EdgeId] | None = None,
    ) -> list[tuple[frozenset, frozenset]]:
        """Connected components as (vertex set, edge set) pairs.

        Optionally delete edges, restrict to an induced vertex subset, or walk
        only a given edge subset. Deterministic order (by least vertex id).
        """
        removed = set(removed_edges)
        verts = set(self.vertices) if vertex_subset is None else set(vertex_subset)
        allowed = None if edge_subset is None else set(edge_subset)
        seen: set = set()
        comps = []
        for start in sorted(verts, key=idkey):
            if start in seen:
                continue
            stack = [start]
            seen.add(start)
            cverts, cedges = {start}, set()
            while stack:
                x = stack.pop()
                for (e, slot) in self._incidence[x]:
                    if e in removed or (allowed is not None and e not in allowed):
                        continue
                    y = self.edge_ends[e][1 - slot]
                    if y not in verts:
                        continue
                    cedges.add(e)
                    if y not in seen:
                        seen.add(y)
                        cverts.add(y)
                        stack.append(y)
            comps.append((frozenset(cverts), frozenset(cedges)))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def b1(self) -> int:
        """First Betti number (connected input)."""
        if not self.is_connected():
            raise GraphError("disconnected")
        return len(self.edge_ends) - len(self.vertices) + 1

    def genus(self) -> int:
        return self.b1() + sum(self.vertices.values())

    def euler_char_total(self) -> int:
        return sum(self.euler_char(v) for v in self.vertices)

    def total_length(self) -> LinearForm:
        total = LinearForm()
        for form in self.lengths.values():
            total = total + form
        return total

    # -- surgery ----------------------------------------------------------------

    def with_lengths(self, lengths: Mapping[EdgeId, LinearForm]) -> "Graph":
        merged = dict(self.lengths)
        merged.update(lengths)
        return Graph(self.vertices, self.edge_ends, merged)

    def subgraph(self, vertex_set: Iterable[VertexId], edge_set: Iterable[EdgeId]) -> "Graph":
        vs = {v: self.vertices[v] for v in vertex_set}
        es = {e: self.edge_ends[e] for e in edge_set}
        ls = {e: self.lengths[e] for e in es}
        return Graph(vs, es, ls)

    def contract(self, edges: Iterable[EdgeId]) -> "Graph":
        return self.contract_with_map(edges)[0]

    def contract_with_map(self, edges: Iterable[EdgeId]) -> tuple["Graph", dict]:
        """Contract an edge set; each component of it collapses to one vertex
        carrying the component's total genus (first Betti number included).

        Returns (graph, vertex_map old->new). Genus is preserved.
        """
        F = set(edges)
        for e in F:
            if e not in self.edge_ends:
                raise GraphError(f"unknown edge {e!r}")
        # components of the subgraph spanned by F, plus untouched vertices
        spanned: set = set()
        for e in F:
            u, v = self.edge_ends[e]
            spanned.update((u, v))
        vertex_map: dict = {}
        new_vertices: dict = {}
        for cverts, cedges in self.components(vertex_subset=spanned, edge_subset=F):
            rep = min(cverts, key=idkey)
            genus = len(cedges) - len(cverts) + 1 + sum(self.vertices[v] for v in cverts)
            new_vertices[rep] = genus
            for v in cverts:
                vertex_map[v] = rep
        for v, g in self.vertices.items():
            if v not in vertex_map:
                vertex_map[v] = v
                new_vertices[v] = g
        new_edges = {}
        new_lengths = {}
        for e, (u, v) in self.edge_ends.items():
            if e in F:
                continue
            new_edges[e] = (vertex_map[u], vertex_map[v])
            new_lengths[e] = self.lengths[e]
        return Graph(new_vertices, new_edges, new_lengths), vertex_map

    # -- stabilization -----------------------------------------------------------

    def is_stable(self) -> bool:
        return all(self.euler_char(v) < 0 for v in self.vertices)

    def stabilize(self) -> "Graph":
        return self.stabilize_with_map()[0]

    def stabilize_with_map(self) -> tuple["Graph", dict, set]:
        """Trim unstable vertices, then merge semistable chains.

        Returns (stable graph, edge_map: surviving edge -> list of original
        edges whose lengths were added into it, removed_edges). Requires
        genus >= 2 so the result is nonempty and stable.
        """
        if self.genus() < 2:
            raise GraphError("genus < 2")
        vertices = dict(self.vertices)
        edge_ends = dict(self.edge_ends)
        lengths = dict(self.lengths)
        edge_map: dict = {e: [e] for e in edge_ends}
        removed: set = set()

        def valence_of(v):
            n = 0
            for ends in edge_ends.values():
                n += (ends[0] == v) + (ends[1] == v)
            return n

        # phase 1: iteratively delete genus-0 leaves (extremal trees)
        changed = True
        while changed:
            changed = False
            for v in sorted(vertices, key=idkey):
                if vertices[v] > 0:
                    continue
                inc = [e for e, ends in edge_ends.items() if v in ends]
                if len(inc) == 1 and not edge_ends[inc[0]][0] == edge_ends[inc[0]][1]:
                    e = inc[0]
                    removed.update(edge_map.pop(e))
                    del edge_ends[e], lengths[e]
                    del vertices[v]
                    changed = True
                    break
                if not inc and len(vertices) > 1:
                    del vertices[v]
                    changed = True
                    break

        # phase 2: merge genus-0 valence-2 vertices (series edges add lengths)
        changed = True
        while changed:
            changed = False
            for v in sorted(vertices, key=idkey):
                if vertices[v] > 0 or valence_of(v) != 2:
                    continue
                inc = []
                for e, ends in edge_ends.items():
                    if ends[0] == v:
                        inc.append((e, 0))
                    if ends[1] == v:
                        inc.append((e, 1))
                if len(inc) != 2 or inc[0][0] == inc[1][0]:
                    continue  # a loop at v: circle component, genus bookkeeping forbids
                (e1, s1), (e2, s2) = inc
                a = edge_ends[e1][1 - s1]
                b = edge_ends[e2][1 - s2]
                keep, drop = (e1, e2) if idkey(e1) <= idkey(e2) else (e2, e1)
                new_len = lengths[e1] + lengths[e2]
                chain = edge_map.pop(e1) + edge_map.pop(e2)
                del edge_ends[e1], edge_ends[e2], lengths[e1], lengths[e2]
                del vertices[v]
                edge_ends[keep] = (a, b)
                lengths[keep] = new_len
                edge_map[keep] = chain
                changed = True
                break

        g = Graph(vertices, edge_ends, lengths)
        if not g.is_stable():
            raise GraphError("stabilization failed to reach a stable model")
        return g, edge_map, removed

    def reduce_genus_one(self) -> tuple["Graph", dict, set]:
        """Minimal model of a genus-1 graph: a single vertex with one loop
        whose length is the cycle length (or a bare genus-1 vertex).

        Same return shape as stabilize_with_map.
        """
        if self.genus() != 1:
            raise GraphError("genus != 1")
        if self.b1() == 0:
            # tree with one genus-1 vertex; Jacobian is trivial
            v = min((v for v, g in self.vertices.items() if g == 1), key=idkey)
            return Graph({v: 1}, {}), {}, set(self.edge_ends)
        # cycle edges = non-bridges
        cycle = [e for e in self.edge_ends if not self.is_bridge(e)]
        total = LinearForm()
        for e in cycle:
            total = total + self.lengths[e]
        rep = min(cycle, key=idkey)
        removed = set(self.edge_ends) - set(cycle)
        vid = min(self.vertices, key=idkey)
        loop_graph = Graph({vid: 0}, {rep: (vid, vid)}, {rep: total})
        return loop_graph, {rep: sorted(cycle, key=idkey)}, removed

    def is_bridge(self, e: EdgeId) -> bool:
        if self.is_loop(e):
            return False
        n_before = len(self.components())
        return len(self.components(removed_edges=[e])) > n_before

    # -- spanning structure ---------------------------------------------------

    def spanning_tree(self) -> list[EdgeId]:
        """Deterministic spanning tree (least edge ids first). Connected input."""
        if not self.is_connected():
            raise GraphError("disconnected")
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        tree = []
        for e in self.edge_vector():
            u, v = self.edge_ends[e]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                tree.append(e)
        return tree

    def fundamental_cycles(self) -> list[dict]:
        """One signed cycle per co-tree edge: maps edge -> coefficient in {+-1}.

        The cycle of co-tree edge e traverses e from its slot-0 end to its
        slot-1 end and returns through the tree.
        """
        tree = set(self.spanning_tree())
        # orient tree paths via BFS parents
        root = min(self.vertices, key=idkey)
        parent_edge: dict = {root: None}
        order = [root]
        qi = 0
        while qi < len(order):
            x = order[qi]
            qi += 1
            for (e, slot) in sorted(self._incidence[x], key=lambda h: (idkey(h[0]), h[1])):
                if e not in tree:
                    continue
                y = self.edge_ends[e][1 - slot]
                if y not in parent_edge:
                    parent_edge[y] = (e, slot)  # edge e, with x at the given slot
                    order.append(y)

        def path_to_root(v) -> dict:
            # edge -> +1 when traversed slot0 -> slot1
            out: dict = {}
            while parent_edge[v] is not None:
                e, slot = parent_edge[v]
                # v is at slot 1-slot; traverse from v to its parent
                out[e] = out.get(e, 0) + (1 if (1 - slot) == 0 else -1)
                v = self.edge_ends[e][slot]
            return out

        cycles = []
        for e in self.edge_vector():
            if e in tree:
                continue
            u, v = self.edge_ends[e]
            cyc: dict = {e: 1}
            for edge, c in path_to_root(v).items():
                cyc[edge] = cyc.get(edge, 0) + c
            for edge, c in path_to_root(u).items():
                cyc[edge] = cyc.get(edge, 0) - c
            cycles.append({k: c for k, c in cyc.items() if c})
        return cycles

    # -- canonical form ----------------------------------------------------------

    def canonical_code(self, with_lengths: bool = False) -> bytes:
        """Equal codes iff isomorphic as genus-weighted multigraphs.

        Lengths participate as edge colors only when with_lengths is set.
        Connected graphs only.
        """
        if not self.is_connected():
            raise GraphError("disconnected")
        ecolor = {
            e: (str(self.lengths[e]) if with_lengths else "")
            for e in self.edge_ends
        }
        if len(self.edge_ends) == len(self.vertices) - 1 or not self.edge_ends:
            return b"T" + self._tree_code(ecolor)
        return b"G" + self._general_code(ecolor)

    def _tree_code(self, ecolor: dict) -> bytes:
        # center(s) by leaf stripping
        ids = set(self.vertices)
        adj: dict = {v: [] for v in ids}
        for e, (u, v) in self.edge_ends.items():
            adj[u].append((e, v))
            adj[v].append((e, u))
        layer = {v: len(adj[v]) for v in ids}
        alive = set(ids)
        leaves = sorted((v for v in alive if layer[v] <= 1), key=idkey)
        while len(alive) > 2:
            nxt = []
            for v in leaves:
                alive.discard(v)
            for v in leaves:
                for (e, w) in adj[v]:
                    if w in alive:
                        layer[w] -= 1
                        if layer[w] == 1:
                            nxt.append(w)
            leaves = sorted(set(nxt), key=idkey)

        def rooted(v, banned_edge) -> tuple:
            subs = []
            for (e, w) in adj[v]:
                if e == banned_edge:
                    continue
                subs.append((ecolor[e], rooted(w, e)))
            return (self.vertices[v], tuple(sorted(subs)))

        centers = sorted(alive, key=idkey)
        if len(centers) == 1:
            code = ("1", rooted(centers[0], None))
        else:
            c1, c2 = centers
            e = next(e for e, ends in self.edge_ends.items() if set(ends) == {c1, c2} or (ends[0] in centers and ends[1] in centers))
            code = ("2", ecolor[e], tuple(sorted((rooted(c1, e), rooted(c2, e)))))
        return repr(code).encode()

    def _general_code(self, ecolor: dict) -> bytes:
        verts = self.vertex_list()
        n = len(verts)
        pos = {v: i for i, v in enumerate(verts)}
        # adjacency as (other vertex position, edge color); loops listed twice
        inc: list[list] = [[] for _ in range(n)]
        for e, (u, v) in self.edge_ends.items():
            inc[pos[u]].append((pos[v], ecolor[e]))
            inc[pos[v]].append((pos[u], ecolor[e]))

        genera = [self.vertices[v] for v in verts]

        def refine(colors: list) -> list:
            while True:
                sigs = []
                for i in range(n):
                    nb = sorted((colors[j], c) for j, c in inc[i])
                    sigs.append((colors[i], genera[i], tuple(nb)))
                order = sorted(set(sigs))
                remap = {s: k for k, s in enumerate(order)}
                new = [remap[s] for s in sigs]
                if new == colors:
                    return colors
                colors = new

        base = refine([0] * n)

        best: list | None = None

        def build_code(label: dict) -> list:
            rows = []
            for e, (u, v) in self.edge_ends.items():
                a, b = label[pos[u]], label[pos[v]]
                rows.append((min(a, b), max(a, b), ecolor[e]))
            rows.sort()
            gen = [0] * n
            for i in range(n):
                gen[label[i]] = genera[i]
            return [tuple(gen), tuple(rows)]

        def search(colors: list, assigned: dict):
            nonlocal best
            if len(assigned) == n:
                code = build_code(assigned)
                if best is None or code < best:
                    best = code
                return
            # next cell: unassigned vertices of minimal color
            unas = [i for i in range(n) if i not in assigned]
            target_color = min(colors[i] for i in unas)
            cell = [i for i in unas if colors[i] == target_color]
            next_label = len(assigned)
            for i in cell:
                # individualize i and refine
                newc = list(colors)
                newc[i] = -1 - next_label  # unique new color below others
                newc = refine(newc)
                new_assigned = dict(assigned)
                new_assigned[i] = next_label
                search(newc, new_assigned)

        search(base, {})
        assert best is not None
        return repr(best).encode()

    # -- misc ------------------------------------------------------------------

    def __repr__(self) -> str:
        return f"Graph(|V|={len(self.vertices)}, |E|={len(self.edge_ends)})"
