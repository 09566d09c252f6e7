"""Section graphs of a double cover over a degree-3 map to a tree.

A tower stacks a free double cover over a degree-3 harmonic map from its
base to a metric tree.  Fiberwise, a *section* distributes the local degree
of each preimage point between the two lifts; gluing edge-sections to
vertex-sections by endpoint restriction yields a degree-8 section graph
with exactly two isomorphic components, swapped by the cover involution.
Either component is a tetragonal graph whose Jacobian carries the same
second moment as the Prym of the cover; ``verify_tower`` checks that
identity exactly, in the tree's edge variables.
"""
from __future__ import annotations

import itertools
import math
from typing import Iterable

from .graph import EdgeId, Graph, VertexId, idkey
from .morphism import HarmonicMorphism, MorphismError, Tower

__all__ = [
    "TrigonalError",
    "Section",
    "fiber_sections",
    "build_pi",
    "section_morphisms",
    "TowerReport",
    "verify_tower",
]


class TrigonalError(ValueError):
    pass


# ---------------------------------------------------------------------------
# sections
# ---------------------------------------------------------------------------


class Section:
    """Nonnegative split of every fiber degree between the two lifts.

    ``splits`` lists, per preimage point (vertex or edge) of the base object,
    the coefficient on the +1 lift and the local degree: (point, plus, d).
    The section's own local degree is the product of binomial(d, plus); the
    splits of a fiber of total degree three then always sum to eight.
    """

    __slots__ = ("kind", "base_object", "splits", "degree")

    def __init__(self, kind: str, base_object, splits: Iterable[tuple]):
        self.kind = kind
        self.base_object = base_object
        self.splits = tuple(splits)
        for point, plus, d in self.splits:
            if not 0 <= plus <= d:
                raise TrigonalError(
                    f"construction violated: split {plus} of degree {d} "
                    f"at {point!r}")
        self.degree = math.prod(
            math.comb(d, plus) for _, plus, d in self.splits)

    def involute(self) -> "Section":
        return Section(self.kind, self.base_object,
                       ((p, d - plus, d) for p, plus, d in self.splits))

    def section_id(self) -> str:
        inner = ",".join(f"{p}:{plus}" for p, plus, _ in self.splits)
        return f"{self.kind}[{self.base_object}]({inner})"

    def divisor(self) -> dict:
        """Coefficients on the lifts (point, +1) and (point, -1)."""
        out = {}
        for p, plus, d in self.splits:
            out[(p, 1)] = plus
            out[(p, -1)] = d - plus
        return out

    def _key(self):
        return (self.kind, self.base_object, self.splits)

    def __eq__(self, other) -> bool:
        return isinstance(other, Section) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"Section({self.section_id()!r}, degree={self.degree})"


def _fiber(t: Tower, x, kind: str) -> list[tuple]:
    trig = t.trig
    if kind == "v":
        points = [(y, trig.vertex_degree[y])
                  for y in trig.source.vertices if trig.vertex_map[y] == x]
    else:
        points = [(e, trig.edge_degree[e])
                  for e in trig.source.edge_ends if trig.edge_image(e) == x]
    points.sort(key=lambda p: idkey(p[0]))
    total = sum(d for _, d in points)
    if total != 3:
        raise TrigonalError(
            f"invalid tower: fiber over {x!r} has total degree {total} != 3")
    return points


def _sections_over(t: Tower, x, kind: str) -> list[Section]:
    points = _fiber(t, x, kind)
    sections = []
    for choice in itertools.product(*(range(d + 1) for _, d in points)):
        sections.append(Section(
            kind, x, ((p, a, d) for (p, d), a in zip(points, choice))))
    if sum(s.degree for s in sections) != 8:
        raise TrigonalError(
            f"construction violated: section degrees over {x!r} sum to "
            f"{sum(s.degree for s in sections)} != 8")
    return sections


def fiber_sections(t: Tower, x) -> list[Section]:
    """All sections over a vertex or edge of the tree."""
    tree = t.tree()
    if x in tree.vertices:
        return _sections_over(t, x, "v")
    if x in tree.edge_ends:
        return _sections_over(t, x, "e")
    raise TrigonalError(f"{x!r} is not a vertex or edge of the tree")


def _restrict(t: Tower, esec: Section, slot: int) -> Section:
    """Endpoint of an edge-section: push its lift coefficients onto the
    root lifts at the chosen side of the tree edge."""
    trig = t.trig
    target_half = (esec.base_object, slot)
    u = trig.target.root(target_half)
    acc: dict = {}
    for e, plus, d in esec.splits:
        side = 0 if trig.half_edge_map[(e, 0)] == target_half else 1
        y = trig.source.root((e, side))
        # the +1 lift of e roots at sheet +1 on its slot-0 side and at
        # sheet sign(e) on its slot-1 side
        rho = 1 if side == 0 else t.cover.signs[e]
        acc[y] = acc.get(y, 0) + (plus if rho == 1 else d - plus)
    return Section("v", u, ((y, acc[y], trig.vertex_degree[y])
                            for y in sorted(acc, key=idkey)))


# ---------------------------------------------------------------------------
# the section graph
# ---------------------------------------------------------------------------


def section_morphisms(t: Tower) -> tuple[HarmonicMorphism, dict, HarmonicMorphism]:
    """The degree-8 section morphism, the involution on section ids, and the
    degree-4 restriction to the canonical component."""
    tree = t.tree()
    vsections: dict[str, Section] = {}
    vdeg: dict = {}
    vmap: dict = {}
    for u in tree.vertex_list():
        for s in _sections_over(t, u, "v"):
            sid = s.section_id()
            vsections[sid] = s
            vdeg[sid] = s.degree
            vmap[sid] = u
    vertices = {sid: 0 for sid in vsections}
    edges: dict = {}
    lengths: dict = {}
    hmap: dict = {}
    edeg: dict = {}
    flip: dict = {}
    for e in tree.edge_vector():
        for s in _sections_over(t, e, "e"):
            sid = s.section_id()
            ends = []
            for slot in (0, 1):
                end = _restrict(t, s, slot)
                eid = end.section_id()
                if eid not in vsections:
                    raise TrigonalError(
                        f"construction violated: restriction of {sid} is "
                        f"not a vertex-section")
                ends.append(eid)
            edges[sid] = tuple(ends)
            lengths[sid] = tree.lengths[e] / s.degree
            hmap[(sid, 0)] = (e, 0)
            hmap[(sid, 1)] = (e, 1)
            edeg[sid] = s.degree
            flip[sid] = s.involute().section_id()
    for sid, s in vsections.items():
        flip[sid] = s.involute().section_id()
    section_graph = Graph(vertices, edges, lengths)
    try:
        psi_tilde = HarmonicMorphism(section_graph, tree, vmap, hmap, vdeg, edeg)
        if psi_tilde.global_degree() != 8:
            raise MorphismError(
                f"global degree {psi_tilde.global_degree()} != 8")
    except MorphismError as err:
        raise TrigonalError(f"construction violated: {err}") from err

    comps = section_graph.components()
    if len(comps) != 2:
        raise TrigonalError(
            f"construction violated: section graph has {len(comps)} "
            f"components, expected 2")
    for cverts, cedges in comps:
        swapped_v = {flip[v] for v in cverts}
        swapped_e = {flip[e] for e in cedges}
        if swapped_v & cverts or swapped_e & cedges:
            raise TrigonalError(
                "construction violated: involution does not swap the "
                "components")
    least = min(section_graph.vertices, key=idkey)
    cverts, cedges = next(c for c in comps if least in c[0])
    component = section_graph.subgraph(cverts, cedges)
    try:
        psi = HarmonicMorphism(
            component, tree,
            {v: vmap[v] for v in cverts},
            {(e, s): hmap[(e, s)] for e in cedges for s in (0, 1)},
            {v: vdeg[v] for v in cverts},
            {e: edeg[e] for e in cedges},
        )
        if psi.global_degree() != 4:
            raise MorphismError(f"global degree {psi.global_degree()} != 4")
    except MorphismError as err:
        raise TrigonalError(f"construction violated: {err}") from err
    return psi_tilde, flip, psi


def build_pi(t: Tower) -> tuple[Graph, tuple[Graph, Graph], Graph]:
    """The full section graph, its two components (canonical one first),
    and the tetragonal graph (= the canonical component)."""
    psi_tilde, flip, psi = section_morphisms(t)
    section_graph = psi_tilde.source
    pi = psi.source
    other_vs = frozenset(v for v in section_graph.vertices
                         if v not in pi.vertices)
    other_es = frozenset(e for e in section_graph.edge_ends
                         if e not in pi.edge_ends)
    other = section_graph.subgraph(other_vs, other_es)
    if pi.canonical_code(with_lengths=True) != other.canonical_code(with_lengths=True):
        raise TrigonalError(
            "construction violated: the two components are not isomorphic")
    expected = t.cover.base.genus() - 1
    if pi.genus() != expected:
        raise TrigonalError(
            f"construction violated: genus {pi.genus()} != {expected}")
    return section_graph, (pi, other), pi


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


class TowerReport:
    """Outcome of checking the moment identity on one tower."""

    __slots__ = ("ok", "w0_ok", "i2_ok", "g_base", "g_pi", "p_coefficient",
                 "q_case", "branch_signs", "w0_value", "i2_numerator",
                 "detail")

    def __init__(self, *, ok, w0_ok, i2_ok, g_base, g_pi, p_coefficient,
                 q_case, branch_signs, w0_value, i2_numerator, detail=""):
        self.ok = ok
        self.w0_ok = w0_ok
        self.i2_ok = i2_ok
        self.g_base = g_base
        self.g_pi = g_pi
        self.p_coefficient = p_coefficient
        self.q_case = q_case
        self.branch_signs = branch_signs
        self.w0_value = w0_value
        self.i2_numerator = i2_numerator
        self.detail = detail

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "w0_ok": self.w0_ok,
            "i2_ok": self.i2_ok,
            "g_base": self.g_base,
            "g_pi": self.g_pi,
            "p_coefficient": self.p_coefficient,
            "q_case": self.q_case,
            "branch_signs": dict(self.branch_signs),
            "w0_value": self.w0_value,
            "i2_numerator": self.i2_numerator,
            "detail": self.detail,
        }

    def __repr__(self) -> str:
        status = "ok" if self.ok else f"FAIL({self.detail})"
        return f"TowerReport({self.q_case!r}, {status})"


def verify_tower(t: Tower, p_coefficient: int = 2) -> TowerReport:
    """Check w0 and second-moment agreement between the tetragonal Jacobian
    and the cover's Prym, in the tree's edge variables."""
    from . import moments, qcases

    _, _, pi = build_pi(t)
    genus_ok = pi.genus() == t.cover.base.genus() - 1
    # the moment invariants only depend on the stable models, which are far
    # smaller; p with the default coefficient is stabilization-invariant
    # (checked by the property tests), so this is a pure speedup
    pi = pi.stabilize() if pi.genus() >= 2 else pi
    cover = t.cover.stabilize()
    w0_pi = moments.w0_jac(pi)
    w0_pr = moments.w0_prym(cover)
    w0_ok = w0_pi == w0_pr

    p_pi = moments.p_jac(pi)
    p_pr = moments.p_prym(cover, p_coefficient)
    q, descriptor = qcases.q_free_cover(cover)
    # q may be piecewise in the tree lengths, but p(pi) - p is one polynomial,
    # so q must agree with it on every branch cone that meets the open
    # orthant.  (In particular a passing tower has the same branch polynomial
    # on all of them.)  Lower-dimensional pieces are limits of these.
    target = p_pi - p_pr
    branch_signs: dict[str, str] = {}
    bad_branch = ""
    for piece_cone, poly in q.pieces:
        if piece_cone.inequalities and not piece_cone.interior_nonempty():
            continue
        good = poly == target
        branch_signs[str(piece_cone)] = "match" if good else "mismatch"
        if not good and not bad_branch:
            bad_branch = f"on {piece_cone}: {p_pi} != {p_pr + poly}"
    i2_ok = w0_ok and bool(branch_signs) and not bad_branch

    detail = ""
    if not genus_ok:
        detail = (f"genus mismatch: g(pi) = {pi.genus()} != "
                  f"{t.cover.base.genus() - 1}")
    elif not w0_ok:
        detail = f"w0 mismatch: {w0_pi} != {w0_pr}"
    elif not i2_ok:
        detail = f"numerator mismatch: {bad_branch or 'q has no branch cone'}"
    return TowerReport(
        ok=genus_ok and w0_ok and i2_ok,
        w0_ok=w0_ok,
        i2_ok=i2_ok,
        g_base=t.cover.base.genus(),
        g_pi=pi.genus(),
        p_coefficient=p_coefficient,
        q_case=descriptor.case,
        branch_signs=branch_signs,
        w0_value=str(w0_pi) if w0_ok else f"{w0_pi} vs {w0_pr}",
        i2_numerator=str(p_pi) if i2_ok else bad_branch,
        detail=detail,
    )
