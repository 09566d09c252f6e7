"""Sweep machinery: every generic trigonal tower of a given genus.

Stages: trivalent trees with 2g+1 edges; edge type markings (types I/II/III
record how many preimages an object of the tree has); monodromy labels
gluing the degree-3 source graph; genericity filtering (the stabilized
source must have 3g-3 edges with linearly independent lengths); free double
covers; and the moment-identity check on every resulting tower.

Types and valences pin the local shape of the source: a type I object has
one preimage of local degree 3, type II has two (degrees 1 and 2), type III
has three of degree 1.  Redundant lift labels 1..3 collapse accordingly, and
an edge's lifts attach lift i of its tail to lift sigma(i) of its head.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping

from .graph import EdgeId, Graph, VertexId, idkey
from .morphism import (
    DoubleCover,
    HarmonicMorphism,
    MorphismError,
    Tower,
    enumerate_free_covers,
)
from .poly import LinearForm
from .trigonal import TrigonalError, verify_tower

__all__ = [
    "TypedTree",
    "MonodromyTree",
    "trivalent_trees",
    "type_markings",
    "monodromy_assignments",
    "realize_trigonal",
    "genericity_filter",
    "generic_structures",
    "run_verification",
    "Report",
]

I, II, III = 1, 2, 3

# multiset of incident edge types -> vertex type, by valence; these are the
# combos where the total local ramification is exactly 2 at a leaf, 1 at a
# bivalent vertex and 0 at a trivalent one, which is the only distribution
# adding up to the 2g+4 required globally
_VERTEX_RULES: dict[int, dict[tuple[int, ...], int]] = {
    1: {(I,): I, (III,): II},
    2: {(I, II): I, (II, III): II},
    3: {(I, I, III): I, (I, II, II): I, (II, II, III): II, (III, III, III): III},
}

# permutations of {0,1,2} as tuples sigma[i] = image of i
_S3 = tuple(itertools.permutations(range(3)))
_ID = (0, 1, 2)
_SW = (0, 2, 1)  # swap the collapsible labels 2,3


def _compose(a: tuple, b: tuple) -> tuple:
    """a after b."""
    return (a[b[0]], a[b[1]], a[b[2]])


def _orbit_reps(group_left: tuple, group_right: tuple) -> tuple:
    """Lexicographically least representatives of the double cosets
    group_left * sigma * group_right in S3."""
    seen: set = set()
    reps = []
    for sigma in sorted(_S3):
        if sigma in seen:
            continue
        reps.append(sigma)
        for a in group_left:
            for b in group_right:
                seen.add(_compose(a, _compose(sigma, b)))
    return tuple(reps)


def _sigma_candidates(ts: int, te: int, tt: int) -> tuple:
    """Monodromy labels compatible with the endpoint and edge types.

    A type I endpoint forces the identity.  A type II edge keeps its
    degree-1 lift over the degree-1 endpoints, leaving nothing to choose.
    Collapsed labels (the 2,3 pair at a type II object) are quotiented out;
    all six permutations remain only in the all-III case.
    """
    if ts == I or tt == I:
        return (_ID,)
    if te == II:
        # sigma(1) = 1 is forced: the degree-1 lift may not hit the
        # degree-2 vertex; the remaining swap acts on a collapsed label
        return (_ID,)
    left = (_ID, _SW) if tt == II else (_ID,)
    right = (_ID, _SW) if ts == II else (_ID,)
    return _orbit_reps(left, right)


class TypedTree:
    """A trivalent tree with a valid type marking on its edges."""

    __slots__ = ("tree", "edge_type", "vertex_type")

    def __init__(self, tree: Graph, edge_type: Mapping[EdgeId, int]):
        self.tree = tree
        self.edge_type = dict(edge_type)
        self.vertex_type = {}
        for v in tree.vertices:
            incident = tuple(sorted(self.edge_type[h[0]] for h in tree.incident(v)))
            rules = _VERTEX_RULES.get(len(incident), {})
            if incident not in rules:
                raise ValueError(
                    f"invalid marking at {v!r}: edge types {incident}")
            self.vertex_type[v] = rules[incident]

    def to_json(self) -> dict:
        return {
            "edge_type": {str(e): t for e, t in sorted(
                self.edge_type.items(), key=lambda kv: idkey(kv[0]))},
            "vertex_type": {str(v): t for v, t in sorted(
                self.vertex_type.items(), key=lambda kv: idkey(kv[0]))},
        }


class MonodromyTree:
    """A typed tree plus a permutation label on every edge."""

    __slots__ = ("typed", "sigma")

    def __init__(self, typed: TypedTree, sigma: Mapping[EdgeId, tuple]):
        self.typed = typed
        self.sigma = dict(sigma)

    def to_json(self) -> dict:
        out = self.typed.to_json()
        out["sigma"] = {str(e): list(s) for e, s in sorted(
            self.sigma.items(), key=lambda kv: idkey(kv[0]))}
        return out


# ---------------------------------------------------------------------------
# stage 1: trees
# ---------------------------------------------------------------------------


def trivalent_trees(n_edges: int) -> list[Graph]:
    """All isomorphism classes of trees with the given number of edges and
    maximum valence three, with canonical vertex/edge names v*/t*."""
    if n_edges < 1:
        raise ValueError("need at least one edge")
    current: dict[bytes, Graph] = {}
    seed = Graph({"v0": 0, "v1": 0}, {"t0": ("v0", "v1")})
    current[seed.canonical_code()] = seed
    for size in range(2, n_edges + 1):
        grown: dict[bytes, Graph] = {}
        for tree in current.values():
            for v in tree.vertex_list():
                if tree.valence(v) >= 3:
                    continue
                new_v = f"v{size}"
                new_e = f"t{size - 1}"
                vertices = dict(tree.vertices)
                vertices[new_v] = 0
                edges = dict(tree.edge_ends)
                edges[new_e] = (v, new_v)
                candidate = Graph(vertices, edges)
                grown.setdefault(candidate.canonical_code(), candidate)
        current = grown
    return [current[code] for code in sorted(current)]


# ---------------------------------------------------------------------------
# stage 2: type markings
# ---------------------------------------------------------------------------


def type_markings(tree: Graph) -> list[TypedTree]:
    """Every valid assignment of types I/II/III to the tree's edges."""
    edges = tree.edge_vector()
    out = []
    for combo in itertools.product((I, II, III), repeat=len(edges)):
        marking = dict(zip(edges, combo))
        ok = True
        for v in tree.vertices:
            incident = tuple(sorted(marking[h[0]] for h in tree.incident(v)))
            if incident not in _VERTEX_RULES.get(len(incident), {}):
                ok = False
                break
        if ok:
            out.append(TypedTree(tree, marking))
    return out


# ---------------------------------------------------------------------------
# stage 3: monodromy labels
# ---------------------------------------------------------------------------


def monodromy_assignments(tt: TypedTree) -> list[MonodromyTree]:
    """Every compatible choice of permutation per edge, normalized at the
    trivalent all-III vertices.

    The three lifts of such a vertex carry no intrinsic order, so one
    incident edge's permutation can be declared trivial by relabeling the
    lifts.  Each such vertex, taken in canonical order, spends that freedom
    on its least incident edge that is not already trivialized, preferring
    edges whose other endpoint is again type III (where all six permutations
    would otherwise remain in play).
    """
    tree = tt.tree
    edges = tree.edge_vector()
    forced: set[EdgeId] = set()
    normalizing = sorted(
        (v for v in tree.vertices
         if tt.vertex_type[v] == III and tree.valence(v) == 3), key=idkey)
    for v in normalizing:
        incident = sorted((h[0] for h in tree.incident(v)), key=idkey)
        cands = [e for e in incident if e not in forced] or incident
        full = [e for e in cands
                if tt.vertex_type[tree.edge_ends[e][0]] == III
                and tt.vertex_type[tree.edge_ends[e][1]] == III]
        forced.add(full[0] if full else cands[0])
    choices = []
    for e in edges:
        if e in forced:
            choices.append((_ID,))
            continue
        u, w = tree.edge_ends[e]
        choices.append(_sigma_candidates(
            tt.vertex_type[u], tt.edge_type[e], tt.vertex_type[w]))
    out = []
    for combo in itertools.product(*choices):
        out.append(MonodromyTree(tt, dict(zip(edges, combo))))
    return out


# ---------------------------------------------------------------------------
# stage 4: realization and genericity
# ---------------------------------------------------------------------------


def _lift_count(t: int) -> int:
    return {I: 1, II: 2, III: 3}[t]


def _lift_label(obj, t: int, i: int) -> str:
    """Collapse the redundant labels: a type I object has one lift, a type
    II object collapses labels 2 and 3 onto its degree-2 lift."""
    if t == I:
        return f"{obj}.1"
    if t == II:
        return f"{obj}.1" if i == 0 else f"{obj}.2"
    return f"{obj}.{i + 1}"


def _lift_degree(t: int, i: int) -> int:
    if t == I:
        return 3
    if t == II:
        return 1 if i == 0 else 2
    return 1


def realize_trigonal(mt: MonodromyTree) -> HarmonicMorphism | None:
    """Glue the degree-3 source graph; None when it comes out disconnected."""
    tt = mt.typed
    tree = tt.tree
    vertices: dict = {}
    vdeg: dict = {}
    vmap: dict = {}
    for v in tree.vertices:
        t = tt.vertex_type[v]
        for i in range(_lift_count(t)):
            lift = _lift_label(v, t, i)
            vertices[lift] = 0
            vdeg[lift] = _lift_degree(t, i)
            vmap[lift] = v
    edges: dict = {}
    lengths: dict = {}
    hmap: dict = {}
    edeg: dict = {}
    for e in tree.edge_vector():
        te = tt.edge_type[e]
        u, w = tree.edge_ends[e]
        tu, tw = tt.vertex_type[u], tt.vertex_type[w]
        sigma = mt.sigma[e]
        for i in range(3):
            lift = _lift_label(e, te, i)
            ends = (_lift_label(u, tu, i), _lift_label(w, tw, sigma[i]))
            if lift in edges:
                if edges[lift] != ends:
                    raise MorphismError(
                        f"label collapse of {e!r} is inconsistent")
                continue
            d = _lift_degree(te, i)
            edges[lift] = ends
            lengths[lift] = tree.lengths[e] / d
            edeg[lift] = d
            hmap[(lift, 0)] = (e, 0)
            hmap[(lift, 1)] = (e, 1)
    source = Graph(vertices, edges, lengths)
    if not source.is_connected():
        return None
    return HarmonicMorphism(source, tree, vmap, hmap, vdeg, edeg)


def _form_rank(forms: Iterable[LinearForm], variables: list[int]) -> int:
    rows = [[Fraction(f.coeffs.get(v, 0)) for v in variables] for f in forms]
    rank = 0
    for col in range(len(variables)):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                factor = rows[i][col] / lead
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def genericity_filter(f: HarmonicMorphism) -> bool:
    """True when the stabilized source has 3g-3 edges whose lengths are
    linearly independent functions of the tree's edge lengths."""
    genus = f.source.genus()
    stable = f.source.stabilize()
    if len(stable.edge_ends) != 3 * genus - 3:
        return False
    variables = sorted({i for e in f.target.edge_ends
                        for i in f.target.lengths[e].variables()})
    forms = [stable.lengths[e] for e in stable.edge_vector()]
    return _form_rank(forms, variables) == 3 * genus - 3


def generic_structures(genus: int) -> tuple[list[HarmonicMorphism], dict]:
    """All generic trigonal structures of the genus, plus stage counts."""
    if genus < 2:
        raise ValueError("genus must be at least 2")
    trees = trivalent_trees(2 * genus + 1)
    counts = {"trees": len(trees), "typed": 0, "monodromy": 0, "generic": 0}
    generic: list[HarmonicMorphism] = []
    for tree in trees:
        for tt in type_markings(tree):
            counts["typed"] += 1
            for mt in monodromy_assignments(tt):
                counts["monodromy"] += 1
                f = realize_trigonal(mt)
                if f is None or not genericity_filter(f):
                    continue
                counts["generic"] += 1
                generic.append(f)
    return generic, counts


# ---------------------------------------------------------------------------
# stage 5: covers and verification
# ---------------------------------------------------------------------------


class Report:
    """Aggregated outcome of a verification sweep."""

    __slots__ = ("genus", "p_coefficient", "counts", "towers", "passed",
                 "failed", "failures", "elapsed")

    def __init__(self, genus, p_coefficient, counts, towers, passed,
                 failures, elapsed):
        self.genus = genus
        self.p_coefficient = p_coefficient
        self.counts = counts
        self.towers = towers
        self.passed = passed
        self.failed = towers - passed
        self.failures = failures
        self.elapsed = elapsed

    @property
    def all_passed(self) -> bool:
        return self.failed == 0 and self.towers > 0

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "p_coefficient": self.p_coefficient,
            "counts": dict(self.counts),
            "towers": self.towers,
            "passed": self.passed,
            "failed": self.failed,
            "failures": self.failures,
            "elapsed_seconds": round(self.elapsed, 3),
            "all_passed": self.all_passed,
        }


def _tower_payloads(genus: int) -> tuple[list, dict]:
    structures, counts = generic_structures(genus)
    payloads = []
    for fi, f in enumerate(structures):
        for ci, cover in enumerate(enumerate_free_covers(f.source)):
            payloads.append((fi, ci, f, cover))
    counts["towers"] = len(payloads)
    return payloads, counts


def _verify_payload(args) -> tuple[int, int, bool, str, dict | None]:
    fi, ci, f, cover, p_coefficient = args
    tower = Tower(cover, f)
    try:
        report = verify_tower(tower, p_coefficient)
    except TrigonalError as err:
        return fi, ci, False, f"error: {err}", _failure_json(f, cover)
    if report.ok:
        return fi, ci, True, report.q_case, None
    return fi, ci, False, report.detail, _failure_json(f, cover)


def _failure_json(f: HarmonicMorphism, cover: DoubleCover) -> dict:
    from . import jsonio

    return jsonio.tower_to_json(Tower(cover, f))


def run_verification(genus: int, p_coefficient: int = 2,
                     jobs: int = 1) -> Report:
    """Build and check every tower of the genus; see Report for the tallies."""
    import time

    start = time.monotonic()
    payloads, counts = _tower_payloads(genus)
    tasks = [(fi, ci, f, cover, p_coefficient)
             for fi, ci, f, cover in payloads]
    if jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(jobs) as pool:
            results = list(pool.imap(_verify_payload, tasks, chunksize=16))
    else:
        results = [_verify_payload(t) for t in tasks]
    passed = sum(1 for _, _, ok, _, _ in results if ok)
    failures = [{"structure": fi, "cover": ci, "detail": detail,
                 "tower": tower_json}
                for fi, ci, ok, detail, tower_json in results if not ok]
    return Report(genus, p_coefficient, counts, len(tasks), passed,
                  failures, time.monotonic() - start)
