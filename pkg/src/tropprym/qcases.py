"""Case table for the piecewise correction q to the Prym second moment.

Free double covers of base graphs with cycle rank up to four admit a closed
form for q, organized by the family of FS-sets (edge sets whose removal
splits the base into exactly two unbalanced pieces while every proper subset
keeps it connected).  Rank at most two has q = 0; rank three has at most one
FS_2-set; rank four splits into ten configurations indexed by the FS_2/FS_3
counts and their intersection pattern.

The building blocks are the piecewise cubics/quartics p2 and p3 and the
symmetric quartic S, together with two kinds of weight factors:

- the set factor W(s), one per FS_2-set s: the Prym w0 of the cover
  restricted to the rank-2 component of base minus s;
- for the three-set configuration, the limb factor W_i and product P_i read
  off the rank-1 limb opposite each shared edge (restricting with one
  junction vertex dilated).

Everything is assembled exactly: atoms carry their own cones, arithmetic
intersects them, and infeasible or redundant branches are pruned by the
rational feasibility kernel, which reproduces the advertised domain counts.
"""
from __future__ import annotations

from typing import Iterable, Mapping

from .graph import EdgeId, Graph, VertexId, idkey
from .matroid import SignedMatroidView
from .morphism import CoverError, DoubleCover
from .poly import (
    Cone,
    LinearForm,
    PiecewisePolynomial,
    Polynomial,
)

# ---------------------------------------------------------------------------
# atoms
# ---------------------------------------------------------------------------


def p2_atom(x: LinearForm, y: LinearForm) -> PiecewisePolynomial:
    """4x^2(3y-x) for x <= y, symmetric in (x, y)."""
    X, Y = Polynomial.from_linear(x), Polynomial.from_linear(y)
    return PiecewisePolynomial(
        [
            (Cone([y - x]), 4 * X * X * (3 * Y - X)),
            (Cone([x - y]), 4 * Y * Y * (3 * X - Y)),
        ]
    )


def p3_atom(x: LinearForm, y: LinearForm, z: LinearForm) -> PiecewisePolynomial:
    """2x^2(x^2-2xy-2xz+6yz) when x is smallest, symmetric in all three."""
    X, Y, Z = (Polynomial.from_linear(v) for v in (x, y, z))

    def branch(a, b, c):
        return 2 * a * a * (a * a - 2 * a * b - 2 * a * c + 6 * b * c)

    return PiecewisePolynomial(
        [
            (Cone([y - x, z - x]), branch(X, Y, Z)),
            (Cone([x - y, z - y]), branch(Y, X, Z)),
            (Cone([x - z, y - z]), branch(Z, X, Y)),
        ]
    )


def s_quartic(x: LinearForm, y: LinearForm, z: LinearForm) -> Polynomial:
    """2 s1^4 - 16 s1^2 s2 + 32 s2^2 + 16 s1 s3 in the elementary symmetric
    functions of the three arguments."""
    X, Y, Z = (Polynomial.from_linear(v) for v in (x, y, z))
    s1 = X + Y + Z
    s2 = X * Y + X * Z + Y * Z
    s3 = X * Y * Z
    return 2 * s1 ** 4 - 16 * s1 * s1 * s2 + 32 * s2 * s2 + 16 * s1 * s3


def _assemble(parts: Iterable[tuple[Cone, object]]) -> PiecewisePolynomial:
    pieces = []
    for cone, expr in parts:
        pw = PiecewisePolynomial.coerce(expr).restricted(cone)
        pieces.extend(pw.pieces)
    return PiecewisePolynomial(pieces)._merged()


# ---------------------------------------------------------------------------
# descriptor
# ---------------------------------------------------------------------------


class QCaseDescriptor:
    """Which configuration matched and which edges play which role."""

    __slots__ = ("cycle_rank", "case", "fs2_sets", "fs3_sets", "roles")

    def __init__(
        self,
        cycle_rank: int,
        case: str,
        fs2_sets: Iterable[frozenset],
        fs3_sets: Iterable[frozenset],
        roles: Mapping[str, object],
    ):
        self.cycle_rank = cycle_rank
        self.case = case
        self.fs2_sets = tuple(fs2_sets)
        self.fs3_sets = tuple(fs3_sets)
        self.roles = dict(roles)

    def to_json(self) -> dict:
        def edges(s):
            return sorted((str(e) for e in s), key=str)

        return {
            "cycle_rank": self.cycle_rank,
            "case": self.case,
            "fs2_sets": [edges(s) for s in self.fs2_sets],
            "fs3_sets": [edges(s) for s in self.fs3_sets],
            "roles": {
                k: edges(v) if isinstance(v, (set, frozenset, list, tuple)) else str(v)
                for k, v in sorted(self.roles.items())
            },
        }

    def __repr__(self) -> str:
        return f"QCaseDescriptor({self.case!r}, roles={self.roles!r})"


# ---------------------------------------------------------------------------
# structural helpers
# ---------------------------------------------------------------------------


def _sorted_edges(edges: Iterable[EdgeId]) -> list[EdgeId]:
    return sorted(edges, key=idkey)


def _comp_rank(base: Graph, comp: tuple[frozenset, frozenset]) -> int:
    verts, edges = comp
    return len(edges) - len(verts) + 1


def _unmatched(reason: str) -> CoverError:
    return CoverError(f"unmatched configuration: {reason}")


def _set_factor(cover: DoubleCover, s: frozenset) -> Polynomial:
    """W(s): Prym w0 of the restriction to the rank-2 component of base minus
    the FS_2-set s."""
    from .moments import w0_prym

    comps = cover.base.components(removed_edges=s)
    if len(comps) != 2:
        raise _unmatched("set removal does not split into two components")
    ranks = [_comp_rank(cover.base, c) for c in comps]
    if sorted(ranks) != [1, 2]:
        raise _unmatched(f"component cycle ranks {sorted(ranks)} != [1, 2]")
    verts, edges = comps[ranks.index(2)]
    return w0_prym(cover.restrict(verts, edges))


def _shared_edge(a: frozenset, b: frozenset) -> EdgeId:
    inter = a & b
    if len(inter) != 1:
        raise _unmatched("expected a single shared edge")
    return next(iter(inter))


def _length(cover: DoubleCover, e: EdgeId) -> LinearForm:
    return cover.base.lengths[e]


# ---------------------------------------------------------------------------
# rank-four configurations
# ---------------------------------------------------------------------------


def _case_one_fs3(cover, fs3) -> tuple[PiecewisePolynomial, dict]:
    a, b, c = _sorted_edges(fs3[0])
    q = p3_atom(_length(cover, a), _length(cover, b), _length(cover, c))
    return q, {"e": a, "f": b, "g": c}


def _case_one_fs2(cover, fs2) -> tuple[PiecewisePolynomial, dict]:
    a, b = _sorted_edges(fs2[0])
    W = _set_factor(cover, fs2[0])
    q = p2_atom(_length(cover, a), _length(cover, b)) * W
    return q, {"e": a, "f": b, "w_factor": W}


def _case_fs2_fs3(cover, fs2, fs3) -> tuple[PiecewisePolynomial, dict]:
    s, x = fs2[0], fs3[0]
    e = _shared_edge(s, x)
    (f,) = s - {e}
    g, h = _sorted_edges(x - {e})
    le, lf, lg, lh = (_length(cover, z) for z in (e, f, g, h))
    W = _set_factor(cover, s)
    G, H, E, F = (Polynomial.from_linear(z) for z in (lg, lh, le, lf))
    q = _assemble(
        [
            (Cone([lf - le]), p2_atom(le, lf) * W + 12 * E * E * G * H),
            (
                Cone([le - lf]),
                p3_atom(le - lf, lg, lh)
                + p2_atom(lf, le) * W
                + 12 * F * G * H * (2 * E - F),
            ),
        ]
    )
    return q, {"e": e, "f": f, "g": g, "h": h, "w_factor": W}


def _case_fs2_two_fs3(cover, fs2, fs3) -> tuple[PiecewisePolynomial, dict]:
    s = fs2[0]
    x1, x2 = fs3
    e1, e2 = _shared_edge(s, x1), _shared_edge(s, x2)
    if {e1, e2} != set(s) or x1 & x2:
        raise _unmatched("three-sets do not partition the pair set")
    f1, g1 = _sorted_edges(x1 - {e1})
    f2, g2 = _sorted_edges(x2 - {e2})
    W = _set_factor(cover, s)

    def half(ei, ej, fi, gi, fj, gj):
        lei, lej = _length(cover, ei), _length(cover, ej)
        Ei, Ej = Polynomial.from_linear(lei), Polynomial.from_linear(lej)
        Fi, Gi = (Polynomial.from_linear(_length(cover, z)) for z in (fi, gi))
        Fj, Gj = (Polynomial.from_linear(_length(cover, z)) for z in (fj, gj))
        expr = (
            p3_atom(lej - lei, _length(cover, fj), _length(cover, gj))
            + p2_atom(lei, lej) * W
            - 12 * Ei * Ei * Fj * Gj
            + 24 * Ei * Ej * Fj * Gj
            + 12 * Ei * Ei * Fi * Gi
        )
        return (Cone([lej - lei]), expr)

    q = _assemble(
        [
            half(e1, e2, f1, g1, f2, g2),
            half(e2, e1, f2, g2, f1, g1),
        ]
    )
    roles = {"e1": e1, "e2": e2, "f1": f1, "g1": g1, "f2": f2, "g2": g2,
             "w_factor": W}
    return q, roles


def _case_two_fs2_disjoint(cover, fs2) -> tuple[PiecewisePolynomial, dict]:
    s1, s2 = fs2
    a1, b1 = _sorted_edges(s1)
    a2, b2 = _sorted_edges(s2)
    W1, W2 = _set_factor(cover, s1), _set_factor(cover, s2)
    la1, lb1, la2, lb2 = (_length(cover, z) for z in (a1, b1, a2, b2))
    A1, B1, A2, B2 = (
        Polynomial.from_linear(z) for z in (la1, lb1, la2, lb2)
    )
    q = (
        p2_atom(la1, lb1) * W1
        + p2_atom(la2, lb2) * W2
        + 24 * A1 * A2 * B1 * B2
    )
    roles = {"e1": a1, "f1": b1, "e2": a2, "f2": b2,
             "w_factor_1": W1, "w_factor_2": W2}
    return q, roles


def _case_two_fs2_shared(cover, fs2) -> tuple[PiecewisePolynomial, dict]:
    s1, s2 = fs2
    e = _shared_edge(s1, s2)
    (f,) = s1 - {e}
    (g,) = s2 - {e}
    W1, W2 = _set_factor(cover, s1), _set_factor(cover, s2)
    if W1 != W2:
        raise _unmatched("shared-pair weight factors disagree")
    q = p2_atom(_length(cover, e), _length(cover, f) + _length(cover, g)) * W1
    return q, {"e": e, "f": f, "g": g, "w_factor": W1}


def _case_two_fs2_one_fs3(cover, fs2, fs3) -> tuple[PiecewisePolynomial, dict]:
    s1, s2 = fs2
    x = fs3[0]
    e = _shared_edge(s1, s2)
    if _shared_edge(s1, x) != e or _shared_edge(s2, x) != e:
        raise _unmatched("triple does not share the common edge")
    (f1,) = s1 - {e}
    (f2,) = s2 - {e}
    g, h = _sorted_edges(x - {e})
    le, lf1, lf2, lg, lh = (_length(cover, z) for z in (e, f1, f2, g, h))
    E, F1, F2, G, H = (
        Polynomial.from_linear(z) for z in (le, lf1, lf2, lg, lh)
    )
    W1, W2 = _set_factor(cover, s1), _set_factor(cover, s2)
    if W1 != W2 or W1 != Polynomial.from_linear(lg + lh):
        raise _unmatched("balanced-cycle weight factor mismatch")
    small = (
        Cone([lf1 + lf2 - le]),
        p2_atom(le, lf1 + lf2) * W1 + 12 * E * E * G * H,
    )
    big = (
        Cone([le - lf1 - lf2]),
        p3_atom(le - lf1 - lf2, lg, lh)
        + p2_atom(lf1, le) * W1
        + p2_atom(lf2, le) * W2
        + 12
        * (2 * E - F1 - F2)
        * ((F1 + F2) * G * H + F1 * F2 * (G + H)),
    )
    q = _assemble([small, big])
    roles = {"e": e, "f1": f1, "f2": f2, "g": g, "h": h, "w_factor": W1}
    return q, roles


def _case_two_fs2_two_fs3(cover, fs2, fs3) -> tuple[PiecewisePolynomial, dict]:
    s1, s2 = fs2
    x, y = fs3
    if s1 & s2:
        raise _unmatched("pair sets overlap")
    g = _shared_edge(x, y)
    e1 = _shared_edge(x, s1)
    f2 = _shared_edge(x, s2)
    (f1,) = s1 - {e1}
    (e2,) = s2 - {f2}
    if y != frozenset({e2, f1, g}):
        raise _unmatched("second triple does not close the pattern")
    W1, W2 = _set_factor(cover, s1), _set_factor(cover, s2)
    le1, lf1, le2, lf2, lgg = (
        _length(cover, z) for z in (e1, f1, e2, f2, g)
    )
    E1, F1, E2, F2, G = (
        Polynomial.from_linear(z) for z in (le1, lf1, le2, lf2, lgg)
    )
    base = p2_atom(le1, lf1) * W1 + p2_atom(le2, lf2) * W2 + 24 * E1 * E2 * F1 * F2

    def pure(a1, b1, a2, b2):
        # 12g(a1 b2^2 + a2 b1^2 + 2(a1+a2) b1 b2 - (b1+b2) b1 b2)
        return 12 * G * (
            a1 * b2 * b2
            + a2 * b1 * b1
            + 2 * (a1 + a2) * b1 * b2
            - (b1 + b2) * b1 * b2
        )

    def mixed(a1, b1, a2, b2, la1, lb1, la2, lb2):
        # cone a1 >= b1, b2 >= a2
        return (
            p3_atom(la1 - lb1, lb2 - la2, lgg)
            + 12
            * G
            * (
                -a1 * a2 * a2
                - b1 * b1 * b2
                + a2 * a2 * b1
                + a2 * b1 * b1
                + 2 * a1 * a2 * b2
                + 2 * a1 * b1 * b2
            )
        )

    q = _assemble(
        [
            (Cone([le1 - lf1, le2 - lf2]), base + pure(E1, F1, E2, F2)),
            (Cone([lf1 - le1, lf2 - le2]), base + pure(F1, E1, F2, E2)),
            (
                Cone([le1 - lf1, lf2 - le2]),
                base + mixed(E1, F1, E2, F2, le1, lf1, le2, lf2),
            ),
            (
                Cone([lf1 - le1, le2 - lf2]),
                base + mixed(F1, E1, F2, E2, lf1, le1, lf2, le2),
            ),
        ]
    )
    roles = {"e1": e1, "f1": f1, "e2": e2, "f2": f2, "g": g,
             "w_factor_1": W1, "w_factor_2": W2}
    return q, roles


def _case_three_fs2(cover, fs2, fs3) -> tuple[PiecewisePolynomial, dict]:
    """Three pair sets sharing three edges pairwise; zero to three triples."""
    from .moments import w0_prym

    union = frozenset().union(*fs2)
    if len(union) != 3:
        raise _unmatched("three pair sets do not share three edges")
    e = _sorted_edges(union)
    if {frozenset(p) for p in fs2} != {
        frozenset({e[0], e[1]}),
        frozenset({e[0], e[2]}),
        frozenset({e[1], e[2]}),
    }:
        raise _unmatched("pair sets are not the three pairs of shared edges")
    base = cover.base
    comps = base.components(removed_edges=union)
    if len(comps) != 3:
        raise _unmatched("removing the shared edges leaves != 3 limbs")

    # limb i sits opposite e[i]: it contains no endpoint of e[i]
    limb: list[tuple[frozenset, frozenset]] = [None] * 3
    for comp in comps:
        verts, _ = comp
        touching = [
            i
            for i in range(3)
            if not any(v in verts for v in base.edge_ends[e[i]])
        ]
        if len(touching) != 1:
            raise _unmatched("limb does not sit opposite a unique edge")
        if limb[touching[0]] is not None:
            raise _unmatched("two limbs opposite one edge")
        limb[touching[0]] = comp
    lengths = [_length(cover, z) for z in e]
    E = [Polynomial.from_linear(z) for z in lengths]
    s1 = lengths[0] + lengths[1] + lengths[2]

    # limb data: W_i (one junction dilated), P_i (parallel-pair product),
    # and the predicted triple set when the limb is a parallel pair
    W: list[Polynomial] = []
    P: list[Polynomial] = []
    predicted_fs3 = set()
    for i in range(3):
        verts, edges = limb[i]
        junctions = sorted(
            (
                v
                for v in verts
                if any(
                    v in base.edge_ends[e[j]] for j in range(3) if j != i
                )
            ),
            key=idkey,
        )
        if not junctions:
            raise _unmatched("limb without junction vertex")
        sub = cover.restrict(
            verts,
            edges,
            extra_dilated=(junctions[0],),
            genus_floor={junctions[0]: 1},
        )
        W.append(w0_prym(sub))
        nonloops = [z for z in edges if not base.is_loop(z)]
        if len(edges) == 2 and len(nonloops) == 2:
            f, g = _sorted_edges(edges)
            P.append(
                Polynomial.from_linear(_length(cover, f))
                * Polynomial.from_linear(_length(cover, g))
            )
            predicted_fs3.add(frozenset({e[i], f, g}))
        else:
            P.append(Polynomial.zero())
    if {frozenset(x) for x in fs3} != predicted_fs3:
        raise _unmatched("triples do not match the parallel-pair limbs")

    # cross-check: the rank-2 component factor satisfies W(s_i) = 4 e_i + W_j + W_k
    for i in range(3):
        others = [j for j in range(3) if j != i]
        si = frozenset({e[others[0]], e[others[1]]})
        expect = 4 * E[i] + W[others[0]] + W[others[1]]
        if _set_factor(cover, si) != expect:
            raise _unmatched("set factor does not match limb weights")

    central_cone = Cone([s1 - lengths[i] - lengths[i] for i in range(3)])
    central = s_quartic(*lengths)
    central_pw = PiecewisePolynomial.single(central)
    for i in range(3):
        central_pw = central_pw + p2_atom(lengths[i], s1 - lengths[i]) * W[i]
        central_pw = central_pw + 12 * E[i] * E[i] * P[i]
    parts = [(central_cone, central_pw)]

    for a in range(3):
        b, c = [j for j in range(3) if j != a]
        cone = Cone([lengths[a] - lengths[b] - lengths[c]])
        wb = 4 * E[b] + W[a] + W[c]  # rank-2 factor opposite e_b
        wc = 4 * E[c] + W[a] + W[b]
        expr = (
            p2_atom(lengths[b], lengths[a]) * wc
            + p2_atom(lengths[c], lengths[a]) * wb
            + 12
            * (2 * E[a] - E[b] - E[c])
            * ((E[b] + E[c]) * P[a] + E[b] * E[c] * W[a])
            + 12 * (E[b] * E[b] * E[c] * W[b] + E[c] * E[c] * E[b] * W[c])
            + 12 * (E[b] * E[b] * P[b] + E[c] * E[c] * P[c])
        )
        if not P[a].is_zero():
            fa, ga = _sorted_edges(limb[a][1])
            expr = expr + p3_atom(
                lengths[a] - lengths[b] - lengths[c],
                _length(cover, fa),
                _length(cover, ga),
            )
        parts.append((cone, expr))
    q = _assemble(parts)
    roles = {
        "e1": e[0], "e2": e[1], "e3": e[2],
        "limb_1": _sorted_edges(limb[0][1]),
        "limb_2": _sorted_edges(limb[1][1]),
        "limb_3": _sorted_edges(limb[2][1]),
    }
    return q, roles


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def q_free_cover(cover: DoubleCover) -> tuple[PiecewisePolynomial, QCaseDescriptor]:
    """q and the matched configuration for a free cover, classified on the
    stabilized model (whose edge lengths are forms in the original ones)."""
    if not cover.is_free():
        raise CoverError("q case table needs a free cover")
    cover = cover.stabilize()
    cover.torus_rank()  # validates a connected total space
    rank = cover.base.b1()
    zero = PiecewisePolynomial.single(Polynomial.zero())
    if rank > 4:
        raise CoverError(f"no closed form for base cycle rank {rank}")
    if rank <= 2:
        return zero, QCaseDescriptor(rank, "rank<=2", [], [], {})
    sm = SignedMatroidView(cover)
    fs2 = sm.fs_sets(2)
    if rank == 3:
        if not fs2:
            return zero, QCaseDescriptor(3, "no-sets", [], [], {})
        if len(fs2) > 1:
            raise _unmatched("rank three with several pair sets")
        a, b = _sorted_edges(fs2[0])
        q = p2_atom(_length(cover, a), _length(cover, b))
        return q, QCaseDescriptor(3, "one-pair", fs2, [], {"e": a, "f": b})
    fs3 = sm.fs_sets(3)
    n2, n3 = len(fs2), len(fs3)
    if n2 == 0 and n3 == 0:
        return zero, QCaseDescriptor(4, "no-sets", [], [], {})
    if n2 == 0 and n3 == 1:
        q, roles = _case_one_fs3(cover, fs3)
        return q, QCaseDescriptor(4, "one-triple", fs2, fs3, roles)
    if n2 == 1 and n3 == 0:
        q, roles = _case_one_fs2(cover, fs2)
        return q, QCaseDescriptor(4, "one-pair", fs2, fs3, roles)
    if n2 == 1 and n3 == 1:
        q, roles = _case_fs2_fs3(cover, fs2, fs3)
        return q, QCaseDescriptor(4, "pair+triple", fs2, fs3, roles)
    if n2 == 1 and n3 == 2:
        q, roles = _case_fs2_two_fs3(cover, fs2, fs3)
        return q, QCaseDescriptor(4, "pair+two-triples", fs2, fs3, roles)
    if n2 == 2 and n3 == 0:
        if fs2[0] & fs2[1]:
            q, roles = _case_two_fs2_shared(cover, fs2)
            return q, QCaseDescriptor(4, "two-pairs-shared", fs2, fs3, roles)
        q, roles = _case_two_fs2_disjoint(cover, fs2)
        return q, QCaseDescriptor(4, "two-pairs-disjoint", fs2, fs3, roles)
    if n2 == 2 and n3 == 1:
        q, roles = _case_two_fs2_one_fs3(cover, fs2, fs3)
        return q, QCaseDescriptor(4, "two-pairs+triple", fs2, fs3, roles)
    if n2 == 2 and n3 == 2:
        q, roles = _case_two_fs2_two_fs3(cover, fs2, fs3)
        return q, QCaseDescriptor(4, "two-pairs+two-triples", fs2, fs3, roles)
    if n2 == 3:
        q, roles = _case_three_fs2(cover, fs2, fs3)
        return q, QCaseDescriptor(4, f"three-pairs+{n3}-triples", fs2, fs3, roles)
    raise _unmatched(f"{n2} pair sets, {n3} triple sets")
