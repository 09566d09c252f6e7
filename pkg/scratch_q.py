"""Smoke test for qcases: every rank-4 configuration on a small fixture."""
from fractions import Fraction

from tropprym.graph import Graph
from tropprym.morphism import DoubleCover
from tropprym.poly import var_index, wall_continuity
from tropprym.qcases import q_free_cover


def pt(cover, **vals):
    out = {}
    for e in cover.base.edge_ends:
        out[var_index(f"len_{e}")] = Fraction(vals[str(e)])
    return out


def check(name, cover, expect_case, expect_pieces, points, expect_t_plus_1=None):
    q, desc = q_free_cover(cover)
    assert desc.case == expect_case, (name, desc.case)
    assert len(q.pieces) == expect_pieces, (name, len(q.pieces), expect_pieces)
    assert wall_continuity(q), (name, "wall continuity")
    t = cover.torus_rank()
    for _, poly in q.pieces:
        hd = poly.homogeneous_degree()
        assert hd in (0, t + 1), (name, "homogeneity", hd, t + 1)
    for vals, want in points:
        got = q.evaluate(pt(cover, **vals))
        assert got == Fraction(want), (name, vals, got, want)
    print(f"ok {name}: case={desc.case} pieces={len(q.pieces)} t={t}")
    return q, desc


# rank 2: theta with one odd edge -> q = 0
theta = Graph({"u": 0, "v": 0}, {"a": ("u", "v"), "b": ("u", "v"), "c": ("u", "v")})
cov = DoubleCover(theta, {"a": -1, "b": 1, "c": 1})
check("rank2", cov, "rank<=2", 1, [({"a": 1, "b": 1, "c": 1}, 0)])

# rank 3, no FS-sets: even loops joined by one odd + one even edge
g3n = Graph(
    {"u": 0, "v": 0},
    {"lu": ("u", "u"), "lv": ("v", "v"), "e": ("u", "v"), "f": ("u", "v")},
)
cov = DoubleCover(g3n, {"lu": 1, "lv": 1, "e": -1, "f": 1})
check("rank3-none", cov, "no-sets", 1, [({"lu": 1, "lv": 1, "e": 1, "f": 2}, 0)])

# rank 3, unique pair set: odd loops joined by two even edges
g3 = Graph(
    {"u": 0, "v": 0},
    {"lu": ("u", "u"), "lv": ("v", "v"), "e": ("u", "v"), "f": ("u", "v")},
)
cov = DoubleCover(g3, {"lu": -1, "lv": -1, "e": 1, "f": 1})
check(
    "rank3-pair", cov, "one-pair", 2,
    [
        ({"lu": 1, "lv": 1, "e": 1, "f": 2}, 20),   # 4*1*(6-1)
        ({"lu": 7, "lv": 5, "e": 2, "f": 2}, 64),   # 4*4*(6-2)
    ],
)

# (0,1) prism: two odd triangles joined by three even edges
prism = Graph(
    {f"u{i}": 0 for i in (1, 2, 3)} | {f"v{i}": 0 for i in (1, 2, 3)},
    {
        "a1": ("u1", "u2"), "a2": ("u2", "u3"), "a3": ("u3", "u1"),
        "b1": ("v1", "v2"), "b2": ("v2", "v3"), "b3": ("v3", "v1"),
        "e": ("u1", "v1"), "f": ("u2", "v2"), "g": ("u3", "v3"),
    },
)
cov = DoubleCover(
    prism,
    {"a1": -1, "a2": 1, "a3": 1, "b1": -1, "b2": 1, "b3": 1, "e": 1, "f": 1, "g": 1},
)
ones = {k: 1 for k in ("a1", "a2", "a3", "b1", "b2", "b3", "e", "f", "g")}
check("(0,1)", cov, "one-triple", 3, [(ones, 6)])

# (1,0): odd loop --e,f-- vertex with two odd loops
g10 = Graph(
    {"u": 0, "v": 0},
    {"a": ("u", "u"), "e": ("u", "v"), "f": ("u", "v"), "b": ("v", "v"), "c": ("v", "v")},
)
cov = DoubleCover(g10, {"a": -1, "e": 1, "f": 1, "b": -1, "c": -1})
check(
    "(1,0)", cov, "one-pair", 2,
    [({"a": 1, "e": 1, "f": 2, "b": 1, "c": 1}, 40)],  # p2(1,2)*(b+c)
)

# (1,1): odd loop -f- mid ={g,h}= odd loop, plus long edge e
g11 = Graph(
    {"p": 0, "m": 0, "r": 0},
    {
        "a": ("p", "p"), "f": ("p", "m"), "g": ("m", "r"), "h": ("m", "r"),
        "b": ("r", "r"), "e": ("p", "r"),
    },
)
cov = DoubleCover(g11, {"a": -1, "f": 1, "g": 1, "h": 1, "b": -1, "e": 1})
check(
    "(1,1)", cov, "pair+triple", 4,
    [
        ({"a": 1, "b": 1, "e": 1, "f": 2, "g": 1, "h": 1}, 52),   # 20*2 + 12
        ({"a": 1, "b": 1, "e": 3, "f": 1, "g": 1, "h": 1}, 138),  # 14 + 32*2 + 60
    ],
)

# (1,2): odd loop joined by e1,e2 to two edge-sharing odd triangles
g12 = Graph(
    {"p": 0, "A": 0, "B": 0, "C": 0, "D": 0},
    {
        "a": ("p", "p"), "e1": ("p", "A"), "e2": ("p", "C"),
        "f2": ("A", "B"), "f1": ("B", "C"), "g2": ("A", "D"), "g1": ("C", "D"),
        "u": ("B", "D"),
    },
)
cov = DoubleCover(
    g12, {"a": -1, "e1": 1, "e2": 1, "f2": -1, "f1": -1, "g2": 1, "g1": 1, "u": 1}
)
ones12 = {k: 1 for k in ("a", "e1", "e2", "f1", "f2", "g1", "g2", "u")}
check("(1,2)", cov, "pair+two-triples", 6, [(ones12, 56)])  # 8*4 + 24

# (2,0) disjoint: odd loop =e1,f1= x -br- y =e2,f2= odd loop
g20d = Graph(
    {"p": 0, "x": 0, "y": 0, "r": 0},
    {
        "a": ("p", "p"), "e1": ("p", "x"), "f1": ("p", "x"), "br": ("x", "y"),
        "e2": ("y", "r"), "f2": ("y", "r"), "b": ("r", "r"),
    },
)
cov = DoubleCover(g20d, {"a": -1, "e1": 1, "f1": 1, "br": 1, "e2": 1, "f2": 1, "b": -1})
ones20d = {k: 1 for k in ("a", "e1", "f1", "br", "e2", "f2", "b")}
check("(2,0)-disjoint", cov, "two-pairs-disjoint", 4, [(ones20d, 56)])  # 16+16+24

# (2,0) shared: two odd loops joined by e, both joined to x; even loop h past a bridge
g20s = Graph(
    {"p": 0, "r": 0, "x": 0, "y": 0},
    {
        "a": ("p", "p"), "b": ("r", "r"), "e": ("p", "r"), "f": ("p", "x"),
        "g": ("r", "x"), "br": ("x", "y"), "h": ("y", "y"),
    },
)
cov = DoubleCover(g20s, {"a": -1, "b": -1, "e": 1, "f": 1, "g": 1, "br": 1, "h": 1})
ones20s = {k: 1 for k in ("a", "b", "e", "f", "g", "br", "h")}
check("(2,0)-shared", cov, "two-pairs-shared", 2, [(ones20s, 20)])  # p2(1,2)*1

# (2,1): odd loop -f1- m1 ={g,h balanced}= m2 -f2- odd loop, long edge e
g21 = Graph(
    {"p": 0, "m1": 0, "m2": 0, "r": 0},
    {
        "a": ("p", "p"), "f1": ("p", "m1"), "g": ("m1", "m2"), "h": ("m1", "m2"),
        "f2": ("m2", "r"), "b": ("r", "r"), "e": ("p", "r"),
    },
)
cov = DoubleCover(g21, {"a": -1, "f1": 1, "g": 1, "h": 1, "f2": 1, "b": -1, "e": 1})
check(
    "(2,1)", cov, "two-pairs+triple", 4,
    [
        ({"a": 1, "b": 1, "e": 1, "f1": 1, "f2": 1, "g": 1, "h": 1}, 52),
        ({"a": 1, "b": 1, "e": 3, "f1": 1, "f2": 1, "g": 1, "h": 1}, 326),
    ],
)

# (2,2): odd loops joined through top/bottom vertices, middle rung g
g22 = Graph(
    {"p": 0, "mt": 0, "mb": 0, "r": 0},
    {
        "a": ("p", "p"), "e1": ("p", "mt"), "f1": ("p", "mb"), "g": ("mt", "mb"),
        "e2": ("mt", "r"), "f2": ("mb", "r"), "b": ("r", "r"),
    },
)
cov = DoubleCover(g22, {"a": -1, "e1": 1, "f1": 1, "g": 1, "e2": 1, "f2": 1, "b": -1})
ones22 = {k: 1 for k in ("a", "e1", "f1", "g", "e2", "f2", "b")}
# p2(1,1)*3 twice + 12*(1+1+4-2) + 24 = 24+24+48+24
check("(2,2)", cov, "two-pairs+two-triples", 8, [(ones22, 120)])

# (3,0): triangle with an odd loop at each corner
g30 = Graph(
    {"A": 0, "B": 0, "C": 0},
    {
        "l1": ("A", "A"), "l2": ("B", "B"), "l3": ("C", "C"),
        "e1": ("B", "C"), "e2": ("A", "C"), "e3": ("A", "B"),
    },
)
cov = DoubleCover(g30, {"l1": -1, "l2": -1, "l3": -1, "e1": 1, "e2": 1, "e3": 1})
ones30 = {k: 1 for k in ("l1", "l2", "l3", "e1", "e2", "e3")}
far30 = dict(ones30, e1=5)
check("(3,0)", cov, "three-pairs+0-triples", 4, [(ones30, 126), (far30, 792)])

# (3,1): one corner replaced by an odd parallel pair
g31 = Graph(
    {"P": 0, "Q": 0, "B": 0, "C": 0},
    {
        "f1": ("P", "Q"), "g1": ("P", "Q"), "l2": ("B", "B"), "l3": ("C", "C"),
        "e1": ("B", "C"), "e2": ("Q", "C"), "e3": ("P", "B"),
    },
)
cov = DoubleCover(
    g31, {"f1": -1, "g1": 1, "l2": -1, "l3": -1, "e1": 1, "e2": 1, "e3": 1}
)
ones31 = {k: 1 for k in ("f1", "g1", "l2", "l3", "e1", "e2", "e3")}
check("(3,1)", cov, "three-pairs+1-triples", 6, [(ones31, 158)])

# (3,3): hexagon with three odd parallel pairs
hexg = Graph(
    {"P1": 0, "Q1": 0, "P2": 0, "Q2": 0, "P3": 0, "Q3": 0},
    {
        "f1": ("P1", "Q1"), "g1": ("P1", "Q1"),
        "f2": ("P2", "Q2"), "g2": ("P2", "Q2"),
        "f3": ("P3", "Q3"), "g3": ("P3", "Q3"),
        "e3": ("Q1", "P2"), "e1": ("Q2", "P3"), "e2": ("Q3", "P1"),
    },
)
cov = DoubleCover(
    hexg,
    {
        "f1": -1, "g1": 1, "f2": -1, "g2": 1, "f3": -1, "g3": 1,
        "e1": 1, "e2": 1, "e3": 1,
    },
)
oneshex = {k: 1 for k in ("f1", "g1", "f2", "g2", "f3", "g3", "e1", "e2", "e3")}
check("(3,3)", cov, "three-pairs+3-triples", 10, [(oneshex, 222)])

print("all q smoke checks passed")
