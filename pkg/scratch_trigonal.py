from fractions import Fraction
from tropprym.graph import Graph
from tropprym.morphism import DoubleCover, HarmonicMorphism, Tower
from tropprym import moments, trigonal
from tropprym.poly import LinearForm, var_index

T = LinearForm.variable("len_T")
tree = Graph({"A": 0, "B": 0}, {"T": ("A", "B")})
theta = Graph({"u": 0, "v": 0},
              {"a": ("u", "v"), "b": ("u", "v"), "c": ("u", "v")},
              {"a": T, "b": T, "c": T})
trig = HarmonicMorphism(
    theta, tree,
    {"u": "A", "v": "B"},
    {(e, s): ("T", s) for e in ("a", "b", "c") for s in (0, 1)},
    {"u": 3, "v": 3},
    {"a": 1, "b": 1, "c": 1},
)
cover = DoubleCover(theta, {"a": 1, "b": 1, "c": -1})
tower = Tower(cover, trig)

# fiber sections: type (1,1,1) over the edge -> 8 sections of degree 1
secs = trigonal.fiber_sections(tower, "T")
assert len(secs) == 8 and all(s.degree == 1 for s in secs)
# type (3) over vertex A -> 4 sections, degrees 1,3,3,1
secs = trigonal.fiber_sections(tower, "A")
assert sorted(s.degree for s in secs) == [1, 1, 3, 3], secs

pi_tilde, comps, pi = trigonal.build_pi(tower)
assert len(pi_tilde.vertices) == 8 and len(pi_tilde.edge_ends) == 8
assert len(pi.vertices) == 4 and len(pi.edge_ends) == 4
assert pi.b1() == 1 == cover.base.genus() - 1
print("pi vertices:", sorted(pi.vertices))
print("pi edges:", {e: ends for e, ends in sorted(pi.edge_ends.items())})

w0_pi = moments.w0_jac(pi)
w0_pr = moments.w0_prym(cover)
print("w0_jac(pi) =", w0_pi, "| w0_prym =", w0_pr)
assert w0_pi == w0_pr

rep = trigonal.verify_tower(tower)
print("report:", rep.to_json())
assert rep.ok and rep.w0_ok and rep.i2_ok
assert rep.g_pi == 1 and rep.g_base == 2 and rep.q_case == "rank<=2"

# same tower, different free cover: identity must hold for each
for signs in ({"a": -1, "b": 1, "c": 1}, {"a": -1, "b": 1, "c": -1},):
    rep2 = trigonal.verify_tower(Tower(DoubleCover(theta, signs), trig))
    assert rep2.ok, rep2.to_json()
print("all theta covers verify")

# fiber type (1,2): degree-2 edge in the fiber
g12 = Graph({"u": 0, "v1": 0, "v2": 0},
            {"e1": ("u", "v1"), "e2": ("u", "v2")},
            {"e1": T, "e2": T / 2})
trig12 = HarmonicMorphism(
    g12, tree,
    {"u": "A", "v1": "B", "v2": "B"},
    {(e, s): ("T", s) for e in ("e1", "e2") for s in (0, 1)},
    {"u": 3, "v1": 1, "v2": 2},
    {"e1": 1, "e2": 2},
)
t12 = Tower(DoubleCover(g12, {"e1": 1, "e2": 1}), trig12)
secs = trigonal.fiber_sections(t12, "T")
assert len(secs) == 6 and sorted(s.degree for s in secs) == [1, 1, 1, 1, 2, 2]
assert sum(s.degree for s in secs) == 8
lens = sorted(str(tree.lengths["T"] / s.degree) for s in secs)
print("(1,2) section degrees ok")

# not a tree object
try:
    trigonal.fiber_sections(tower, "nope")
except trigonal.TrigonalError as e:
    print("bad object rejected:", e)
print("trigonal smoke OK")
