"""Smoke test for moments: Jacobian formulas, Prym formulas, dilation limits."""
from fractions import Fraction

from tropprym.graph import Graph
from tropprym.morphism import DoubleCover
from tropprym.poly import LinearForm, Polynomial, var_index, wall_continuity
from tropprym import moments

P = lambda n: Polynomial.from_linear(LinearForm.variable(n))


def pt(**vals):
    return {var_index(f"len_{k}"): Fraction(v) for k, v in vals.items()}


# --- Jacobian ---------------------------------------------------------------
loop = Graph({"v": 0}, {"e": ("v", "v")})
theta = Graph({"u": 0, "v": 0}, {"a": ("u", "v"), "b": ("u", "v"), "c": ("u", "v")})
dumb = Graph({"u": 0, "v": 0}, {"g1": ("u", "u"), "f": ("u", "v"), "g2": ("v", "v")})

assert moments.w0_jac(loop) == P("len_e")
assert moments.w0_jac(theta) == P("len_a") * P("len_b") + P("len_a") * P("len_c") + P("len_b") * P("len_c")
assert moments.w0_jac(dumb) == P("len_g1") * P("len_g2")

i2l = moments.i2_jac(loop)
assert i2l.numerator.pieces[0][1] == P("len_e") * P("len_e")
num, rad = i2l.evaluate_exact(pt(e=4))
assert (num, rad) == (Fraction(16, 12), 4)
assert abs(i2l.evaluate_numeric(pt(e=4)) - Fraction(2, 3)) < 1e-12

i2t = moments.i2_jac(theta)
num, rad = i2t.evaluate_exact(pt(a=1, b=1, c=1))
assert (num, rad) == (Fraction(10, 12), 3), (num, rad)

lu = Graph({"v": 0}, {"e": ("v", "v")}, {"e": 1})
assert moments.tau(lu) == Fraction(1, 12)
tu = Graph(
    {"u": 0, "v": 0},
    {"a": ("u", "v"), "b": ("u", "v"), "c": ("u", "v")},
    {"a": 1, "b": 1, "c": 1},
)
assert moments.tau(tu) == Fraction(7, 36), moments.tau(tu)

# identity tau_num + 2 p = 3 ell w0, symbolically on three graphs
for g in (loop, theta, dumb):
    total = LinearForm.constant(0)
    for form in g.lengths.values():
        total = total + form
    tnum, tden = moments.tau_parts(g)
    assert tnum + 2 * moments.p_jac(g) == 3 * Polynomial.from_linear(total) * moments.w0_jac(g)

# --- Prym: free covers ------------------------------------------------------
dumbc = DoubleCover(dumb, {"g1": -1, "f": 1, "g2": -1})
w0d = moments.w0_prym(dumbc)
assert w0d == 4 * P("len_f") + P("len_g1") + P("len_g2")
assert moments.p_prym(dumbc) == w0d * w0d
i2d = moments.i2_prym(dumbc)
assert i2d.radicand == w0d
num, rad = i2d.evaluate_exact(pt(f=1, g1=1, g2=1))
assert (num, rad) == (Fraction(36, 12), 6)

two = Graph({"v": 0}, {"g1": ("v", "v"), "g2": ("v", "v")})
twoc = DoubleCover(two, {"g1": -1, "g2": -1})
w0t = moments.w0_prym(twoc)
assert w0t == P("len_g1") + P("len_g2")
assert moments.p_prym(twoc) == w0t * w0t
assert moments.p_prym(twoc, coefficient=1) != w0t * w0t

thoc = DoubleCover(theta, {"a": 1, "b": 1, "c": -1})
assert moments.w0_prym(thoc) == P("len_a") + P("len_b")
q, rank2 = moments.q_prym(thoc), None
assert len(q.pieces) == 1 and q.pieces[0][1].is_zero()

# contraction compatibility: dumbbell numerator at f=0 = two-odd-loops numerator
sub = {var_index("len_f"): 0}
n_dumb = i2d.numerator.substitute(sub, partial=True)
i2two = moments.i2_prym(twoc)
assert n_dumb.pieces[0][1] == i2two.numerator.pieces[0][1]

# genus-3 free cover with FS2-set: q = p2
g3 = Graph(
    {"u": 0, "v": 0},
    {"lu": ("u", "u"), "lv": ("v", "v"), "e": ("u", "v"), "f": ("u", "v")},
)
g3c = DoubleCover(g3, {"lu": -1, "lv": -1, "e": 1, "f": 1})
q3 = moments.q_prym(g3c)
assert len(q3.pieces) == 2
full = pt(lu=1, lv=1, e=1, f=2)
assert q3.evaluate(full) == 20
i23 = moments.i2_prym(g3c)
assert wall_continuity(i23.numerator)
for _, poly in i23.numerator.pieces:
    assert poly.homogeneous_degree() == g3c.torus_rank() + 1

# --- Prym: dilated covers through the loop-attachment limit ------------------
# theta with two dilated edges: Prym is a circle of length a
thd = DoubleCover(theta, {"a": 1, "b": "dilated", "c": "dilated"})
i2thd = moments.i2_prym(thd)
assert i2thd.radicand == P("len_a"), i2thd.radicand
assert len(i2thd.numerator.pieces) == 1
assert i2thd.numerator.pieces[0][1] == P("len_a") * P("len_a")

# edge-free dilated cover: two genus-1 dilated vertices joined by e and f
fs2d = Graph({"u": 1, "v": 1}, {"e": ("u", "v"), "f": ("u", "v")})
fs2dc = DoubleCover(fs2d, {"e": 1, "f": 1}, dilated_vertices={"u", "v"})
i2fd = moments.i2_prym(fs2dc)
E, F = P("len_e"), P("len_f")
assert i2fd.radicand == 4 * E * F, i2fd.radicand
assert wall_continuity(i2fd.numerator)
for _, poly in i2fd.numerator.pieces:
    assert poly.homogeneous_degree() == 3
qfd = moments.q_prym(fs2dc)
assert qfd.evaluate(pt(e=1, f=2)) == 20  # p2 survives the loop-length limit
print("numerator pieces (dilated fs2):", len(i2fd.numerator.pieces))
for cone, poly in i2fd.numerator.pieces:
    print("  cone:", [str(x) for x in cone.inequalities], "poly:", poly)

# homogeneity of p_prym across covers
for c in (dumbc, twoc, thoc, g3c):
    assert moments.p_prym(c).homogeneous_degree() == c.torus_rank() + 1

print("moments smoke OK")
