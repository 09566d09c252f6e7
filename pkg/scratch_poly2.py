from fractions import Fraction

from tropprym.poly import (
    Cone,
    LinearForm,
    PiecewisePolynomial,
    Polynomial,
    feasible,
    var_index,
    wall_continuity,
)

V = LinearForm.variable
P = Polynomial.variable

e, f, g = V("e"), V("f"), V("g")

# feasibility basics
assert feasible([], [f - e])                      # f > e possible
assert not feasible([e - f], [f - e])             # e >= f and f > e
assert not feasible([], [-e])                     # -e > 0 impossible on x>0
assert feasible([e - f - g], [])                  # e >= f+g fine
assert not feasible([e - f, f - g, g - e], [e - g])  # cycle forces e=g

# cone reduction: e >= f and f >= g imply e >= g
c = Cone([e - f, f - g, e - g]).reduced()
assert len(c.inequalities) == 2, c

# p2 atom
pe, pf = P("e"), P("f")
p2 = PiecewisePolynomial(
    [
        (Cone([f - e]), 4 * pe * pe * (3 * pf - pe)),
        (Cone([e - f]), 4 * pf * pf * (3 * pe - pf)),
    ]
)
ie, if_, ig = var_index("e"), var_index("f"), var_index("g")
assert p2.evaluate({ie: 1, if_: 2}) == 20
assert p2.evaluate({ie: 2, if_: 1}) == 20
assert wall_continuity(p2)

# deliberately broken version must fail
bad = PiecewisePolynomial(
    [
        (Cone([f - e]), 4 * pe * pe * (3 * pf - pe)),
        (Cone([e - f]), 4 * pf * pf * (3 * pe - pf) + Polynomial.constant(0) + pe),
    ]
)
assert not wall_continuity(bad)

# restriction collapses the determined branch
r = p2.restricted(Cone([e - f]))
assert len(r.pieces) == 1 and r.pieces[0][1] == 4 * pf * pf * (3 * pe - pf)

# arithmetic: (p2 * g + 1) keeps two pieces and evaluates correctly
expr = p2 * P("g") + 1
assert len(expr.pieces) == 2
assert expr.evaluate({ie: 1, if_: 2, ig: 3}) == 61

# adjacency detected through differing side constraints:
# central piece {f+g-e>=0} vs outer piece {e-f-g>=0, f-g>=0}; on the wall
# e=f+g both polynomials agree -> continuity holds even though the side
# constraint f-g>=0 appears on one side only
pg = P("g")
good2 = PiecewisePolynomial(
    [
        (Cone([f + g - e]), pe * pe),
        (Cone([e - f - g, f - g]), (pf + pg) * (pf + pg)),
    ]
)
assert wall_continuity(good2)
bad2 = PiecewisePolynomial(
    [
        (Cone([f + g - e]), pe * pe),
        (Cone([e - f - g, f - g]), (pf + pg) * (pf + pg) + pg),
    ]
)
assert not wall_continuity(bad2)

# facets that only touch in lower dimension are not compared
lower = PiecewisePolynomial(
    [
        (Cone([f - e, g - f]), pe),
        (Cone([e - f, f - g]), pf * pf),
    ]
)
# shared wall e=f requires f-g>=0 on one side and g-f>=0 on the other:
# overlap is e=f=g, lower-dimensional, so no comparison is made
assert wall_continuity(lower)

print("poly2 smoke OK")
