"""Independent exact oracles used only by the tests.

Everything here is deliberately written against plain rational arithmetic,
without importing the package's polynomial machinery, so that agreement with
the library is meaningful.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

Vec = tuple[Fraction, Fraction]


def bareiss_det(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            m[i][k] = Fraction(0)
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _dot(g, a: Vec, b: Vec) -> Fraction:
    return (g[0][0] * a[0] * b[0] + g[0][1] * a[0] * b[1]
            + g[1][0] * a[1] * b[0] + g[1][1] * a[1] * b[1])


def voronoi_cell_2d(gram) -> list[Vec]:
    """Vertices of the origin's Voronoi cell, in lattice coordinates,
    in counterclockwise hull order.

    The cell is cut out by 2<u, lam> <= <lam, lam> over lattice vectors lam;
    for a 2-D lattice the relevant vectors lie in {-2..2}^2.
    """
    g = [[Fraction(x) for x in row] for row in gram]
    cuts = []
    for a, b in product(range(-2, 3), repeat=2):
        if (a, b) == (0, 0):
            continue
        lam = (Fraction(a), Fraction(b))
        # halfplane: 2*<u,lam> <= <lam,lam>
        cuts.append((lam, _dot(g, lam, lam)))

    candidates: set[Vec] = set()
    for i in range(len(cuts)):
        for j in range(i + 1, len(cuts)):
            (l1, c1), (l2, c2) = cuts[i], cuts[j]
            # rows of the 2x2 system 2*<u, l> = c
            a11 = 2 * (g[0][0] * l1[0] + g[1][0] * l1[1])
            a12 = 2 * (g[0][1] * l1[0] + g[1][1] * l1[1])
            a21 = 2 * (g[0][0] * l2[0] + g[1][0] * l2[1])
            a22 = 2 * (g[0][1] * l2[0] + g[1][1] * l2[1])
            det = a11 * a22 - a12 * a21
            if det == 0:
                continue
            u = ((c1 * a22 - a12 * c2) / det, (a11 * c2 - c1 * a21) / det)
            if all(2 * _dot(g, u, lam) <= c for lam, c in cuts):
                candidates.add(u)

    # counterclockwise convex hull (monotone chain); all points are hull points
    pts = sorted(candidates)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polygon_quadratic_integral(vertices: list[Vec], gram) -> Fraction:
    """Exact integral of u^T G u over a convex polygon (lattice coordinates).

    Fan triangulation plus the edge-midpoint rule, which is exact for
    quadratics in the plane.
    """
    g = [[Fraction(x) for x in row] for row in gram]

    def q(u: Vec) -> Fraction:
        return _dot(g, u, u)

    total = Fraction(0)
    o = vertices[0]
    for a, b in zip(vertices[1:], vertices[2:]):
        area2 = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
        area = abs(area2) / 2
        m1 = ((o[0] + a[0]) / 2, (o[1] + a[1]) / 2)
        m2 = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        m3 = ((b[0] + o[0]) / 2, (b[1] + o[1]) / 2)
        total += area * (q(m1) + q(m2) + q(m3)) / 3
    return total


def i2_cell_2d(gram) -> Fraction:
    """R such that the second moment of the Voronoi cell equals R*sqrt(det).

    With x = B u (B^T B = gram), ||x||^2 = u^T G u and dx = sqrt(det) du, so
    the integral over the cell is rational times sqrt(det).
    """
    return polygon_quadratic_integral(voronoi_cell_2d(gram), gram)


def i2_cell_1d(d: Fraction) -> Fraction:
    """R such that the second moment of the interval cell equals R*sqrt(d)."""
    return Fraction(d) / 12
