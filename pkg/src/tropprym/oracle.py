"""Independent numeric ground truth for the moment formulas.

Builds exact Gram matrices for the Jacobian lattice (cycle space of the
graph under the edge-length pairing) and the Prym lattice (anti-invariant
image Im(Id - involution) inside the total-space cycle space, under half the
total-space pairing), and estimates Voronoi-cell second moments by Monte
Carlo with exact-closest-vector reduction in dimension <= 4.

The determinant identities det(jac_gram) = w0_jac and det(prym_gram) =
w0_prym are what make these matrices usable as an oracle: they are computed
from lattice geometry alone, never from the weight formulas under test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .graph import Graph, GraphError, idkey
from .morphism import CoverError, DoubleCover

Gram = tuple[tuple[Fraction, ...], ...]


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------


def det_exact(g: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-free Gaussian elimination."""
    n = len(g)
    m = [[Fraction(x) for x in row] for row in g]
    det = Fraction(1)
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if m[i][k] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            det = -det
        piv = m[k][k]
        det *= piv
        for i in range(k + 1, n):
            factor = m[i][k] / piv
            for j in range(k, n):
                m[i][j] -= factor * m[k][j]
    return det


def _check_gram(g: Gram) -> None:
    n = len(g)
    for i in range(n):
        if len(g[i]) != n:
            raise ValueError("Gram matrix is not square")
        for j in range(n):
            if g[i][j] != g[j][i]:
                raise ValueError("Gram matrix is not symmetric")
    for k in range(1, n + 1):
        minor = [row[:k] for row in g[:k]]
        if det_exact(minor) <= 0:
            raise ValueError("degenerate Gram")


def hnf_basis(rows: list[list[int]]) -> list[list[int]]:
    """Basis of the integer row span (row-style Hermite reduction)."""
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return []
    cols = len(mat[0])
    basis: list[list[int]] = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        # Euclidean reduction of column c below the pivot
        while True:
            nonzero = [i for i in range(r + 1, len(mat)) if mat[i][c]]
            if not nonzero:
                break
            i = min(nonzero + [r], key=lambda k: abs(mat[k][c]))
            if i != r:
                mat[r], mat[i] = mat[i], mat[r]
            for i in range(r + 1, len(mat)):
                if mat[i][c]:
                    q = mat[i][c] // mat[r][c]
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    basis = [row for row in mat[:r] if any(row)]
    return basis


# ---------------------------------------------------------------------------
# Gram constructions
# ---------------------------------------------------------------------------


def _numeric(form) -> Fraction:
    if form.variables():
        raise GraphError("gram needs numeric edge lengths")
    return form.evaluate({})


def jac_gram(g: Graph) -> Gram:
    """Gram of the fundamental-cycle basis under sum(a_e b_e length(e))."""
    lengths = {e: _numeric(f) for e, f in g.lengths.items()}
    cycles = g.fundamental_cycles()
    n = len(cycles)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = Fraction(0)
            for e, a in cycles[i].items():
                b = cycles[j].get(e)
                if b:
                    v += a * b * lengths[e]
            out[i][j] = out[j][i] = v
    gram = tuple(tuple(row) for row in out)
    if n:
        _check_gram(gram)
    return gram


def prym_gram(c: DoubleCover) -> Gram:
    """Gram of a basis of Im(Id - involution) in the total-space cycle
    lattice, under one-half of the total-space length pairing."""
    total = c.total_graph()
    if not total.is_connected():
        raise CoverError("disconnected total space")
    flip = c.involution()
    edge_list = sorted(total.edge_ends, key=idkey)
    index = {e: i for i, e in enumerate(edge_list)}
    rows = []
    for z in total.fundamental_cycles():
        vec = [0] * len(edge_list)
        for e, a in z.items():
            vec[index[e]] += a
            vec[index[flip[e]]] -= a
        rows.append(vec)
    basis = hnf_basis(rows)
    if len(basis) != c.torus_rank():
        raise CoverError(
            f"anti-invariant lattice rank {len(basis)} != torus rank {c.torus_rank()}"
        )
    lengths = [_numeric(total.lengths[e]) for e in edge_list]
    n = len(basis)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = Fraction(0)
            for k in range(len(edge_list)):
                if basis[i][k] and basis[j][k]:
                    v += basis[i][k] * basis[j][k] * lengths[k]
            out[i][j] = out[j][i] = v / 2
    gram = tuple(tuple(row) for row in out)
    if n:
        _check_gram(gram)
    return gram


# ---------------------------------------------------------------------------
# Monte-Carlo Voronoi second moment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MCResult:
    det: Fraction        # exact Gram determinant; I0 = sqrt(det)
    i0: float
    i2: float            # estimate of the Voronoi second moment
    std_error: float
    samples: int

    def within(self, target: float, sigmas: float = 4.0) -> bool:
        return abs(self.i2 - target) <= sigmas * self.std_error


def _cvp_offsets(gf: np.ndarray) -> np.ndarray:
    """Integer offset box guaranteed to contain the closest lattice point
    for any target within half a unit cell of its rounding."""
    n = gf.shape[0]
    chol = np.linalg.cholesky(gf)
    cover_sq = 0.25 * float(np.sum(np.diag(chol) ** 2))  # covering radius bound
    ginv = np.linalg.inv(gf)
    spans = []
    for i in range(n):
        s = math.sqrt(cover_sq * float(ginv[i, i])) * (1 + 1e-9)
        k = int(math.floor(s + 0.5)) + 1
        spans.append(range(-k, k + 1))
    return np.array(list(product(*spans)), dtype=float)


def mc_moment(gram: Gram, samples: int = 100_000, seed: int = 0) -> MCResult:
    """Monte-Carlo estimate of the Voronoi-cell second moment of the lattice
    with the given Gram matrix: sample the fundamental parallelepiped
    uniformly in coefficient space, reduce each point to the Voronoi cell by
    exact closest-vector search over a provably sufficient box, and average
    the squared (Gram-metric) norms."""
    n = len(gram)
    if n == 0:
        raise ValueError("empty Gram")
    if n > 4:
        raise ValueError("Gram dimension > 4 unsupported")
    _check_gram(gram)
    det = det_exact(gram)
    i0 = math.sqrt(float(det))
    gf = np.array([[float(x) for x in row] for row in gram])
    offsets = _cvp_offsets(gf)
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    batch = 8192
    while done < samples:
        b = min(batch, samples - done)
        u = rng.random((b, n))
        p = u - np.rint(u)
        diff = p[:, None, :] - offsets[None, :, :]
        dist = np.einsum("bmi,ij,bmj->bm", diff, gf, diff)
        dmin = dist.min(axis=1)
        total += float(dmin.sum())
        total_sq += float((dmin * dmin).sum())
        done += b
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    i2 = mean * i0
    se = math.sqrt(var / samples) * i0
    return MCResult(det=det, i0=i0, i2=i2, std_error=se, samples=samples)
