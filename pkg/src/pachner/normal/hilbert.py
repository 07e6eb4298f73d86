"""Hilbert bases of rational cones given by their extreme rays.

Every irreducible lattice point of a cone lies in the half-open fundamental
parallelepiped of some simplicial cone of a triangulation, or is one of
the generators.  The cone is triangulated by pulling a ray at a time, the
parallelepiped points are listed with a diagonal form of the generator
matrix, and the candidates are reduced against each other.  For cones in
the non-negative orthant ``x - y`` lies in the cone whenever ``y <= x``
coordinate-wise and both are in the cone, so the reduction test is a plain
domination check.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd

from .coords import TooLarge


def rank(vectors):
    """Exact rank of a list of integer vectors."""
    rows = [list(v) for v in vectors if any(v)]
    r = 0
    if not rows:
        return 0
    ncols = len(rows[0])
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                a, b = p[c], rows[i][c]
                row = [a * x - b * y for x, y in zip(rows[i], p)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                rows[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(rows):
            break
    return r


def diagonal_form(cols):
    """Diagonalize the integer matrix whose columns are ``cols``.

    Returns ``(diag, V)`` with ``U M V = diag`` for some unimodular ``U``;
    only the column transform ``V`` (d x d) is kept.
    """
    d = len(cols)
    n = len(cols[0])
    A = [[cols[j][i] for j in range(d)] for i in range(n)]
    V = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    diag = []
    for t in range(d):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, d):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                raise ValueError("generators are linearly dependent")
            i, j = best
            A[t], A[i] = A[i], A[t]
            if j != t:
                for row in A:
                    row[t], row[j] = row[j], row[t]
                for row in V:
                    row[t], row[j] = row[j], row[t]
            p = A[t][t]
            done = True
            for i in range(t + 1, n):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    done = done and A[i][t] == 0
            for j in range(t + 1, d):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                    done = done and A[t][j] == 0
            if done:
                diag.append(abs(p))
                if p < 0:
                    for row in A:
                        row[t] = -row[t]
                    for row in V:
                        row[t] = -row[t]
                break
    return diag, V


def parallelepiped_points(gens, limit=10**6):
    """Nonzero lattice points ``sum lambda_i g_i`` with ``0 <= lambda_i < 1``."""
    diag, V = diagonal_form(gens)
    count = 1
    for s in diag:
        count *= s
    if count > limit:
        raise TooLarge(f"parallelepiped has {count} points")
    d = len(gens)
    n = len(gens[0])
    out = []
    for ks in product(*(range(s) for s in diag)):
        if not any(ks):
            continue
        mu = [Fraction(k, s) for k, s in zip(ks, diag)]
        lam = [sum(V[i][j] * mu[j] for j in range(d)) for i in range(d)]
        lam = [x - (x.numerator // x.denominator) for x in lam]
        point = []
        for c in range(n):
            val = sum(lam[i] * gens[i][c] for i in range(d) if gens[i][c])
            if val.denominator != 1:
                raise AssertionError("parallelepiped point is not integral")
            point.append(int(val))
        out.append(tuple(point))
    return out


def pulling_triangulation(rays):
    """Simplicial cones (tuples of ray indices) covering the cone spanned by
    ``rays``, which must be its extreme rays and lie in the orthant."""
    n = len(rays[0])
    memo = {}

    def tri(idx):
        key = frozenset(idx)
        if key in memo:
            return memo[key]
        idx = sorted(idx)
        dim = rank([rays[i] for i in idx])
        if len(idx) == dim:
            memo[key] = [tuple(idx)]
            return memo[key]
        v = idx[0]
        facets = set()
        for c in range(n):
            if rays[v][c] == 0:
                continue
            face = frozenset(i for i in idx if rays[i][c] == 0)
            if face and face not in facets and rank([rays[i] for i in face]) == dim - 1:
                facets.add(face)
        out = []
        for face in sorted(facets, key=sorted):
            for simplex in tri(face):
                out.append(tuple(sorted(simplex + (v,))))
        memo[key] = out
        return out

    return tri(range(len(rays)))


def reduce_candidates(cands):
    """Drop every candidate that dominates another nonzero candidate."""
    cands = sorted(set(c for c in cands if any(c)), key=lambda c: (sum(c), c))
    kept = []
    masks = []
    for c in cands:
        cm = sum(1 << i for i, x in enumerate(c) if x)
        if any(m & cm == m and all(a <= b for a, b in zip(k, c)) for m, k in zip(masks, kept)):
            continue
        kept.append(c)
        masks.append(cm)
    return sorted(kept)


def hilbert_basis(rays, limit=10**6):
    """Hilbert basis of the cone spanned by extreme ``rays`` (orthant cone)."""
    rays = [tuple(r) for r in rays]
    if not rays:
        return []
    cands = list(rays)
    for simplex in pulling_triangulation(rays):
        cands.extend(parallelepiped_points([rays[i] for i in simplex], limit))
    return reduce_candidates(cands)
