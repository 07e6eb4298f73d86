"""Solution enumeration for the matching equations.

Three independent routes:

* ``brute_force_solutions``: exhaustive search over bounded coordinates,
  tetrahedron by tetrahedron, used as the oracle.
* ``fundamental_solutions``: the Hilbert basis of the admissible part of the
  solution cone, computed face by face from the vertex solutions.  The
  completion procedure of Contejean and Devie is kept as a second route: a
  vector is extended by a unit vector only when that moves its residual
  ``Ax`` towards zero, and pruning by admissibility (and by an octagon cap)
  keeps that search complete.
* ``vertex_solutions``: extreme rays by double description.  A positive
  combination of two rays has the union of their supports, so rays that
  break the quad constraints are dropped as soon as they appear.
"""
from __future__ import annotations

from itertools import product
from math import gcd

from .hilbert import hilbert_basis
from .coords import (
    NormalCoordVector,
    OctCoordVector,
    TooLarge,
    matching_system,
)

DEFAULT_LIMIT = 2_000_000


# ------------------------------------------------------------- brute force

def _tet_choices(cap, quads_allowed=True):
    out = []
    for tris in product(range(cap + 1), repeat=4):
        out.append(tris + (0, 0, 0))
        if quads_allowed:
            for q in range(3):
                for n in range(1, cap + 1):
                    quads = [0, 0, 0]
                    quads[q] = n
                    out.append(tris + tuple(quads))
    return out


def _block_search(system, t, cap, zero_quads=(), constant=None, limit=10**8):
    """All admissible block vectors with entries <= cap solving the system.

    ``constant`` is an extra last column held at a fixed value.
    """
    rows = system.rows
    # level at which each row becomes fully determined
    closing = [[] for _ in range(t)]
    offsets = []
    for r, row in enumerate(rows):
        blocks = {j // 7 for j in range(7 * t) if row[j]}
        off = row[-1] * constant if constant is not None else 0
        if not blocks:
            if off:
                return []
            continue
        closing[max(blocks)].append(r)
        offsets.append((r, off))
    offset = dict(offsets)
    choices = [_tet_choices(cap, i not in zero_quads) for i in range(t)]
    # index each level's choices by their contribution to the rows it closes
    index = []
    for i in range(t):
        table = {}
        for c in choices[i]:
            key = tuple(sum(rows[r][7 * i + j] * c[j] for j in range(7)) for r in closing[i])
            table.setdefault(key, []).append(c)
        index.append(table)
    found = []
    visited = 0
    partial = [offset.get(r, 0) for r in range(len(rows))]

    def rec(i, acc):
        nonlocal visited
        need = tuple(-partial[r] for r in closing[i])
        for c in index[i].get(need, ()):
            visited += 1
            if visited > limit:
                raise TooLarge(f"brute force exceeded {limit} candidates")
            touched = []
            for j, x in enumerate(c):
                if x:
                    col = 7 * i + j
                    for r in range(len(rows)):
                        if rows[r][col]:
                            partial[r] += rows[r][col] * x
                            touched.append((r, rows[r][col] * x))
            if i + 1 == t:
                found.append(acc + c)
            else:
                rec(i + 1, acc + c)
            for r, d in touched:
                partial[r] -= d

    if t:
        rec(0, ())
    return sorted(found)


def brute_force_solutions(tri, max_coord, limit=10**8):
    """Every admissible solution with all coordinates at most ``max_coord``."""
    if max_coord < 0:
        return []
    system = matching_system(tri)
    vecs = _block_search(system, tri.size, max_coord, limit=limit)
    return [NormalCoordVector(v) for v in vecs]


def brute_force_octagonal(tri, tet, curve, max_coord, limit=10**8):
    """Every solution with one octagon of type ``curve`` in ``tet``, no
    quads there, quad constraints elsewhere and coordinates <= cap."""
    system = matching_system(tri, (tet, curve))
    vecs = _block_search(system, tri.size, max_coord, zero_quads={tet}, constant=1, limit=limit)
    return [OctCoordVector(v, tet, curve) for v in vecs]


def indecomposable(vectors):
    """The members not equal to a sum of two nonzero members of the list.

    Valid as the Hilbert basis filter when the list is closed under taking
    summands, as the brute-force output under a coordinate cap is.
    """
    pool = {tuple(v.coords) for v in vectors}
    out = []
    for v in vectors:
        x = v.coords
        if not any(x):
            continue
        split = False
        for u in pool:
            if u == x or not any(u):
                continue
            if all(a <= b for a, b in zip(u, x)):
                w = tuple(b - a for a, b in zip(u, x))
                if any(w) and w in pool:
                    split = True
                    break
        if not split:
            out.append(v)
    return out


# ---------------------------------------------------------- Contejean-Devie

def _completion(rows, n, start, allowed, limit):
    cols = [tuple(row[j] for row in rows) for j in range(n)]
    m = len(rows)
    frontier = {}
    for j in start:
        x = [0] * n
        x[j] = 1
        frontier[tuple(x)] = cols[j]
    basis = []
    masks = []
    steps = 0
    while frontier:
        level = sorted(frontier)
        extend = []
        for x in level:
            r = frontier[x]
            if not any(r):
                basis.append(x)
                masks.append(sum(1 << j for j, v in enumerate(x) if v))
            else:
                extend.append((x, r))
        nxt = {}
        for x, r in extend:
            for j in start:
                c = cols[j]
                if sum(r[i] * c[i] for i in range(m) if c[i]) >= 0:
                    continue
                y = list(x)
                y[j] += 1
                y = tuple(y)
                if y in nxt or not allowed(y, j):
                    continue
                ymask = sum(1 << i for i, v in enumerate(y) if v)
                if any(bm & ymask == bm and all(a <= b for a, b in zip(bv, y))
                       for bm, bv in zip(masks, basis)):
                    continue
                steps += 1
                if steps > limit:
                    raise TooLarge(f"completion exceeded {limit} candidates")
                nxt[y] = tuple(r[i] + c[i] for i in range(m))
        frontier = nxt
    return sorted(basis)


def _quad_ok(y, j, t):
    i = j // 7
    if i >= t or j % 7 < 4:
        return True
    base = 7 * i + 4
    return sum(1 for q in range(3) if y[base + q]) <= 1


def fundamental_solutions(tri, limit=DEFAULT_LIMIT, method="primal"):
    """Admissible solutions that are not sums of two nonzero admissible
    solutions.

    ``method="primal"`` takes the vertex solutions, groups them into the
    maximal admissible faces of the solution cone and computes each face's
    Hilbert basis from a triangulation; ``method="completion"`` runs the
    completion procedure on the matching equations directly.  Both are
    exact; the first scales much further.
    """
    t = tri.size
    n = 7 * t
    if method == "completion":
        system = matching_system(tri)
        basis = _completion(system.rows, n, range(n), lambda y, j: _quad_ok(y, j, t), limit)
        return [NormalCoordVector(v) for v in basis]
    if method != "primal":
        raise ValueError(f"unknown method {method!r}")
    rays = [v.coords for v in vertex_solutions(tri)]
    basis = set()
    for face in admissible_faces(rays, t):
        basis.update(hilbert_basis([rays[i] for i in face], limit))
    return [NormalCoordVector(v) for v in sorted(basis)]


def admissible_faces(rays, t):
    """Maximal sets of rays that share one quad type per tetrahedron."""
    used = [{q for r in rays for q in range(3) if r[7 * i + 4 + q]} for i in range(t)]
    free = [i for i in range(t) if len(used[i]) > 1]
    faces = set()
    for choice in product(*(sorted(used[i]) for i in free)):
        pick = dict(zip(free, choice))
        members = []
        for k, r in enumerate(rays):
            if all(not r[7 * i + 4 + q] or q == pick[i] for i in free for q in range(3)):
                members.append(k)
        faces.add(frozenset(members))
    maximal = [f for f in faces if not any(f < g for g in faces)]
    return sorted((tuple(sorted(f)) for f in maximal if f))


def enumerate_octagonal(tri, tet, curve, limit=DEFAULT_LIMIT, method="primal"):
    """Minimal solutions of the octagonal system having exactly one octagon.

    Columns are the 7t normal coordinates plus the octagon count; the quad
    columns of ``tet`` are held at zero.  Minimal solutions with at most
    one octagon are exactly the Hilbert basis members with at most one.
    """
    if not 0 <= tet < tri.size or curve not in (0, 1, 2):
        raise ValueError("bad octagon position")
    system = matching_system(tri, (tet, curve))
    t = tri.size
    n = 7 * t + 1
    start = [j for j in range(n) if not (j // 7 == tet and j % 7 >= 4 and j < 7 * t)]
    if method == "completion":
        def allowed(y, j):
            if j == n - 1:
                return y[j] <= 1
            return _quad_ok(y, j, t)

        basis = _completion(system.rows, n, start, allowed, limit)
    elif method == "primal":
        rays = _extreme_rays(system.rows, n, start, t)
        basis = set()
        for face in admissible_faces(rays, t):
            basis.update(hilbert_basis([rays[i] for i in face], limit))
        basis = sorted(basis)
    else:
        raise ValueError(f"unknown method {method!r}")
    return [OctCoordVector(v[:-1], tet, curve) for v in basis if v[-1] == 1]


# ------------------------------------------------------ double description

def _reduce(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def _admissible_prefix(v, t):
    return all(sum(1 for q in range(3) if v[7 * i + 4 + q]) <= 1 for i in range(t))


def _extreme_rays(rows, n, columns, t):
    """Extreme rays of ``{Ax = 0, x >= 0}`` supported on ``columns`` that
    satisfy the quad constraints in the first ``7t`` coordinates."""
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in columns]
    for row in rows:
        if not any(row):
            continue
        vals = [sum(a * b for a, b in zip(row, r) if a) for r in rays]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        pos = [(r, v) for r, v in zip(rays, vals) if v > 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        zmask = [sum(1 << j for j, x in enumerate(r) if x == 0) for r in rays]
        new = list(zero)
        for p, vp in pos:
            zp = sum(1 << j for j, x in enumerate(p) if x == 0)
            for q, vq in neg:
                zq = sum(1 << j for j, x in enumerate(q) if x == 0)
                common = zp & zq
                # adjacent unless a third ray is zero wherever both are
                blocked = False
                for r, zr in zip(rays, zmask):
                    if r is p or r is q:
                        continue
                    if zr & common == common:
                        blocked = True
                        break
                if blocked:
                    continue
                c = tuple(vp * b - vq * a for a, b in zip(p, q))
                if _admissible_prefix(c, t):
                    new.append(_reduce(c))
        rays = sorted(set(new))
    return [r for r in rays if any(r) and _admissible_prefix(r, t)]


def vertex_solutions(tri):
    """Minimal integer points on the admissible extreme rays of the
    solution cone."""
    system = matching_system(tri)
    n = 7 * tri.size
    return [NormalCoordVector(r) for r in _extreme_rays(system.rows, n, range(n), tri.size)]
