"""Reconstruction of normal (and octagonal almost normal) surfaces from
coordinates, Haken sums and greedy sphere families."""
from __future__ import annotations

from dataclasses import dataclass

from ..skeleton import _UnionFind, face_classes
from .coords import (
    NormalCoordVector,
    NotAdmissible,
    NotASolution,
    OctCoordVector,
    compatible,
    is_admissible,
    is_solution,
    quad_of,
    quad_sides,
)
from .enumerate import DEFAULT_LIMIT, fundamental_solutions


class Incompatible(ValueError):
    pass


@dataclass(frozen=True)
class NormalSurface:
    discs: tuple          # (tet, kind, type, copy); kind in "T", "Q", "O"
    arcs: int             # arcs after gluing across facets
    points: int           # intersection points with the 1-skeleton
    components: int
    euler: int
    component_vectors: tuple
    component_euler: tuple

    @property
    def weight(self):
        return self.points

    @property
    def is_empty(self):
        return not self.discs


def _disc_list(vec, t):
    discs = []
    for i in range(t):
        block = vec.coords[7 * i: 7 * i + 7]
        for u in range(4):
            discs.extend((i, "T", u, j) for j in range(block[u]))
        for q in range(3):
            discs.extend((i, "Q", q, j) for j in range(block[4 + q]))
        if isinstance(vec, OctCoordVector) and vec.tet_index == i:
            discs.extend((i, "O", vec.curve, j) for j in range(vec.octagons))
    return discs


def _arc_stack(vec, i, face, u):
    """Discs leaving an arc of type ``u`` on ``face`` of tetrahedron ``i``,
    nearest to vertex ``u`` first: its triangles, then the quads (or the
    octagon) putting ``u`` and ``face`` on the same side."""
    block = vec.coords[7 * i: 7 * i + 7]
    stack = [(i, "T", u, j) for j in range(block[u])]
    q = quad_of(u, face)
    count = block[4 + q]
    # quad copies are numbered from the side holding vertex 0
    first, _ = quad_sides(q)
    if u in first:
        stack.extend((i, "Q", q, j) for j in range(count))
    else:
        stack.extend((i, "Q", q, j) for j in reversed(range(count)))
    if isinstance(vec, OctCoordVector) and vec.tet_index == i and quad_of(u, face) != vec.curve:
        stack.extend((i, "O", vec.curve, j) for j in range(vec.octagons))
    return stack


def _edge_points(vec, i, a, b):
    block = vec.coords[7 * i: 7 * i + 7]
    n = block[a] + block[b]
    q = quad_of(a, b)
    for other in range(3):
        if other != q:
            n += block[4 + other]
    if isinstance(vec, OctCoordVector) and vec.tet_index == i:
        n += vec.octagons * (2 if q == vec.curve else 1)
    return n


def build_surface(tri, vec):
    """Glue the normal discs of ``vec`` into a cell complex.

    Discs are stacked in each tetrahedron in the order forced by the
    coordinates and glued across each facet arc by arc, in order from the
    vertex each arc cuts off.
    """
    if not isinstance(vec, NormalCoordVector):
        vec = NormalCoordVector(tuple(vec))
    if not is_admissible(vec, tri.size):
        raise NotAdmissible("quad constraints fail")
    if not is_solution(tri, vec):
        raise NotASolution("matching equations fail")
    t = tri.size
    discs = _disc_list(vec, t)
    uf = _UnionFind()
    for d in discs:
        uf.add(d)
    arcs = 0
    for s, row in enumerate(tri.gluings):
        for k, g in enumerate(row):
            if g is not None:
                d, p = g
                if (d, p[k]) < (s, k):
                    continue
            for u in range(4):
                if u == k:
                    continue
                mine = _arc_stack(vec, s, k, u)
                arcs += len(mine)
                if g is None:
                    continue
                theirs = _arc_stack(vec, d, p[k], p[u])
                for x, y in zip(mine, theirs):
                    uf.union(x, y)
    # points on the 1-skeleton: one count per edge class
    edges, _ = face_classes(tri, 1)
    points = 0
    edge_points = []
    for inc in edges:
        s, (a, b) = inc[0]
        n = _edge_points(vec, s, a, b)
        points += n
        edge_points.append((inc, n))
    euler = points - arcs + len(discs)

    roots = sorted({uf.find(d) for d in discs})
    comp_of = {r: c for c, r in enumerate(roots)}
    comp_coords = [[0] * (7 * t) for _ in roots]
    comp_discs = [0] * len(roots)
    for d in discs:
        c = comp_of[uf.find(d)]
        comp_discs[c] += 1
        i, kind, typ, _ = d
        if kind == "T":
            comp_coords[c][7 * i + typ] += 1
        elif kind == "Q":
            comp_coords[c][7 * i + 4 + typ] += 1
    # per-component Euler characteristic from arcs and points of each disc
    comp_arcs = [0] * len(roots)
    comp_points = [0] * len(roots)
    for s, row in enumerate(tri.gluings):
        for k, g in enumerate(row):
            if g is not None:
                d, p = g
                if (d, p[k]) < (s, k):
                    continue
            for u in range(4):
                if u != k:
                    for x in _arc_stack(vec, s, k, u):
                        comp_arcs[comp_of[uf.find(x)]] += 1
    for inc, n in edge_points:
        s, (a, b) = inc[0]
        for x in _edge_stack(vec, s, a, b):
            comp_points[comp_of[uf.find(x)]] += 1
    comp_euler = tuple(comp_points[c] - comp_arcs[c] + comp_discs[c] for c in range(len(roots)))
    vectors = tuple(NormalCoordVector(tuple(c)) for c in comp_coords)
    return NormalSurface(tuple(discs), arcs, points, len(roots), euler, vectors, comp_euler)


def _edge_stack(vec, i, a, b):
    """Discs meeting edge ``ab`` of tetrahedron ``i``, one entry per point."""
    block = vec.coords[7 * i: 7 * i + 7]
    out = [(i, "T", a, j) for j in range(block[a])]
    q = quad_of(a, b)
    for other in range(3):
        if other != q:
            out.extend((i, "Q", other, j) for j in range(block[4 + other]))
    if isinstance(vec, OctCoordVector) and vec.tet_index == i:
        times = 2 if q == vec.curve else 1
        for j in range(vec.octagons):
            out.extend([(i, "O", vec.curve, j)] * times)
    out.extend((i, "T", b, j) for j in range(block[b]))
    return out


def haken_sum(v, w):
    """Coordinate-wise sum of two compatible normal surfaces."""
    if len(v.coords) != len(w.coords):
        raise Incompatible("vectors have different lengths")
    if isinstance(v, OctCoordVector) or isinstance(w, OctCoordVector):
        raise Incompatible("Haken sums are taken between normal surfaces")
    if not compatible(v, w):
        raise Incompatible("quad types conflict in some tetrahedron")
    return NormalCoordVector(tuple(a + b for a, b in zip(v.coords, w.coords)))


def _glue(tri, vec):
    discs = _disc_list(vec, tri.size)
    uf = _UnionFind()
    for d in discs:
        uf.add(d)
    for s, row in enumerate(tri.gluings):
        for k, g in enumerate(row):
            if g is None:
                continue
            d, p = g
            if (d, p[k]) < (s, k):
                continue
            for u in range(4):
                if u != k:
                    for x, y in zip(_arc_stack(vec, s, k, u), _arc_stack(vec, d, p[k], p[u])):
                        uf.union(x, y)
    return discs, uf


def _piece(vec, i, face, u, pos):
    """The complementary piece of tetrahedron ``i`` holding the gap ``pos``
    of the arc stack at vertex ``u`` on ``face`` (gap 0 touches ``u``)."""
    block = vec.coords[7 * i: 7 * i + 7]
    tu = block[u]
    q_used = next((q for q in range(3) if block[4 + q]), None)
    q_here = quad_of(u, face)
    qarc = block[4 + q_here] if q_used == q_here else 0
    length = tu + qarc
    if q_used is None:
        middle = None
    else:
        first, second = quad_sides(q_used)
        middle = first if u in first else second
    if pos == length:
        if q_used is None:
            return (i, "center")
        if qarc:
            other = quad_sides(q_used)[1] if u in quad_sides(q_used)[0] else quad_sides(q_used)[0]
            return (i, "side", other)
        return (i, "side", middle)
    if pos == 0 and tu:
        return (i, "corner", u)
    if pos < tu:
        return (i, "layer", "T", u, pos)
    if pos == tu:
        return (i, "side", middle)
    # between two quad copies; copies are numbered from the side holding 0
    j = pos - tu
    count = block[4 + q_here]
    if u in quad_sides(q_here)[0]:
        return (i, "layer", "Q", q_here, j)
    return (i, "layer", "Q", q_here, count - j)


def _layer_discs(piece):
    i, _, kind, typ, j = piece
    return (i, kind, typ, j - 1), (i, kind, typ, j)


def complement_regions(tri, vec):
    """Regions of the complement of the surface.

    Returns a list of ``(is_product, components)``: a region is a product
    when it is made only of layers between parallel discs, and
    ``components`` are the indices (as in :func:`build_surface`) of the
    surface components bounding its layers.
    """
    discs, uf = _glue(tri, vec)
    roots = sorted({uf.find(d) for d in discs})
    comp_of = {r: c for c, r in enumerate(roots)}
    regions = _UnionFind()
    for s, row in enumerate(tri.gluings):
        for k, g in enumerate(row):
            for u in range(4):
                if u == k:
                    continue
                n = len(_arc_stack(vec, s, k, u))
                for pos in range(n + 1):
                    a = _piece(vec, s, k, u, pos)
                    regions.add(a)
                    if g is not None:
                        d, p = g
                        b = _piece(vec, d, p[k], p[u], pos)
                        regions.add(b)
                        regions.union(a, b)
    groups = {}
    for piece in regions.parent:
        groups.setdefault(regions.find(piece), []).append(piece)
    out = []
    for root in sorted(groups, key=str):
        pieces = groups[root]
        product = all(p[1] == "layer" for p in pieces)
        comps = set()
        if product:
            for p in pieces:
                for disc in _layer_discs(p):
                    comps.add(comp_of[uf.find(disc)])
        out.append((product, frozenset(comps)))
    return out


def disjoint_union(tri, vectors):
    """Whether the vectors are realized disjointly: their sum is admissible
    and falls apart into exactly these surfaces."""
    total = vectors[0]
    for v in vectors[1:]:
        if not compatible(total, v):
            return False
        total = total + v
    surf = build_surface(tri, total)
    got = sorted(v.coords for v in surf.component_vectors)
    return got == sorted(v.coords for v in vectors)


def has_parallel_pair(tri, vectors):
    """Some product region of the complement lies between two distinct
    members (the members must be disjoint and connected)."""
    total = vectors[0]
    for v in vectors[1:]:
        total = total + v
    for product, comps in complement_regions(tri, total):
        if product and len(comps) > 1:
            return True
    return False


def is_normal_sphere(tri, vec):
    surf = build_surface(tri, vec)
    return surf.components == 1 and surf.euler == 2


def sphere_family(tri, solutions=None, limit=DEFAULT_LIMIT):
    """Greedy maximal family of disjoint, pairwise non-parallel normal
    2-spheres among the fundamental solutions.

    Candidates are connected with Euler characteristic 2, taken by
    increasing weight then coordinates.  A candidate joins when it is a new
    vector, the whole family is still realized disjointly, and no
    complementary region is a product between two members.
    """
    if solutions is None:
        solutions = fundamental_solutions(tri, limit=limit)
    spheres = []
    for v in solutions:
        surf = build_surface(tri, v)
        if surf.components == 1 and surf.euler == 2:
            spheres.append((surf.weight, v.coords, v))
    spheres.sort(key=lambda x: (x[0], x[1]))
    family = []
    for _, _, v in spheres:
        if any(v.coords == f.coords for f in family):
            continue
        trial = family + [v]
        if not all(compatible(v, f) for f in family):
            continue
        if not disjoint_union(tri, trial) or has_parallel_pair(tri, trial):
            continue
        family.append(v)
    return family
