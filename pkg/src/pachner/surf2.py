"""Triangulated surfaces, two-dimensional Pachner moves, disc shellings and
cones into dimension three."""
from __future__ import annotations

from dataclasses import dataclass

from .moves import IllegalSite, MoveSite, apply_move_tracked, is_legal, site_for
from .skeleton import _UnionFind, face_classes, surface_summary
from .triangulation import Triangulation2, Triangulation3, from_simplices, validate

Move2Record = MoveSite


class NotCombinatorial(ValueError):
    pass


class NotADisc(ValueError):
    pass


@dataclass(frozen=True)
class Surface2Report:
    V: int
    E: int
    F: int
    euler: int
    boundary_circles: int
    connected: bool
    orientable: bool
    is_combinatorial: bool

    @property
    def is_disc(self):
        return self.connected and self.euler == 1 and self.boundary_circles == 1

    @property
    def is_sphere(self):
        return self.connected and self.euler == 2 and self.boundary_circles == 0


def vertex_names(surf):
    """Vertex class of every corner: ``names[t][c]``."""
    _, vindex = face_classes(surf, 0)
    return tuple(tuple(vindex[(t, (c,))] for c in range(3)) for t in range(surf.size))


def is_combinatorial(surf):
    """True when vertex classes make the surface a simplicial complex."""
    names = vertex_names(surf)
    seen_tri = set()
    edge_sets = {}
    for t, tri_names in enumerate(names):
        if len(set(tri_names)) != 3:
            return False
        key = frozenset(tri_names)
        if key in seen_tri:
            return False
        seen_tri.add(key)
    edges, eindex = face_classes(surf, 1)
    for c, inc in enumerate(edges):
        t, (a, b) = inc[0]
        key = frozenset((names[t][a], names[t][b]))
        if key in edge_sets:
            return False
        edge_sets[key] = c
    return True


def analyze2(surf):
    V, E, F, chi, circles, connected, orientable = surface_summary(surf)
    return Surface2Report(V, E, F, chi, circles, connected, orientable, is_combinatorial(surf))


def from_triangles(triangles):
    """Surface from vertex-name triples; returns ``(surf, names)``."""
    return from_simplices(triangles, dim=2)


def named_triangles(surf):
    return [tuple(row) for row in vertex_names(surf)]


# ------------------------------------------------------------------ moves

def enumerate_moves2(surf):
    sites = [MoveSite("M13", t, (0, 1, 2)) for t in range(surf.size)]
    edges, _ = face_classes(surf, 1)
    for inc in edges:
        if len(inc) == 2 and inc[0][0] != inc[1][0]:
            site = MoveSite("M22", inc[0][0], inc[0][1])
            if is_legal(surf, site):
                sites.append(site)
    verts, _ = face_classes(surf, 0)
    for inc in verts:
        if len(inc) == 3:
            site = MoveSite("M31", inc[0][0], inc[0][1])
            if is_legal(surf, site):
                sites.append(site)
    return sites


def apply_move2(surf, site):
    """Apply a 2D Pachner move; returns ``(surf', record)``."""
    res = apply_move_tracked(surf, site)
    return res.tri, res.record


class NamedComplex:
    """A triangulation with a vertex name on every corner, kept in step
    through moves.  Cells are found by their vertex names, which is
    unambiguous on simplicial complexes."""

    def __init__(self, tri, names, fresh=None):
        self.tri = tri
        self.names = [tuple(r) for r in names]
        all_names = [v for r in self.names for v in r if isinstance(v, int)]
        self._fresh = fresh if fresh is not None else (max(all_names, default=-1) + 1)
        self.records = []

    @property
    def dim(self):
        return self.tri.dim

    def simplices(self):
        return [frozenset(r) for r in self.names]

    def new_name(self):
        n = self._fresh
        self._fresh += 1
        return n

    def locate(self, cell):
        """``(simplex, labels)`` of a cell given by vertex names."""
        cell = list(cell)
        for s, row in enumerate(self.names):
            if all(v in row for v in cell):
                return s, tuple(row.index(v) for v in cell)
        raise IllegalSite(f"no simplex contains {cell}")

    def site(self, kind, cell):
        s, labels = self.locate(cell)
        if kind in ("M14", "M13"):
            labels = tuple(range(self.dim + 1))
        return MoveSite(kind, s, labels)

    def apply(self, kind, cell, new_vertex=None):
        """Apply a move at the named cell.  Returns the name-level inverse
        ``(kind, cell, created_vertex)``."""
        site = self.site(kind, cell)
        res = apply_move_tracked(self.tri, site)
        names = [None] * res.tri.size
        for old, new in res.survivors.items():
            names[new] = self.names[old]
        created = None
        for idx, origin in zip(res.new, res.origin):
            row = []
            for o in origin:
                if o is None:
                    if created is None:
                        created = new_vertex if new_vertex is not None else self.new_name()
                    row.append(created)
                else:
                    row.append(self.names[o[0]][o[1]])
            names[idx] = tuple(row)
        self.tri = res.tri
        self.names = names
        self.records.append(site)
        inv = res.inverse
        inv_cell = tuple(names[inv.simplex][x] for x in inv.labels)
        removed_vertex = None
        if kind in ("M41", "M31"):
            removed_vertex = cell[0]
        return inv.kind, inv_cell, removed_vertex


# --------------------------------------------------------------- shelling

def _require_disc(surf):
    rep = analyze2(surf)
    if not rep.is_combinatorial:
        raise NotCombinatorial("surface is not combinatorial")
    if not rep.is_disc:
        raise NotADisc("surface is not a disc")
    return rep


def _disc_like(triangles):
    """Whether a set of named triangles forms a combinatorial disc."""
    if not triangles:
        return False
    surf, _ = from_triangles(triangles)
    rep = analyze2(surf)
    # facet gluing alone never identifies vertices; a pinch shows up as
    # more vertex classes than names
    distinct = len({v for t in triangles for v in t})
    return rep.is_disc and rep.is_combinatorial and rep.V == distinct


def shell_order_triangles(triangles):
    """Order named triangles of a disc so that every prefix is a disc.

    Greedy removal from the end, highest index first; the search
    backtracks if a greedy choice strands it.
    """
    triangles = [tuple(t) for t in triangles]
    if not _disc_like(triangles):
        raise NotADisc("triangles do not form a combinatorial disc")

    def removable(current, i):
        rest = [triangles[j] for j in current if j != i]
        return not rest or _disc_like(rest)

    def search(current):
        if len(current) == 1:
            return list(current)
        for i in sorted(current, reverse=True):
            if removable(current, i):
                tail = search([j for j in current if j != i])
                if tail is not None:
                    return tail + [i]
        return None

    order = search(list(range(len(triangles))))
    if order is None:  # pragma: no cover - discs are always shellable
        raise NotADisc("no shelling found")
    return order


def shelling_order2(disc):
    """Triangle order whose every prefix is a disc (so removing triangles
    from the end keeps a disc)."""
    _require_disc(disc)
    return shell_order_triangles(named_triangles(disc))


def disc_to_cone_named(triangles, cone_vertex):
    """Run the disc-to-cone procedure on named triangles.

    Returns ``(final triangles, log, complex)``; log entries are
    ``(kind, cell, created, inverse)`` with the name-level inverse move.
    """
    surf, names = from_triangles(triangles)
    nc = NamedComplex(surf, names)
    order = shell_order_triangles(triangles)
    log = []
    first = triangles[order[0]]
    inv = nc.apply("M13", first, new_vertex=cone_vertex)
    log.append(("M13", tuple(first), cone_vertex, inv))
    disc = {frozenset(first)}
    for idx in order[1:]:
        tri = triangles[idx]
        shared = [e for e in _edges(tri) if any(e <= d for d in disc)]
        if len(shared) == 1:
            edge = tuple(sorted(shared[0]))
            inv = nc.apply("M22", edge)
            log.append(("M22", edge, None, inv))
        elif len(shared) == 2:
            middle = next(iter(shared[0] & shared[1]))
            inv = nc.apply("M31", (middle,))
            log.append(("M31", (middle,), None, inv))
        else:
            raise NotADisc("shelling order attaches a triangle along 3 edges")
        disc.add(frozenset(tri))
    return [tuple(r) for r in nc.names], log, nc


def _edges(tri):
    a, b, c = tri
    return [frozenset((a, b)), frozenset((b, c)), frozenset((a, c))]


def disc_to_cone(disc):
    """Transform a combinatorial disc into the cone on its boundary.

    Returns ``(disc', records)``; at most one move per triangle.
    """
    _require_disc(disc)
    triangles = named_triangles(disc)
    apex = max(v for t in triangles for v in t) + 1
    _, _, nc = disc_to_cone_named(triangles, apex)
    return nc.tri, list(nc.records)


def boundary_cycle(triangles):
    """Boundary vertices of a disc in cyclic order."""
    count = {}
    for t in triangles:
        for e in _edges(t):
            count[e] = count.get(e, 0) + 1
    bd = [tuple(e) for e, c in count.items() if c == 1]
    adj = {}
    for a, b in bd:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = min(adj)
    cycle = [start]
    prev, cur = None, start
    while True:
        nxt = [x for x in sorted(adj[cur]) if x != prev]
        if not nxt or nxt[0] == start:
            break
        prev, cur = cur, nxt[0]
        cycle.append(cur)
    return cycle


def is_cone_on_boundary(triangles):
    """One interior vertex, joined to every boundary vertex."""
    cycle = boundary_cycle(triangles)
    interior = {v for t in triangles for v in t} - set(cycle)
    if len(interior) != 1:
        return False
    apex = next(iter(interior))
    want = {frozenset((apex, cycle[i], cycle[(i + 1) % len(cycle)])) for i in range(len(cycle))}
    return {frozenset(t) for t in triangles} == want


# ------------------------------------------------------------------ cones

def cone3(surf):
    """Cone on a combinatorial surface: tetrahedron ``i`` has triangle ``i``
    on labels 0, 1, 2 and the cone point on label 3."""
    if not is_combinatorial(surf):
        raise NotCombinatorial("cone3 needs a combinatorial surface")
    rows = []
    for row in surf.gluings:
        out = []
        for g in row:
            out.append(None if g is None else (g[0], tuple(g[1]) + (3,)))
        out.append(None)
        rows.append(tuple(out))
    return validate(rows, 3)


def cone_named(triangles, apex):
    """Named cone: tetrahedra ``(a, b, c, apex)``."""
    tets = [tuple(t) + (apex,) for t in triangles]
    tri, names = from_simplices(tets, dim=3)
    return tri, names


def sphere_from_simplices(triangles):
    return from_triangles(triangles)[0]


def tetrahedron_boundary():
    """Boundary of a tetrahedron: the 4-triangle sphere."""
    return from_triangles([(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)])[0]


def boundary_surface(tri):
    """The boundary of a 3-triangulation as a surface.

    Returns ``(surf, facets)``; boundary triangle ``i`` is facet
    ``facets[i] = (tet, slot)`` with corners the other labels, sorted.
    """
    facets = tri.boundary_facets()
    pos = {f: i for i, f in enumerate(facets)}
    rows = []
    for s, f in facets:
        labels = [x for x in range(4) if x != f]
        row = []
        for j, w in enumerate(labels):
            # walk around the edge opposite corner w of this triangle
            edge = [x for x in labels if x != w]
            cur, face_in, other = s, f, w
            mapping = {x: x for x in range(4)}
            while True:
                g = tri.gluings[cur][other]
                if g is None:
                    break
                dest, p = g
                mapping = {x: p[y] for x, y in mapping.items()}
                cur, face_in, other = dest, p[other], p[face_in]
            d_labels = [x for x in range(4) if x != other]
            q = [None] * 3
            for i, x in enumerate(labels):
                if x in edge:
                    q[i] = d_labels.index(mapping[x])
            q[j] = d_labels.index(face_in)
            row.append((pos[(cur, other)], tuple(q)))
        rows.append(tuple(row))
    return validate(rows, 2), facets


def boundary_names(names, facets):
    """Named boundary triangles from a named 3-complex."""
    return [tuple(names[s][x] for x in range(4) if x != f) for s, f in facets]
