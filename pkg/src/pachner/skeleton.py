"""Skeleton of a gluing-table triangulation and the invariants read off it."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .perm import sign
from .triangulation import Triangulation2, Triangulation3


class NotClosed(ValueError):
    pass


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller key as root so class order is deterministic
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def face_classes(tri, d):
    """Equivalence classes of ``d``-faces under the gluings.

    Returns ``(classes, index)``: ``classes[c]`` lists the incidences
    ``(simplex, labels)`` of class ``c`` (labels sorted), ``index`` maps each
    incidence to its class.  Classes are numbered by first appearance.
    """
    n = tri.dim
    subsets = list(combinations(range(n + 1), d + 1))
    uf = _UnionFind()
    for s in range(tri.size):
        for sub in subsets:
            uf.add((s, sub))
    for s, row in enumerate(tri.gluings):
        for k, g in enumerate(row):
            if g is None:
                continue
            dest, p = g
            if (dest, p[k]) < (s, k):
                continue
            for sub in subsets:
                if k in sub:
                    continue
                uf.union((s, sub), (dest, tuple(sorted(p[i] for i in sub))))
    classes = []
    index = {}
    root_to_class = {}
    for s in range(tri.size):
        for sub in subsets:
            r = uf.find((s, sub))
            c = root_to_class.get(r)
            if c is None:
                c = root_to_class[r] = len(classes)
                classes.append([])
            classes[c].append((s, sub))
            index[(s, sub)] = c
    return classes, index


def orientation(tri):
    """Consistent simplex signs if the triangulation is orientable, else None."""
    signs = [0] * tri.size
    for start in range(tri.size):
        if signs[start]:
            continue
        signs[start] = 1
        stack = [start]
        while stack:
            s = stack.pop()
            for g in tri.gluings[s]:
                if g is None:
                    continue
                dest, p = g
                want = -signs[s] * sign(p)
                if signs[dest] == 0:
                    signs[dest] = want
                    stack.append(dest)
                elif signs[dest] != want:
                    return None
    return signs


def is_orientable(tri):
    return orientation(tri) is not None


def components(tri):
    comp = [-1] * tri.size
    count = 0
    for start in range(tri.size):
        if comp[start] >= 0:
            continue
        comp[start] = count
        stack = [start]
        while stack:
            s = stack.pop()
            for g in tri.gluings[s]:
                if g is not None and comp[g[0]] < 0:
                    comp[g[0]] = count
                    stack.append(g[0])
        count += 1
    return comp, count


def gf2_rank(rows):
    """Rank over the two-element field of rows given as int bitmasks."""
    pivots = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in pivots:
                r ^= pivots[top]
            else:
                pivots[top] = r
                rank += 1
                break
    return rank


@dataclass(frozen=True)
class LinkInfo:
    """Vertex-link surface summary."""

    triangles: int
    euler: int
    orientable: bool
    connected: bool
    boundary_circles: int

    @property
    def is_sphere(self):
        return self.connected and self.euler == 2 and self.boundary_circles == 0

    @property
    def is_disc(self):
        return self.connected and self.euler == 1 and self.boundary_circles == 1


@dataclass(frozen=True)
class Skeleton:
    vertices: list
    edges: list
    faces: list
    vertex_index: dict = field(repr=False)
    edge_index: dict = field(repr=False)
    face_index: dict = field(repr=False)
    edge_degree: list = field(repr=False)
    vertex_boundary: list = field(repr=False)
    edge_boundary: list = field(repr=False)
    face_boundary: list = field(repr=False)
    edge_valid: list = field(repr=False)
    links: list = field(repr=False)


@dataclass(frozen=True)
class Report:
    V: int
    E: int
    F: int
    T: int
    euler: int
    closed: bool
    orientable: bool
    connected: bool
    links: tuple
    edge_condition: bool
    valid_edges: bool
    skeleton: Skeleton = field(repr=False, compare=False)

    @property
    def counts(self):
        return (self.V, self.E, self.F, self.T)

    @property
    def links_are_spheres(self):
        return all(link.is_sphere for link in self.links)

    @property
    def is_closed_manifold(self):
        return self.closed and self.valid_edges and self.links_are_spheres


def vertex_link(tri, skel, vertex):
    """The link of a vertex class as a 2-triangulation, one triangle per
    corner ``(tet, v)``; triangle corners are the other labels, sorted."""
    corners = [(s, sub[0]) for s, sub in skel.vertices[vertex]]
    pos = {c: i for i, c in enumerate(corners)}
    rows = []
    for s, v in corners:
        others = [x for x in range(4) if x != v]
        row = []
        for j, w in enumerate(others):
            g = tri.gluings[s][w]
            if g is None:
                row.append(None)
                continue
            dest, p = g
            d_others = [x for x in range(4) if x != p[v]]
            q = tuple(d_others.index(p[x]) for x in others)
            row.append((pos[(dest, p[v])], q))
        rows.append(tuple(row))
    return Triangulation2(tuple(rows))


def surface_summary(surf):
    """(V, E, F, chi, boundary circles, connected, orientable) of a surface."""
    verts, _ = face_classes(surf, 0)
    edges, edge_index = face_classes(surf, 1)
    F = surf.size
    bd_edges = [c for c, inc in enumerate(edges) if len(inc) == 1]
    # boundary circles: components of the graph on boundary edges
    uf = _UnionFind()
    _, vindex = face_classes(surf, 0)
    for c in bd_edges:
        s, (a, b) = edges[c][0]
        va, vb = vindex[(s, (a,))], vindex[(s, (b,))]
        uf.add(va)
        uf.add(vb)
        uf.union(va, vb)
    circles = len({uf.find(x) for x in uf.parent})
    _, ncomp = components(surf)
    chi = len(verts) - len(edges) + F
    return len(verts), len(edges), F, chi, circles, ncomp <= 1, is_orientable(surf)


def skeleton(tri, links=True):
    """Quotient cell structure; ``links=False`` skips the vertex links."""
    verts, vindex = face_classes(tri, 0)
    edges, eindex = face_classes(tri, 1)
    faces, findex = face_classes(tri, 2)
    face_boundary = [len(inc) == 1 for inc in faces]
    vertex_boundary = [False] * len(verts)
    edge_boundary = [False] * len(edges)
    for c, inc in enumerate(faces):
        if len(inc) != 1:
            continue
        s, sub = inc[0]
        for v in sub:
            vertex_boundary[vindex[(s, (v,))]] = True
        for e in combinations(sub, 2):
            edge_boundary[eindex[(s, e)]] = True
    edge_degree = [len(inc) for inc in edges]

    # an edge is invalid when the gluings identify it with itself reversed
    uf = _UnionFind()
    for s in range(tri.size):
        for a in range(4):
            for b in range(4):
                if a != b:
                    uf.add((s, a, b))
    for s, row in enumerate(tri.gluings):
        for k, g in enumerate(row):
            if g is None:
                continue
            dest, p = g
            for a in range(4):
                for b in range(4):
                    if a != b and k not in (a, b):
                        uf.union((s, a, b), (dest, p[a], p[b]))
    edge_valid = []
    for inc in edges:
        s, (a, b) = inc[0]
        edge_valid.append(uf.find((s, a, b)) != uf.find((s, b, a)))

    sk = Skeleton(verts, edges, faces, vindex, eindex, findex, edge_degree,
                  vertex_boundary, edge_boundary, face_boundary, edge_valid, [])
    for v in range(len(verts) if links else 0):
        link = vertex_link(tri, sk, v)
        _, _, F, chi, circles, connected, orientable = surface_summary(link)
        sk.links.append(LinkInfo(F, chi, orientable, connected, circles))
    return sk


def edge_condition(tri, skel=None):
    """True iff no edge class meets one tetrahedron in two distinct edge slots."""
    skel = skel or skeleton(tri, links=False)
    for inc in skel.edges:
        tets = [s for s, _ in inc]
        if len(set(tets)) != len(tets):
            return False
    return True


def analyze(tri):
    """Counts, Euler characteristic, vertex links, orientability and the
    edge condition of a 3-triangulation."""
    if not isinstance(tri, Triangulation3):
        raise TypeError("analyze expects a Triangulation3")
    sk = skeleton(tri)
    V, E, F, T = len(sk.vertices), len(sk.edges), len(sk.faces), tri.size
    _, ncomp = components(tri)
    return Report(
        V=V, E=E, F=F, T=T,
        euler=V - E + F - T,
        closed=tri.is_closed(),
        orientable=is_orientable(tri),
        connected=ncomp <= 1,
        links=tuple(sk.links),
        edge_condition=edge_condition(tri, sk),
        valid_edges=all(sk.edge_valid),
        skeleton=sk,
    )


def h1_z2(tri):
    """Dimension of the first homology with two-element coefficients."""
    if not tri.is_closed():
        raise NotClosed("h1_z2 requires a closed triangulation")
    sk = skeleton(tri, links=False)
    # boundary of an edge: its two endpoint classes (cancelling if equal)
    d1 = []
    for inc in sk.edges:
        s, (a, b) = inc[0]
        va, vb = sk.vertex_index[(s, (a,))], sk.vertex_index[(s, (b,))]
        d1.append((1 << va) ^ (1 << vb))
    d2 = []
    for inc in sk.faces:
        s, sub = inc[0]
        row = 0
        for e in combinations(sub, 2):
            row ^= 1 << sk.edge_index[(s, e)]
        d2.append(row)
    rank1 = gf2_rank(d1)
    rank2 = gf2_rank(d2)
    return len(sk.edges) - rank1 - rank2
