"""Independent reference computations used by the tests.

Nothing here imports the package's skeleton or homology code; cell classes
are rebuilt from the raw gluing tables with a small union-find.
"""
from itertools import combinations
from pathlib import Path

DATA = Path(__file__).parent / "data"


class UF:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[a] = b

    def classes(self, items):
        out = {}
        for x in items:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def cell_classes(tri, size):
    """Classes of ``size``-element label subsets of the simplices."""
    n = tri.dim + 1
    uf = UF()
    items = []
    for s in range(tri.size):
        for sub in combinations(range(n), size):
            items.append((s, sub))
            uf.find((s, sub))
    for s, row in enumerate(tri.gluings):
        for k, g in enumerate(row):
            if g is None:
                continue
            dest, p = g
            for sub in combinations([x for x in range(n) if x != k], size):
                image = tuple(sorted(p[x] for x in sub))
                uf.union((s, sub), (dest, image))
    return uf.classes(items)


def counts(tri):
    """(V, E, F, T) of a closed or bounded 3-triangulation."""
    return tuple(len(cell_classes(tri, k)) for k in (1, 2, 3)) + (tri.size,)


def gf2_rank(rows):
    rows = [int("".join(map(str, r)), 2) for r in rows if any(r)]
    rank = 0
    while rows:
        pivot = max(rows)
        if not pivot:
            break
        top = pivot.bit_length() - 1
        rows = [r ^ pivot if (r >> top) & 1 else r for r in rows if r != pivot]
        rows = [r for r in rows if r]
        rank += 1
    return rank


def h1_z2_dual(tri):
    """dim H^1(M; Z2) from the dual cell structure.

    Dual vertices are tetrahedra, dual edges are face pairs, dual 2-cells
    are edge classes.  A 1-cocycle assigns a bit to every face so that the
    bits around each edge class sum to zero.
    """
    faces = []
    seen = set()
    for s, row in enumerate(tri.gluings):
        for k, g in enumerate(row):
            if (s, k) in seen:
                continue
            seen.add((s, k))
            seen.add((g[0], g[1][k]))
            faces.append((s, k))
    face_id = {}
    for i, (s, k) in enumerate(faces):
        face_id[(s, k)] = i
        dest, p = tri.gluings[s][k]
        face_id[(dest, p[k])] = i
    edges = cell_classes(tri, 2)
    rows = []
    for cls in edges:
        hits = [0] * len(faces)
        # each (tet, edge) incidence sees the two faces of the tet that
        # contain the edge, so every crossing of the dual cycle is seen twice
        for s, e in cls:
            for k in range(4):
                if k not in e:
                    hits[face_id[(s, k)]] += 1
        rows.append([(h // 2) % 2 for h in hits])
    cocycles = len(faces) - gf2_rank(rows)
    uf = UF()
    for s in range(tri.size):
        uf.find(s)
    for s, row in enumerate(tri.gluings):
        for g in row:
            uf.union(s, g[0])
    components = len(uf.classes(range(tri.size)))
    coboundaries = tri.size - components
    return cocycles - coboundaries


def vertex_degrees(tri):
    return [len(c) for c in cell_classes(tri, 1)]


def edge_classes_with_tets(tri):
    """Per edge class: (degree, set of tetrahedra around it)."""
    return [(len(c), {s for s, _ in c}) for c in cell_classes(tri, 2)]


def expected_move_counts(tri):
    """Legal-move counts by kind from the cell classes alone."""
    faces = cell_classes(tri, 3)
    m23 = sum(1 for c in faces if len(c) == 2 and c[0][0] != c[1][0])
    m32 = sum(1 for d, tets in edge_classes_with_tets(tri) if d == 3 and len(tets) == 3)
    m41 = 0
    for c in cell_classes(tri, 1):
        tets = {s for s, _ in c}
        if len(c) != 4 or len(tets) != 4:
            continue
        # the link must be the boundary of a tetrahedron: the four link
        # triangles meet pairwise, each pair along exactly one arc
        pairs = []
        for s, (v,) in c:
            for k in range(4):
                if k != v:
                    pairs.append(frozenset((s, tri.gluings[s][k][0])))
        if all(len(p) == 2 for p in pairs) and len(set(pairs)) == 6:
            m41 += 1
    return {"M14": tri.size, "M23": m23, "M32": m32, "M41": m41}


def h1_z2_primal(tri):
    """dim H_1(K; Z2) = E - rank d1 - rank d2 on the quotient cell complex."""
    verts = cell_classes(tri, 1)
    edges = cell_classes(tri, 2)
    faces = cell_classes(tri, 3)
    vid = {x: i for i, c in enumerate(verts) for x in c}
    eid = {x: i for i, c in enumerate(edges) for x in c}
    d1 = []
    for c in edges:
        s, (a, b) = c[0]
        row = [0] * len(verts)
        row[vid[(s, (a,))]] ^= 1
        row[vid[(s, (b,))]] ^= 1
        d1.append(row)
    d2 = []
    for c in faces:
        s, f = c[0]
        row = [0] * len(edges)
        for pair in ((f[0], f[1]), (f[0], f[2]), (f[1], f[2])):
            row[eid[(s, pair)]] ^= 1
        d2.append(row)
    return len(edges) - gf2_rank(d1) - gf2_rank(d2)


# ------------------------------------------------------------ normal surfaces

QUAD_PAIRS = ({0, 1}, {0, 2}, {0, 3})


def quad_index(a, b):
    """Index (0, 1, 2) of the quad type with a and b on the same side."""
    pair = {a, b}
    for q, p in enumerate(QUAD_PAIRS):
        if pair == p or pair == {0, 1, 2, 3} - p:
            return q
    raise ValueError


def corner_arcs(coords, s, face, u, octagon=None, oct_count=0):
    """Normal arcs around corner u of a face of tet s."""
    x = coords[7 * s: 7 * s + 7]
    n = x[u] + x[4 + quad_index(u, face)]
    if octagon and octagon[0] == s and oct_count:
        # the octagon crosses its two "long" edges twice; on each face it
        # leaves arcs around the two ends of the long edge lying in it
        c = octagon[1]
        long_pairs = [QUAD_PAIRS[c], {0, 1, 2, 3} - QUAD_PAIRS[c]]
        verts = {0, 1, 2, 3} - {face}
        (long_edge,) = [p for p in long_pairs if p <= verts]
        if u in long_edge:
            n += oct_count
    return n


def matching_ok(tri, coords, octagon=None, oct_count=0):
    for s, row in enumerate(tri.gluings):
        for k, (d, p) in enumerate(row):
            for u in range(4):
                if u == k:
                    continue
                a = corner_arcs(coords, s, k, u, octagon, oct_count)
                b = corner_arcs(coords, d, p[k], p[u], octagon, oct_count)
                if a != b:
                    return False
    return True


def edge_points(coords, s, a, b, octagon=None, oct_count=0):
    x = coords[7 * s: 7 * s + 7]
    q_same = quad_index(a, b)
    n = x[a] + x[b] + sum(x[4 + q] for q in range(3) if q != q_same)
    if octagon and octagon[0] == s:
        c = octagon[1]
        n += oct_count * (2 if quad_index(a, b) == c else 1)
    return n


def weight_and_euler(tri, coords, octagon=None, oct_count=0):
    """(weight, chi) of the normal surface with these coordinates."""
    edges = cell_classes(tri, 2)
    V = 0
    for c in edges:
        s, (a, b) = c[0]
        pts = {edge_points(coords, s2, a2, b2, octagon, oct_count) for s2, (a2, b2) in c}
        assert len(pts) == 1, "edge points disagree around an edge"
        V += pts.pop()
    tris = sum(coords[7 * s + i] for s in range(tri.size) for i in range(4))
    quads = sum(coords[7 * s + 4 + i] for s in range(tri.size) for i in range(3))
    F = tris + quads + oct_count
    E2 = 3 * tris + 4 * quads + 8 * oct_count
    return V, V - E2 // 2 + F


def quad_ok(coords):
    return all(sum(1 for x in coords[i + 4: i + 7] if x) <= 1 for i in range(0, len(coords), 7))
