"""Normal coordinates, matching equations and admissibility.

Coordinate order within a tetrahedron is fixed as

    (T0, T1, T2, T3, Q01|23, Q02|13, Q03|12)

where ``Ti`` counts triangles cutting off vertex ``i`` and quad type ``q``
separates the vertex pair ``QUAD_PAIRS[q]`` from its complement.

A normal arc on facet ``k`` of a tetrahedron is named by the vertex ``u``
(``u != k``) it cuts off.  Triangles around ``u`` and quads of the type
putting ``u`` and ``k`` on the same side both leave such an arc.
"""
from __future__ import annotations

from dataclasses import dataclass, field

QUAD_PAIRS = ((0, 1), (0, 2), (0, 3))
_QUAD_OF = {}
for _q, (_a, _b) in enumerate(QUAD_PAIRS):
    _c, _d = (x for x in range(4) if x not in (_a, _b))
    for _pair in ((_a, _b), (_c, _d)):
        _QUAD_OF[frozenset(_pair)] = _q


class LengthMismatch(ValueError):
    pass


class NotAdmissible(ValueError):
    pass


class NotASolution(ValueError):
    pass


class TooLarge(RuntimeError):
    """A desk-scale guard was exceeded."""


def quad_of(a, b):
    """Quad type keeping vertices ``a`` and ``b`` on the same side."""
    return _QUAD_OF[frozenset((a, b))]


def quad_sides(q):
    """The two vertex pairs of quad type ``q``; the first contains 0."""
    a, b = QUAD_PAIRS[q]
    return (a, b), tuple(x for x in range(4) if x not in (a, b))


def oct_arcs(curve, face, u):
    """Arcs of type ``u`` left on ``face`` by an octagon of type ``curve``.

    An octagon of type ``c`` meets the edges of the two vertex pairs of quad
    type ``c`` twice and the other four edges once; arc for arc it looks like
    the two quads of the other types laid on top of each other.  So on every
    facet it leaves two arcs, one around each vertex ``u`` whose pair with the
    facet is not of type ``c``.
    """
    return 1 if quad_of(u, face) != curve else 0


@dataclass(frozen=True)
class NormalCoordVector:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))

    @property
    def t(self):
        return len(self.coords) // 7

    def tet(self, i):
        return self.coords[7 * i: 7 * i + 7]

    def triangles(self, i):
        return self.coords[7 * i: 7 * i + 4]

    def quads(self, i):
        return self.coords[7 * i + 4: 7 * i + 7]

    def __add__(self, other):
        return NormalCoordVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __len__(self):
        return len(self.coords)

    def is_zero(self):
        return not any(self.coords)


@dataclass(frozen=True)
class OctCoordVector(NormalCoordVector):
    """Normal coordinates plus one octagon of type ``curve`` in tetrahedron
    ``tet``; that tetrahedron carries no quads."""

    tet_index: int = 0
    curve: int = 0
    octagons: int = 1

    def extended(self):
        return self.coords + (self.octagons,)


@dataclass(frozen=True)
class MatchingSystem:
    rows: tuple            # each row a tuple of coefficients
    columns: int
    labels: tuple = field(default=(), compare=False)   # (tet, facet, arc type) of each row

    def evaluate(self, coords):
        return tuple(sum(c * x for c, x in zip(row, coords) if c) for row in self.rows)

    def satisfied(self, coords):
        return not any(self.evaluate(coords))


def _internal_facets(tri):
    out = []
    for s, row in enumerate(tri.gluings):
        for k, g in enumerate(row):
            if g is None:
                continue
            d, p = g
            if (d, p[k]) < (s, k):
                continue
            out.append((s, k, d, p))
    return out


def matching_system(tri, octagon=None):
    """Matching equations of ``tri``: three rows per internal facet class.

    With ``octagon=(tet, curve)`` an extra last column counts octagons of
    that type in that tetrahedron.
    """
    n = 7 * tri.size + (1 if octagon else 0)
    rows = []
    labels = []
    for s, k, d, p in _internal_facets(tri):
        for u in range(4):
            if u == k:
                continue
            row = [0] * n
            row[7 * s + u] += 1
            row[7 * s + 4 + quad_of(u, k)] += 1
            pu, pk = p[u], p[k]
            row[7 * d + pu] -= 1
            row[7 * d + 4 + quad_of(pu, pk)] -= 1
            if octagon:
                ot, curve = octagon
                if ot == s:
                    row[-1] += oct_arcs(curve, k, u)
                if ot == d:
                    row[-1] -= oct_arcs(curve, pk, pu)
            rows.append(tuple(row))
            labels.append((s, k, u))
    return MatchingSystem(tuple(rows), n, tuple(labels))


def _coords_of(vec):
    if isinstance(vec, NormalCoordVector):
        return vec.coords
    return tuple(vec)


def is_admissible(vec, t=None):
    """Quad constraints: non-negative, at most one quad type per
    tetrahedron; octagon vectors also need exactly one octagon and no quads
    beside it."""
    coords = _coords_of(vec)
    if len(coords) % 7 or (t is not None and len(coords) != 7 * t):
        raise LengthMismatch(f"expected 7t coordinates, got {len(coords)}")
    if any(x < 0 for x in coords):
        return False
    for i in range(0, len(coords), 7):
        if sum(1 for x in coords[i + 4:i + 7] if x) > 1:
            return False
    if isinstance(vec, OctCoordVector):
        if vec.octagons != 1 or not 0 <= vec.curve <= 2:
            return False
        if not 0 <= vec.tet_index < len(coords) // 7:
            return False
        if any(vec.quads(vec.tet_index)):
            return False
    return True


def is_solution(tri, vec):
    if isinstance(vec, OctCoordVector):
        system = matching_system(tri, (vec.tet_index, vec.curve))
        return system.satisfied(vec.extended())
    return matching_system(tri).satisfied(_coords_of(vec))


def compatible(v, w):
    """No tetrahedron where ``v`` and ``w`` use different quad types."""
    a, b = _coords_of(v), _coords_of(w)
    for i in range(0, len(a), 7):
        used = {q for q in range(3) if a[i + 4 + q] or b[i + 4 + q]}
        if len(used) > 1:
            return False
    return True


def vertex_link_vector(tri, vertex):
    """Coordinates of the small sphere around vertex class ``vertex``."""
    from ..skeleton import face_classes

    classes, _ = face_classes(tri, 0)
    coords = [0] * (7 * tri.size)
    for s, (v,) in classes[vertex]:
        coords[7 * s + v] += 1
    return NormalCoordVector(tuple(coords))


# ------------------------------------------------------------- file formats

def format_nsv(vectors):
    """``nsv v1`` text; one CSV line per vector.  Octagonal vectors (all with
    the same octagon) use the ``ansv v1`` header and an ``oct`` line."""
    if isinstance(vectors, NormalCoordVector):
        vectors = [vectors]
    vectors = list(vectors)
    if not vectors:
        raise ValueError("nothing to write")
    t = vectors[0].t
    first = vectors[0]
    if isinstance(first, OctCoordVector):
        lines = ["ansv v1", f"t {t}", f"oct {first.tet_index} {first.curve}"]
    else:
        lines = ["nsv v1", f"t {t}"]
    for v in vectors:
        if v.t != t:
            raise LengthMismatch("vectors of different lengths")
        lines.append(",".join(str(x) for x in v.coords))
    return "\n".join(lines) + "\n"


def parse_nsv(text):
    """Parse ``nsv v1`` / ``ansv v1`` text into a list of vectors."""
    from ..triangulation import ParseError

    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0] not in ("nsv v1", "ansv v1"):
        raise ParseError("missing nsv/ansv header")
    octagonal = lines[0] == "ansv v1"
    if len(lines) < 2 or not lines[1].startswith("t "):
        raise ParseError("missing 't <count>' line")
    try:
        t = int(lines[1][2:])
    except ValueError:
        raise ParseError(f"bad tetrahedron count {lines[1]!r}") from None
    body = lines[2:]
    oct_info = None
    if octagonal:
        if not body or not body[0].startswith("oct "):
            raise ParseError("missing 'oct <tet> <curve>' line")
        parts = body[0].split()
        if len(parts) != 3:
            raise ParseError(f"bad oct line {body[0]!r}")
        try:
            oct_info = int(parts[1]), int(parts[2])
        except ValueError:
            raise ParseError(f"bad oct line {body[0]!r}") from None
        body = body[1:]
    if not body:
        raise ParseError("no coordinate lines")
    out = []
    for line in body:
        try:
            coords = tuple(int(x) for x in line.split(","))
        except ValueError:
            raise ParseError(f"bad coordinate line {line!r}") from None
        if len(coords) != 7 * t:
            raise ParseError(f"expected {7 * t} coordinates, got {len(coords)}")
        if oct_info:
            out.append(OctCoordVector(coords, oct_info[0], oct_info[1]))
        else:
            out.append(NormalCoordVector(coords))
    return out


def read_nsv(path):
    with open(path) as fh:
        return parse_nsv(fh.read())
