"""Gluing-table triangulations of 3-manifolds (and of surfaces).

A triangulation is a list of top-dimensional simplices.  Face slot ``k`` of
a simplex is the facet opposite its vertex ``k``.  Each slot is either
``None`` (boundary) or a pair ``(dest, perm)``: ``perm`` maps the vertex
labels of the source simplex to those of ``dest`` and sends ``k`` to the
destination slot.  Two facets of one simplex may be glued together; a facet
glued to itself is rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

from .perm import IDENTITY4, compose, inverse, is_perm, perm_str


class ParseError(ValueError):
    """Raised for text that does not follow a file format exactly."""


@dataclass(frozen=True)
class Violation:
    kind: str  # NonInvolutiveGluing | FaceLabelMismatch | SelfGluedFace | IndexOutOfRange
    simplex: int
    slot: int
    detail: str = ""

    def __str__(self):
        msg = f"{self.kind} at ({self.simplex},{self.slot})"
        return f"{msg}: {self.detail}" if self.detail else msg


class InvalidTriangulation(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class Triangulation:
    """Common base: ``dim``-simplices glued along facets."""

    gluings: tuple
    dim = 3

    @property
    def size(self):
        return len(self.gluings)

    def __len__(self):
        return len(self.gluings)

    def glued(self, simplex, slot):
        return self.gluings[simplex][slot]

    def is_closed(self):
        return all(g is not None for row in self.gluings for g in row)

    def boundary_facets(self):
        return [(s, k) for s, row in enumerate(self.gluings)
                for k, g in enumerate(row) if g is None]

    def relabel(self, order, perms):
        """Return the isomorphic triangulation in which old simplex
        ``order[i]`` becomes simplex ``i`` with vertex labels mapped by
        ``perms[i]`` (old label -> new label)."""
        new_index = {old: new for new, old in enumerate(order)}
        rows = []
        for new, old in enumerate(order):
            sigma = perms[new]
            row = [None] * (self.dim + 1)
            for k, g in enumerate(self.gluings[old]):
                if g is None:
                    continue
                dest, p = g
                d_new = new_index[dest]
                q = compose(perms[d_new], compose(p, inverse(sigma)))
                row[sigma[k]] = (d_new, q)
            rows.append(tuple(row))
        return type(self)(tuple(rows))

    def to_text(self):
        header = "tri3 v1" if self.dim == 3 else "tri2 v1"
        lines = [header, f"n {self.size}"]
        for i, row in enumerate(self.gluings):
            tokens = ["-" if g is None else f"{g[0]}:{perm_str(g[1])}" for g in row]
            lines.append(f"{i}: " + " ".join(tokens))
        return "\n".join(lines) + "\n"


class Triangulation3(Triangulation):
    dim = 3

    def __repr__(self):
        return f"Triangulation3(t={self.size}, closed={self.is_closed()})"


class Triangulation2(Triangulation):
    dim = 2

    def __repr__(self):
        return f"Triangulation2(n={self.size})"


def check(raw, dim=3):
    """List every violated gluing rule of a raw table.

    Raw slots may be ``None``, ``(dest, perm)`` or ``(dest, dest_slot, perm)``;
    in the last form ``dest_slot`` must equal ``perm[slot]``.  A ``perm`` that
    is not a permutation of the labels is reported as a label mismatch.
    """
    n = dim + 1
    t = len(raw)
    bad = []
    norm = []
    for i, row in enumerate(raw):
        row = list(row)
        if len(row) != n:
            bad.append(Violation("FaceLabelMismatch", i, -1, f"expected {n} slots, got {len(row)}"))
            norm.append([None] * n)
            continue
        out = []
        for k, g in enumerate(row):
            if g is None:
                out.append(None)
                continue
            if len(g) == 3:
                dest, slot, p = g
            else:
                dest, p = g
                slot = None
            p = tuple(p)
            if not is_perm(p, n):
                bad.append(Violation("FaceLabelMismatch", i, k, f"{p} is not a permutation"))
                out.append(None)
                continue
            if slot is not None and p[k] != slot:
                bad.append(Violation("FaceLabelMismatch", i, k,
                                     f"perm sends {k} to {p[k]} but slot {slot} given"))
            if not 0 <= dest < t:
                bad.append(Violation("IndexOutOfRange", i, k, f"destination {dest}"))
                out.append(None)
                continue
            if dest == i and p[k] == k:
                bad.append(Violation("SelfGluedFace", i, k))
                out.append(None)
                continue
            out.append((dest, p))
        norm.append(out)
    for i, row in enumerate(norm):
        for k, g in enumerate(row):
            if g is None:
                continue
            dest, p = g
            back = norm[dest][p[k]]
            if back is None or back[0] != i or back[1] != inverse(p):
                bad.append(Violation("NonInvolutiveGluing", i, k,
                                     f"({dest},{p[k]}) does not glue back"))
    return bad, norm


def validate(raw, dim=3):
    """Build a triangulation from a raw table, raising
    :class:`InvalidTriangulation` listing every violation."""
    if isinstance(raw, Triangulation):
        raw = raw.gluings
    bad, norm = check(raw, dim)
    if bad:
        raise InvalidTriangulation(bad)
    cls = Triangulation3 if dim == 3 else Triangulation2
    return cls(tuple(tuple(row) for row in norm))


_GLUE = re.compile(r"^(\d+):([0-9]+)$")


def parse_text(text, dim=None):
    """Parse the ``tri3 v1`` / ``tri2 v1`` gluing-table format strictly."""
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty input")
    header = lines[0]
    if header == "tri3 v1":
        found = 3
    elif header == "tri2 v1":
        found = 2
    else:
        raise ParseError(f"bad header {header!r}")
    if dim is not None and dim != found:
        raise ParseError(f"expected a dimension-{dim} table, got {header!r}")
    dim = found
    if len(lines) < 2 or not re.fullmatch(r"n (0|[1-9]\d*)", lines[1]):
        raise ParseError("second line must be 'n <count>'")
    t = int(lines[1][2:])
    body = lines[2:]
    if len(body) != t:
        raise ParseError(f"expected {t} simplex lines, got {len(body)}")
    raw = []
    for i, line in enumerate(body):
        prefix = f"{i}: "
        if not line.startswith(prefix):
            raise ParseError(f"line {i + 3}: expected prefix {prefix!r}")
        tokens = line[len(prefix):].split(" ")
        if len(tokens) != dim + 1:
            raise ParseError(f"line {i + 3}: expected {dim + 1} slots")
        row = []
        for tok in tokens:
            if tok == "-":
                row.append(None)
                continue
            m = _GLUE.match(tok)
            if not m or len(m.group(2)) != dim + 1:
                raise ParseError(f"line {i + 3}: bad gluing token {tok!r}")
            row.append((int(m.group(1)), tuple(int(c) for c in m.group(2))))
        raw.append(row)
    return validate(raw, dim)


def read_triangulation(path, dim=None):
    with open(path) as fh:
        return parse_text(fh.read(), dim)


def from_simplices(simplices, dim=3):
    """Glue named simplices along shared facets.

    ``simplices`` is a sequence of vertex-name tuples; simplex ``i`` gets
    local label ``j`` for name ``simplices[i][j]``.  A facet shared by two
    simplices is glued; a facet in one simplex is boundary.  Returns the
    triangulation and the name table (as tuples).
    """
    names = [tuple(s) for s in simplices]
    where = {}
    for i, s in enumerate(names):
        if len(set(s)) != dim + 1:
            raise ValueError(f"simplex {i} has repeated vertices: {s}")
        for k in range(dim + 1):
            key = frozenset(s[:k] + s[k + 1:])
            where.setdefault(key, []).append((i, k))
    rows = [[None] * (dim + 1) for _ in names]
    for key, inc in where.items():
        if len(inc) > 2:
            raise ValueError(f"facet {sorted(key)} lies in {len(inc)} simplices")
        if len(inc) == 2:
            (a, ka), (b, kb) = inc
            pos_b = {v: j for j, v in enumerate(names[b])}
            p = tuple(pos_b[v] if j != ka else kb for j, v in enumerate(names[a]))
            rows[a][ka] = (b, p)
            rows[b][kb] = (a, inverse(p))
    return validate(rows, dim), tuple(names)


def standard_triangulation(name):
    """Named fixtures: ``canonical_s3``, ``boundary_4simplex``,
    ``single_tet_ball``."""
    if name == "canonical_s3":
        row0 = tuple((1, IDENTITY4) for _ in range(4))
        row1 = tuple((0, IDENTITY4) for _ in range(4))
        return Triangulation3((row0, row1))
    if name == "boundary_4simplex":
        simplices = [tuple(v for v in range(5) if v != omit) for omit in range(5)]
        return from_simplices(simplices)[0]
    if name == "single_tet_ball":
        return Triangulation3(((None, None, None, None),))
    raise KeyError(f"UnknownName: {name!r}")


STANDARD_NAMES = ("canonical_s3", "boundary_4simplex", "single_tet_ball")


def faces_of(dim, d):
    """All ``d``-dimensional faces of a ``dim``-simplex as sorted label tuples."""
    return list(combinations(range(dim + 1), d + 1))
