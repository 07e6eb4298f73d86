"""Pachner (bistellar) moves on gluing-table triangulations.

A move is addressed by a *center* face ``sigma`` given as a representative
``(simplex, labels)``.  In dimension ``n`` a move removing ``k`` simplices
has a center of ``n + 2 - k`` vertices whose star is the join of ``sigma``
with the boundary of a ``(k - 1)``-simplex (the link).  The five (four in
dimension two) vertices of the model simplex are numbered: center vertices
first, in the order given, then link vertices.

Relabeling rule after a move: removed simplices are deleted, the survivors
keep their relative order, and the new simplices are appended in
lexicographic order of their model-vertex sets.  A new simplex's local label
``i`` is its ``i``-th smallest model vertex.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from itertools import combinations

from .perm import compose, inverse
from .skeleton import skeleton
from .triangulation import ParseError, Triangulation3, validate

KINDS3 = ("M14", "M41", "M23", "M32")

# removed simplex count for each kind
_REMOVED = {"M14": 1, "M23": 2, "M32": 3, "M41": 4, "M13": 1, "M22": 2, "M31": 3}
_INVERSE = {"M14": "M41", "M41": "M14", "M23": "M32", "M32": "M23",
            "M13": "M31", "M31": "M13", "M22": "M22"}


class IllegalSite(ValueError):
    pass


class ReplayDiverged(ValueError):
    def __init__(self, step, reason):
        self.step = step
        super().__init__(f"step {step}: {reason}")


@dataclass(frozen=True)
class MoveSite:
    """``kind`` plus a representative incidence of the center face:
    ``simplex`` and the local ``labels`` of the center's vertices."""

    kind: str
    simplex: int
    labels: tuple

    def __str__(self):
        return format_site(self)


# The move record is the site itself: the labeling of inserted simplices is
# fixed by the relabeling rule, so replaying the site reproduces it.
MoveRecord = MoveSite


@dataclass(frozen=True)
class MoveResult:
    tri: object
    record: MoveSite
    survivors: dict      # old simplex index -> new index
    new: tuple           # indices of inserted simplices
    origin: tuple        # per inserted simplex: per label, (old simplex, old label) or None
    inverse: MoveSite    # site undoing this move on ``tri``


def site_for(kind, simplex, labels=None):
    """Build a site from the script-style address of each kind.

    M14/M13: ``simplex`` only.  M41/M31: ``labels`` is the corner.
    M23: ``labels`` is the facet slot.  M22/M32: ``labels`` is the edge pair.
    """
    dim = 2 if kind in ("M13", "M22", "M31") else 3
    if kind in ("M14", "M13"):
        center = tuple(range(dim + 1))
    elif kind in ("M41", "M31"):
        center = (labels,) if isinstance(labels, int) else tuple(labels)
    elif kind == "M23":
        center = tuple(x for x in range(4) if x != labels)
    else:
        center = tuple(labels)
    return MoveSite(kind, simplex, center)


def _star(tri, simplex, center, k):
    """Walk the star of the center face; return ``[(simplex, local->model)]``
    or raise IllegalSite."""
    n = tri.dim
    s_len = len(center)
    if len(set(center)) != s_len or any(not 0 <= c <= n for c in center):
        raise IllegalSite(f"bad center labels {center}")
    if not 0 <= simplex < tri.size:
        raise IllegalSite(f"simplex {simplex} out of range")
    others = [x for x in range(n + 1) if x not in center]
    link = list(range(s_len, n + 2))
    amap = [None] * (n + 1)
    for i, c in enumerate(center):
        amap[c] = i
    for j, x in enumerate(others):
        amap[x] = s_len + j
    found = {simplex: tuple(amap)}
    order = [simplex]
    stack = [simplex]
    while stack:
        s = stack.pop()
        m = found[s]
        present = set(m)
        missing = [v for v in link if v not in present]
        for w in range(n + 1):
            if m[w] < s_len:
                continue
            g = tri.gluings[s][w]
            if g is None:
                raise IllegalSite("center face touches the boundary")
            dest, p = g
            dm = [None] * (n + 1)
            for x in range(n + 1):
                dm[p[x]] = m[x] if x != w else missing[0]
            dm = tuple(dm)
            if dest in found:
                if found[dest] != dm:
                    raise IllegalSite("star is not an embedded standard ball "
                                      f"(simplex {dest} repeated)")
                continue
            found[dest] = dm
            order.append(dest)
            stack.append(dest)
    if len(found) != k:
        raise IllegalSite(f"center has degree {len(found)}, need {k} distinct simplices")
    return [(s, found[s]) for s in order]


def _apply(tri, site):
    kind = site.kind
    if kind not in _REMOVED:
        raise IllegalSite(f"unknown move kind {kind}")
    dim = 2 if kind in ("M13", "M22", "M31") else 3
    if tri.dim != dim:
        raise IllegalSite(f"{kind} is not a dimension-{tri.dim} move")
    n = dim
    k = _REMOVED[kind]
    if len(site.labels) != n + 2 - k:
        raise IllegalSite(f"{kind} needs a center of {n + 2 - k} labels")
    star = _star(tri, site.simplex, tuple(site.labels), k)
    removed = {s for s, _ in star}
    model = range(n + 2)
    removed_sets = {frozenset(m) for _, m in star}
    new_sets = [c for c in combinations(model, n + 1) if frozenset(c) not in removed_sets]

    survivors = {}
    for s in range(tri.size):
        if s not in removed:
            survivors[s] = len(survivors)
    base = len(survivors)
    new_index = {c: base + i for i, c in enumerate(new_sets)}

    # where each model vertex lives in the removed simplices
    origin_of = {}
    for s, m in star:
        for x in range(n + 1):
            origin_of.setdefault(m[x], (s, x))
    # which removed simplex holds each boundary facet of the removed ball
    holder = {}
    for s, m in star:
        for x in range(n + 1):
            holder[frozenset(m) - {m[x]}] = (s, x, m)

    rows = [list(tri.gluings[s]) for s in range(tri.size) if s not in removed]
    for row in rows:
        for j, g in enumerate(row):
            if g is not None and g[0] in removed:
                row[j] = None  # refilled from the new side below
            elif g is not None:
                row[j] = (survivors[g[0]], g[1])
    new_rows = [[None] * (n + 1) for _ in new_sets]

    def locate(model_facet_key):
        # facet of the new simplices given as frozenset of model vertices
        for c in new_sets:
            if model_facet_key <= set(c):
                yield c

    for c in new_sets:
        ni = new_index[c]
        for f in range(n + 1):
            facet = frozenset(c) - {c[f]}
            mates = [d for d in locate(facet) if d != c]
            if mates:
                d = mates[0]
                # identity on model vertices
                p = tuple(d.index(c[i]) if i != f else d.index(next(iter(set(d) - facet)))
                          for i in range(n + 1))
                new_rows[ni - base][f] = (new_index[d], p)
                continue
            s, x, m = holder[facet]
            m_inv = {v: i for i, v in enumerate(m)}
            # new local label -> old local label of the removed holder
            to_old = tuple(m_inv[c[i]] if i != f else x for i in range(n + 1))
            g = tri.gluings[s][x]
            if g is None:
                continue
            dest, q = g
            if dest not in removed:
                p = compose(q, to_old)
                new_rows[ni - base][f] = (survivors[dest], p)
                rows[survivors[dest]][q[x]] = (ni, inverse(p))
            else:
                # external facet glued to another facet of the removed ball
                m2 = dict(star)[dest]
                facet2 = frozenset(m2) - {m2[q[x]]}
                d = next(cc for cc in new_sets if facet2 <= set(cc))
                f2 = d.index(next(iter(set(d) - facet2)))
                # new c label i -> old s label -> old dest label -> model -> d label
                p = tuple(d.index(m2[q[to_old[i]]]) if i != f else f2 for i in range(n + 1))
                new_rows[ni - base][f] = (new_index[d], p)

    all_rows = [tuple(r) for r in rows] + [tuple(r) for r in new_rows]
    new_tri = validate(all_rows, n)
    origin = tuple(tuple(origin_of.get(v) for v in c) for c in new_sets)
    # the old link becomes the new center; address it in the first new simplex
    first = new_sets[0]
    link_vertices = [v for v in model if v >= len(site.labels)]
    inv_labels = tuple(first.index(v) for v in link_vertices)
    inv_site = MoveSite(_INVERSE[kind], base, inv_labels)
    return MoveResult(new_tri, site, survivors, tuple(range(base, base + len(new_sets))),
                      origin, inv_site)


def apply_move_tracked(tri, site):
    """Apply a move and return the full :class:`MoveResult`."""
    return _apply(tri, site)


def apply_move(tri, site):
    """Apply a move; returns ``(new_tri, record)``."""
    res = _apply(tri, site)
    return res.tri, res.record


def is_legal(tri, site):
    try:
        _star(tri, site.simplex, tuple(site.labels), _REMOVED[site.kind])
    except IllegalSite:
        return False
    return True


def enumerate_moves(tri, kinds=KINDS3, skel=None):
    """Legal 3D move sites, one per cell class, in a deterministic order."""
    if tri.dim != 3:
        raise ValueError("enumerate_moves works on 3-triangulations; see surf2")
    sites = []
    if "M14" in kinds:
        sites.extend(MoveSite("M14", s, (0, 1, 2, 3)) for s in range(tri.size))
    if {"M23", "M32", "M41"} & set(kinds):
        skel = skel or skeleton(tri, links=False)
    if "M23" in kinds:
        for inc in skel.faces:
            if len(inc) != 2:
                continue
            (a, _), (b, _) = inc
            if a == b:
                continue
            s, sub = inc[0]
            site = MoveSite("M23", s, sub)
            if is_legal(tri, site):
                sites.append(site)
    if "M32" in kinds:
        for c, inc in enumerate(skel.edges):
            if len(inc) != 3 or skel.edge_boundary[c]:
                continue
            if len({s for s, _ in inc}) != 3:
                continue
            s, sub = inc[0]
            site = MoveSite("M32", s, sub)
            if is_legal(tri, site):
                sites.append(site)
    if "M41" in kinds:
        for c, inc in enumerate(skel.vertices):
            if len(inc) != 4 or skel.vertex_boundary[c]:
                continue
            s, sub = inc[0]
            site = MoveSite("M41", s, sub)
            if is_legal(tri, site):
                sites.append(site)
    return sites


def replay(tri, records):
    """Apply records in order; raises :class:`ReplayDiverged` at the first
    record that is illegal when reached."""
    for step, rec in enumerate(records):
        try:
            tri = _apply(tri, rec).tri
        except IllegalSite as exc:
            raise ReplayDiverged(step, str(exc)) from None
    return tri


DEFAULT_WEIGHTS = {"M14": 1, "M23": 6, "M32": 2, "M41": 1}


def scramble(tri, k, seed, weights=None):
    """Apply ``k`` random legal moves; returns ``(tri', records)``.

    A kind is drawn from ``weights`` first; if it has no legal site any
    legal move is used instead.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    weights = dict(DEFAULT_WEIGHTS if weights is None else weights)
    rng = random.Random(seed)
    kinds = sorted(weights)
    records = []
    for _ in range(k):
        sites = enumerate_moves(tri)
        if not sites:
            break
        by_kind = {}
        for s in sites:
            by_kind.setdefault(s.kind, []).append(s)
        kind = rng.choices(kinds, weights=[weights[x] for x in kinds])[0]
        pool = by_kind.get(kind) or sites
        site = rng.choice(pool)
        tri, rec = apply_move(tri, site)
        records.append(rec)
    return tri, records


# ---------------------------------------------------------------- text format

def format_site(site):
    k = site.kind
    if k == "M14":
        return f"14 t{site.simplex}"
    if k == "M41":
        return f"41 v{site.simplex}.{site.labels[0]}"
    if k == "M23":
        slot = next(x for x in range(4) if x not in site.labels)
        return f"23 f{site.simplex}.{slot}"
    if k == "M32":
        a, b = site.labels
        return f"32 e{site.simplex}.{a}{b}"
    if k == "M13":
        return f"13 t{site.simplex}"
    if k == "M31":
        return f"31 v{site.simplex}.{site.labels[0]}"
    if k == "M22":
        a, b = site.labels
        return f"22 e{site.simplex}.{a}{b}"
    raise ValueError(k)


_LINE = re.compile(r"^(14|41|23|32|13|31|22) ([tvfe])(\d+)(?:\.(\d+))?$")
_LETTER = {"14": "t", "41": "v", "23": "f", "32": "e", "13": "t", "31": "v", "22": "e"}


def parse_site(line):
    m = _LINE.match(line.strip())
    if not m:
        raise ParseError(f"bad move line {line!r}")
    code, letter, simplex, rest = m.groups()
    if letter != _LETTER[code]:
        raise ParseError(f"move {code} takes address '{_LETTER[code]}', got {letter!r}")
    simplex = int(simplex)
    kind = "M" + code
    if letter == "t":
        if rest is not None:
            raise ParseError(f"bad move line {line!r}")
        return site_for(kind, simplex)
    if rest is None:
        raise ParseError(f"bad move line {line!r}")
    if letter in ("v", "f"):
        if len(rest) != 1:
            raise ParseError(f"bad move line {line!r}")
        return site_for(kind, simplex, int(rest))
    if len(rest) != 2 or rest[0] == rest[1]:
        raise ParseError(f"bad move line {line!r}")
    return site_for(kind, simplex, (int(rest[0]), int(rest[1])))


def parse_script(text):
    records = []
    for line in text.splitlines():
        body = line.split("#", 1)[0].strip()
        if body:
            records.append(parse_site(body))
    return records


def format_script(records, comment=None):
    lines = [f"# {comment}"] if comment else []
    lines.extend(format_site(r) for r in records)
    return "\n".join(lines) + "\n"
