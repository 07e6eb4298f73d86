"""Isomorphism signatures: canonical strings for gluing-table triangulations.

For every starting simplex and every relabeling of it, simplices are
renumbered in breadth-first order and each newly reached simplex is labeled
so that the gluing that reached it is the identity.  The facet-by-facet
description of the resulting table is a key; the smallest key over the
starts is the signature of a connected triangulation.  Only starts whose
codimension-2 face degrees, read in the new labels, are smallest get tried.  Components are
encoded separately and sorted.

Signature text: ``d<dim>:`` then one block per component joined by ``|``.
A block is a simplex count followed by one token per facet slot in canonical
order: ``b`` (boundary), ``n`` (first visit, identity gluing) or
``<dest>.<perm digits>``.
"""
from __future__ import annotations

from itertools import combinations

from .perm import all_perms, compose, inverse, perm_str
from .skeleton import components, face_classes
from .triangulation import Triangulation2, Triangulation3, validate


def _canonical_key(tri, start, sigma, limit):
    """Key for one start; abandons as soon as it exceeds ``limit``."""
    n = tri.dim + 1
    order = [start]
    perms = {start: sigma}
    pos = {start: 0}
    key = []
    tied = limit is not None
    i = 0
    while i < len(order):
        old = order[i]
        sig = perms[old]
        sig_inv = inverse(sig)
        for new_face in range(n):
            g = tri.gluings[old][sig_inv[new_face]]
            if g is None:
                tok = (0,)
            else:
                dest, p = g
                if dest not in pos:
                    # label dest so the reaching gluing becomes the identity
                    q = compose(sig, inverse(p))
                    perms[dest] = q
                    pos[dest] = len(order)
                    order.append(dest)
                    tok = (1,)
                else:
                    q = compose(perms[dest], compose(p, sig_inv))
                    tok = (2, pos[dest]) + q
            if tied:
                ref = limit[len(key)]
                if tok > ref:
                    return None
                if tok < ref:
                    tied = False
            key.append(tok)
        i += 1
    return key, order, [perms[o] for o in order]


_FACE_ORDER = {}


def _face_order(n):
    """Per relabeling: the old-label codimension-2 faces in new-label order."""
    if n not in _FACE_ORDER:
        subsets = list(combinations(range(n), n - 2))
        table = []
        for sigma in all_perms(n):
            inv = inverse(sigma)
            table.append((sigma, [tuple(sorted(inv[x] for x in sub)) for sub in subsets]))
        _FACE_ORDER[n] = table
    return _FACE_ORDER[n]


def _starts(tri):
    """Starting (simplex, relabeling) pairs worth trying.

    Each pair gets the degrees of its codimension-2 faces listed in new-label
    order; isomorphisms preserve this profile, so only the pairs with the
    smallest profile need to be searched.
    """
    n = tri.dim + 1
    classes, index = face_classes(tri, n - 3)
    degree = {inc: len(classes[c]) for inc, c in index.items()}
    table = _face_order(n)
    best, out = None, []
    for start in range(tri.size):
        local = {sub: degree[(start, sub)] for sub in combinations(range(n), n - 2)}
        for sigma, faces in table:
            prof = tuple(local[f] for f in faces)
            if best is None or prof < best:
                best, out = prof, [(start, sigma)]
            elif prof == best:
                out.append((start, sigma))
    return out


def _component_key(tri):
    best = None
    best_relabel = None
    for start, sigma in _starts(tri):
        res = _canonical_key(tri, start, sigma, best)
        if res is None:
            continue
        key, order, perms = res
        if best is None or key < best:
            best, best_relabel = key, (order, perms)
    return best, best_relabel


def _split(tri):
    comp, count = components(tri)
    parts = []
    for c in range(count):
        members = [s for s in range(tri.size) if comp[s] == c]
        idx = {s: i for i, s in enumerate(members)}
        rows = []
        for s in members:
            rows.append(tuple(None if g is None else (idx[g[0]], g[1]) for g in tri.gluings[s]))
        parts.append(type(tri)(tuple(rows)))
    return parts


def _encode(key):
    tokens = []
    for tok in key:
        if tok[0] == 0:
            tokens.append("b")
        elif tok[0] == 1:
            tokens.append("n")
        else:
            tokens.append(f"{tok[1]}.{perm_str(tok[2:])}")
    return tokens


def iso_signature(tri):
    """Canonical string; equal iff the triangulations are isomorphic."""
    blocks = []
    for part in _split(tri):
        key, _ = _component_key(part)
        count = len(key) // (tri.dim + 1)
        blocks.append(f"{count}," + ",".join(_encode(key)))
    blocks.sort()
    return f"d{tri.dim}:" + "|".join(blocks)


def canonical_form(tri):
    """The canonically relabeled triangulation (connected input)."""
    parts = _split(tri)
    if len(parts) != 1:
        raise ValueError("canonical_form needs a connected triangulation")
    _, (order, perms) = _component_key(tri)
    return tri.relabel(order, perms)


def decode_signature(sig):
    """Rebuild a triangulation from :func:`iso_signature` output."""
    head, _, body = sig.partition(":")
    if head not in ("d2", "d3"):
        raise ValueError(f"bad signature prefix {head!r}")
    dim = int(head[1])
    n = dim + 1
    rows_all = []
    for block in body.split("|") if body else []:
        count_str, *tokens = block.split(",")
        count = int(count_str)
        if len(tokens) != count * n:
            raise ValueError("signature block has wrong token count")
        base = len(rows_all)
        rows = [[None] * n for _ in range(count)]
        reached = 1
        for idx, tok in enumerate(tokens):
            s, f = divmod(idx, n)
            if tok == "b":
                continue
            if tok == "n":
                dest, p = reached, tuple(range(n))
                reached += 1
            else:
                d_str, p_str = tok.split(".")
                dest, p = int(d_str), tuple(int(c) for c in p_str)
            rows[s][f] = (base + dest, p)
            back = rows[dest][p[f]]
            if back is None:
                rows[dest][p[f]] = (base + s, inverse(p))
        rows_all.extend(rows)
    return validate(rows_all, dim)


def isomorphic(a, b):
    return a.dim == b.dim and a.size == b.size and iso_signature(a) == iso_signature(b)
