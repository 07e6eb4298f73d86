"""Elementary shellings of triangulated 3-balls and their Pachner-move
realizations: shelling next to a cone, crushing a cone edge, and changing
of cones."""
from __future__ import annotations

from dataclasses import dataclass, field

from .moves import IllegalSite, MoveSite, apply_move_tracked, is_legal
from .skeleton import analyze, skeleton
from .surf2 import (
    NamedComplex,
    NotADisc,
    NotCombinatorial,
    _disc_like,
    analyze2,
    boundary_cycle,
    boundary_names,
    boundary_surface,
    cone_named,
    disc_to_cone_named,
    named_triangles,
    shell_order_triangles,
)
from .triangulation import Triangulation3, validate


class NotShellable(ValueError):
    pass


class NotConed(ValueError):
    pass


class NotACone(ValueError):
    pass


class StarNotEmbedded(ValueError):
    pass


class BoundaryMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ShellContext:
    """A bounded 3-triangulation and boundary facets ``(tet, slot)`` that
    must never be shelled from."""

    tri: Triangulation3
    marked: frozenset = field(default_factory=frozenset)


def _free_faces(tri, tet):
    return [f for f in range(4) if tri.gluings[tet][f] is None]


def _removal(tri, tet):
    rows = []
    index = {}
    for s in range(tri.size):
        if s != tet:
            index[s] = len(index)
    for s in range(tri.size):
        if s == tet:
            continue
        row = []
        for g in tri.gluings[s]:
            if g is None or g[0] == tet:
                row.append(None)
            else:
                row.append((index[g[0]], g[1]))
        rows.append(tuple(row))
    return validate(rows), index


def _is_manifold_with_boundary(tri):
    rep = analyze(tri)
    return rep.valid_edges and all(l.is_sphere or l.is_disc for l in rep.links)


def elementary_shellings(ctx):
    """Tetrahedra that can be shelled off: they meet the unmarked boundary
    in a disc of 1, 2 or 3 facets and their removal leaves a manifold.  A
    lone tetrahedron with no marked facet is listed too (the terminal
    step of a shelling)."""
    tri = ctx.tri
    if tri.size == 1:
        free = _free_faces(tri, 0)
        return [0] if len(free) == 4 and not any((0, f) in ctx.marked for f in free) else []
    sk = skeleton(tri, links=False)
    out = []
    for tet in range(tri.size):
        free = _free_faces(tri, tet)
        if not 1 <= len(free) <= 3:
            continue
        if any((tet, f) in ctx.marked for f in free):
            continue
        vclass = [sk.vertex_index[(tet, (v,))] for v in range(4)]
        if len(set(vclass)) != 4:
            continue
        if len(free) == 1:
            if sk.vertex_boundary[vclass[free[0]]]:
                continue
        elif len(free) == 2:
            e = tuple(sorted(free))
            if sk.edge_boundary[sk.edge_index[(tet, e)]]:
                continue
        rest, _ = _removal(tri, tet)
        if _is_manifold_with_boundary(rest):
            out.append(tet)
    return out


def boundary_move_kind(ctx, tet):
    """The 2D move relating the boundary before and after shelling ``tet``."""
    return {1: "M13", 2: "M22", 3: "M31"}[len(_free_faces(ctx.tri, tet))]


def shell_step(ctx, tet):
    """Remove one shellable tetrahedron; returns the new context."""
    if tet not in elementary_shellings(ctx):
        raise NotShellable(f"tetrahedron {tet} is not elementarily shellable")
    if ctx.tri.size == 1:
        return ShellContext(Triangulation3(()), frozenset())
    rest, index = _removal(ctx.tri, tet)
    marked = frozenset((index[s], f) for s, f in ctx.marked if s != tet)
    return ShellContext(rest, marked)


def shell_greedy(ctx):
    """Shell lowest-index first down to one tetrahedron; returns the list of
    contexts visited (input first)."""
    history = [ctx]
    while ctx.tri.size > 1:
        options = elementary_shellings(ctx)
        if not options:
            break
        ctx = shell_step(ctx, options[0])
        history.append(ctx)
    return history


# ---------------------------------------------------- shelling next to a cone

@dataclass(frozen=True)
class ConeRegion:
    """Tetrahedra of a coned 3-ball inside a closed triangulation, and one
    corner ``(tet, label)`` at its cone point."""

    tets: frozenset
    apex: tuple


def _check_cone(tri, region):
    sk = skeleton(tri, links=False)
    apex_class = sk.vertex_index[(region.apex[0], (region.apex[1],))]
    for t in region.tets:
        corners = [v for v in range(4) if sk.vertex_index[(t, (v,))] == apex_class]
        if len(corners) != 1:
            raise NotConed(f"tetrahedron {t} does not meet the cone point once")
        a = corners[0]
        for f in range(4):
            g = tri.gluings[t][f]
            if g is None:
                raise NotConed("cone region touches the boundary")
            inside = g[0] in region.tets
            if (f == a) == inside:
                raise NotConed(f"tetrahedron {t} is not a cone over the sphere")
    return sk, apex_class


def shelling_as_move(closed_tri, region, tet):
    """The single Pachner move that shells ``tet`` into the cone region.

    One facet on the sphere gives a 2-3 move on that facet, two facets a
    3-2 move on their common edge, three facets a 4-1 move at their common
    vertex.
    """
    sk, apex_class = _check_cone(closed_tri, region)
    if tet in region.tets:
        raise NotShellable("tetrahedron is already inside the cone")
    faces = [f for f in range(4) if closed_tri.gluings[tet][f][0] in region.tets]
    sphere_vertices = {sk.vertex_index[(t, (v,))] for t in region.tets for v in range(4)}
    sphere_vertices.discard(apex_class)
    vclass = [sk.vertex_index[(tet, (v,))] for v in range(4)]
    if apex_class in vclass or len(set(vclass)) != 4:
        raise NotShellable("tetrahedron meets the cone point or repeats a vertex")
    if len(faces) == 1:
        f = faces[0]
        if vclass[f] in sphere_vertices:
            raise NotShellable("opposite vertex already lies on the sphere")
        site = MoveSite("M23", tet, tuple(x for x in range(4) if x != f))
    elif len(faces) == 2:
        a, b = (x for x in range(4) if x not in faces)
        site = MoveSite("M32", tet, (a, b))
    elif len(faces) == 3:
        (v,) = (x for x in range(4) if x not in faces)
        site = MoveSite("M41", tet, (v,))
    else:
        raise NotShellable(f"tetrahedron meets the sphere in {len(faces)} facets")
    if not is_legal(closed_tri, site):
        raise NotShellable("the corresponding Pachner move is not legal")
    return site


def absorb(closed_tri, region, tet):
    """Apply :func:`shelling_as_move`; returns ``(tri', region', record)``."""
    site = shelling_as_move(closed_tri, region, tet)
    sk = skeleton(closed_tri, links=False)
    apex_class = sk.vertex_index[(region.apex[0], (region.apex[1],))]
    res = apply_move_tracked(closed_tri, site)
    tets = {res.survivors[t] for t in region.tets if t in res.survivors}
    tets.update(res.new)
    if region.apex[0] in res.survivors:
        apex = (res.survivors[region.apex[0]], region.apex[1])
    else:
        apex = next((n, i) for n, origin in zip(res.new, res.origin)
                    for i, o in enumerate(origin)
                    if o is not None and sk.vertex_index[(o[0], (o[1],))] == apex_class)
    return res.tri, ConeRegion(frozenset(tets), apex), site


# --------------------------------------------------------------- crushing

def _named(tri):
    sk = skeleton(tri, links=False)
    names = [tuple(sk.vertex_index[(s, (v,))] for v in range(4)) for s in range(tri.size)]
    return names, sk


def _cone_structure(tri):
    """Named description of a cone on a combinatorial sphere or disc:
    ``(names, apex, surface triangles)``."""
    names, sk = _named(tri)
    if any(len(set(r)) != 4 for r in names) or len({frozenset(r) for r in names}) != len(names):
        raise NotACone("triangulation is not simplicial")
    common = set(names[0])
    for r in names[1:]:
        common &= set(r)
    if not common:
        raise NotACone("no vertex lies in every tetrahedron")
    interior = [v for v in common if not sk.vertex_boundary[v]]
    if interior:
        apex = interior[0]
    elif names[0][3] in common:
        apex = names[0][3]  # cone3 puts the cone point on label 3
    else:
        apex = min(common)
    surface = [tuple(v for v in r if v != apex) for r in names]
    return names, apex, surface


def _crush(nc, surface, x, apex):
    """Crush the edge from ``x`` to ``apex`` in the named cone ``nc`` on a
    sphere with the given named triangles.

    Returns the name-level inverses of the moves, in application order.
    """
    star = [t for t in surface if x in t]
    rest = [t for t in surface if x not in t]
    if not star or not _disc_like(star):
        raise StarNotEmbedded(f"star of {x} is not an embedded disc")
    if not rest:
        raise StarNotEmbedded("star of the vertex is the whole sphere")
    order = shell_order_triangles(rest)
    inverses = []
    region = set(star)  # named triangles already coned from x
    for idx in reversed(order[1:]):
        t = rest[idx]
        region_edges = _boundary_edges(region)
        shared = [e for e in _tri_edges(t) if e in region_edges]
        if len(shared) == 1:
            a, b = sorted(shared[0])
            inverses.append(nc.apply("M23", (apex, a, b)))
        elif len(shared) == 2:
            (b,) = shared[0] & shared[1]
            inverses.append(nc.apply("M32", (apex, b)))
        else:
            raise NotADisc("shelling order broke")
        region.add(t)
    inverses.append(nc.apply("M41", (apex,)))
    return inverses


def _tri_edges(t):
    a, b, c = t
    return [frozenset((a, b)), frozenset((b, c)), frozenset((a, c))]


def _boundary_edges(triangles):
    count = {}
    for t in triangles:
        for e in _tri_edges(t):
            count[e] = count.get(e, 0) + 1
    return {e for e, c in count.items() if c == 1}


def crush_named(surface, x, apex, fresh_start=None):
    """Crush on a freshly built named cone; returns ``(complex, inverses)``."""
    fresh = fresh_start if fresh_start is not None else max(
        [apex] + [v for t in surface for v in t]) + 1
    tri, names = cone_named(surface, apex)
    nc = NamedComplex(tri, names, fresh=fresh)
    return nc, _crush(nc, surface, x, apex)


def crush_cone_edge(cone, vertex_x):
    """Collapse the edge from boundary vertex ``vertex_x`` (a vertex class
    of ``cone``) to the cone point.

    Returns ``(tri', records)``: ``tri'`` is the cone from ``vertex_x`` over
    the sphere minus the open star of ``vertex_x``.
    """
    names, apex, surface = _cone_structure(cone)
    rep = analyze2(boundary_surface(cone)[0])
    if not (rep.is_sphere and rep.is_combinatorial):
        raise NotACone("cone base is not a combinatorial sphere")
    if vertex_x == apex or all(vertex_x not in t for t in surface):
        raise StarNotEmbedded(f"{vertex_x} is not a vertex of the sphere")
    nc = NamedComplex(cone, names)
    _crush(nc, surface, vertex_x, apex)
    return nc.tri, list(nc.records)


def crushed_expected(surface, x):
    """Named tetrahedra of the cone from ``x`` over the sphere minus star(x)."""
    return {frozenset(t) | {x} for t in surface if x not in t}


# ------------------------------------------------------- changing of cones

def _reverse_apply(nc, inverses, created_names):
    """Undo a forward move sequence on ``nc`` by applying the recorded
    inverses backwards.  ``created_names`` maps removed vertices to the name
    they must get again."""
    for kind, cell, removed in reversed(inverses):
        new_vertex = created_names.get(removed, removed) if kind == "M14" else None
        nc.apply(kind, cell, new_vertex=new_vertex)


def _disc_structure(disc_tri):
    tris = named_triangles(disc_tri)
    if not analyze2(disc_tri).is_combinatorial:
        raise NotCombinatorial("disc is not combinatorial")
    if not _disc_like(tris):
        raise NotADisc("not a disc")
    return tris


def change_cones(cone_cd, disc_e, boundary_map=None):
    """Turn the cone on a disc ``D`` into ``CE ∪ C(D ∪ E)`` without changing
    ``D``.

    ``cone_cd`` is ``cone3(D)``; ``disc_e`` is a combinatorial disc whose
    boundary is matched to that of ``D`` by ``boundary_map`` (vertex class of
    ``disc_e`` -> vertex class of ``cone_cd``), or by aligning the two
    boundary cycles when omitted.  Returns ``(tri', records, info)`` where
    ``info`` has the named pieces of the result.
    """
    names, p, d_tris = _cone_structure(cone_cd)
    if not _disc_like(d_tris):
        raise NotCombinatorial("cone base is not a combinatorial disc")
    e_raw = _disc_structure(disc_e)
    d_cycle = boundary_cycle(d_tris)
    e_cycle = boundary_cycle(e_raw)
    if len(d_cycle) != len(e_cycle):
        raise BoundaryMismatch("boundary lengths differ")
    if boundary_map is None:
        boundary_map = dict(zip(e_cycle, d_cycle))
    if set(boundary_map) != set(e_cycle) or set(boundary_map.values()) != set(d_cycle):
        raise BoundaryMismatch("boundary map does not match the boundary vertices")
    d_bd = _boundary_edges(d_tris)
    for e in _boundary_edges(e_raw):
        if frozenset(boundary_map[v] for v in e) not in d_bd:
            raise BoundaryMismatch("boundary map is not simplicial")

    next_name = max([p] + [v for t in d_tris for v in t]) + 1

    def fresh():
        nonlocal next_name
        next_name += 1
        return next_name - 1

    q, r = fresh(), fresh()
    rename = dict(boundary_map)
    for t in e_raw:
        for v in t:
            if v not in rename:
                rename[v] = fresh()
    e_tris = [tuple(rename[v] for v in t) for t in e_raw]

    nc = NamedComplex(cone_cd, names, fresh=next_name + 1000)
    bd_edges = [tuple(sorted(e)) for e in d_bd]

    # steps 1 and 2: glue C(C(dD)) on twice, as reversed edge crushes
    s1 = list(d_tris) + [(a, b, p) for a, b in bd_edges]
    _, inv1 = crush_named(s1, p, q, fresh_start=next_name + 2000)
    _reverse_apply(nc, inv1, {q: q})
    step1 = len(nc.records)
    s2 = [(a, b, q) for a, b in bd_edges] + [(a, b, p) for a, b in bd_edges]
    _, inv2 = crush_named(s2, p, r, fresh_start=next_name + 3000)
    _reverse_apply(nc, inv2, {r: r})
    step2 = len(nc.records) - step1

    # step 3: drive the disc C_r(dD) to E through the suspension on q, p
    _, log, dnc = disc_to_cone_named(e_tris, r)
    for kind, cell, created, inverse in reversed(log):
        ikind, icell, ivertex = inverse
        if ikind == "M13":
            a, b, c = icell
            nc.apply("M14", (q, a, b, c), new_vertex=ivertex)
            nc.apply("M23", (a, b, c))
        elif ikind == "M31":
            (v,) = icell
            nc.apply("M32", (v, p))
            nc.apply("M41", (v,))
        else:
            b, c = icell
            nc.apply("M23", (q, b, c))
            nc.apply("M32", (b, c))
    step3 = len(nc.records) - step1 - step2

    info = {
        "D": [tuple(t) for t in d_tris],
        "E": e_tris,
        "q": q,
        "p": p,
        "names": [tuple(r_) for r_ in nc.names],
        "steps": (step1, step2, step3),
    }
    return nc.tri, list(nc.records), info


def changed_expected(info):
    q, p = info["q"], info["p"]
    want = {frozenset(t) | {q} for t in info["D"]}
    want |= {frozenset(t) | {q} for t in info["E"]}
    want |= {frozenset(t) | {p} for t in info["E"]}
    return want
