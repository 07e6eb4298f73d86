from itertools import product
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from conftest import load
from oracles import matching_ok, quad_ok, weight_and_euler
from pachner.bounds import bound
from pachner.moves import apply_move, enumerate_moves, scramble
from pachner.normal import (
    Incompatible,
    LengthMismatch,
    NormalCoordVector,
    NotAdmissible,
    NotASolution,
    OctCoordVector,
    TooLarge,
    brute_force_octagonal,
    brute_force_solutions,
    build_surface,
    compatible,
    enumerate_octagonal,
    format_nsv,
    fundamental_solutions,
    haken_sum,
    indecomposable,
    is_admissible,
    is_solution,
    matching_system,
    oct_arcs,
    parse_nsv,
    quad_of,
    sphere_family,
    vertex_link_vector,
    vertex_solutions,
)
from pachner.skeleton import face_classes
from pachner.triangulation import ParseError, standard_triangulation

CANON = standard_triangulation("canonical_s3")
B4 = standard_triangulation("boundary_4simplex")
FIXTURES = ["canonical_s3.tri3", "boundary_4simplex.tri3", "rp3.tri3", "l31.tri3",
            "s2xs1.tri3", "nonorientable.tri3"]


def three_tet_s3():
    return apply_move(CANON, enumerate_moves(CANON, ("M23",))[0])[0]


def links(tri):
    return [vertex_link_vector(tri, v) for v in range(len(face_classes(tri, 0)[0]))]


def minimal(vectors):
    """Members with no other member below them coordinate-wise."""
    vs = [v.coords for v in vectors]
    return sorted(v for v in vs
                  if not any(u != v and all(a <= b for a, b in zip(u, v)) for u in vs))


# -------------------------------------------------------- coordinates

def test_quad_of():
    assert quad_of(0, 1) == quad_of(2, 3) == 0
    assert quad_of(0, 2) == quad_of(1, 3) == 1
    assert quad_of(0, 3) == quad_of(1, 2) == 2


def test_octagon_two_arcs_per_face():
    for curve in range(3):
        for face in range(4):
            arcs = [u for u in range(4) if u != face and oct_arcs(curve, face, u)]
            assert len(arcs) == 2


def test_is_admissible_examples():
    assert is_admissible((0,) * 14)
    v = [0] * 14
    v[4] = v[5] = 1
    assert not is_admissible(v)
    assert all(is_admissible(x) for x in links(CANON))
    with pytest.raises(LengthMismatch):
        is_admissible((0,) * 13)
    with pytest.raises(LengthMismatch):
        is_admissible((0,) * 14, t=3)
    assert not is_admissible((-1,) + (0,) * 13)


def test_oct_admissibility():
    v = OctCoordVector((0,) * 14, 0, 1)
    assert is_admissible(v)
    bad = OctCoordVector((0, 0, 0, 0, 1, 0, 0) + (0,) * 7, 0, 1)
    assert not is_admissible(bad)
    assert not is_admissible(OctCoordVector((0,) * 14, 0, 3))


# ----------------------------------------------------------- matching

def test_matching_system_sizes():
    s = matching_system(CANON)
    assert (len(s.rows), s.columns) == (12, 14)
    s = matching_system(B4)
    assert (len(s.rows), s.columns) == (30, 35)


@pytest.mark.parametrize("name", FIXTURES)
def test_links_in_kernel(name):
    tri = load(name)
    system = matching_system(tri)
    assert len(system.rows) <= 6 * tri.size
    for v in links(tri):
        assert system.satisfied(v.coords)
    for row in system.rows:
        assert sorted(x for x in row if x) in ([-1, -1, 1, 1], [], [-1, 1])


def test_vertex_link_canonical():
    for v in links(CANON):
        assert sorted(v.coords) == [0] * 12 + [1, 1]
        assert all(x == 0 for i in range(2) for x in v.quads(i))
        s = build_surface(CANON, v)
        assert (s.components, s.euler, s.weight) == (1, 2, 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=14, max_size=14))
def test_matching_agrees_with_arc_oracle(coords):
    assert matching_system(CANON).satisfied(coords) == matching_ok(CANON, coords)


# --------------------------------------------------------- brute force

def test_brute_force_examples():
    assert [v.coords for v in brute_force_solutions(CANON, 0)] == [(0,) * 14]
    at1 = {v.coords for v in brute_force_solutions(CANON, 1)}
    assert {v.coords for v in links(CANON)} <= at1
    for v in brute_force_solutions(CANON, 2):
        assert is_admissible(v) and is_solution(CANON, v)


def test_brute_force_exhaustive_at_cap1():
    # plain enumeration of all 2^14 vectors
    want = sorted(c for c in product((0, 1), repeat=14)
                  if quad_ok(c) and matching_ok(CANON, c))
    assert [v.coords for v in brute_force_solutions(CANON, 1)] == want


def test_brute_force_guard():
    with pytest.raises(TooLarge):
        brute_force_solutions(B4, 3, limit=1000)


# ------------------------------------------------- fundamental solutions

def test_fundamental_canonical_vs_oracle():
    fund = sorted(v.coords for v in fundamental_solutions(CANON))
    for cap in (1, 2, 3):
        oracle = sorted(v.coords for v in indecomposable(brute_force_solutions(CANON, cap)))
        assert fund == oracle
    assert max(max(v) for v in fund) <= 131072 == bound("hass", 2)


def test_fundamental_contains_indecomposable_links():
    fund = {v.coords for v in fundamental_solutions(CANON)}
    pool = {v.coords for v in brute_force_solutions(CANON, 1)}
    for v in links(CANON):
        split = any(u != v.coords and any(u) and tuple(b - a for a, b in zip(u, v.coords)) in pool
                    and all(a <= b for a, b in zip(u, v.coords)) for u in pool)
        assert (v.coords in fund) == (not split)


def test_fundamental_boundary_4simplex_vs_oracle():
    fund = sorted(v.coords for v in fundamental_solutions(B4))
    oracle = sorted(v.coords for v in indecomposable(brute_force_solutions(B4, 2)))
    assert fund == oracle and len(fund) == 15


@pytest.mark.parametrize("name", [n for n in FIXTURES if n != "boundary_4simplex.tri3"])
def test_primal_equals_completion(name):
    tri = load(name)
    a = sorted(v.coords for v in fundamental_solutions(tri, method="primal"))
    b = sorted(v.coords for v in fundamental_solutions(tri, method="completion"))
    assert a == b
    assert max(max(v) for v in a) <= bound("hass", tri.size)


def test_unknown_method():
    with pytest.raises(ValueError):
        fundamental_solutions(CANON, method="magic")


def test_fundamental_indecomposable_exhaustive():
    # every split into two nonzero parts fails matching or admissibility
    for tri in (CANON, three_tet_s3()):
        for f in fundamental_solutions(tri):
            x = f.coords
            for u in product(*(range(c + 1) for c in x)):
                w = tuple(a - b for a, b in zip(x, u))
                if not any(u) or not any(w):
                    continue
                assert not (quad_ok(u) and matching_ok(tri, u)
                            and quad_ok(w) and matching_ok(tri, w))


def generated(fund, v, memo=None):
    """Whether v is a non-negative integer combination of ``fund``."""
    memo = {} if memo is None else memo
    if not any(v):
        return True
    if v in memo:
        return memo[v]
    ok = False
    for f in fund:
        if all(a <= b for a, b in zip(f, v)):
            if generated(fund, tuple(b - a for a, b in zip(f, v)), memo):
                ok = True
                break
    memo[v] = ok
    return ok


def test_completeness_canonical():
    fund = [v.coords for v in fundamental_solutions(CANON)]
    memo = {}
    for v in brute_force_solutions(CANON, 3):
        assert generated(fund, v.coords, memo)


def test_vertex_solutions():
    fund = {v.coords for v in fundamental_solutions(CANON)}
    vs = vertex_solutions(CANON)
    assert vs
    for v in vs:
        assert is_admissible(v) and is_solution(CANON, v)
        g = 0
        for x in v.coords:
            g = gcd(g, x)
        assert g == 1
        assert v.coords in fund
    for v in vertex_solutions(B4):
        assert v.coords in {f.coords for f in fundamental_solutions(B4)}


# ------------------------------------------------------ reconstruction

def test_build_examples():
    z = build_surface(CANON, (0,) * 14)
    assert z.is_empty and z.components == 0 and z.euler == 0
    a, b = links(CANON)[:2]
    s = build_surface(CANON, a + b)
    assert (s.components, s.euler) == (2, 4)


def test_build_errors():
    bad = [0] * 14
    bad[4] = bad[5] = 1
    with pytest.raises(NotAdmissible):
        build_surface(CANON, bad)
    off = [0] * 14
    off[0] = 1
    with pytest.raises(NotASolution):
        build_surface(CANON, off)


@pytest.mark.parametrize("name", FIXTURES)
def test_build_matches_counting_oracle(name):
    tri = load(name)
    for v in fundamental_solutions(tri):
        s = build_surface(tri, v)
        assert (s.weight, s.euler) == weight_and_euler(tri, v.coords)
        assert sum(s.component_euler) == s.euler
        assert sum(len(c.coords) and 1 for c in s.component_vectors) == s.components


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=7, max_size=7))
def test_build_combinations_b4(weights):
    fund = fundamental_solutions(B4)
    v = NormalCoordVector((0,) * 35)
    for w, f in zip(weights, fund[:7]):
        for _ in range(w):
            if compatible(v, f):
                v = v + f
    s = build_surface(B4, v)
    assert (s.weight, s.euler) == weight_and_euler(B4, v.coords)
    total = NormalCoordVector((0,) * 35)
    for c in s.component_vectors:
        total = total + c
    assert total == v


# --------------------------------------------------------------- Haken sum

def test_haken_examples():
    a, b = links(CANON)[:2]
    zero = NormalCoordVector((0,) * 14)
    assert haken_sum(a, zero) == a
    s = haken_sum(a, b)
    assert build_surface(CANON, s).euler == 4
    q1 = [0] * 14
    q1[4] = 1
    q2 = [0] * 14
    q2[5] = 1
    with pytest.raises(Incompatible):
        haken_sum(NormalCoordVector(q1), NormalCoordVector(q2))


@pytest.mark.parametrize("tri", [CANON, B4], ids=["canonical_s3", "boundary_4simplex"])
def test_euler_additive(tri):
    fund = fundamental_solutions(tri)
    for v in fund:
        for w in fund:
            if compatible(v, w):
                s = haken_sum(v, w)
                assert is_solution(tri, s)
                assert build_surface(tri, s).euler == (build_surface(tri, v).euler
                                                       + build_surface(tri, w).euler)


# ------------------------------------------------------------ sphere family

def test_sphere_family_canonical():
    fam = sphere_family(CANON)
    assert 0 < len(fam) <= 12
    assert len({v.coords for v in fam}) == len(fam)
    for v in fam:
        s = build_surface(CANON, v)
        assert s.components == 1 and s.euler == 2


def test_sphere_family_boundary_4simplex():
    fam = sphere_family(B4)
    assert len(fam) <= 30
    for i, v in enumerate(fam):
        for w in fam[i + 1:]:
            assert compatible(v, w)


def test_sphere_family_rp3(rp3):
    # every member is still a connected sphere
    for v in sphere_family(rp3):
        s = build_surface(rp3, v)
        assert (s.components, s.euler) == (1, 2)


# ------------------------------------------------------------- octagonal

def test_octagonal_three_tet_sphere():
    tri = three_tet_s3()
    found = []
    for tet in range(tri.size):
        for curve in range(3):
            got = enumerate_octagonal(tri, tet, curve)
            oracle = minimal(brute_force_octagonal(tri, tet, curve, 3))
            assert sorted(v.coords for v in got) == oracle
            for v in got:
                assert is_admissible(v) and is_solution(tri, v)
                assert matching_ok(tri, v.coords, (tet, curve), 1)
                s = build_surface(tri, v)
                assert (s.weight, s.euler) == weight_and_euler(tri, v.coords, (tet, curve), 1)
                if s.components == 1 and s.euler == 2:
                    found.append(v)
    assert found


def test_octagonal_methods_agree():
    tri = three_tet_s3()
    for curve in range(3):
        a = enumerate_octagonal(tri, 0, curve, method="primal")
        b = enumerate_octagonal(tri, 0, curve, method="completion")
        assert a == b


def test_octagonal_canonical_empty():
    # no one-octagon solution exists on the two-tetrahedron sphere
    for tet in range(2):
        for curve in range(3):
            assert enumerate_octagonal(CANON, tet, curve) == []
            assert brute_force_octagonal(CANON, tet, curve, 3) == []


def test_octagonal_bad_position():
    with pytest.raises(ValueError):
        enumerate_octagonal(CANON, 2, 0)
    with pytest.raises(ValueError):
        enumerate_octagonal(CANON, 0, 3)


@pytest.mark.parametrize("seed", [1, 3])
def test_octagonal_scrambles_vs_oracle(seed):
    tri, _ = scramble(CANON, 2, seed)
    assert tri.size == 4
    for tet in range(tri.size):
        for curve in range(3):
            got = enumerate_octagonal(tri, tet, curve)
            cap = max([max(v.coords) for v in got] + [2])
            assert sorted(v.coords for v in got) == minimal(
                brute_force_octagonal(tri, tet, curve, cap))
            assert all(max(v.coords) <= bound("hass", tri.size) for v in got)


# ------------------------------------------------------------ file format

@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_nsv_round_trip(t, data):
    rows = data.draw(st.lists(st.lists(st.integers(0, 10**6), min_size=7 * t, max_size=7 * t),
                              min_size=1, max_size=4))
    vecs = [NormalCoordVector(r) for r in rows]
    text = format_nsv(vecs)
    assert parse_nsv(text) == vecs
    assert format_nsv(parse_nsv(text)) == text


def test_ansv_round_trip():
    v = OctCoordVector((1,) * 14, 1, 2)
    text = format_nsv([v])
    assert text.startswith("ansv v1\nt 2\noct 1 2\n")
    (back,) = parse_nsv(text)
    assert back == v and back.tet_index == 1 and back.curve == 2


@pytest.mark.parametrize("text", ["", "nsv v2\nt 1\n0,0,0,0,0,0,0\n", "nsv v1\nt 1\n",
                                  "nsv v1\nt 1\n0,0,0\n", "ansv v1\nt 1\n0,0,0,0,0,0,0\n",
                                  "nsv v1\nt x\n0\n", "nsv v1\nt 1\n0,0,0,0,0,0,a\n"])
def test_nsv_rejects(text):
    with pytest.raises(ParseError):
        parse_nsv(text)
