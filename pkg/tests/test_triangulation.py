import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import load
from oracles import DATA, counts, h1_z2_dual, h1_z2_primal
from pachner.isosig import decode_signature, iso_signature, isomorphic
from pachner.moves import apply_move, enumerate_moves, scramble, site_for
from pachner.perm import all_perms, compose, inverse
from pachner.skeleton import NotClosed, analyze, h1_z2
from pachner.triangulation import (
    InvalidTriangulation,
    ParseError,
    check,
    parse_text,
    standard_triangulation,
    validate,
)

CLOSED = ["canonical_s3.tri3", "boundary_4simplex.tri3", "rp3.tri3", "l31.tri3",
          "s2xs1.tri3", "nonorientable.tri3", "badlink.tri3"]
ID = (0, 1, 2, 3)


def kinds(raw):
    return {v.kind for v in check(raw)[0]}


# ------------------------------------------------------------- validate

def test_canonical_table_valid():
    raw = [[(1, ID)] * 4, [(0, ID)] * 4]
    tri = validate(raw)
    assert tri.size == 2 and tri.is_closed()


def test_non_involutive():
    raw = [[(1, (0, 1, 2, 3))] + [None] * 3, [None, (0, (1, 0, 2, 3)), None, None]]
    raw[0][0] = (1, (2, 1, 0, 3))  # slot 0 -> slot 2 of tet 1
    assert "NonInvolutiveGluing" in kinds(raw)


def test_index_out_of_range():
    raw = [[(1, ID), None, None, None]]
    assert kinds(raw) == {"IndexOutOfRange"}
    with pytest.raises(InvalidTriangulation) as exc:
        validate(raw)
    assert exc.value.violations[0].simplex == 0


def test_self_glued_face():
    assert "SelfGluedFace" in kinds([[(0, ID), None, None, None]])


def test_face_label_mismatch():
    assert "FaceLabelMismatch" in kinds([[(0, (0, 0, 1, 2)), None, None, None]])
    assert "FaceLabelMismatch" in kinds([[(1, 2, (0, 1, 2, 3)), None, None, None],
                                         [None] * 4])


def test_every_violation_reported():
    raw = [[(5, ID), (0, (0, 1, 2, 3)), None, None]]
    got = kinds(raw)
    assert {"IndexOutOfRange", "SelfGluedFace"} <= got


def test_faces_glued_within_one_tet_allowed():
    # face 2 to face 3 of the same tetrahedron: non-combinatorial but legal
    swap = (0, 1, 3, 2)
    tri = validate([[None, None, (0, swap), (0, swap)]])
    assert tri.size == 1


# ------------------------------------------------------ standard fixtures

def test_standard_fixtures(s3, b4, ball):
    assert s3.size == 2 and s3.is_closed()
    assert all(g == (1 - i, ID) for i in range(2) for g in s3.gluings[i])
    assert b4.size == 5 and b4.is_closed()
    assert ball.size == 1 and len(ball.boundary_facets()) == 4


def test_unknown_name():
    with pytest.raises(KeyError, match="UnknownName"):
        standard_triangulation("poincare")


# ---------------------------------------------------------------- analyze

def test_analyze_canonical(s3):
    rep = analyze(s3)
    assert rep.counts == (4, 6, 4, 2) and rep.euler == 0
    assert rep.links_are_spheres and rep.orientable and rep.edge_condition


def test_analyze_boundary_4simplex(b4):
    rep = analyze(b4)
    assert rep.counts == (5, 10, 10, 5) and rep.euler == 0


def test_analyze_after_14(s3):
    tri, _ = apply_move(s3, site_for("M14", 0))
    rep = analyze(tri)
    assert rep.counts == (5, 10, 10, 5) and rep.euler == 0


@pytest.mark.parametrize("name", CLOSED)
def test_counts_match_oracle(name):
    tri = load(name)
    rep = analyze(tri)
    assert rep.counts == counts(tri)
    assert rep.F == 2 * tri.size


def test_ball_not_closed(ball):
    rep = analyze(ball)
    assert not rep.closed
    assert all(link.is_disc for link in rep.links)
    with pytest.raises(NotClosed):
        h1_z2(ball)


def test_edge_condition_after_full_subdivision(s3):
    tri = s3
    # a 1-4 move in every original tetrahedron; new ones are appended
    for i in range(s3.size):
        tri, _ = apply_move(tri, site_for("M14", 0))
    assert analyze(tri).edge_condition


def test_analyze_is_pure(b4):
    assert analyze(b4) == analyze(b4)


# ------------------------------------------------------------------ h1_z2

@pytest.mark.parametrize("name", CLOSED)
def test_h1_matches_primal_oracle(name):
    tri = load(name)
    assert h1_z2(tri) == h1_z2_primal(tri)


@pytest.mark.parametrize("name", [n for n in CLOSED if n != "badlink.tri3"])
def test_h1_matches_dual_oracle(name):
    # duality needs a manifold, so the bad-link fixture is left out
    tri = load(name)
    assert h1_z2(tri) == h1_z2_dual(tri)


def test_h1_examples(s3, rp3):
    assert h1_z2(s3) == 0
    assert h1_z2(rp3) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_h1_after_scramble(seed):
    tri, _ = scramble(standard_triangulation("canonical_s3"), 15, seed)
    assert h1_z2(tri) == 0 == h1_z2_dual(tri) == h1_z2_primal(tri)


# --------------------------------------------------------------- isosig

def random_relabel(tri, rng):
    order = list(range(tri.size))
    rng.shuffle(order)
    perms = [rng.choice(all_perms(4)) for _ in order]
    return tri.relabel(order, perms)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(CLOSED + ["single_tet_ball.tri3"]))
def test_signature_relabel_invariant(seed, name):
    tri = load(name)
    other = random_relabel(tri, random.Random(seed))
    assert iso_signature(other) == iso_signature(tri)


def test_signature_examples(s3, b4):
    swapped = s3.relabel([1, 0], [(1, 0, 3, 2), (2, 3, 0, 1)])
    assert iso_signature(swapped) == iso_signature(s3)
    assert iso_signature(s3) != iso_signature(b4)


@pytest.mark.parametrize("name", CLOSED + ["single_tet_ball.tri3", "cone_octahedron.tri3"])
def test_signature_decodes(name):
    tri = load(name)
    assert isomorphic(decode_signature(iso_signature(tri)), tri)


def test_signature_separates_fixtures():
    sigs = {iso_signature(load(n)) for n in CLOSED}
    assert len(sigs) == len(CLOSED)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_signature_separates_moves(seed):
    # a move always changes the tetrahedron count, so signatures differ
    tri, _ = scramble(standard_triangulation("canonical_s3"), 6, seed)
    site = enumerate_moves(tri)[0]
    after, _ = apply_move(tri, site)
    assert iso_signature(after) != iso_signature(tri)


# ------------------------------------------------------------------ perms

@given(st.sampled_from(all_perms(4)), st.sampled_from(all_perms(4)))
def test_perm_group(p, q):
    assert compose(p, inverse(p)) == ID
    assert inverse(compose(p, q)) == compose(inverse(q), inverse(p))


# ---------------------------------------------------------------- parsing

@pytest.mark.parametrize("text", [
    "",
    "tri3 v2\nn 0\n",
    "tri3 v1\nn 1\n",
    "tri3 v1\nn 1\n0: - - -\n",
    "tri3 v1\nn 1\n0:  - - - -\n",
    "tri3 v1\nn 1\n1: - - - -\n",
    "tri3 v1\nn 1\n0: 0:012 - - -\n",
    "tri3 v1\nn 01\n0: - - - -\n",
])
def test_strict_parse_errors(text):
    with pytest.raises(ParseError):
        parse_text(text)


def test_parse_rejects_invalid_table():
    with pytest.raises(InvalidTriangulation):
        parse_text("tri3 v1\nn 1\n0: 1:0123 - - -\n")


def test_text_exact(s3):
    assert s3.to_text() == "tri3 v1\nn 2\n0: 1:0123 1:0123 1:0123 1:0123\n1: 0:0123 0:0123 0:0123 0:0123\n"
    assert (DATA / "canonical_s3.tri3").read_text() == s3.to_text()
