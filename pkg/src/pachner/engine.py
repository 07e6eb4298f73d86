"""Simplification of 3-sphere triangulations to the two-tetrahedron
canonical form, and recognition with replayable move certificates.

The search is greedy: 4-1 moves first (while more than four vertices
remain), then 3-2 moves.  When neither applies it looks a few 2-3 moves
ahead for a sequence after which greedy reduction gets below the current
size; failing that it takes a seeded random 2-3 move and reduces again,
avoiding recently seen triangulations.  Positive answers are certified by
replay; the search never claims a negative answer.

The budget counts every move the search applies, including the trial
moves of the lookahead, so it bounds the work done and not only the
length of the script.
"""
from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass, field

from .isosig import iso_signature
from .moves import apply_move, apply_move_tracked, enumerate_moves, replay, ReplayDiverged, IllegalSite
from .skeleton import analyze, face_classes, h1_z2
from .triangulation import Triangulation3, standard_triangulation, validate

CANONICAL_SIG = iso_signature(standard_triangulation("canonical_s3"))

REACHED = "ReachedCanonical"
EXHAUSTED = "BudgetExhausted"


@dataclass
class SimplifyResult:
    outcome: str
    script: list
    final: Triangulation3
    stats: dict = field(default_factory=dict)

    @property
    def reached(self):
        return self.outcome == REACHED


@dataclass(frozen=True)
class IsS3:
    certificate: tuple

    verdict = "IsS3"


@dataclass(frozen=True)
class Obstruction:
    kind: str
    detail: str = ""

    verdict = "Obstruction"


@dataclass(frozen=True)
class Unknown:
    budget_spent: int

    verdict = "Unknown"


def _shape(tri):
    """Cheap relabeling-invariant fingerprint used to avoid revisiting."""
    edges, _ = face_classes(tri, 1)
    verts, _ = face_classes(tri, 0)
    return (tri.size, len(verts), tuple(sorted(len(e) for e in edges)),
            tuple(sorted(len(v) for v in verts)))


def _vertex_count(tri):
    return len(face_classes(tri, 0)[0])


class _Search:
    def __init__(self, tri, budget, seed, depth, width):
        self.tri = tri
        self.budget = budget
        self.rng = random.Random(seed)
        self.depth = depth
        self.width = width
        self.script = []
        self.kinds = Counter()
        self.peak = tri.size
        self.tabu = deque(maxlen=64)
        self.work = 0

    @property
    def spent(self):
        return self.work

    def trial(self, tri, site):
        self.work += 1
        return apply_move(tri, site)

    def push(self, site):
        self.work += 1
        self.tri, rec = apply_move(self.tri, site)
        self.script.append(rec)
        self.kinds[rec.kind] += 1
        self.peak = max(self.peak, self.tri.size)

    def reductions(self, tri):
        kinds = ("M41", "M32") if _vertex_count(tri) > 4 else ("M32",)
        sites = enumerate_moves(tri, kinds)
        order = {"M41": 0, "M32": 1}
        return sorted(sites, key=lambda s: order[s.kind])

    def greedy(self):
        """Apply reductions until none is left; avoid recently seen shapes."""
        while self.spent < self.budget:
            sites = self.reductions(self.tri)
            moved = False
            for site in sites:
                nxt, _ = self.trial(self.tri, site)
                if _shape(nxt) in self.tabu:
                    continue
                self.push(site)
                moved = True
                break
            if not moved:
                return

    def greedy_size(self, tri, limit):
        """Size reached by plain greedy reduction from ``tri`` (no tabu)."""
        seq = []
        while len(seq) < limit and self.work < self.budget:
            sites = self.reductions(tri)
            if not sites:
                break
            tri, rec = self.trial(tri, sites[0])
            seq.append(rec)
        return tri, seq

    def lookahead(self):
        """Up to ``depth`` 2-3 moves followed by greedy reduction that end
        below the current size; returns the move list or None."""
        start = self.tri.size
        start_shape = _shape(self.tri)

        def rec(tri, path, depth):
            sites = enumerate_moves(tri, ("M23",))
            self.rng.shuffle(sites)
            for site in sites[: self.width]:
                if self.work >= self.budget:
                    return None
                self.work += 1
                res = apply_move_tracked(tri, site)
                # reductions other than undoing this 2-3 move
                for red in self.reductions(res.tri):
                    if red == res.inverse:
                        continue
                    after, _ = self.trial(res.tri, red)
                    if _shape(after) == start_shape:
                        continue
                    final, seq = self.greedy_size(after, 4 * start)
                    if final.size < start:
                        return path + [site, red] + seq
                if depth > 1:
                    found = rec(res.tri, path + [site], depth - 1)
                    if found:
                        return found
            return None

        return rec(self.tri, [], self.depth)

    def random_step(self):
        sites = enumerate_moves(self.tri, ("M23",))
        if not sites:
            sites = enumerate_moves(self.tri, ("M14",))
        self.push(self.rng.choice(sites))


def _is_canonical(tri):
    return tri.size == 2 and iso_signature(tri) == CANONICAL_SIG


def simplify(tri, budget=10**5, seed=0, depth=3, width=6):
    """Drive ``tri`` towards the canonical two-tetrahedron 3-sphere.

    Returns a :class:`SimplifyResult`; replaying its script on ``tri``
    gives its final triangulation.  Deterministic in ``(tri, budget, seed)``.
    """
    s = _Search(tri, budget, seed, depth, width)
    while True:
        s.greedy()
        if _is_canonical(s.tri):
            outcome = REACHED
            break
        if s.spent >= budget:
            outcome = EXHAUSTED
            break
        s.tabu.append(_shape(s.tri))
        if _vertex_count(s.tri) < 4:
            s.push(enumerate_moves(s.tri, ("M14",))[0])
            continue
        seq = s.lookahead()
        if seq is not None:
            for site in seq:
                s.push(site)
            continue
        if s.spent >= budget:
            outcome = EXHAUSTED
            break
        s.random_step()
        if s.spent >= budget:
            outcome = EXHAUSTED
            break
    stats = {"moves": len(s.script), "work": s.work, "by_kind": dict(sorted(s.kinds.items())), "peak_tets": s.peak,
             "final_tets": s.tri.size}
    return SimplifyResult(outcome, s.script, s.tri, stats)


def recognize_s3(tri, budget=10**5, seed=0):
    """Obstruction checks in order, then simplification.

    ``tri`` may be a Triangulation3 or a raw gluing table (validated first).
    """
    if not isinstance(tri, Triangulation3):
        tri = validate(tri)
    rep = analyze(tri)
    if not rep.closed:
        return Obstruction("NotClosed", "boundary facets present")
    if not rep.orientable:
        return Obstruction("NotOrientable")
    if not (rep.valid_edges and rep.links_are_spheres):
        bad = [i for i, link in enumerate(rep.links) if not link.is_sphere]
        return Obstruction("VertexLinkNotSphere", f"vertices {bad}" if bad else "invalid edge")
    h1 = h1_z2(tri)
    if h1:
        return Obstruction("H1Z2Nontrivial", f"h1z2={h1}")
    res = simplify(tri, budget, seed)
    if res.reached:
        return IsS3(tuple(res.script))
    return Unknown(res.stats["work"])


def certify_reason(tri, script):
    """``(ok, reason)``: replay the script and compare with the canonical
    signature."""
    try:
        end = replay(tri, list(script))
    except ReplayDiverged as exc:
        return False, f"replay diverged at {exc}"
    except (IllegalSite, ValueError) as exc:
        return False, f"replay failed: {exc}"
    sig = iso_signature(end)
    if sig != CANONICAL_SIG:
        return False, f"endpoint has {end.size} tetrahedra and is not canonical"
    return True, "ok"


def certify(tri, script):
    return certify_reason(tri, script)[0]
