"""Command-line front end.

Exit codes: 0 success, 1 negative verdict or obstruction, 2 invalid input,
3 guard or budget exceeded.  With ``--format machine`` output is
line-oriented ``key=value`` text and starts with the full configuration.
"""
from __future__ import annotations

import argparse
import sys

from . import bounds as bounds_mod
from .engine import IsS3, Obstruction, Unknown, certify_reason, recognize_s3, simplify
from .isosig import iso_signature
from .moves import format_script, parse_script, scramble
from .normal import (
    Incompatible,
    LengthMismatch,
    NotAdmissible,
    NotASolution,
    TooLarge,
    brute_force_solutions,
    build_surface,
    enumerate_octagonal,
    format_nsv,
    fundamental_solutions,
    haken_sum,
    matching_system,
    read_nsv,
    sphere_family,
    vertex_solutions,
)
from .shell import (
    BoundaryMismatch,
    NotACone,
    NotShellable,
    ShellContext,
    StarNotEmbedded,
    boundary_move_kind,
    change_cones,
    crush_cone_edge,
    elementary_shellings,
    shell_step,
)
from .skeleton import analyze, h1_z2
from .surf2 import NotADisc, NotCombinatorial, analyze2, cone3, disc_to_cone, from_triangles
from .triangulation import InvalidTriangulation, ParseError, read_triangulation

OK, NEGATIVE, INVALID, GUARD = 0, 1, 2, 3

_OBSTRUCTION_TAGS = {
    "NotClosed": "not-closed",
    "NotOrientable": "not-orientable",
    "VertexLinkNotSphere": "vertex-link-not-sphere",
}


class Output:
    def __init__(self, args):
        self.args = args
        self.lines = []

    @property
    def machine(self):
        return self.args.format == "machine"

    def header(self):
        if not self.machine:
            return
        a = self.args
        cmd = a.command + (f" {a.action}" if getattr(a, "action", None) else "")
        inputs = ",".join(getattr(a, "inputs_echo", []))
        self.emit(f"config command={cmd} inputs={inputs} seed={a.seed} budget={a.budget} "
                  f"max_t={a.max_t} format={a.format}")

    def emit(self, line=""):
        self.lines.append(line)

    def kv(self, key, value, label=None):
        if self.machine:
            self.emit(f"{key}={value}")
        else:
            self.emit(f"{label or key}: {value}")

    def flush(self):
        text = "\n".join(self.lines) + ("\n" if self.lines else "")
        if self.args.out:
            with open(self.args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _load3(path):
    return read_triangulation(path, 3)


def _guard_t(args, tri):
    if args.max_t is not None and tri.size > args.max_t:
        raise TooLarge(f"t={tri.size} exceeds --max-t {args.max_t}")


def _yes(flag):
    return "yes" if flag else "no"


# ------------------------------------------------------------- subcommands

def cmd_validate(args, out):
    tri = read_triangulation(args.file)
    out.kv("status", "valid")
    out.kv("dim", tri.dim)
    out.kv("simplices", tri.size)
    return OK


def cmd_info(args, out):
    tri = _load3(args.file)
    rep = analyze(tri)
    out.kv("counts", ",".join(map(str, rep.counts)), "counts (V,E,F,T)")
    out.kv("euler", rep.euler)
    out.kv("closed", _yes(rep.closed))
    out.kv("orientable", _yes(rep.orientable))
    out.kv("connected", _yes(rep.connected))
    out.kv("links_spheres", _yes(rep.links_are_spheres), "vertex links all spheres")
    out.kv("valid_edges", _yes(rep.valid_edges))
    out.kv("edge_condition", _yes(rep.edge_condition))
    if rep.closed:
        out.kv("h1_z2", h1_z2(tri))
    out.kv("isosig", iso_signature(tri))
    return OK


def cmd_scramble(args, out):
    tri = _load3(args.file)
    new, records = scramble(tri, args.k, args.seed)
    if args.script:
        with open(args.script, "w") as fh:
            fh.write(format_script(records, f"scramble k={args.k} seed={args.seed}"))
    if out.machine:
        out.kv("moves", len(records))
        out.kv("isosig", iso_signature(new))
    out.emit(new.to_text().rstrip("\n"))
    return OK


def cmd_simplify(args, out):
    tri = _load3(args.file)
    res = simplify(tri, args.budget, args.seed)
    out.kv("outcome", res.outcome)
    out.kv("moves", res.stats["moves"])
    out.kv("work", res.stats["work"])
    out.kv("peak_tets", res.stats["peak_tets"])
    out.kv("final_tets", res.stats["final_tets"])
    for kind, n in res.stats["by_kind"].items():
        out.kv(f"kind_{kind}", n)
    if args.script:
        with open(args.script, "w") as fh:
            fh.write(format_script(res.script, f"simplify seed={args.seed} budget={args.budget}"))
    return OK if res.reached else GUARD


def cmd_recognize(args, out):
    tri = _load3(args.file)
    verdict = recognize_s3(tri, args.budget, args.seed)
    if isinstance(verdict, IsS3):
        out.kv("verdict", "IsS3")
        out.kv("certificate_moves", len(verdict.certificate))
        if args.script:
            with open(args.script, "w") as fh:
                fh.write(format_script(verdict.certificate, "certificate"))
        code = OK
    elif isinstance(verdict, Obstruction):
        if verdict.kind == "H1Z2Nontrivial":
            reason = f"obstruction {verdict.detail}"
        else:
            reason = f"obstruction {_OBSTRUCTION_TAGS[verdict.kind]}"
        out.kv("verdict", "Obstruction")
        out.kv("reason", reason)
        code = NEGATIVE
    else:
        out.kv("verdict", "Unknown")
        out.kv("reason", f"budget spent {verdict.budget_spent}")
        code = GUARD
    if args.advisory and not isinstance(verdict, Obstruction):
        _advisory(args, out, tri)
    return code


def _advisory(args, out, tri):
    """Octagonal almost normal spheres found, as evidence only."""
    if tri.size > (args.max_t or 4):
        out.kv("advisory", "skipped (t above --max-t)")
        return
    found = 0
    for tet in range(tri.size):
        for curve in range(3):
            for v in enumerate_octagonal(tri, tet, curve):
                s = build_surface(tri, v)
                if s.components == 1 and s.euler == 2:
                    found += 1
    out.kv("advisory_octagonal_spheres", found)


def cmd_certify(args, out):
    tri = _load3(args.file)
    with open(args.script_file) as fh:
        records = parse_script(fh.read())
    ok, reason = certify_reason(tri, records)
    out.kv("certified", _yes(ok))
    out.kv("reason", reason)
    return OK if ok else NEGATIVE


def _write_vectors(out, vectors, empty_note):
    if vectors:
        out.emit(format_nsv(vectors).rstrip("\n"))
    else:
        out.kv("note", empty_note)


def cmd_normal(args, out):
    tri = _load3(args.file)
    action = args.action
    if action == "system":
        system = matching_system(tri)
        out.kv("rows", len(system.rows))
        out.kv("columns", system.columns)
        for label, row in zip(system.labels, system.rows):
            tet, face, arc = label
            out.emit(f"t{tet}.f{face}.a{arc} " + ",".join(map(str, row)))
        return OK
    _guard_t(args, tri)
    if action == "enumerate":
        if args.kind == "fundamental":
            vecs = fundamental_solutions(tri)
        elif args.kind == "vertex":
            vecs = vertex_solutions(tri)
        else:
            vecs = [v for v in brute_force_solutions(tri, args.cap) if not v.is_zero()]
        out.kv("count", len(vecs))
        _write_vectors(out, vecs, "no solutions")
        return OK
    if action == "build":
        (vec,) = read_nsv(args.vectors[0])[:1]
        surf = build_surface(tri, vec)
        out.kv("components", surf.components)
        out.kv("euler", surf.euler)
        out.kv("weight", surf.weight)
        out.kv("discs", len(surf.discs))
        return OK
    if action == "sum":
        if len(args.vectors) != 2:
            raise ValueError("normal sum needs two vector files")
        v = read_nsv(args.vectors[0])[0]
        w = read_nsv(args.vectors[1])[0]
        s = haken_sum(v, w)
        surf = build_surface(tri, s)
        out.kv("euler", surf.euler)
        out.emit(format_nsv(s).rstrip("\n"))
        return OK
    if action == "octagonal":
        tets = [args.tet] if args.tet is not None else range(tri.size)
        curves = [args.curve] if args.curve is not None else range(3)
        total = 0
        for tet in tets:
            for curve in curves:
                vecs = enumerate_octagonal(tri, tet, curve)
                total += len(vecs)
                for v in vecs:
                    surf = build_surface(tri, v)
                    out.emit(f"oct tet={tet} curve={curve} components={surf.components} "
                             f"euler={surf.euler} coords=" + ",".join(map(str, v.coords)))
        out.kv("count", total)
        return OK
    if action == "spheres":
        fam = sphere_family(tri)
        out.kv("family_size", len(fam))
        out.kv("kneser_bound", bounds_mod.bound("kneser", tri.size))
        _write_vectors(out, fam, "no spheres")
        return OK
    raise ValueError(f"unknown normal action {action}")


def cmd_bounds(args, out):
    if args.t is None:
        raise ValueError("bounds needs --t")
    # exact values can run to hundreds of thousands of digits
    sys.set_int_max_str_digits(0)
    if args.which:
        value = bounds_mod.bound(args.which, args.t)
        if out.machine:
            out.kv(args.which, value)
        else:
            out.emit(str(value))
        return OK
    if out.machine:
        for name in bounds_mod.BOUNDS:
            out.kv(name, bounds_mod.bound(name, args.t))
    else:
        out.emit(bounds_mod.compare_bounds(args.t))
    return OK


_DEMO_SPHERES = {
    "tetra": [(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)],
    "octa": [(0, 2, 4), (0, 2, 5), (0, 3, 4), (0, 3, 5),
             (1, 2, 4), (1, 2, 5), (1, 3, 4), (1, 3, 5)],
}


def cmd_shell(args, out):
    action = args.action
    if action == "demo":
        cone = cone3(from_triangles(_DEMO_SPHERES[args.sphere])[0])
        ctx = ShellContext(cone)
        out.kv("start_tets", cone.size)
        step = 0
        while ctx.tri.size > 1:
            options = elementary_shellings(ctx)
            if not options:
                out.kv("stuck_at", ctx.tri.size)
                return NEGATIVE
            tet = options[0]
            kind = boundary_move_kind(ctx, tet)
            ctx = shell_step(ctx, tet)
            step += 1
            if out.machine:
                out.emit(f"step={step} tet={tet} kind={kind} left={ctx.tri.size}")
            else:
                out.emit(f"step {step}: shell tet {tet} boundary-move {kind} tets-left {ctx.tri.size}")
        out.kv("shelled", "yes")
        return OK
    if action == "crush":
        tri = _load3(args.inputs[0])
        new, records = crush_cone_edge(tri, args.vertex)
        out.kv("moves", len(records))
        out.kv("tets", new.size)
        out.emit(format_script(records).rstrip("\n"))
        return OK
    if action == "change-cones":
        if len(args.inputs) != 2:
            raise ValueError("change-cones needs a cone file and a disc file")
        cone = _load3(args.inputs[0])
        disc = read_triangulation(args.inputs[1], 2)
        new, records, info = change_cones(cone, disc)
        n, m = len(info["D"]), len(info["E"])
        out.kv("moves", len(records))
        out.kv("bound", 4 * (n + m), "bound 4(n+m)")
        out.kv("tets", new.size)
        out.emit(format_script(records).rstrip("\n"))
        return OK
    raise ValueError(f"unknown shell action {action}")


def cmd_disc2cone(args, out):
    disc = read_triangulation(args.file, 2)
    rep = analyze2(disc)
    new, records = disc_to_cone(disc)
    out.kv("triangles", rep.F)
    out.kv("moves", len(records))
    out.emit(format_script(records).rstrip("\n"))
    return OK


# ------------------------------------------------------------------ parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (required by randomized commands)")
    common.add_argument("--budget", type=int, default=10**5, help="search budget: applied plus trial moves")
    common.add_argument("--max-t", dest="max_t", type=int, default=None,
                        help="refuse normal-surface work above this many tetrahedra")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--out", default=None, help="write the main result to this file")

    parser = argparse.ArgumentParser(prog="pachner", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a gluing table")
    p.add_argument("file")
    p = sub.add_parser("info", parents=[common], help="counts, links, homology, signature")
    p.add_argument("file")
    p = sub.add_parser("scramble", parents=[common], help="apply k random moves")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--script", default=None, help="write the move script here")
    p = sub.add_parser("simplify", parents=[common], help="reduce towards canonical_s3")
    p.add_argument("file")
    p.add_argument("--script", default=None)
    p = sub.add_parser("recognize", parents=[common], help="3-sphere recognition with certificate")
    p.add_argument("file")
    p.add_argument("--script", default=None, help="write the certificate here")
    p.add_argument("--advisory", action="store_true",
                   help="also report octagonal almost normal spheres (evidence only)")
    p = sub.add_parser("certify", parents=[common], help="replay a certificate")
    p.add_argument("file")
    p.add_argument("script_file")

    p = sub.add_parser("normal", parents=[common], help="normal surface tools")
    p.add_argument("action", choices=("system", "enumerate", "build", "sum", "octagonal", "spheres"))
    p.add_argument("file")
    p.add_argument("vectors", nargs="*")
    p.add_argument("--kind", choices=("fundamental", "vertex", "brute"), default="fundamental")
    p.add_argument("--cap", type=int, default=1)
    p.add_argument("--tet", type=int, default=None)
    p.add_argument("--curve", type=int, default=None)

    p = sub.add_parser("bounds", parents=[common], help="exact bound values")
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--which", default=None)

    p = sub.add_parser("shell", parents=[common], help="shellings as Pachner moves")
    p.add_argument("action", choices=("demo", "crush", "change-cones"))
    p.add_argument("inputs", nargs="*")
    p.add_argument("--vertex", type=int, default=0)
    p.add_argument("--sphere", choices=sorted(_DEMO_SPHERES), default="octa")

    p = sub.add_parser("disc2cone", parents=[common], help="turn a disc into the cone on its boundary")
    p.add_argument("file")
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "info": cmd_info,
    "scramble": cmd_scramble,
    "simplify": cmd_simplify,
    "recognize": cmd_recognize,
    "certify": cmd_certify,
    "normal": cmd_normal,
    "bounds": cmd_bounds,
    "shell": cmd_shell,
    "disc2cone": cmd_disc2cone,
}

RANDOMIZED = {"scramble", "simplify", "recognize"}

_INVALID = (ParseError, InvalidTriangulation, OSError, LengthMismatch, NotAdmissible,
            NotASolution, NotCombinatorial, NotADisc, NotACone, StarNotEmbedded,
            BoundaryMismatch, NotShellable, bounds_mod.UnknownName, bounds_mod.NonPositiveT,
            ValueError)


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INVALID if exc.code else OK
    args.inputs_echo = [x for x in (getattr(args, "file", None),) if x]
    args.inputs_echo += list(getattr(args, "vectors", []) or []) + list(getattr(args, "inputs", []) or [])
    if getattr(args, "script_file", None):
        args.inputs_echo.append(args.script_file)
    out = Output(args)
    out.header()
    try:
        if args.command in RANDOMIZED and args.seed is None:
            raise ValueError(f"{args.command} needs an explicit --seed")
        code = COMMANDS[args.command](args, out)
    except TooLarge as exc:
        out.kv("error", f"guard {exc}")
        code = GUARD
    except Incompatible as exc:
        out.kv("error", f"incompatible {exc}")
        code = NEGATIVE
    except _INVALID as exc:
        msg = exc.args[0] if len(exc.args) == 1 else exc
        out.kv("error", f"invalid {type(exc).__name__}: {msg}")
        code = INVALID
    out.kv("exit", code) if out.machine else None
    out.flush()
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
