"""``magic-solids`` command line.

Exit codes: 0 success, 1 infeasible or verification failed, 2 usage error,
3 runtime error (including checkpoint mismatch).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import permutohedron
from .incidence import build_solid, full_symmetry_group
from .magic import (NO, InfeasibleError, Labeling, MagicProblem, check_feasibility, total_arrangements,
                    verify)

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3

SOLIDS = ("tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron", "prism",
          "truncated-octahedron", "permutohedron")

# Orbit counts established by this package's own enumeration (see tests).
KNOWN_COUNTS = {
    ("cube", None): {24: 6, 48: 3},
    ("truncated-octahedron", None): {24: 7_800_128, 48: 3_900_064},
}


class UsageError(Exception):
    pass


def _emit(args, text: str, doc: dict) -> None:
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(text)


def _solid(args):
    kind = "truncated-octahedron" if args.solid == "permutohedron" else args.solid
    n = getattr(args, "n", None)
    if kind == "prism":
        if n is None:
            raise UsageError("prism needs --n")
        if n < 3:
            raise UsageError("prism needs --n >= 3")
    elif n is not None:
        raise UsageError(f"--n only applies to prisms, not {kind}")
    structure, group = build_solid(kind, n)
    return kind, n, structure, group


def _fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cmd_derive(args) -> int:
    kind, n, structure, _ = _solid(args)
    constants, verdict = check_feasibility(structure)
    doc = {
        "solid": kind,
        "parameter": n,
        "constants": {c: _fraction(s) for c, s in constants.sums.items()},
        "per_vertex": constants.incidence,
        "faces": constants.face_counts,
        "verdict": verdict.to_dict(),
    }
    if verdict.feasible == NO:
        text = "\n".join(f"infeasible: {r.message}" for r in verdict.reasons)
        _emit(args, text, doc)
        return EXIT_INFEASIBLE
    text = " ".join(f"{c}={_fraction(s)}" for c, s in constants.sums.items())
    _emit(args, text, doc)
    return EXIT_OK


def _group_label(kind: str) -> str:
    return "rotation and reflection" if kind == "full" else "rotation"


def cmd_enumerate(args) -> int:
    from .solver import CheckpointError, SolverError, enumerate_solutions

    kind, n, structure, rotations = _solid(args)
    try:
        problem = MagicProblem.from_structure(structure)
    except InfeasibleError as exc:
        _emit(args, f"infeasible: {exc}", {"solid": kind, "parameter": n, "verdict": exc.verdict.to_dict()})
        return EXIT_INFEASIBLE
    full = full_symmetry_group(kind, n)
    group = full if args.group == "full" else rotations
    if group is None or group.order == 1:
        raise UsageError(f"no {args.group} group available for {kind}")
    workers = args.workers or int(os.environ.get("MAGIC_SOLIDS_WORKERS", "1"))

    out_fh = open(args.out, "w") if args.out else None

    def sink(labeling: Labeling) -> None:
        out_fh.write(json.dumps(labeling.to_dict(kind, n)) + "\n")

    def progress(done: int, total: int) -> None:
        print(f"\rshards {done}/{total}", end="", file=sys.stderr, flush=True)

    try:
        result = enumerate_solutions(
            problem, group,
            count_only=args.count_only or out_fh is None,
            shard_depth=args.shard_depth,
            workers=workers,
            checkpoint_path=args.checkpoint,
            solution_sink=sink if out_fh else None,
            limit=args.limit,
            progress=progress if not args.quiet else None,
        )
    except CheckpointError as exc:
        print(f"checkpoint error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    finally:
        if out_fh:
            out_fh.close()
        if not args.quiet:
            print(file=sys.stderr)

    counts = {str(group.order): result.orbit_count}
    lines = []
    if result.complete:
        lines.append(f"{result.orbit_count} solutions up to {_group_label(group.kind)} (group order {group.order})")
        other = full if group is rotations else rotations
        if other is not None and other.order > 1:
            alt = result.orbits_under(other.order)
            counts[str(other.order)] = alt
            lines.append(f"{alt} solutions up to {_group_label(other.kind)} (group order {other.order})")
        lines.append(f"raw labelings: {result.raw_count}")
    else:
        reason = "limit reached" if args.limit is not None else "stopped early"
        lines.append(f"{reason}: {result.orbit_count} solutions up to {_group_label(group.kind)} so far")
    if args.out:
        lines.append(f"wrote {result.solutions_emitted} labelings to {args.out}")
    lines.append(f"nodes explored: {result.nodes_explored}")
    lines.append(f"elapsed: {result.elapsed:.2f} s ({result.backend} kernel, {workers} worker(s))")
    doc = {
        "solid": kind,
        "parameter": n,
        "complete": result.complete,
        "orbit_count": result.orbit_count,
        "orbits_by_group_order": counts,
        "pinned_count": result.pinned_count,
        "raw_count": result.raw_count,
        "nodes_explored": result.nodes_explored,
        "shards": len(result.shards),
        "elapsed": result.elapsed,
        "backend": result.backend,
        "solutions_written": result.solutions_emitted,
    }
    _emit(args, "\n".join(lines), doc)
    return EXIT_OK


def _load_labeling(path: str):
    try:
        with open(path) as fh:
            doc = json.load(fh)
        solid = doc["solid"]
        parameter = doc.get("parameter")
        labels = [int(x) for x in doc["labels"]]
        kind = "truncated-octahedron" if solid == "permutohedron" else solid
        structure, _ = build_solid(kind, parameter)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed labeling document {path}: {exc}") from exc
    if len(labels) != structure.num_vertices:
        raise UsageError(f"{path}: {len(labels)} labels for {structure.num_vertices} vertices")
    return kind, parameter, structure, Labeling(tuple(labels))


def _check_labeling(structure, labeling):
    try:
        problem = MagicProblem.from_structure(structure)
    except InfeasibleError as exc:
        return None, {"ok": False, "infeasible": str(exc)}
    report = verify(problem, labeling)
    return report, report.to_dict()


def cmd_verify(args) -> int:
    kind, n, structure, labeling = _load_labeling(args.file)
    report, doc = _check_labeling(structure, labeling)
    doc.update(solid=kind, parameter=n)
    if report is None:
        _emit(args, f"infeasible solid: {doc['infeasible']}", doc)
        return EXIT_INFEASIBLE
    if report.ok:
        _emit(args, "OK", doc)
        return EXIT_OK
    lines = ["FAILED"]
    if not report.bijective:
        lines.append("labels are not a bijection onto 1..V")
    if report.violations:
        lines.append(f"{'face':>5} {'class':<10} {'expected':>8} {'actual':>8}")
        lines += [f"{v.face:>5} {v.class_id:<10} {v.expected:>8} {v.actual:>8}" for v in report.violations]
    _emit(args, "\n".join(lines), doc)
    return EXIT_INFEASIBLE


def cmd_render(args) -> int:
    from .render import render_svg

    kind, n, structure, labeling = _load_labeling(args.file)
    report, doc = _check_labeling(structure, labeling)
    if report is None or not report.ok:
        print("refusing to render: labeling does not verify", file=sys.stderr)
        return EXIT_INFEASIBLE
    try:
        svg = render_svg(structure, labeling.labels)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    with open(args.svg, "w") as fh:
        fh.write(svg)
    _emit(args, f"wrote {args.svg} ({len(structure.faces)} faces)", {"svg": args.svg, "faces": len(structure.faces)})
    return EXIT_OK


def cmd_stats(args) -> int:
    kind, n, structure, rotations = _solid(args)
    full = full_symmetry_group(kind, n)
    V = structure.num_vertices
    doc: dict = {"solid": kind, "parameter": n, "vertices": V, "arrangements": str(math.factorial(V))}
    lines = [f"{V}! = {math.factorial(V)}"]
    for group in (rotations, full):
        if group is None or group.order == 1:
            continue
        quotient = total_arrangements(structure, group)
        doc[f"arrangements_mod_{group.order}"] = str(quotient)
        lines.append(f"{V}!/{group.order} = {quotient}  (up to {_group_label(group.kind)})")
        known = KNOWN_COUNTS.get((kind, n), {}).get(group.order)
        if known is not None:
            ratio = Fraction(known, quotient)
            doc[f"solutions_mod_{group.order}"] = known
            doc[f"solution_fraction_mod_{group.order}"] = float(ratio)
            lines.append(f"  {known} solutions: fraction {float(ratio):.4e} ({float(ratio) * 100:.4e} %)")
    _emit(args, "\n".join(lines), doc)
    return EXIT_OK


def cmd_permutohedron(args) -> int:
    try:
        if args.pcmd == "faces":
            value = permutohedron.face_count(args.n, args.k)
            _emit(args, str(value), {"n": args.n, "k": args.k, "faces": str(value)})
        elif args.pcmd == "facets":
            facets = permutohedron.facets(args.n, max_vertices=math.factorial(5))
            lines = [f"{len(facets)} facets"]
            lines += [f"S={set(f.subset)} vertices={len(f.vertex_ids)}" for f in facets]
            doc = {"n": args.n, "facets": [{"subset": list(f.subset), "vertices": list(f.vertex_ids)}
                                           for f in facets]}
            _emit(args, "\n".join(lines), doc)
        elif args.pcmd == "cayley":
            graph = permutohedron.cayley_graph(args.n, max_vertices=math.factorial(5))
            if args.dot:
                with open(args.dot, "w") as fh:
                    fh.write(graph.to_dot())
            text = f"{len(graph.nodes)} nodes, {len(graph.edges)} directed edges"
            if args.dot:
                text += f"; wrote {args.dot}"
            _emit(args, text, {"n": args.n, "nodes": len(graph.nodes), "edges": len(graph.edges)})
        elif args.pcmd == "check-iso":
            cert = permutohedron.skeleton_matches_cayley(args.n)
            if cert is None:
                _emit(args, "isomorphic: no", {"n": args.n, "isomorphic": False})
                return EXIT_INFEASIBLE
            nodes = len(cert.bijection)
            _emit(args, f"isomorphic: yes ({nodes} vertices, {cert.edges_matched} edges matched)",
                  {"n": args.n, "isomorphic": True, "vertices": nodes, "edges": cert.edges_matched,
                   "bijection": list(cert.bijection)})
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON document")

    p = argparse.ArgumentParser(prog="magic-solids", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def solid_cmd(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("solid", choices=SOLIDS)
        sp.add_argument("--n", type=int, help="prism size")
        sp.set_defaults(func=func)
        return sp

    solid_cmd("derive", cmd_derive, "derive magic constants or prove infeasibility")
    sp = solid_cmd("enumerate", cmd_enumerate, "enumerate magic labelings up to symmetry")
    sp.add_argument("--count-only", action="store_true")
    sp.add_argument("--shard-depth", type=int, default=2)
    sp.add_argument("--workers", type=int, default=None, help="default: $MAGIC_SOLIDS_WORKERS or 1")
    sp.add_argument("--checkpoint", metavar="PATH")
    sp.add_argument("--out", metavar="PATH", help="write labelings as NDJSON")
    sp.add_argument("--limit", type=int)
    sp.add_argument("--group", choices=("rotation", "full"), default="rotation")
    sp.add_argument("--quiet", action="store_true", help="no progress on stderr")
    solid_cmd("stats", cmd_stats, "arrangement counts")

    sp = sub.add_parser("verify", parents=[common], help="check a labeling document")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("render", parents=[common], help="draw a labeled net as SVG")
    sp.add_argument("file")
    sp.add_argument("--svg", required=True, metavar="PATH")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("permutohedron", help="permutohedron combinatorics")
    psub = sp.add_subparsers(dest="pcmd", required=True)
    q = psub.add_parser("faces", parents=[common])
    q.add_argument("n", type=int)
    q.add_argument("k", type=int)
    q = psub.add_parser("facets", parents=[common])
    q.add_argument("n", type=int)
    q = psub.add_parser("cayley", parents=[common])
    q.add_argument("n", type=int)
    q.add_argument("--dot", metavar="PATH")
    q = psub.add_parser("check-iso", parents=[common])
    q.add_argument("n", type=int)
    sp.set_defaults(func=cmd_permutohedron)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"magic-solids: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - last-resort guard for the exit-code contract
        print(f"magic-solids: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
