"""Time the compiled and pure-Python search kernels on the same subtrees.

    python benchmarks/bench_backends.py [--repeat 3] [--shard-depth 4] [--shard-index 800] [--json]

Cases: raw counts for the cube and two prisms, and one truncated-octahedron
shard (a fixed assignment prefix below the pinned label). Both kernels must
report identical counts and node totals, so the speedup is per search node.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from magic_solids import incidence
from magic_solids.magic import MagicProblem
from magic_solids.solver import KERNELS, make_shards


def cases(shard_depth: int, shard_index: int):
    for name, structure in [("cube", incidence.cube()), ("prism-4", incidence.prism(4)),
                            ("prism-6", incidence.prism(6))]:
        p = MagicProblem.from_structure(structure)
        yield name, p, []
    p = MagicProblem.from_structure(incidence.truncated_octahedron())
    shards = make_shards(p, shard_depth)
    shard = shards[shard_index % len(shards)]
    yield f"truncated-octahedron shard {shard.id}/{len(shards)} (depth {shard_depth})", p, list(shard.prefix)


def best_time(fn, repeat: int):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="best of N runs per kernel")
    ap.add_argument("--shard-depth", type=int, default=4)
    ap.add_argument("--shard-index", type=int, default=800)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    if "cython" not in KERNELS:
        print("compiled kernel not built; only the Python kernel is available", file=sys.stderr)
    rows = []
    for name, problem, prefix in cases(args.shard_depth, args.shard_index):
        V = problem.num_vertices
        faces = [f.vertices for f in problem.structure.faces]
        targets = problem.face_targets()
        row = {"case": name}
        for kernel, search in sorted(KERNELS.items()):
            elapsed, out = best_time(lambda: search(V, faces, targets, prefix), args.repeat)
            row[kernel] = {"seconds": elapsed, "count": out.count, "nodes": out.nodes,
                           "nodes_per_second": out.nodes / elapsed if elapsed else None}
        if "cython" in row:
            same = (row["python"]["count"], row["python"]["nodes"]) == (row["cython"]["count"], row["cython"]["nodes"])
            if not same:
                print(f"kernels disagree on {name}: {row}", file=sys.stderr)
                return 1
            row["speedup"] = row["python"]["seconds"] / row["cython"]["seconds"]
        rows.append(row)

    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    header = f"{'case':<48} {'labelings':>10} {'nodes':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for row in rows:
        py = row["python"]
        cy = row.get("cython")
        print(f"{row['case']:<48} {py['count']:>10} {py['nodes']:>10} {py['seconds']:>10.4f} "
              f"{cy['seconds'] if cy else float('nan'):>10.4f} {row.get('speedup', float('nan')):>7.0f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
