"""Exhaustive enumeration of magic labelings up to a vertex-transitive group.

Label 1 is pinned to one vertex; every orbit has a member of that shape
because the group is transitive. What remains is the action of the pin's
stabilizer, handled by keeping only pinned solutions that are
lexicographically minimal under it. No non-identity vertex permutation can
fix a bijective labeling, so the action on solutions is free and
``orbits = pinned / |stabilizer| = raw / |group|``.
"""
from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, Sequence

from ..incidence import SymmetryGroup, act, inverse, validate
from ..magic import Labeling, MagicProblem
from . import backend as _backend
from .checkpoint import (DONE, Checkpoint, CheckpointError, SearchShard, checkpoint_load,
                         checkpoint_save)

log = logging.getLogger(__name__)


class SolverError(RuntimeError):
    pass


@dataclass
class EnumerationResult:
    orbit_count: int
    pinned_count: int
    nodes_explored: int
    shards: list[SearchShard]
    elapsed: float
    group_order: int
    stabilizer_order: int
    num_vertices: int
    complete: bool
    backend: str
    solutions_emitted: int = 0
    pin_vertex: int = 0

    @property
    def raw_count(self) -> int | None:
        """Labelings without symmetry reduction (known once the run is complete)."""
        return self.pinned_count * self.num_vertices if self.complete else None

    def orbits_under(self, group_order: int) -> int | None:
        """Orbit count for another symmetry group of the same problem."""
        raw = self.raw_count
        if raw is None:
            return None
        if raw % group_order:
            raise SolverError(f"{raw} labelings do not split into orbits of size {group_order}")
        return raw // group_order


def _problem_arrays(problem: MagicProblem) -> tuple[int, list[tuple[int, ...]], list[int]]:
    faces = [f.vertices for f in problem.structure.faces]
    return problem.num_vertices, faces, problem.face_targets()


def count_raw(problem: MagicProblem, prune: bool = True, backend: str | None = None) -> int:
    """All magic labelings, no symmetry reduction."""
    V, faces, targets = _problem_arrays(problem)
    return _backend.get_search(backend, V)(V, faces, targets, (), prune=prune).count


def canonicalize(labels: Sequence[int], group: SymmetryGroup) -> tuple[int, ...]:
    """Lexicographically smallest image of ``labels`` under ``group``."""
    return min(act(g, labels) for g in group)


def make_shards(problem: MagicProblem, shard_depth: int, pin_vertex: int = 0, prune: bool = True,
                backend: str | None = None) -> list[SearchShard]:
    """Feasible assignment prefixes ``shard_depth`` decisions below the pin."""
    V, faces, targets = _problem_arrays(problem)
    if not 0 <= shard_depth <= V - 1:
        raise ValueError(f"shard depth must lie in [0, {V - 1}], got {shard_depth}")
    search = _backend.get_search(backend, V)
    out = search(V, faces, targets, [(pin_vertex, 1)], prune=prune, stop_depth=1 + shard_depth)
    return [SearchShard(i, tuple(tuple(p) for p in prefix)) for i, prefix in enumerate(out.items)]


def _check_group(problem: MagicProblem, group: SymmetryGroup, pin_vertex: int) -> None:
    if group.degree != problem.num_vertices:
        raise SolverError(f"group degree {group.degree} != {problem.num_vertices} vertices")
    report = validate(problem.structure, group)
    if not report.ok:
        raise SolverError("group does not preserve the solid: " + report.violations[0])
    if not 0 <= pin_vertex < group.degree:
        raise SolverError(f"pin vertex {pin_vertex} out of range")
    if not group.is_transitive():
        raise SolverError("group is not transitive on vertices; pinning label 1 would lose orbits")


_WORKER: dict = {}


def _worker_init(V, faces, targets, prune, stab, collect, backend_name):
    _WORKER.update(V=V, faces=faces, targets=targets, prune=prune, stab=stab, collect=collect,
                   search=_backend.get_search(backend_name, V))


def _worker_run(shard_id: int, prefix):
    w = _WORKER
    out = w["search"](w["V"], w["faces"], w["targets"], prefix, prune=w["prune"], collect=w["collect"],
                      stabilizer_inverses=w["stab"])
    return shard_id, out


def enumerate_solutions(
    problem: MagicProblem,
    group: SymmetryGroup,
    *,
    count_only: bool = True,
    shard_depth: int = 2,
    workers: int = 1,
    checkpoint_path: str | os.PathLike | None = None,
    solution_sink: Callable[[Labeling], None] | None = None,
    limit: int | None = None,
    pin_vertex: int = 0,
    prune: bool = True,
    backend: str | None = None,
    progress: Callable[[int, int], None] | None = None,
    stop_after: int | None = None,
) -> EnumerationResult:
    """Count (and optionally emit) magic labelings up to ``group``.

    Shards run independently, so the counts do not depend on ``workers``
    or ``shard_depth``. With ``checkpoint_path`` the shard ledger is saved
    after every finished shard and an existing file is resumed from.
    ``stop_after`` ends the call after that many shards (resume later).
    ``limit`` caps emitted solutions and forces sequential execution.
    """
    started = time.perf_counter()
    _check_group(problem, group, pin_vertex)
    V, faces, targets = _problem_arrays(problem)
    backend_name = backend or _backend.BACKEND
    if backend_name == "cython" and V > _backend.COMPILED_MAX_VERTICES:
        backend_name = "python"
    search = _backend.get_search(backend_name, V)
    stabilizer = group.stabilizer(pin_vertex)
    stab_inv = [inverse(g) for g in stabilizer.elements if g != stabilizer.identity]
    collect = not count_only and solution_sink is not None
    fingerprint = problem.fingerprint(group, pin_vertex=pin_vertex)

    shards = make_shards(problem, shard_depth, pin_vertex, prune, backend_name)
    if checkpoint_path is not None and os.path.exists(checkpoint_path):
        ckpt = checkpoint_load(checkpoint_path, fingerprint, shard_depth)
        if [s.prefix for s in ckpt.shards] != [s.prefix for s in shards]:
            raise CheckpointError("checkpoint shard list does not match this search")
        if collect and any(s.status == DONE for s in ckpt.shards):
            log.warning("resuming: solutions from already finished shards are not re-emitted")
        shards = ckpt.shards
    else:
        ckpt = Checkpoint(fingerprint, shard_depth, shards)
    ckpt.shards = shards

    def save() -> None:
        if checkpoint_path is not None:
            checkpoint_save(ckpt, checkpoint_path)

    save()
    pending = [s for s in shards if s.status != DONE]
    if stop_after is not None:
        pending = pending[:stop_after]
    done = sum(1 for s in shards if s.status == DONE)
    emitted = 0
    stopped_early = False
    partial = (0, 0, 0)  # canonical, pinned, nodes of a shard cut short by ``limit``

    def finish(shard: SearchShard, out) -> None:
        nonlocal done, emitted
        if collect:
            for labels in out.items:
                if limit is not None and emitted >= limit:
                    break
                try:
                    solution_sink(Labeling(labels))
                except Exception as exc:
                    raise SolverError(f"solution sink failed: {exc}") from exc
                emitted += 1
        shard.count, shard.pinned, shard.nodes = out.canonical, out.count, out.nodes
        shard.status = DONE
        done += 1
        save()
        if progress is not None:
            progress(done, len(shards))

    if workers <= 1 or limit is not None or len(pending) <= 1:
        for shard in pending:
            remaining = -1 if limit is None else max(limit - sum(s.count for s in shards if s.status == DONE), 0)
            if remaining == 0:
                stopped_early = True
                break
            out = search(V, faces, targets, shard.prefix, prune=prune, collect=collect, limit=remaining,
                         stabilizer_inverses=stab_inv)
            if not out.complete:
                stopped_early = True
                partial = (out.canonical, out.count, out.nodes)
                if collect:
                    for labels in out.items[: remaining]:
                        solution_sink(Labeling(labels))
                        emitted += 1
                break
            finish(shard, out)
    else:
        buffered: dict[int, object] = {}
        order = [s.id for s in pending]
        by_id = {s.id: s for s in pending}
        cursor = 0
        with ProcessPoolExecutor(max_workers=workers, initializer=_worker_init,
                                 initargs=(V, faces, targets, prune, stab_inv, collect, backend_name)) as pool:
            futures = [pool.submit(_worker_run, s.id, s.prefix) for s in pending]
            for fut in as_completed(futures):
                shard_id, out = fut.result()
                buffered[shard_id] = out
                # finish in shard order so emitted solutions are deterministic
                while cursor < len(order) and order[cursor] in buffered:
                    sid = order[cursor]
                    finish(by_id[sid], buffered.pop(sid))
                    cursor += 1

    complete = all(s.status == DONE for s in shards) and not stopped_early
    orbit = sum(s.count for s in shards if s.status == DONE) + partial[0]
    pinned = sum(s.pinned for s in shards if s.status == DONE) + partial[1]
    if complete and pinned != orbit * stabilizer.order:
        raise SolverError(f"pinned count {pinned} != {orbit} orbits x stabilizer {stabilizer.order}")
    return EnumerationResult(
        orbit_count=orbit,
        pinned_count=pinned,
        nodes_explored=sum(s.nodes for s in shards) + partial[2],
        shards=shards,
        elapsed=time.perf_counter() - started,
        group_order=group.order,
        stabilizer_order=stabilizer.order,
        num_vertices=V,
        complete=complete,
        backend=backend_name,
        solutions_emitted=emitted,
        pin_vertex=pin_vertex,
    )


def map_prefix(prefix: Sequence[tuple[int, int]], perm: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Carry an assignment prefix along a vertex permutation."""
    return tuple((perm[v], lab) for v, lab in prefix)


def count_prefix(problem: MagicProblem, prefix: Sequence[tuple[int, int]], prune: bool = True,
                 backend: str | None = None) -> int:
    """Number of magic labelings extending ``prefix``."""
    V, faces, targets = _problem_arrays(problem)
    return _backend.get_search(backend, V)(V, faces, targets, list(prefix), prune=prune).count
