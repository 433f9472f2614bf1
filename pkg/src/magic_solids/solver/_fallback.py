"""Pure-Python search kernel; same contract as the compiled ``_kernel``."""
from __future__ import annotations

from typing import Sequence

from .partial import PartialLabeling
from .outcome import SearchOutcome


class _Stop(Exception):
    pass


def search(
    num_vertices: int,
    faces: Sequence[Sequence[int]],
    targets: Sequence[int],
    prefix: Sequence[tuple[int, int]] = (),
    prune: bool = True,
    stop_depth: int = -1,
    collect: bool = False,
    limit: int = -1,
    stabilizer_inverses: Sequence[Sequence[int]] = (),
    check_state: bool = False,
) -> SearchOutcome:
    state = PartialLabeling(num_vertices, faces, targets)
    sizes = [len(f) for f in state.faces]
    order = list(range(len(state.faces)))
    stab = [tuple(g) for g in stabilizer_inverses]
    stats = {"count": 0, "canonical": 0, "nodes": 0}
    items: list = []
    trail: list[tuple[int, int]] = []

    def place(v: int, label: int) -> bool:
        state.assign(v, label)
        trail.append((v, label))
        if check_state and state.recomputed_sums() != state.face_sum:
            raise AssertionError("running face sums diverged")
        return all(state.face_ok(g, prune) for g in state.vertex_faces[v])

    def remove() -> None:
        v, _ = trail.pop()
        state.unassign(v)

    def is_canonical(labels: list[int]) -> bool:
        for ginv in stab:
            for w in range(num_vertices):
                a, b = labels[w], labels[ginv[w]]
                if a != b:
                    if b < a:
                        return False
                    break
        return True

    def leaf() -> None:
        stats["count"] += 1
        if is_canonical(state.labels):
            stats["canonical"] += 1
            if collect:
                items.append(tuple(state.labels))
            if limit >= 0 and stats["canonical"] >= limit:
                raise _Stop

    def descend() -> None:
        if state.assigned == stop_depth:
            items.append(tuple(trail))
            return
        if state.assigned == num_vertices:
            leaf()
            return
        best = min((f for f in order if state.face_open[f]),
                   key=lambda f: (state.face_open[f], state.face_open[f] - sizes[f], f))
        v = min(w for w in state.faces[best] if not state.labels[w])
        if state.face_open[best] == 1:
            candidates = [state.targets[best] - state.face_sum[best]]
            candidates = [c for c in candidates if state.is_free(c)]
        else:
            lo, hi = state.label_window(v) if prune else (1, num_vertices)
            candidates = [lab for lab in range(lo, hi + 1) if state.unused >> lab & 1]
        for lab in candidates:
            stats["nodes"] += 1
            if place(v, lab):
                descend()
            remove()

    complete = True
    try:
        for v, lab in prefix:
            if state.labels[v] or not state.is_free(lab) or not place(v, lab):
                return SearchOutcome(0, 0, stats["nodes"], [], True)
        descend()
    except _Stop:
        complete = False
    return SearchOutcome(stats["count"], stats["canonical"], stats["nodes"], items, complete)
