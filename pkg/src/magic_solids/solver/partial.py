"""Incremental search state shared by the pure-Python search and the tests."""
from __future__ import annotations

from typing import Sequence


def _low_bits(bits: int, count: int) -> int:
    total = 0
    for _ in range(count):
        low = bits & -bits
        total += low.bit_length() - 1
        bits ^= low
    return total


def _high_bits(bits: int, count: int) -> int:
    total = 0
    for _ in range(count):
        top = bits.bit_length() - 1
        total += top
        bits ^= 1 << top
    return total


class PartialLabeling:
    """Labels assigned so far plus per-face running sums and open-slot counts.

    ``unused`` is a bitset: bit ``l`` is set while label ``l`` is free.
    """

    def __init__(self, num_vertices: int, faces: Sequence[Sequence[int]], targets: Sequence[int]):
        self.num_vertices = num_vertices
        self.faces = [tuple(f) for f in faces]
        self.targets = list(targets)
        self.vertex_faces: list[list[int]] = [[] for _ in range(num_vertices)]
        for i, f in enumerate(self.faces):
            for v in f:
                self.vertex_faces[v].append(i)
        self.labels = [0] * num_vertices
        self.face_sum = [0] * len(self.faces)
        self.face_open = [len(f) for f in self.faces]
        self.unused = ((1 << (num_vertices + 1)) - 1) ^ 1
        self.assigned = 0

    def is_free(self, label: int) -> bool:
        return 1 <= label <= self.num_vertices and bool(self.unused >> label & 1)

    def assign(self, vertex: int, label: int) -> None:
        if self.labels[vertex]:
            raise ValueError(f"vertex {vertex} already labeled")
        if not self.is_free(label):
            raise ValueError(f"label {label} unavailable")
        self.labels[vertex] = label
        self.unused ^= 1 << label
        self.assigned += 1
        for g in self.vertex_faces[vertex]:
            self.face_sum[g] += label
            self.face_open[g] -= 1

    def unassign(self, vertex: int) -> None:
        label = self.labels[vertex]
        self.labels[vertex] = 0
        self.unused |= 1 << label
        self.assigned -= 1
        for g in self.vertex_faces[vertex]:
            self.face_sum[g] -= label
            self.face_open[g] += 1

    def recomputed_sums(self) -> list[int]:
        return [sum(self.labels[v] for v in f) for f in self.faces]

    def face_ok(self, face: int, prune: bool = True) -> bool:
        """Can ``face`` still reach its target?"""
        open_slots = self.face_open[face]
        need = self.targets[face] - self.face_sum[face]
        if open_slots == 0:
            return need == 0
        if not prune:
            return True
        if open_slots == 1:
            return self.is_free(need)
        lo, hi = face_bounds(self, face)
        return lo <= self.targets[face] <= hi

    def label_window(self, vertex: int) -> tuple[int, int]:
        """Range of labels for an unlabeled ``vertex`` that keeps each of its
        faces reachable with the other unused labels (a necessary condition)."""
        lo, hi = 1, self.num_vertices
        for g in self.vertex_faces[vertex]:
            rest = self.face_open[g] - 1
            need = self.targets[g] - self.face_sum[g]
            lo = max(lo, need - _high_bits(self.unused, rest))
            hi = min(hi, need - _low_bits(self.unused, rest))
        return lo, hi


def face_bounds(partial: PartialLabeling, face: int) -> tuple[int, int]:
    """Smallest and largest sums ``face`` can still reach with unused labels."""
    open_slots = partial.face_open[face]
    s = partial.face_sum[face]
    return s + _low_bits(partial.unused, open_slots), s + _high_bits(partial.unused, open_slots)
