"""Combinatorial solids: vertices, classed faces and vertex symmetry groups.

A solid is an :class:`IncidenceStructure`: ``num_vertices`` anonymous
vertices ``0..V-1`` and an ordered list of faces, each a cyclic list of
vertex indices tagged with a face class (``"square"``, ``"hexagon"``, ...).
Symmetries are explicit vertex permutations in image form, ``perm[v]`` being
the image of ``v``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import permutohedron

Perm = tuple[int, ...]

SOLID_KINDS = (
    "tetrahedron",
    "cube",
    "octahedron",
    "dodecahedron",
    "icosahedron",
    "prism",
    "truncated-octahedron",
)


class GroupClosureError(ValueError):
    """Raised when a generated group outgrows its declared bound."""


@dataclass(frozen=True)
class FaceClass:
    id: str
    name: str


@dataclass(frozen=True)
class Face:
    class_id: str
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class IncidenceStructure:
    name: str
    num_vertices: int
    faces: tuple[Face, ...]
    classes: tuple[FaceClass, ...]
    parameter: int | None = None

    @property
    def class_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.classes)

    def faces_of_class(self, class_id: str) -> list[int]:
        return [i for i, f in enumerate(self.faces) if f.class_id == class_id]

    def vertex_faces(self) -> list[list[int]]:
        """Face indices incident to each vertex, ascending."""
        inc: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for i, f in enumerate(self.faces):
            for v in f.vertices:
                inc[v].append(i)
        return inc

    def skeleton_edges(self) -> list[tuple[int, int]]:
        """Edges running along face boundaries, as sorted pairs."""
        edges = set()
        for f in self.faces:
            vs = f.vertices
            for a, b in zip(vs, vs[1:] + vs[:1]):
                edges.add((min(a, b), max(a, b)))
        return sorted(edges)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "num_vertices": self.num_vertices,
            "classes": [{"id": c.id, "name": c.name} for c in self.classes],
            "faces": [{"class": f.class_id, "vertices": list(f.vertices)} for f in self.faces],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: dict, parameter: int | None = None) -> IncidenceStructure:
        return cls(
            name=doc["name"],
            num_vertices=int(doc["num_vertices"]),
            faces=tuple(Face(f["class"], tuple(int(v) for v in f["vertices"])) for f in doc["faces"]),
            classes=tuple(FaceClass(c["id"], c["name"]) for c in doc["classes"]),
            parameter=parameter,
        )


def compose(a: Sequence[int], b: Sequence[int]) -> Perm:
    """Return ``a∘b`` (apply ``b`` first)."""
    return tuple(a[x] for x in b)


def inverse(p: Sequence[int]) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def act(perm: Sequence[int], labels: Sequence[int]) -> tuple[int, ...]:
    """Move labels along ``perm``: the label at ``v`` ends up at ``perm[v]``."""
    out = [0] * len(labels)
    for v, lab in enumerate(labels):
        out[perm[v]] = lab
    return tuple(out)


@dataclass(frozen=True)
class SymmetryGroup:
    degree: int
    elements: tuple[Perm, ...]
    kind: str = "rotation"
    _index: frozenset = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(sorted(tuple(e) for e in self.elements)))
        object.__setattr__(self, "_index", frozenset(self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return tuple(range(self.degree))

    def __contains__(self, perm: Sequence[int]) -> bool:
        return tuple(perm) in self._index

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def stabilizer(self, vertex: int) -> SymmetryGroup:
        return SymmetryGroup(self.degree, [g for g in self.elements if g[vertex] == vertex], self.kind)

    def orbit(self, vertex: int) -> set[int]:
        return {g[vertex] for g in self.elements}

    def is_transitive(self) -> bool:
        return self.degree == 0 or len(self.orbit(0)) == self.degree

    def mapping(self, source: int, target: int) -> list[Perm]:
        """All elements sending ``source`` to ``target``."""
        return [g for g in self.elements if g[source] == target]

    def is_closed(self) -> bool:
        if self.identity not in self:
            return False
        for g in self.elements:
            if inverse(g) not in self:
                return False
            for h in self.elements:
                if compose(g, h) not in self:
                    return False
        return True

    def to_dict(self) -> dict:
        return {"degree": self.degree, "kind": self.kind, "elements": [list(e) for e in self.elements]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: dict) -> SymmetryGroup:
        return cls(int(doc["degree"]), [tuple(e) for e in doc["elements"]], doc.get("kind", "rotation"))

    @classmethod
    def trivial(cls, degree: int) -> SymmetryGroup:
        return cls(degree, [tuple(range(degree))], "trivial")


def group_closure(generators: Iterable[Sequence[int]], bound: int = 100_000,
                  degree: int | None = None, kind: str = "rotation") -> SymmetryGroup:
    """Enumerate the group generated by ``generators``.

    Raises :class:`GroupClosureError` once more than ``bound`` elements
    have been produced, which in practice means the generators are wrong.
    """
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise ValueError("degree is required when no generators are given")
        degree = len(gens[0])
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise ValueError(f"not a permutation of degree {degree}: {g}")
    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = compose(g, s)
                if h not in seen:
                    seen.add(h)
                    if len(seen) > bound:
                        raise GroupClosureError(f"closure exceeds bound {bound}")
                    nxt.append(h)
        frontier = nxt
    return SymmetryGroup(degree, seen, kind)


@dataclass
class ValidationReport:
    violations: list[str]
    membership: dict[str, list[int]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def regular_membership(self, class_id: str) -> int | None:
        """Common number of ``class_id`` faces per vertex, or None if irregular."""
        counts = set(self.membership.get(class_id, []))
        return counts.pop() if len(counts) == 1 else None


def validate(structure: IncidenceStructure, group: SymmetryGroup | None = None) -> ValidationReport:
    violations: list[str] = []
    V = structure.num_vertices
    class_ids = set(structure.class_ids)
    membership = {c: [0] * V for c in structure.class_ids}
    if len(class_ids) != len(structure.classes):
        violations.append("duplicate class id")
    for i, f in enumerate(structure.faces):
        if f.class_id not in class_ids:
            violations.append(f"face {i}: unknown class {f.class_id!r}")
        if len(set(f.vertices)) != len(f.vertices):
            violations.append(f"face {i}: repeated vertex")
        for v in f.vertices:
            if not 0 <= v < V:
                violations.append(f"face {i}: vertex {v} out of range")
            elif f.class_id in membership:
                membership[f.class_id][v] += 1

    if group is not None:
        if group.degree != V:
            violations.append(f"group degree {group.degree} != {V} vertices")
        else:
            if not group.is_closed():
                violations.append("group not closed under composition and inverse")
            face_sets = {(f.class_id, frozenset(f.vertices)) for f in structure.faces}
            for g in group.elements:
                for i, f in enumerate(structure.faces):
                    if (f.class_id, frozenset(g[v] for v in f.vertices)) not in face_sets:
                        violations.append(f"face not preserved: face {i} under {list(g)}")
                        break
    return ValidationReport(violations, membership)


def cyclic_order(vertex_set: Iterable[int], adjacency: dict[int, set[int]]) -> tuple[int, ...]:
    """Boundary walk of a face: lowest vertex first, then its lower neighbour."""
    vs = set(vertex_set)
    start = min(vs)
    order = [start, min(adjacency[start] & vs)]
    while len(order) < len(vs):
        nxt = [w for w in adjacency[order[-1]] & vs if w != order[-2]]
        if len(nxt) != 1:
            raise ValueError(f"face {sorted(vs)} is not a cycle in the skeleton")
        order.append(nxt[0])
    if order[0] not in adjacency[order[-1]]:
        raise ValueError(f"face {sorted(vs)} does not close up")
    return tuple(order)


def _adjacency(edges: Iterable[tuple[int, int]], n: int) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


# Face tables; cyclic order already canonical.
_ICOSAHEDRON = (
    (0, 1, 2), (0, 1, 5), (0, 2, 3), (0, 3, 4), (0, 4, 5), (1, 2, 6), (1, 5, 10),
    (1, 6, 10), (2, 3, 7), (2, 6, 7), (3, 4, 8), (3, 7, 8), (4, 5, 9), (4, 8, 9),
    (5, 9, 10), (6, 7, 11), (6, 10, 11), (7, 8, 11), (8, 9, 11), (9, 10, 11),
)
_DODECAHEDRON = (
    (0, 1, 2, 3, 4), (0, 1, 11, 15, 10), (0, 4, 14, 19, 10), (1, 2, 12, 16, 11),
    (2, 3, 13, 17, 12), (3, 4, 14, 18, 13), (5, 6, 7, 8, 9), (5, 6, 16, 11, 15),
    (5, 9, 19, 10, 15), (6, 7, 17, 12, 16), (7, 8, 18, 13, 17), (8, 9, 19, 14, 18),
)


def _single_class(name: str, V: int, faces, cls: str) -> IncidenceStructure:
    return IncidenceStructure(name, V, tuple(Face(cls, tuple(f)) for f in faces), (FaceClass(cls, cls),))


def tetrahedron() -> IncidenceStructure:
    return _single_class("tetrahedron", 4, itertools.combinations(range(4), 3), "triangle")


def octahedron() -> IncidenceStructure:
    # vertex 2i is +e_i, 2i+1 is -e_i; a face picks one vertex per axis
    faces = [tuple(sorted((sx, 2 + sy, 4 + sz))) for sx in (0, 1) for sy in (0, 1) for sz in (0, 1)]
    return _single_class("octahedron", 6, faces, "triangle")


def icosahedron() -> IncidenceStructure:
    return _single_class("icosahedron", 12, _ICOSAHEDRON, "triangle")


def dodecahedron() -> IncidenceStructure:
    return _single_class("dodecahedron", 20, _DODECAHEDRON, "pentagon")


def _cube_index(x: int, y: int, z: int) -> int:
    return x + 2 * y + 4 * z


def _cube_coords(v: int) -> tuple[int, int, int]:
    return v & 1, (v >> 1) & 1, (v >> 2) & 1


def cube() -> IncidenceStructure:
    edges = [(a, a ^ bit) for a in range(8) for bit in (1, 2, 4) if a < a ^ bit]
    adj = _adjacency(edges, 8)
    faces = []
    for axis in range(3):
        for side in (0, 1):
            vs = [v for v in range(8) if _cube_coords(v)[axis] == side]
            faces.append(Face("square", cyclic_order(vs, adj)))
    return IncidenceStructure("cube", 8, tuple(faces), (FaceClass("square", "square"),))


def cube_rotation_generators() -> list[Perm]:
    """Quarter turns about the z and x axes."""
    def turn_z(v):
        x, y, z = _cube_coords(v)
        return _cube_index(1 - y, x, z)

    def turn_x(v):
        x, y, z = _cube_coords(v)
        return _cube_index(x, 1 - z, y)

    return [tuple(turn_z(v) for v in range(8)), tuple(turn_x(v) for v in range(8))]


def cube_rotations() -> SymmetryGroup:
    return group_closure(cube_rotation_generators(), bound=24)


def cube_full_group() -> SymmetryGroup:
    central = tuple(7 - v for v in range(8))
    return group_closure(cube_rotation_generators() + [central], bound=48, kind="full")


def prism(n: int) -> IncidenceStructure:
    """Top ring ``0..n-1``, bottom ring ``n..2n-1``, ``n+i`` below ``i``."""
    if n < 3:
        raise ValueError(f"prism needs n >= 3, got {n}")
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(n + i, n + (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)]
    adj = _adjacency(edges, 2 * n)
    faces = [Face("basis", cyclic_order(range(n), adj)), Face("basis", cyclic_order(range(n, 2 * n), adj))]
    for i in range(n):
        j = (i + 1) % n
        faces.append(Face("rectangle", cyclic_order((i, j, n + i, n + j), adj)))
    classes = (FaceClass("basis", f"basis ({n}-gon)"), FaceClass("rectangle", "rectangle"))
    return IncidenceStructure(f"prism-{n}", 2 * n, tuple(faces), classes, parameter=n)


def prism_rotations(n: int) -> SymmetryGroup:
    """Dihedral rotation group of order 2n."""
    turn = tuple([(i + 1) % n for i in range(n)] + [n + (i + 1) % n for i in range(n)])
    flip = tuple([n + (-i) % n for i in range(n)] + [(-i) % n for i in range(n)])
    return group_closure([turn, flip], bound=2 * n)


def prism_full_group(n: int) -> SymmetryGroup:
    swap = tuple([n + i for i in range(n)] + list(range(n)))
    return group_closure(list(prism_rotations(n).elements) + [swap], bound=4 * n, kind="full")


def truncated_octahedron() -> IncidenceStructure:
    """The 3-permutohedron; vertex ``i`` is the ``i``-th permutation of 1234."""
    verts = permutohedron.vertices(3)
    adj = _adjacency(permutohedron.skeleton(3), len(verts))
    squares, hexagons = [], []
    for facet in permutohedron.facets(3):
        face_vs = cyclic_order(facet.vertex_ids, adj)
        if len(facet.subset) == 2:
            squares.append(Face("square", face_vs))
        else:
            hexagons.append(Face("hexagon", face_vs))
    return IncidenceStructure(
        "truncated-octahedron", 24, tuple(squares + hexagons),
        (FaceClass("square", "square"), FaceClass("hexagon", "hexagon")),
    )


def _permutohedron_perm(position_perm: Sequence[int], complement: bool) -> Perm:
    verts = permutohedron.vertices(3)
    index = {v: i for i, v in enumerate(verts)}
    out = []
    for v in verts:
        w = [0] * 4
        for p, value in enumerate(v):
            w[position_perm[p]] = 5 - value if complement else value
        out.append(index[tuple(w)])
    return tuple(out)


def _sign(p: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1 if inversions % 2 else 1


def truncated_octahedron_rotations() -> SymmetryGroup:
    """Even coordinate permutations, and odd ones composed with ``v -> 5 - v``."""
    elements = [_permutohedron_perm(p, _sign(p) < 0) for p in itertools.permutations(range(4))]
    group = SymmetryGroup(24, elements, "rotation")
    if group.order != 24 or not group.is_closed():
        raise AssertionError("truncated octahedron rotations do not close to order 24")
    return group


def truncated_octahedron_full_group() -> SymmetryGroup:
    elements = [_permutohedron_perm(p, c) for p in itertools.permutations(range(4)) for c in (False, True)]
    group = SymmetryGroup(24, elements, "full")
    if group.order != 48 or not group.is_closed():
        raise AssertionError("truncated octahedron symmetries do not close to order 48")
    return group


def build_solid(kind: str, parameter: int | None = None) -> tuple[IncidenceStructure, SymmetryGroup]:
    """Build a solid and its rotation group (trivial where not needed)."""
    if kind == "prism":
        if parameter is None:
            raise ValueError("prism requires a size parameter n")
        return prism(parameter), prism_rotations(parameter)
    builders = {
        "tetrahedron": (tetrahedron, None),
        "cube": (cube, cube_rotations),
        "octahedron": (octahedron, None),
        "dodecahedron": (dodecahedron, None),
        "icosahedron": (icosahedron, None),
        "truncated-octahedron": (truncated_octahedron, truncated_octahedron_rotations),
        "permutohedron": (truncated_octahedron, truncated_octahedron_rotations),
    }
    if kind not in builders:
        raise ValueError(f"unknown solid kind {kind!r}")
    build, rotations = builders[kind]
    structure = build()
    group = rotations() if rotations else SymmetryGroup.trivial(structure.num_vertices)
    return structure, group


def full_symmetry_group(kind: str, parameter: int | None = None) -> SymmetryGroup | None:
    """Rotations plus reflections, where this package supplies them."""
    if kind == "cube":
        return cube_full_group()
    if kind == "prism" and parameter is not None:
        return prism_full_group(parameter)
    if kind in ("truncated-octahedron", "permutohedron"):
        return truncated_octahedron_full_group()
    return None

