from __future__ import annotations

import itertools
import json
from fractions import Fraction

import pytest

from magic_solids import incidence, permutohedron
from magic_solids.incidence import (Face, GroupClosureError, IncidenceStructure, SymmetryGroup, act, compose,
                                    group_closure, inverse, validate)


def _euler(structure: IncidenceStructure) -> int:
    return structure.num_vertices - len(structure.skeleton_edges()) + len(structure.faces)


@pytest.mark.parametrize("kind,V,E,F", [
    ("tetrahedron", 4, 6, 4),
    ("cube", 8, 12, 6),
    ("octahedron", 6, 12, 8),
    ("dodecahedron", 20, 30, 12),
    ("icosahedron", 12, 30, 20),
    ("truncated-octahedron", 24, 36, 14),
])
def test_builder_counts(kind, V, E, F):
    s, _ = incidence.build_solid(kind)
    assert s.num_vertices == V
    assert len(s.skeleton_edges()) == E
    assert len(s.faces) == F
    assert _euler(s) == 2
    assert validate(s).ok


@pytest.mark.parametrize("n", [3, 4, 5, 8, 13])
def test_prism_counts(n):
    s = incidence.prism(n)
    assert s.num_vertices == 2 * n
    assert len(s.faces_of_class("basis")) == 2
    assert len(s.faces_of_class("rectangle")) == n
    assert _euler(s) == 2
    rep = validate(s, incidence.prism_rotations(n))
    assert rep.ok
    assert rep.regular_membership("basis") == 1
    assert rep.regular_membership("rectangle") == 2


def test_prism_too_small():
    with pytest.raises(ValueError):
        incidence.prism(2)


def test_truncated_octahedron_membership():
    s = incidence.truncated_octahedron()
    rep = validate(s)
    assert rep.regular_membership("square") == 1
    assert rep.regular_membership("hexagon") == 2
    assert [len(s.faces_of_class(c)) for c in ("square", "hexagon")] == [6, 8]


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def test_truncated_octahedron_faces_are_planar_regular_polygons():
    # geometric oracle: the vertices really are the permutation vectors of 1234
    s = incidence.truncated_octahedron()
    pts = permutohedron.vertices(3)
    for face in s.faces:
        p = [pts[v] for v in face.vertices]
        # consecutive corners at squared distance 2, the skeleton edge length
        assert all(_dot(d, d) == 2 for d in (_sub(b, a) for a, b in zip(p, p[1:] + p[:1])))
        # planar: the corner offsets span a 2-dimensional space
        assert _rank([list(_sub(q, p[0])) for q in p[1:]]) == 2


def _rank(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    while rank < len(m) and col < len(m[0]):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def test_face_walks_follow_skeleton():
    s = incidence.truncated_octahedron()
    edges = set(permutohedron.skeleton(3))
    for face in s.faces:
        vs = face.vertices
        for a, b in zip(vs, vs[1:] + vs[:1]):
            assert (min(a, b), max(a, b)) in edges
    assert sorted(s.skeleton_edges()) == sorted(edges)


def test_cube_faces_are_planar():
    s = incidence.cube()
    for face in s.faces:
        coords = [((v & 1), (v >> 1) & 1, (v >> 2) & 1) for v in face.vertices]
        assert any(len({c[axis] for c in coords}) == 1 for axis in range(3))


@pytest.mark.parametrize("factory,order,kind", [
    (incidence.cube_rotations, 24, "rotation"),
    (incidence.cube_full_group, 48, "full"),
    (incidence.truncated_octahedron_rotations, 24, "rotation"),
    (incidence.truncated_octahedron_full_group, 48, "full"),
])
def test_group_orders(factory, order, kind):
    g = factory()
    assert g.order == order
    assert g.kind == kind
    assert g.is_closed()
    assert g.is_transitive()


def test_prism_group_orders():
    for n in (3, 4, 6):
        assert incidence.prism_rotations(n).order == 2 * n
        assert incidence.prism_full_group(n).order == 4 * n


@pytest.mark.parametrize("factory", [incidence.cube_rotations, incidence.truncated_octahedron_rotations])
def test_rotations_preserve_faces(factory):
    s = incidence.cube() if factory is incidence.cube_rotations else incidence.truncated_octahedron()
    assert validate(s, factory()).ok


def test_truncated_octahedron_simply_transitive():
    g = incidence.truncated_octahedron_rotations()
    for u, w in itertools.product(range(24), repeat=2):
        assert len(g.mapping(u, w)) == 1
    assert g.stabilizer(0).order == 1
    assert incidence.truncated_octahedron_full_group().stabilizer(0).order == 2


def test_cube_stabilizer():
    g = incidence.cube_rotations()
    for v in range(8):
        assert g.stabilizer(v).order == 3
        assert len(g.orbit(v)) == 8


def test_validate_detects_non_symmetry():
    s = incidence.truncated_octahedron()
    rot = incidence.truncated_octahedron_rotations()
    swap = list(range(24))
    swap[0], swap[1] = 1, 0
    bad = SymmetryGroup(24, list(rot.elements) + [tuple(swap)])
    rep = validate(s, bad)
    assert not rep.ok
    assert any(v.startswith("face not preserved") for v in rep.violations)
    assert any("not closed" in v for v in rep.violations)


def test_validate_structural_errors():
    s = IncidenceStructure("broken", 3, (Face("tri", (0, 1, 1)), Face("odd", (0, 5, 2))),
                           (incidence.FaceClass("tri", "triangle"),))
    rep = validate(s)
    joined = "\n".join(rep.violations)
    assert "repeated vertex" in joined
    assert "unknown class" in joined
    assert "out of range" in joined


def test_group_closure_bound():
    gens = incidence.cube_rotation_generators()
    assert group_closure(gens).order == 24
    with pytest.raises(GroupClosureError):
        group_closure(gens, bound=10)
    with pytest.raises(ValueError):
        group_closure([(0, 0, 1)])


def test_permutation_helpers():
    a, b = (1, 2, 0), (0, 2, 1)
    assert compose(a, inverse(a)) == (0, 1, 2)
    # act moves the label at v to a[v]
    assert act(a, (10, 20, 30)) == (30, 10, 20)
    assert act(compose(a, b), (1, 2, 3)) in {act(a, act(b, (1, 2, 3))), act(b, act(a, (1, 2, 3)))}


def test_serialization_roundtrip_deterministic():
    s = incidence.truncated_octahedron()
    doc = s.to_dict()
    assert IncidenceStructure.from_dict(json.loads(s.to_json())).to_json() == s.to_json()
    assert s.to_json() == incidence.truncated_octahedron().to_json()
    assert doc["num_vertices"] == 24
    g = incidence.cube_rotations()
    assert SymmetryGroup.from_dict(json.loads(g.to_json())) == g


def test_build_solid_aliases_and_errors():
    a, ga = incidence.build_solid("permutohedron")
    b, gb = incidence.build_solid("truncated-octahedron")
    assert a.to_json() == b.to_json() and ga == gb
    with pytest.raises(ValueError):
        incidence.build_solid("prism")
    with pytest.raises(ValueError):
        incidence.build_solid("rhombicuboctahedron")
    _, trivial = incidence.build_solid("dodecahedron")
    assert trivial.order == 1 and trivial.kind == "trivial"
    assert incidence.full_symmetry_group("icosahedron") is None
