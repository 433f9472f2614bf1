"""Flat SVG nets of labeled solids.

Each supported solid has a fixed face tree: the root face is drawn as a
regular polygon and every other face is unfolded across the edge it shares
with its parent. Vertices are cut apart by the unfolding, so a label is
printed once in every face corner it occupies.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .incidence import IncidenceStructure

Point = tuple[float, float]

# (face, parent) pairs in placement order; the first entry is the root
_CUBE_TREE = [(4, None), (0, 4), (1, 4), (2, 4), (3, 4), (5, 2)]
_TRUNCATED_OCTAHEDRON_TREE = [
    (1, None), (12, 1), (8, 1), (3, 8), (2, 12), (5, 12), (10, 8), (11, 2), (9, 2), (6, 12),
    (13, 3), (4, 13), (7, 13), (0, 11),
]


def _prism_tree(n: int) -> list[tuple[int, int | None]]:
    mid = 2 + n // 2
    tree: list[tuple[int, int | None]] = [(mid, None)]
    for i in range(mid + 1, 2 + n):
        tree.append((i, i - 1))
    for i in range(mid - 1, 1, -1):
        tree.append((i, i + 1))
    tree += [(0, mid), (1, mid)]
    return tree


def face_tree(structure: IncidenceStructure) -> list[tuple[int, int | None]]:
    if structure.name == "cube":
        return _CUBE_TREE
    if structure.name == "truncated-octahedron":
        return _TRUNCATED_OCTAHEDRON_TREE
    if structure.name.startswith("prism-") and structure.parameter:
        return _prism_tree(structure.parameter)
    raise ValueError(f"no net template for {structure.name}")


def _regular(m: int) -> tuple[float, float]:
    """Circumradius and apothem of a unit-edge regular m-gon."""
    return 1 / (2 * math.sin(math.pi / m)), 1 / (2 * math.tan(math.pi / m))


def _centroid(points: list[Point]) -> Point:
    return sum(p[0] for p in points) / len(points), sum(p[1] for p in points) / len(points)


def unfold(structure: IncidenceStructure, tree=None) -> dict[int, list[Point]]:
    """2D corner positions per face, aligned with ``face.vertices``."""
    tree = tree or face_tree(structure)
    faces = structure.faces
    placed: dict[int, list[Point]] = {}
    for face, parent in tree:
        vs = faces[face].vertices
        m = len(vs)
        radius, apothem = _regular(m)
        if parent is None:
            placed[face] = [(radius * math.cos(2 * math.pi * k / m), radius * math.sin(2 * math.pi * k / m))
                            for k in range(m)]
            continue
        pvs = faces[parent].vertices
        shared = [v for v in vs if v in pvs]
        if len(shared) != 2:
            raise ValueError(f"faces {face} and {parent} do not share an edge")
        a, b = shared
        pa, pb = (placed[parent][pvs.index(v)] for v in (a, b))
        mid = ((pa[0] + pb[0]) / 2, (pa[1] + pb[1]) / 2)
        nx, ny = -(pb[1] - pa[1]), pb[0] - pa[0]
        pc = _centroid(placed[parent])
        if (pc[0] - mid[0]) * nx + (pc[1] - mid[1]) * ny > 0:
            nx, ny = -nx, -ny
        center = (mid[0] + nx * apothem, mid[1] + ny * apothem)
        ang_a = math.atan2(pa[1] - center[1], pa[0] - center[0])
        ang_b = math.atan2(pb[1] - center[1], pb[0] - center[0])
        step = (ang_b - ang_a + math.pi) % (2 * math.pi) - math.pi
        ia = vs.index(a)
        direction = 1 if vs[(ia + 1) % m] == b else -1
        corners: list[Point] = [(0.0, 0.0)] * m
        for k in range(m):
            ang = ang_a + k * step
            corners[(ia + direction * k) % m] = (center[0] + radius * math.cos(ang),
                                                 center[1] + radius * math.sin(ang))
        placed[face] = corners
    if len(placed) != len(faces):
        raise ValueError("face tree does not cover every face")
    return placed


def render_svg(structure: IncidenceStructure, labels, scale: float = 60.0, title: str | None = None) -> str:
    net = unfold(structure)
    xs = [p[0] for pts in net.values() for p in pts]
    ys = [p[1] for pts in net.values() for p in pts]
    pad = 0.6
    x0, y0 = min(xs) - pad, min(ys) - pad
    width, height = (max(xs) - x0 + pad) * scale, (max(ys) - y0 + pad) * scale

    def tr(p: Point) -> Point:
        return (p[0] - x0) * scale, (p[1] - y0) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.1f} {height:.1f}">',
        f"<title>{escape(title or structure.name)}</title>",
    ]
    font = 0.22 * scale
    for i in sorted(net):
        face = structure.faces[i]
        corners = [tr(p) for p in net[i]]
        cx, cy = _centroid(corners)
        fill = "#f4e3b5" if face.class_id in ("square", "rectangle") else "#cfe0f1"
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in corners)
        out.append(f'<g class="face" data-face="{i}" data-class="{escape(face.class_id)}">')
        out.append(f'<polygon points="{pts}" fill="{fill}" stroke="#333" stroke-width="1.5"/>')
        for v, (x, y) in zip(face.vertices, corners):
            tx, ty = x + 0.28 * (cx - x), y + 0.28 * (cy - y)
            out.append(f'<text x="{tx:.2f}" y="{ty:.2f}" font-size="{font:.1f}" text-anchor="middle" '
                       f'dominant-baseline="middle" data-vertex="{v}">{labels[v]}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
