from __future__ import annotations

import itertools

import pytest

from magic_solids import incidence
from magic_solids.magic import MagicProblem

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def brute_force_solutions(structure, targets=None) -> list[tuple[int, ...]]:
    """Every magic labeling, by trying all V! bijections (small solids only)."""
    problem = MagicProblem.from_structure(structure) if targets is None else None
    face_targets = problem.face_targets() if problem else targets
    faces = [f.vertices for f in structure.faces]
    V = structure.num_vertices
    out = []
    for labels in itertools.permutations(range(1, V + 1)):
        if all(sum(labels[v] for v in f) == t for f, t in zip(faces, face_targets)):
            out.append(labels)
    return out


@pytest.fixture(scope="session")
def cube_solutions() -> list[tuple[int, ...]]:
    return brute_force_solutions(incidence.cube())


@pytest.fixture(scope="session")
def prism4_solutions() -> list[tuple[int, ...]]:
    return brute_force_solutions(incidence.prism(4))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
