"""Magic vertex labelings: forced constants, infeasibility proofs, checking.

Labels are ``1..V``. A labeling is magic when every face of a class sums
to that class's constant. The constants are never chosen: if each vertex
lies on ``r`` faces of a class with ``f`` faces, summing over the class
gives ``f * S = r * V(V+1)/2``.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .incidence import IncidenceStructure, SymmetryGroup, validate

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass(frozen=True)
class Reason:
    kind: str  # divisibility | irregular-incidence | forced-equal-labels
    message: str
    detail: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "detail": self.detail}


@dataclass
class FeasibilityVerdict:
    feasible: str = UNKNOWN
    reasons: list[Reason] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.feasible == NO and not self.reasons:
            raise ValueError("an infeasibility verdict needs a reason")

    def to_dict(self) -> dict:
        return {"feasible": self.feasible, "reasons": [r.to_dict() for r in self.reasons]}


class InfeasibleError(ValueError):
    def __init__(self, verdict: FeasibilityVerdict):
        super().__init__("; ".join(r.message for r in verdict.reasons))
        self.verdict = verdict


@dataclass
class Constants:
    sums: dict[str, Fraction]
    incidence: dict[str, int]
    face_counts: dict[str, int]
    verdict: FeasibilityVerdict

    def integral(self) -> dict[str, int]:
        return {c: int(s) for c, s in self.sums.items() if s.denominator == 1}


def derive_constants(structure: IncidenceStructure) -> Constants:
    V = structure.num_vertices
    total = V * (V + 1) // 2
    report = validate(structure)
    sums: dict[str, Fraction] = {}
    incidence: dict[str, int] = {}
    face_counts: dict[str, int] = {}
    reasons: list[Reason] = []
    for cls in structure.classes:
        f = len(structure.faces_of_class(cls.id))
        face_counts[cls.id] = f
        r = report.regular_membership(cls.id)
        if r is None:
            reasons.append(Reason(
                "irregular-incidence",
                f"vertices lie on differing numbers of {cls.id} faces",
                {"class": cls.id, "membership": report.membership[cls.id]},
            ))
            continue
        incidence[cls.id] = r
        numerator = r * total
        sums[cls.id] = Fraction(numerator, f)
        if numerator % f:
            reasons.append(Reason(
                "divisibility",
                f"{cls.id} sum {numerator}/{f} non-integral: {numerator} not divisible by {f}",
                {"class": cls.id, "numerator": numerator, "faces": f, "per_vertex": r},
            ))
    no = any(r.kind == "divisibility" for r in reasons)
    return Constants(sums, incidence, face_counts, FeasibilityVerdict(NO if no else UNKNOWN, reasons))


def structural_infeasibility(structure: IncidenceStructure) -> FeasibilityVerdict:
    """Look for two equal-target faces differing in exactly one vertex each.

    Their sums can only agree if the two odd-one-out vertices carry the
    same label, which a bijection forbids.
    """
    constants = derive_constants(structure)
    targets = {c: s for c, s in constants.sums.items()}
    faces = structure.faces
    for i in range(len(faces)):
        for j in range(i + 1, len(faces)):
            a, b = faces[i], faces[j]
            if a.class_id in targets and b.class_id in targets:
                if targets[a.class_id] != targets[b.class_id]:
                    continue
            elif a.class_id != b.class_id:
                continue
            only_a = set(a.vertices) - set(b.vertices)
            only_b = set(b.vertices) - set(a.vertices)
            if len(only_a) == 1 and len(only_b) == 1:
                (u,), (w,) = only_a, only_b
                return FeasibilityVerdict(NO, [Reason(
                    "forced-equal-labels",
                    f"faces {i} and {j} ({a.class_id}) share all but one vertex each; "
                    f"vertices {u} and {w} would need equal labels",
                    {"faces": [i, j], "vertices": [u, w]},
                )])
    return FeasibilityVerdict(UNKNOWN, [])


def check_feasibility(structure: IncidenceStructure) -> tuple[Constants, FeasibilityVerdict]:
    constants = derive_constants(structure)
    structural = structural_infeasibility(structure)
    reasons = constants.verdict.reasons + structural.reasons
    feasible = NO if NO in (constants.verdict.feasible, structural.feasible) else UNKNOWN
    return constants, FeasibilityVerdict(feasible, reasons)


@dataclass(frozen=True)
class MagicProblem:
    structure: IncidenceStructure
    class_targets: dict[str, int]

    def __post_init__(self) -> None:
        expected = derive_constants(self.structure).integral()
        if dict(self.class_targets) != expected:
            raise ValueError(f"targets {self.class_targets} differ from derived {expected}")

    @classmethod
    def from_structure(cls, structure: IncidenceStructure) -> MagicProblem:
        """Derive the constants; raise :class:`InfeasibleError` if none exist."""
        constants, verdict = check_feasibility(structure)
        if verdict.feasible == NO or len(constants.sums) != len(structure.classes):
            if not verdict.reasons:
                verdict.reasons.append(Reason("irregular-incidence", "constants not derivable"))
            raise InfeasibleError(FeasibilityVerdict(NO, verdict.reasons))
        return cls(structure, constants.integral())

    @property
    def num_vertices(self) -> int:
        return self.structure.num_vertices

    @property
    def label_range(self) -> range:
        return range(1, self.num_vertices + 1)

    def face_targets(self) -> list[int]:
        return [self.class_targets[f.class_id] for f in self.structure.faces]

    def to_dict(self) -> dict:
        return {"structure": self.structure.to_dict(), "targets": dict(sorted(self.class_targets.items()))}

    def fingerprint(self, group: SymmetryGroup | None = None, **extra) -> str:
        doc = {"problem": self.to_dict(), "group": group.to_dict() if group else None, "extra": extra}
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class Labeling:
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))

    def __len__(self) -> int:
        return len(self.labels)

    def is_bijective(self) -> bool:
        return sorted(self.labels) == list(range(1, len(self.labels) + 1))

    def to_dict(self, solid: str, parameter: int | None = None) -> dict:
        return {"solid": solid, "parameter": parameter, "labels": list(self.labels)}

    @classmethod
    def from_dict(cls, doc: dict) -> Labeling:
        return cls(tuple(doc["labels"]))


@dataclass(frozen=True)
class FaceViolation:
    face: int
    class_id: str
    expected: int
    actual: int

    def to_dict(self) -> dict:
        return {"face": self.face, "class": self.class_id, "expected": self.expected, "actual": self.actual}


@dataclass
class VerificationReport:
    bijective: bool
    violations: list[FaceViolation]

    @property
    def ok(self) -> bool:
        return self.bijective and not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, "bijective": self.bijective, "violations": [v.to_dict() for v in self.violations]}


def verify(problem: MagicProblem, labeling: Labeling | Sequence[int]) -> VerificationReport:
    labels = labeling.labels if isinstance(labeling, Labeling) else tuple(labeling)
    if len(labels) != problem.num_vertices:
        raise ValueError(f"labeling has {len(labels)} entries, solid has {problem.num_vertices} vertices")
    bijective = sorted(labels) == list(problem.label_range)
    violations = []
    for i, face in enumerate(problem.structure.faces):
        actual = sum(labels[v] for v in face.vertices)
        expected = problem.class_targets[face.class_id]
        if actual != expected:
            violations.append(FaceViolation(i, face.class_id, expected, actual))
    return VerificationReport(bijective, violations)


def _lex_smallest_selection(pairs: list[tuple[int, int]], target: int) -> list[int] | None:
    """Pick one entry per pair, summing to ``target``, lexicographically smallest.

    Greedy over positions with a subset-sum table telling which totals the
    remaining pairs can still reach.
    """
    reach: list[set[int]] = [set() for _ in range(len(pairs) + 1)]
    reach[len(pairs)] = {0}
    for i in range(len(pairs) - 1, -1, -1):
        lo, hi = pairs[i]
        reach[i] = {s + lo for s in reach[i + 1]} | {s + hi for s in reach[i + 1]}
    if target not in reach[0]:
        return None
    chosen, remaining = [], target
    for i, (lo, hi) in enumerate(pairs):
        pick = lo if remaining - lo in reach[i + 1] else hi
        chosen.append(pick)
        remaining -= pick
    return chosen


def construct_prism_labeling(k: int) -> Labeling:
    """Magic labeling of the 2k-gon prism.

    The bottom vertex under ``top[i]`` gets ``2n+1 - top[i]`` so every
    rectangle sums to ``4n+2``; the top takes one label from each pair
    ``{j, 2n+1-j}`` so that it sums to ``n(2n+1)/2``.
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    n = 2 * k
    pairs = [(j, 2 * n + 1 - j) for j in range(1, n + 1)]
    top = _lex_smallest_selection(pairs, n * (2 * n + 1) // 2)
    if top is None:  # pragma: no cover - the alternating choice always works
        raise AssertionError(f"no half-sum selection for n={n}")
    bottom = [2 * n + 1 - t for t in top]
    return Labeling(tuple(top + bottom))


def total_arrangements(structure: IncidenceStructure, group: SymmetryGroup | None = None) -> int:
    order = group.order if group is not None else 1
    total = math.factorial(structure.num_vertices)
    if total % order:
        raise ValueError(f"group order {order} does not divide {structure.num_vertices}!")
    return total // order
