"""Magic vertex labelings of polyhedra and the permutohedron."""
from .incidence import (Face, FaceClass, IncidenceStructure, SymmetryGroup, build_solid,
                        full_symmetry_group, group_closure, validate)
from .magic import (FeasibilityVerdict, InfeasibleError, Labeling, MagicProblem,
                    construct_prism_labeling, derive_constants, structural_infeasibility,
                    total_arrangements, verify)

__version__ = "0.1.0"

__all__ = [
    "Face", "FaceClass", "FeasibilityVerdict", "IncidenceStructure", "InfeasibleError", "Labeling",
    "MagicProblem", "SymmetryGroup", "build_solid", "construct_prism_labeling", "derive_constants",
    "full_symmetry_group", "group_closure", "structural_infeasibility", "total_arrangements",
    "validate", "verify",
]
