"""Backtracking enumeration of magic labelings."""
from .backend import BACKEND, KERNELS, get_search
from .checkpoint import (Checkpoint, CheckpointError, SearchShard, checkpoint_load,
                         checkpoint_save)
from .engine import (EnumerationResult, SolverError, canonicalize, count_prefix, count_raw,
                     enumerate_solutions, make_shards, map_prefix)
from .partial import PartialLabeling, face_bounds

enumerate = enumerate_solutions  # noqa: A001 - public name used by callers

__all__ = [
    "BACKEND", "KERNELS", "Checkpoint", "CheckpointError", "EnumerationResult", "PartialLabeling",
    "SearchShard", "SolverError", "canonicalize", "checkpoint_load", "checkpoint_save", "count_prefix",
    "count_raw", "enumerate", "enumerate_solutions", "face_bounds", "get_search", "make_shards",
    "map_prefix",
]
