from __future__ import annotations

from typing import NamedTuple


class SearchOutcome(NamedTuple):
    """Raw result of one kernel call.

    ``count`` counts every completed labeling, ``canonical`` only those not
    lexicographically beaten by a stabilizer image. ``items`` holds the
    canonical labelings when collecting, or the assignment prefixes when a
    ``stop_depth`` was given.
    """

    count: int
    canonical: int
    nodes: int
    items: list
    complete: bool
