"""The n-permutohedron as pure combinatorics.

Vertices are the (n+1)! permutations of ``1..n+1`` in lexicographic order,
two of them adjacent when they differ by swapping the values ``k`` and
``k+1``. Facets correspond to proper nonempty subsets of coordinate
positions. All counts are exact Python integers.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

MAX_VERTICES = 1_000_000


class BudgetExceeded(ValueError):
    pass


def _check(n: int, max_vertices: int) -> None:
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if math.factorial(n + 1) > max_vertices:
        raise BudgetExceeded(f"{n + 1}! vertices exceed the budget of {max_vertices}")


def hyperplane_sum(n: int) -> int:
    """Coordinate sum shared by every vertex of the n-permutohedron."""
    return (n + 1) * (n + 2) // 2


@lru_cache(maxsize=16)
def _vertices(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.permutations(range(1, n + 2)))


def vertices(n: int, max_vertices: int = MAX_VERTICES) -> list[tuple[int, ...]]:
    _check(n, max_vertices)
    return list(_vertices(n))


def _index(n: int) -> dict[tuple[int, ...], int]:
    return {v: i for i, v in enumerate(_vertices(n))}


def swap_values(vec: tuple[int, ...], k: int) -> tuple[int, ...]:
    return tuple(k + 1 if x == k else k if x == k + 1 else x for x in vec)


def skeleton(n: int, max_vertices: int = MAX_VERTICES) -> list[tuple[int, int]]:
    """Undirected edges ``(i, j)``, ``i < j``, sorted."""
    _check(n, max_vertices)
    index = _index(n)
    edges = []
    for i, v in enumerate(_vertices(n)):
        for k in range(1, n + 1):
            j = index[swap_values(v, k)]
            if i < j:
                edges.append((i, j))
    return sorted(edges)


@dataclass(frozen=True)
class Facet:
    subset: tuple[int, ...]
    vertex_ids: tuple[int, ...]


def facets(n: int, max_vertices: int = MAX_VERTICES) -> list[Facet]:
    """One facet per proper nonempty position subset, ordered by (size, subset).

    The facet of ``S`` holds the vertices whose positions in ``S`` carry the
    ``|S|`` largest values.
    """
    _check(n, max_vertices)
    dim = n + 1
    verts = _vertices(n)
    out = []
    for size in range(1, dim):
        top = set(range(dim - size + 1, dim + 1))
        for subset in itertools.combinations(range(dim), size):
            ids = tuple(i for i, v in enumerate(verts) if {v[p] for p in subset} == top)
            out.append(Facet(subset, ids))
    return out


@lru_cache(maxsize=None)
def stirling2(m: int, k: int) -> int:
    """Stirling number of the second kind."""
    if k < 0 or m < 0:
        raise ValueError("arguments must be non-negative")
    if k > m:
        raise ValueError(f"k={k} exceeds m={m}")
    if m == 0:
        return 1
    if k == 0:
        return 0
    if k == m:
        return 1
    return k * stirling2(m - 1, k) + stirling2(m - 1, k - 1)


def face_count(n: int, k: int) -> int:
    """Number of k-dimensional faces of the n-permutohedron.

    A k-face is an ordered partition of ``1..n+1`` into ``n+1-k`` blocks,
    hence ``(n+1-k)! * S(n+1, n+1-k)``.
    """
    if n < 1 or not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n and n >= 1, got n={n}, k={k}")
    blocks = n + 1 - k
    return math.factorial(blocks) * stirling2(n + 1, blocks)


@dataclass(frozen=True)
class CayleyGraph:
    """Cayley graph of S_{n+1} for the adjacent transpositions.

    ``edges`` holds ``(source, target, i)`` for ``target = source * s_i``.
    """

    n: int
    nodes: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int, int], ...]

    def undirected_edges(self) -> set[tuple[int, int]]:
        return {(min(a, b), max(a, b)) for a, b, _ in self.edges}

    def to_dot(self) -> str:
        name = lambda i: "".join(str(x) for x in self.nodes[i])  # noqa: E731
        lines = [f"digraph S{self.n + 1} {{"]
        lines += [f'  "{name(i)}";' for i in range(len(self.nodes))]
        lines += [f'  "{name(a)}" -> "{name(b)}" [label="s{g}", generator={g}];' for a, b, g in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"


def right_multiply(g: tuple[int, ...], i: int) -> tuple[int, ...]:
    """``g * s_i`` in one-line notation: swap the entries at positions i, i+1."""
    out = list(g)
    out[i - 1], out[i] = out[i], out[i - 1]
    return tuple(out)


def cayley_graph(n: int, max_vertices: int = MAX_VERTICES) -> CayleyGraph:
    _check(n, max_vertices)
    nodes = _vertices(n)
    index = _index(n)
    edges = tuple((a, index[right_multiply(g, i)], i) for a, g in enumerate(nodes) for i in range(1, n + 1))
    return CayleyGraph(n, nodes, edges)


def _inverse_perm(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for pos, value in enumerate(p, start=1):
        inv[value - 1] = pos
    return tuple(inv)


@dataclass(frozen=True)
class IsomorphismCertificate:
    n: int
    bijection: tuple[int, ...]  # skeleton vertex index -> Cayley node index
    edges_matched: int


def skeleton_matches_cayley(n: int) -> IsomorphismCertificate | None:
    """Identify the skeleton with the Cayley graph, edge by edge.

    Swapping values k, k+1 of a vertex is left multiplication by a
    transposition, which inversion turns into right multiplication, so the
    candidate bijection sends each vertex to its inverse permutation.
    Returns None if the candidate fails verification.
    """
    if n > 4:
        raise BudgetExceeded("isomorphism check is limited to n <= 4")
    index = _index(n)
    bijection = tuple(index[_inverse_perm(v)] for v in _vertices(n))
    if sorted(bijection) != list(range(len(bijection))):
        return None
    mapped = {(min(bijection[a], bijection[b]), max(bijection[a], bijection[b])) for a, b in skeleton(n)}
    cayley = cayley_graph(n).undirected_edges()
    if mapped != cayley:
        return None
    return IsomorphismCertificate(n, bijection, len(mapped))
