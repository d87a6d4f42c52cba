"""
Cover nerves.

A cover is given combinatorially by its nerve: vertices 0..n-1 (one per
open set, in a fixed total order) and the simplices naming nonempty,
connected overlaps. Simplices are stored as increasing vertex tuples and
the family is closed under taking faces.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Sequence, Tuple

logger = logging.getLogger(__name__)

Simplex = Tuple[int, ...]


@dataclass(frozen=True)
class CoverNerve:
    """Downward-closed simplicial complex on vertices 0..vertices-1."""
    vertices: int
    simplices_by_dim: Tuple[Tuple[Simplex, ...], ...]
    name: str = ""
    _index: Tuple[Dict[Simplex, int], ...] = field(default=(), compare=False, repr=False, hash=False)

    def __post_init__(self):
        index = tuple({s: i for i, s in enumerate(level)} for level in self.simplices_by_dim)
        object.__setattr__(self, "_index", index)

    # ----- constructors ------------------------------------------------

    @classmethod
    def from_simplices(cls, vertices: int, simplices: Iterable[Sequence[int]], name: str = "") -> "CoverNerve":
        """Build the downward closure of the given simplices (plus all vertices)."""
        closed = {(v,) for v in range(vertices)}
        for raw in simplices:
            simplex = tuple(sorted(set(int(v) for v in raw)))
            if not simplex:
                raise ValueError("empty simplex in nerve")
            if simplex[0] < 0 or simplex[-1] >= vertices:
                raise ValueError(f"simplex {list(simplex)} uses a vertex outside 0..{vertices - 1}")
            for k in range(1, len(simplex) + 1):
                closed.update(combinations(simplex, k))
        top = max(len(s) for s in closed) if closed else 0
        levels = tuple(
            tuple(sorted(s for s in closed if len(s) == k + 1))
            for k in range(top)
        )
        return cls(vertices, levels, name)

    # ----- queries -----------------------------------------------------

    @property
    def dimension(self) -> int:
        return len(self.simplices_by_dim) - 1

    def simplices(self, k: int) -> Tuple[Simplex, ...]:
        """Ordered k-simplices (empty outside the dimension range)."""
        if 0 <= k < len(self.simplices_by_dim):
            return self.simplices_by_dim[k]
        return ()

    def count(self, k: int) -> int:
        return len(self.simplices(k))

    def index(self, simplex: Sequence[int]) -> int:
        simplex = tuple(simplex)
        k = len(simplex) - 1
        try:
            return self._index[k][simplex]
        except (IndexError, KeyError):
            raise KeyError(f"{list(simplex)} is not a simplex of the nerve") from None

    def contains(self, simplex: Sequence[int]) -> bool:
        simplex = tuple(sorted(simplex))
        k = len(simplex) - 1
        return 0 <= k < len(self._index) and simplex in self._index[k]

    def all_simplices(self) -> List[Simplex]:
        return [s for level in self.simplices_by_dim for s in level]

    def neighbours(self, v: int) -> List[int]:
        out = []
        for a, b in self.simplices(1):
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    def spanning_forest(self) -> Tuple[List[int], List[Tuple[int, int]]]:
        """
        BFS spanning forest in vertex order.

        Returns:
            (roots, tree) where tree lists (parent, child) pairs in BFS order.
        """
        seen = set()
        roots: List[int] = []
        tree: List[Tuple[int, int]] = []
        for start in range(self.vertices):
            if start in seen:
                continue
            roots.append(start)
            seen.add(start)
            queue = [start]
            while queue:
                v = queue.pop(0)
                for w in self.neighbours(v):
                    if w not in seen:
                        seen.add(w)
                        tree.append((v, w))
                        queue.append(w)
        return roots, tree

    def components(self) -> List[List[int]]:
        roots, tree = self.spanning_forest()
        owner = {r: r for r in roots}
        for parent, child in tree:
            owner[child] = owner[parent]
        groups: Dict[int, List[int]] = {}
        for v in range(self.vertices):
            groups.setdefault(owner[v], []).append(v)
        return [groups[r] for r in roots]

    def relabel(self, permutation: Sequence[int]) -> "CoverNerve":
        """Nerve with vertex v renamed permutation[v]."""
        if sorted(permutation) != list(range(self.vertices)):
            raise ValueError("relabel needs a permutation of the vertices")
        return CoverNerve.from_simplices(
            self.vertices,
            ([permutation[v] for v in s] for s in self.all_simplices()),
            self.name,
        )

    def cochain_complex(self, coefficient=None):
        from homology.complexes import nerve_complex
        return nerve_complex(self, coefficient)

    def to_json(self) -> Dict:
        maximal = []
        all_s = self.all_simplices()
        as_sets = [set(s) for s in all_s]
        for s, ss in zip(all_s, as_sets):
            if not any(ss < other for other in as_sets if len(other) == len(ss) + 1):
                maximal.append(list(s))
        return {"vertices": self.vertices, "simplices": maximal}


# =============================================================================
# MODEL NERVES
# =============================================================================

def point() -> CoverNerve:
    return CoverNerve.from_simplices(1, [], "point")


def circle() -> CoverNerve:
    """Three arcs, pairwise overlapping, no triple overlap."""
    return CoverNerve.from_simplices(3, [(0, 1), (1, 2), (0, 2)], "S1")


def sphere() -> CoverNerve:
    """Boundary of the tetrahedron."""
    return CoverNerve.from_simplices(4, combinations(range(4), 3), "S2")


def torus() -> CoverNerve:
    """Seven-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    triangles = []
    for i in range(7):
        triangles.append((i, (i + 1) % 7, (i + 3) % 7))
        triangles.append((i, (i + 2) % 7, (i + 3) % 7))
    return CoverNerve.from_simplices(7, triangles, "T2")


def projective_plane() -> CoverNerve:
    """Six-vertex real projective plane."""
    triangles = [
        (0, 1, 3), (0, 1, 5), (0, 2, 4), (0, 2, 5), (0, 3, 4),
        (1, 2, 3), (1, 2, 4), (1, 4, 5), (2, 3, 5), (3, 4, 5),
    ]
    return CoverNerve.from_simplices(6, triangles, "RP2")


def solid_simplex(k: int) -> CoverNerve:
    """The full k-simplex (contractible)."""
    return CoverNerve.from_simplices(k + 1, [tuple(range(k + 1))], f"Delta{k}")


MODEL_NERVES = {
    "point": point,
    "S1": circle,
    "S2": sphere,
    "T2": torus,
    "RP2": projective_plane,
}
