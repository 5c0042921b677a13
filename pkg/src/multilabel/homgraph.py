"""Colorful complete bipartite subgraphs from multiple proper colorings.

The poset of pairs (A, B) of disjoint nonempty vertex sets inducing a
complete bipartite subgraph, ordered by componentwise inclusion, carries
the free swap involution; its order complex feeds the coincidence search.
Labeling a pair by the top color over A union B, signed by the side
attaining it, turns every proper coloring into a valid signed labeling,
and an alternating chain plus one extra vertex from the bottom pair's
other side yields the colorful complete bipartite witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .complexes import Simplex, StructuralError
from .fan import Z2Complex, multilabeled_fan
from .labelings import FanLabeling, Violation

MAX_POSET_ELEMENTS = 400

# symmetry index of the pair poset of a complete graph on t vertices
def complete_graph_index(t: int) -> int:
    return t - 2


@dataclass(frozen=True)
class Graph:
    vertices: int
    edges: frozenset[tuple[int, int]]

    @classmethod
    def from_edges(cls, vertices: int, edges) -> "Graph":
        norm = set()
        for u, v in edges:
            if u == v or not (0 <= u < vertices and 0 <= v < vertices):
                raise ValueError(f"bad edge ({u}, {v})")
            norm.add((min(u, v), max(u, v)))
        return cls(vertices=vertices, edges=frozenset(norm))

    @classmethod
    def complete(cls, t: int) -> "Graph":
        return cls.from_edges(t, itertools.combinations(range(t), 2))

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def is_complete(self) -> bool:
        return len(self.edges) == self.vertices * (self.vertices - 1) // 2

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "edges": sorted(map(list, self.edges))}

    @classmethod
    def from_json(cls, doc: dict) -> "Graph":
        return cls.from_edges(int(doc["vertices"]), doc["edges"])


def validate_proper(graph: Graph, coloring: dict[int, int]) -> list[Violation]:
    out = []
    for v in range(graph.vertices):
        if v not in coloring or coloring[v] < 1:
            out.append(Violation("missing", (v,), "vertex lacks a positive color"))
    if out:
        return out
    for u, v in sorted(graph.edges):
        if coloring[u] == coloring[v]:
            out.append(Violation("improper", (u, v), "edge endpoints share a color"))
    return out


@dataclass(frozen=True)
class PairPoset:
    """The complete-bipartite pair poset of a graph with its order complex."""

    elements: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    complex: Z2Complex

    def pair(self, vid: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.elements[vid]


def hom_complex(graph: Graph, declared_index: int | None = None) -> PairPoset:
    """Build the pair poset and its order complex.

    ``declared_index`` defaults to the known value for complete graphs and
    must be supplied for anything else.  Guarded to a few hundred poset
    elements; larger graphs are out of scope.
    """
    if declared_index is None:
        if graph.is_complete():
            declared_index = complete_graph_index(graph.vertices)
        else:
            raise ValueError("declared_index required for incomplete graphs")
    verts = range(graph.vertices)
    elements: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for a_size in range(1, graph.vertices):
        for a in itertools.combinations(verts, a_size):
            rest = [v for v in verts if v not in a]
            common = [v for v in rest if all(graph.adjacent(u, v) for u in a)]
            for b_size in range(1, len(common) + 1):
                for b in itertools.combinations(common, b_size):
                    elements.append((a, b))
    if len(elements) > MAX_POSET_ELEMENTS:
        raise ValueError(
            f"pair poset has {len(elements)} elements, over the supported size"
        )
    elements.sort()
    index = {e: i for i, e in enumerate(elements)}
    involution = tuple(index[(b, a)] for a, b in elements)

    sets = [(frozenset(a), frozenset(b)) for a, b in elements]

    def below(i: int, j: int) -> bool:
        return sets[i][0] <= sets[j][0] and sets[i][1] <= sets[j][1]

    succ: list[list[int]] = [[] for _ in elements]
    for i, j in itertools.permutations(range(len(elements)), 2):
        if i != j and below(i, j):
            succ[i].append(j)
    covers: list[list[int]] = []
    for i in range(len(elements)):
        si = set(succ[i])
        covers.append(
            [j for j in succ[i] if not any(below(k, j) for k in si if k != j and below(i, k))]
        )
    minimal = [i for i in range(len(elements)) if not any(below(j, i) for j in range(len(elements)) if j != i)]

    chains: set[Simplex] = set()

    def extend(chain: list[int]) -> None:
        nxt = covers[chain[-1]]
        if not nxt:
            chains.add(tuple(sorted(chain)))
            return
        for j in nxt:
            extend(chain + [j])

    for i in minimal:
        extend([i])

    dim = max(len(c) for c in chains) - 1
    k = Z2Complex(
        maximal_simplices=tuple(sorted(chains)),
        involution=involution,
        declared_index=declared_index,
        dim=dim,
        triangulation=None,
    )
    bad = k.validate()
    if bad:
        raise StructuralError(f"pair poset symmetry broken: {bad[:3]}")
    return PairPoset(elements=tuple(elements), complex=k)


def pair_labeling(poset: PairPoset, coloring: dict[int, int]) -> FanLabeling:
    """Sign the top color of each pair by the side attaining it.

    In a proper coloring the top color over A union B lives on exactly
    one side (equal colors cannot face each other across the complete
    bipartite join): negative for A, positive for B.
    """
    values = {}
    top = max(coloring.values())
    for vid, (a, b) in enumerate(poset.elements):
        best = max(a + b, key=lambda v: coloring[v])
        sign = -1 if best in a else 1
        values[vid] = sign * coloring[best]
    return FanLabeling(values, bound=top)


@dataclass(frozen=True)
class ColorfulWitness:
    left: tuple[int, ...]
    right: tuple[int, ...]
    inside: tuple[tuple[int, ...], tuple[int, ...]]

    @property
    def shape(self) -> tuple[int, int]:
        a, b = len(self.left), len(self.right)
        return (max(a, b), min(a, b))


def colorful_bipartite(
    graph: Graph,
    colorings: list[dict[int, int]],
    ds: list[int],
    declared_index: int | None = None,
) -> list[ColorfulWitness]:
    """One colorful complete bipartite subgraph per coloring, all nested
    in a single complete bipartite subgraph.

    ds[i] controls the size for coloring i: the witness has parts of
    sizes ceil(ds[i]/2)+1 and floor(ds[i]/2)+1, with all vertex colors
    distinct under coloring i.  The ds must sum to the declared index.
    """
    for c in colorings:
        bad = validate_proper(graph, c)
        if bad:
            raise ValueError(f"coloring not proper: {bad[:3]}")
    if any(d < 1 for d in ds):
        raise ValueError("each dimension must be positive")
    poset = hom_complex(graph, declared_index)
    labs = [pair_labeling(poset, c) for c in colorings]
    out = multilabeled_fan(poset.complex, labs, ds)
    top_chain = sorted(out.simplex, key=lambda vid: sum(map(len, poset.pair(vid))))
    top_pair = poset.pair(top_chain[-1])

    witnesses = []
    for i, face in enumerate(out.alternating_faces):
        coloring = colorings[i]
        chain = sorted(face, key=lambda vid: sum(map(len, poset.pair(vid))))
        picked = []
        sides = []
        for vid in chain:
            a, b = poset.pair(vid)
            best = max(a + b, key=lambda v: coloring[v])
            picked.append(best)
            sides.append("A" if best in a else "B")
        a0, b0 = poset.pair(chain[0])
        other = a0 if sides[0] == "B" else b0
        extra = max(other, key=lambda v: coloring[v])
        left = sorted(
            [v for v, s in zip(picked, sides) if s == "A"]
            + ([extra] if sides[0] == "B" else [])
        )
        right = sorted(
            [v for v, s in zip(picked, sides) if s == "B"]
            + ([extra] if sides[0] == "A" else [])
        )
        w = ColorfulWitness(left=tuple(left), right=tuple(right), inside=top_pair)
        _check_witness(graph, coloring, w, ds[i])
        witnesses.append(w)
    return witnesses


def _check_witness(graph: Graph, coloring, w: ColorfulWitness, d: int) -> None:
    colors = [coloring[v] for v in w.left + w.right]
    if len(set(colors)) != len(colors):
        raise StructuralError("witness colors collide")
    for u in w.left:
        for v in w.right:
            if not graph.adjacent(u, v):
                raise StructuralError("witness sides not completely joined")
    if sorted((len(w.left), len(w.right))) != sorted((d // 2 + 1, (d + 1) // 2 + 1)):
        raise StructuralError("witness has the wrong shape")
    if not (set(w.left) <= set(w.inside[0]) and set(w.right) <= set(w.inside[1])) and not (
        set(w.left) <= set(w.inside[1]) and set(w.right) <= set(w.inside[0])
    ):
        raise StructuralError("witness leaks outside its bipartite container")
