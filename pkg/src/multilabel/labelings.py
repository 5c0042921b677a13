"""Vertex labelings of triangulated domains and their validators.

Two kinds are supported.  A simplex-domain labeling assigns each vertex a
corner index of the minimal face containing it ("supported" labelings).
A signed labeling on a complex with a free involution assigns nonzero
integers that are antisymmetric across the involution, with no edge whose
endpoint labels cancel.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .complexes import Simplex, Triangulation, parse_domain


@dataclass(frozen=True)
class SpernerLabeling:
    """Labels in [1..n] keyed by vertex id, for a simplex(n) domain."""

    values: dict[int, int]
    n: int

    def __getitem__(self, vid: int) -> int:
        return self.values[vid]


@dataclass(frozen=True)
class FanLabeling:
    """Nonzero signed labels keyed by vertex id, |label| <= bound."""

    values: dict[int, int]
    bound: int

    def __getitem__(self, vid: int) -> int:
        return self.values[vid]


@dataclass(frozen=True)
class AlternationReport:
    """Longest sign-alternating strictly |.|-increasing label pattern.

    ``alt`` is the number of vertices in a maximal alternating face,
    ``sign`` the sign of its smallest-magnitude label, ``witness`` the
    chosen vertex subset (sorted by label magnitude).
    """

    alt: int
    sign: int
    witness: tuple[int, ...]


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple
    detail: str


def support(coords: tuple[Fraction, ...]) -> tuple[int, ...]:
    return tuple(i for i, c in enumerate(coords) if c != 0)


def validate_sperner(t: Triangulation, lab: SpernerLabeling) -> list[Violation]:
    """Empty list iff every vertex label indexes a positive coordinate."""
    kind, params = parse_domain(t.domain)
    if kind != "simplex":
        raise ValueError("Sperner labelings live on simplex domains")
    n = params[0]
    out = []
    for v in t.vertices:
        if v.id not in lab.values:
            out.append(Violation("missing", (v.id,), "vertex has no label"))
            continue
        j = lab.values[v.id]
        if not 1 <= j <= n:
            out.append(Violation("range", (v.id,), f"label {j} outside 1..{n}"))
        elif v.coords[j - 1] == 0:
            out.append(
                Violation("unsupported", (v.id,), f"label {j} has zero coordinate")
            )
    return out


def validate_fan(t: Triangulation, lab: FanLabeling) -> list[Violation]:
    """Check the adjacency and antisymmetry conditions on a free complex."""
    if t.involution is None:
        raise ValueError("Fan labelings need an involution")
    out = []
    for v in t.vertex_ids:
        if v not in lab.values:
            out.append(Violation("missing", (v,), "vertex has no label"))
    if out:
        return out
    for v in t.vertex_ids:
        x = lab.values[v]
        if x == 0 or abs(x) > lab.bound:
            out.append(Violation("range", (v,), f"label {x} out of range"))
    for v in t.vertex_ids:
        w = t.opposite(v)
        if v < w and lab.values[v] + lab.values[w] != 0:
            out.append(
                Violation("antisymmetry", (v, w), "orbit labels do not cancel")
            )
    for u, v in t.edges():
        if lab.values[u] + lab.values[v] == 0:
            out.append(Violation("adjacency", (u, v), "edge labels cancel"))
    return out


def validate_compatible(t: Triangulation, labs: list[FanLabeling]) -> bool:
    """No edge uu' and labeling pair i,i' with cancelling labels.

    A vertex is not adjacent to itself, so single-vertex cancellation
    across two labelings is allowed here (it is forbidden separately where
    the averaging construction needs it).
    """
    for u, v in t.edges():
        for li in labs:
            for lj in labs:
                if li.values[u] + lj.values[v] == 0:
                    return False
    return True


def max_alternating_face(
    sigma: Simplex, lab: FanLabeling | dict[int, int]
) -> AlternationReport:
    """Maximal alternating face of a simplex under a signed labeling.

    Dynamic program over vertices sorted by |label|; ties in magnitude
    never share a witness because the magnitudes must strictly increase.
    Matches brute force over all vertex subsets.
    """
    values = lab if isinstance(lab, dict) else lab.values
    vs = sorted(sigma, key=lambda v: (abs(values[v]), v))
    k = len(vs)
    best_len = [1] * k
    prev = [-1] * k
    for i in range(k):
        for j in range(i):
            if (
                abs(values[vs[j]]) < abs(values[vs[i]])
                and values[vs[j]] * values[vs[i]] < 0
                and best_len[j] + 1 > best_len[i]
            ):
                best_len[i] = best_len[j] + 1
                prev[i] = j
    top = max(range(k), key=lambda i: (best_len[i], -vs[i]))
    chain = []
    i = top
    while i >= 0:
        chain.append(vs[i])
        i = prev[i]
    chain.reverse()
    sign = 1 if values[chain[0]] > 0 else -1
    return AlternationReport(alt=len(chain), sign=sign, witness=tuple(chain))


def alternating_simplices(
    t: Triangulation, lab: FanLabeling, d: int, sign: int | None = None
) -> list[Simplex]:
    """All d-dimensional faces whose labels fully alternate, sorted."""
    out = []
    for f in t.faces(d):
        labels = sorted((lab.values[v] for v in f), key=abs)
        mags = [abs(x) for x in labels]
        if len(set(mags)) != len(mags):
            continue
        if all(labels[i] * labels[i + 1] < 0 for i in range(len(labels) - 1)):
            s = 1 if labels[0] > 0 else -1
            if sign is None or s == sign:
                out.append(f)
    return out


# ---------------------------------------------------------------------------
# seeded random generators (test fuel)


def random_sperner(t: Triangulation, rng: random.Random) -> SpernerLabeling:
    """Uniform label among the positive coordinates of each vertex."""
    kind, params = parse_domain(t.domain)
    if kind != "simplex":
        raise ValueError("simplex domain required")
    values = {}
    for v in t.vertices:
        choices = [i + 1 for i in support(v.coords)]
        values[v.id] = rng.choice(choices)
    return SpernerLabeling(values=values, n=params[0])


def random_fan(
    t: Triangulation, rng: random.Random, bound: int | None = None, max_rounds: int = 10000
) -> FanLabeling:
    """Random antisymmetric labeling repaired until no edge cancels.

    One orbit representative gets a uniform signed label; violating edges
    are resampled (rejection with local repair).  Deterministic given the
    rng seed.
    """
    if t.involution is None:
        raise ValueError("involution required")
    if bound is None:
        bound = t.dim + 2
    reps = sorted(v for v in t.vertex_ids if v < t.opposite(v))
    labels_pool = [s * j for j in range(1, bound + 1) for s in (1, -1)]
    values: dict[int, int] = {}

    def assign(v: int, x: int) -> None:
        values[v] = x
        values[t.opposite(v)] = -x

    for v in reps:
        assign(v, rng.choice(labels_pool))
    edges = t.edges()
    for _ in range(max_rounds):
        bad = [(u, v) for u, v in edges if values[u] + values[v] == 0]
        if not bad:
            return FanLabeling(values=values, bound=bound)
        u, v = bad[rng.randrange(len(bad))]
        w = u if rng.random() < 0.5 else v
        rep = min(w, t.opposite(w))
        assign(rep, rng.choice(labels_pool))
    raise RuntimeError("random Fan labeling did not stabilize")


def axis_priority_fan(t: Triangulation) -> FanLabeling:
    """Signed label from the largest-magnitude coordinate of each vertex.

    For sphere domains this is antisymmetric by construction, and within a
    closed orthant the dominating coordinate cannot flip sign across an
    edge, so no edge cancels.  Handy as a canonical self-compatible
    labeling in tests and demos.
    """
    kind, params = parse_domain(t.domain)
    if kind != "sphere":
        raise ValueError("sphere domain required")
    values = {}
    for v in t.vertices:
        j = max(range(len(v.coords)), key=lambda i: (abs(v.coords[i]), -i))
        values[v.id] = (j + 1) if v.coords[j] > 0 else -(j + 1)
    return FanLabeling(values=values, bound=params[0])


def sperner_labeling_from_json(doc: dict) -> SpernerLabeling:
    return SpernerLabeling(
        values={int(k): int(v) for k, v in doc["values"].items()}, n=int(doc["n"])
    )


def fan_labeling_from_json(doc: dict) -> FanLabeling:
    return FanLabeling(
        values={int(k): int(v) for k, v in doc["values"].items()}, bound=int(doc["N"])
    )


def labeling_from_json(doc: dict):
    if doc.get("kind") == "sperner":
        return sperner_labeling_from_json(doc)
    if doc.get("kind") == "fan":
        return fan_labeling_from_json(doc)
    raise ValueError("labeling kind must be 'sperner' or 'fan'")


def labeling_to_json(lab) -> dict:
    if isinstance(lab, SpernerLabeling):
        return {"kind": "sperner", "n": lab.n, "values": {str(k): v for k, v in lab.values.items()}}
    return {"kind": "fan", "N": lab.bound, "values": {str(k): v for k, v in lab.values.items()}}
