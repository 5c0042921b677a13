"""Alternating-simplex searches on free involutive complexes.

The engine behind the signed-label solvers: exhaustive alternating-simplex
search, the coincidence search that equips every labeling with its own
alternating face, its dual with prescribed label popularity, the averaged
covering search, and the balanced-coloring pair counting.  Chain searches
run over nested face sequences inside maximal simplices, so the
subdivision whose vertices are faces never gets materialized.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import Simplex, StructuralError, Triangulation
from .labelings import (
    FanLabeling,
    Violation,
    max_alternating_face,
    validate_compatible,
    validate_fan,
)
from .multisperner import hall_matching
from .rational import convex_combination


@dataclass(frozen=True)
class Z2Complex:
    """A simplicial complex with a free order-2 symmetry and a declared index.

    ``declared_index`` is the caller-asserted symmetry index (the least
    sphere dimension the complex maps to equivariantly); it is a
    hypothesis for the searches, not something computable here.  The
    optional triangulation carries geometry when there is one.
    """

    maximal_simplices: tuple[Simplex, ...]
    involution: tuple[int, ...]
    declared_index: int
    dim: int
    triangulation: Triangulation | None = None
    _faces_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.declared_index > self.dim:
            raise ValueError("declared index exceeds the dimension")
        if self.declared_index < 0:
            raise ValueError("declared index must be nonnegative")

    @property
    def vertex_ids(self) -> range:
        return range(len(self.involution))

    def opposite(self, v: int) -> int:
        return self.involution[v]

    def map_simplex(self, s: Simplex) -> Simplex:
        return tuple(sorted(self.involution[v] for v in s))

    def faces(self, d: int) -> list[Simplex]:
        if d not in self._faces_cache:
            out = set()
            for s in self.maximal_simplices:
                out.update(itertools.combinations(s, d + 1))
            self._faces_cache[d] = sorted(out)
        return self._faces_cache[d]

    def all_faces(self) -> list[Simplex]:
        out = []
        for d in range(self.dim + 1):
            out.extend(self.faces(d))
        return out

    def edges(self) -> list[Simplex]:
        return self.faces(1)

    def validate(self) -> list[str]:
        problems = []
        inv = self.involution
        for v in self.vertex_ids:
            if inv[inv[v]] != v:
                problems.append(f"involution not order 2 at {v}")
            if inv[v] == v:
                problems.append(f"involution fixes {v}")
        cells = set(self.maximal_simplices)
        for s in self.maximal_simplices:
            img = self.map_simplex(s)
            if img not in cells:
                problems.append(f"involution breaks simplex {s}")
            if set(img) & set(s):
                problems.append(f"involution not free on {s}")
        return problems


def sphere_complex(t: Triangulation) -> Z2Complex:
    """Wrap a centrally symmetric sphere triangulation; index = dimension."""
    if t.involution is None:
        raise ValueError("sphere complex needs the antipodal involution")
    return Z2Complex(
        maximal_simplices=t.maximal_simplices,
        involution=t.involution,
        declared_index=t.dim,
        dim=t.dim,
        triangulation=t,
    )


# ---------------------------------------------------------------------------
# plain alternating search


def fan_search(k: Z2Complex, lab: FanLabeling, d: int | None = None, sign: int = -1) -> Simplex:
    """First d-dimensional face whose labels fully alternate with ``sign``.

    ``d`` defaults to the declared index.  By symmetry both signs admit a
    witness; the negative one is the default.  No witness means the
    declared index or the labeling is wrong, which is a structural error.
    """
    if d is None:
        d = k.declared_index
    if d > k.declared_index:
        raise ValueError("alternation dimension exceeds the declared index")
    for f in k.faces(d):
        labels = sorted((lab.values[v] for v in f), key=abs)
        mags = [abs(x) for x in labels]
        if len(set(mags)) != len(mags):
            continue
        if all(labels[i] * labels[i + 1] < 0 for i in range(len(labels) - 1)):
            if (1 if labels[0] > 0 else -1) == sign:
                return f
    raise StructuralError(
        "no alternating simplex found: declared index or labeling invalid"
    )


# ---------------------------------------------------------------------------
# chain machinery shared by the coincidence searches


def _superset_lists(k: Z2Complex) -> dict[Simplex, list[Simplex]]:
    if "sups" not in k._faces_cache:
        sups: dict[Simplex, set[Simplex]] = {}
        for cell in k.maximal_simplices:
            subs = []
            for r in range(1, len(cell) + 1):
                subs.extend(itertools.combinations(cell, r))
            for f in subs:
                sups.setdefault(f, set())
            for f in subs:
                fs = set(f)
                for g in subs:
                    if len(g) > len(f) and fs < set(g):
                        sups[f].add(g)
        k._faces_cache["sups"] = {f: sorted(s) for f, s in sorted(sups.items())}
    return k._faces_cache["sups"]


@dataclass(frozen=True)
class MuChainWitness:
    """A nested face sequence whose derived labels strictly alternate.

    First label negative; magnitudes strictly increase along inclusion,
    so the top simplex carries a derived label larger than the declared
    index in absolute value.
    """

    chain: tuple[Simplex, ...]
    mu_values: tuple[int, ...]

    def __post_init__(self):
        vals = self.mu_values
        if vals and vals[0] >= 0:
            raise ValueError("chain must start negative")
        for a, b in zip(vals, vals[1:]):
            if not (abs(b) > abs(a) and a * b < 0):
                raise ValueError("chain labels must alternate and grow")

    @property
    def top(self) -> Simplex:
        return self.chain[-1]


def _alternating_chains(k: Z2Complex, mu: dict[Simplex, int], length: int):
    """Nested face sequences alternating under mu, lexicographic first.

    Depth-first over nested faces in sorted order, pruning prefixes that
    break the strict alternation, so witnesses arrive in lexicographic
    order of their face tuples.
    """
    sups = _superset_lists(k)

    def extend(chain: list[Simplex]):
        if len(chain) == length:
            yield MuChainWitness(
                chain=tuple(chain), mu_values=tuple(mu[f] for f in chain)
            )
            return
        last = chain[-1]
        want_sign = 1 if mu[last] < 0 else -1
        for g in sups[last]:
            v = mu[g]
            if abs(v) > abs(mu[last]) and (1 if v > 0 else -1) == want_sign:
                yield from extend(chain + [g])

    for start in sorted(mu):
        if mu[start] < 0:
            yield from extend([start])


def _alternating_chain(
    k: Z2Complex, mu: dict[Simplex, int], length: int
) -> MuChainWitness:
    for witness in _alternating_chains(k, mu, length):
        return witness
    raise StructuralError("no alternating chain: derived labeling broken")


def _check_mu_fan(k: Z2Complex, mu: dict[Simplex, int]) -> None:
    """Antisymmetry plus the no-cancellation rule along nested faces."""
    for f, v in mu.items():
        if v == 0:
            raise StructuralError(f"derived label zero on {f}")
        if mu[k.map_simplex(f)] != -v:
            raise StructuralError(f"derived labeling not antisymmetric at {f}")
    for f, ss in _superset_lists(k).items():
        for g in ss:
            if mu[f] + mu[g] == 0:
                raise StructuralError(
                    f"derived labels cancel along {f} inside {g}"
                )


# ---------------------------------------------------------------------------
# one alternating face per labeling


@dataclass(frozen=True)
class CoincidenceWitness:
    simplex: Simplex
    alternating_faces: tuple[tuple[int, ...], ...]
    chain: MuChainWitness


def multilabeled_fan(
    k: Z2Complex, labs: list[FanLabeling], ds: list[int], check: bool = True
) -> CoincidenceWitness:
    """A simplex with a ds[i]-dimensional alternating face per labeling.

    The derived label of a face is the signed alternation depth of the
    first labeling that falls short of its prescription; faces where no
    labeling falls short get labels beyond the declared index, and the
    alternating chain search must end in one of them.
    """
    m = len(labs)
    if len(ds) != m or any(d < 0 for d in ds):
        raise ValueError("need one nonnegative dimension per labeling")
    if sum(ds) != k.declared_index:
        raise ValueError("dimensions must sum to the declared index")
    if check:
        for lab in labs:
            bad = validate_fan(k, lab)
            if bad:
                raise ValueError(f"invalid signed labeling: {bad[:3]}")

    prefix = [0]
    for d in ds:
        prefix.append(prefix[-1] + d)

    mu: dict[Simplex, int] = {}
    reports: dict[Simplex, list] = {}
    for f in k.all_faces():
        reps = [max_alternating_face(f, lab) for lab in labs]
        reports[f] = reps
        star = m - 1
        for i in range(m):
            if reps[i].alt <= ds[i]:
                star = i
                break
        mu[f] = reps[star].sign * (prefix[star] + reps[star].alt)

    if check:
        _check_mu_fan(k, mu)

    witness = _alternating_chain(k, mu, k.declared_index + 1)
    top = witness.top
    if abs(witness.mu_values[-1]) <= k.declared_index:
        raise StructuralError("top of chain is not past the declared index")
    faces = []
    for i, d in enumerate(ds):
        rep = reports[top][i]
        if rep.alt < d + 1:
            raise StructuralError("top simplex misses a prescribed alternation")
        faces.append(tuple(rep.witness[: d + 1]))
    return CoincidenceWitness(
        simplex=top, alternating_faces=tuple(faces), chain=witness
    )


# ---------------------------------------------------------------------------
# dual: prescribed label popularity


@dataclass(frozen=True)
class DualWitness:
    simplex: Simplex
    js: tuple[int, ...]
    is_: tuple[int, ...]
    vertices: tuple[int, ...]
    chain: MuChainWitness


def _popularity(labs: list[FanLabeling], f: Simplex, j: int) -> int:
    return sum(1 for lab in labs if any(abs(lab.values[v]) == j for v in f))


def multifan_dual(
    k: Z2Complex, labs: list[FanLabeling], ls: list[int], check: bool = True
) -> DualWitness:
    """Alternating label numbers j_1 <= ... <= j_n on distinct vertices.

    Returns the top simplex of the chain with, per level k, the label
    number j_k, the labeling index i_k, and a vertex v_k where labeling
    i_k takes the value (-1)^k j_k; labels +-j_k appear in at least
    ls[j_k-1] labelings on the simplex.
    """
    m = len(labs)
    bound = max(lab.bound for lab in labs)
    if len(ls) != bound or any(l < 1 for l in ls) or sum(ls) != m + bound - 1:
        raise ValueError("popularity counts must be positive and sum to m+N-1")
    n = k.declared_index + 1
    if check:
        for lab in labs:
            bad = validate_fan(k, lab)
            if bad:
                raise ValueError(f"invalid signed labeling: {bad[:3]}")

    mu: dict[Simplex, int] = {}
    stats: dict[Simplex, tuple[int, int, int]] = {}
    for f in k.all_faces():
        j_star = 0
        for j in range(1, bound + 1):
            if _popularity(labs, f, j) >= ls[j - 1]:
                j_star = j
        if j_star == 0:
            raise StructuralError("no label number meets its popularity bound")
        i_star = 0
        sign = 0
        for i in range(m):
            hit = [lab_val for v in f if abs(lab_val := labs[i].values[v]) == j_star]
            if hit:
                i_star = i + 1
                sign = 1 if hit[0] > 0 else -1
        stats[f] = (j_star, i_star, sign)
        mu[f] = sign * (m * (j_star - 1) + i_star)

    if check:
        _check_mu_fan(k, mu)

    for witness in _alternating_chains(k, mu, n):
        extracted = _extract_dual(witness, stats, labs)
        if extracted is None:
            continue
        js, is_, vs = extracted
        top = witness.chain[-1]
        if any(_popularity(labs, top, j) < ls[j - 1] for j in js):
            continue
        return DualWitness(
            simplex=top, js=tuple(js), is_=tuple(is_), vertices=tuple(vs),
            chain=witness,
        )
    raise StructuralError("no chain admits the witness-vertex extraction")


def _extract_dual(witness: MuChainWitness, stats, labs):
    """Distinct vertices carrying the alternating labels along a chain.

    Vertices new to each chain step are preferred; any unused vertex with
    the wanted label is accepted otherwise.  None when some step offers no
    vertex at all.
    """
    js, is_, vs = [], [], []
    used: set[int] = set()
    prev: set[int] = set()
    for idx, f in enumerate(witness.chain):
        j_star, i_star, _ = stats[f]
        want = (-1) ** (idx + 1) * j_star
        fresh = [
            v for v in f if v not in prev and labs[i_star - 1].values[v] == want
        ]
        fallback = [
            v for v in f if v not in used and labs[i_star - 1].values[v] == want
        ]
        cand = fresh or fallback
        if not cand:
            return None
        v = min(cand)
        js.append(j_star)
        is_.append(i_star)
        vs.append(v)
        used.add(v)
        prev = set(f)
    return js, is_, vs


# ---------------------------------------------------------------------------
# averaged covering search


def gale_fan(
    k: Z2Complex, labs: list[FanLabeling], alpha: tuple[int, ...]
) -> tuple[Simplex, dict[int, int]]:
    """A simplex and a labeling permutation hitting alpha_j * j for all j.

    The labelings' averaged signed-basis map must cover the point with
    coordinates alpha_j / n; the bipartite structure of the average's
    components then yields the permutation by a covering matching.
    Requires compatible labelings with no cancelling pair at any single
    vertex.
    """
    n = len(labs)
    if n != k.declared_index + 1:
        raise ValueError("need declared_index + 1 labelings")
    if len(alpha) != n or any(a not in (-1, 1) for a in alpha):
        raise ValueError("alpha must be a vector of +-1")
    for lab in labs:
        if lab.bound > n or any(abs(x) > n for x in lab.values.values()):
            raise ValueError("labels must stay within +-n")
        bad = validate_fan(k, lab)
        if bad:
            raise ValueError(f"invalid signed labeling: {bad[:3]}")
    if not validate_compatible(k, labs):
        raise ValueError("labelings are not compatible")
    for v in k.vertex_ids:
        for la, lb in itertools.combinations(labs, 2):
            if la.values[v] + lb.values[v] == 0:
                raise ValueError("labels cancel at a single vertex")

    def image(v: int) -> list[Fraction]:
        out = [Fraction(0)] * n
        for lab in labs:
            x = lab.values[v]
            out[abs(x) - 1] += Fraction(1 if x > 0 else -1, n)
        return out

    target = [Fraction(a, n) for a in alpha]
    for d in range(k.dim + 1):
        for f in k.faces(d):
            pts = [image(v) for v in f]
            t = convex_combination(pts, target)
            if t is None:
                continue
            z = [[Fraction(0)] * n for _ in range(n)]
            for w, v in zip(t, f):
                for i, lab in enumerate(labs):
                    x = lab.values[v]
                    z[i][abs(x) - 1] += w * (1 if x > 0 else -1)
            edges = [
                (j, i)
                for j in range(1, n + 1)
                for i in range(n)
                if z[i][j - 1] != 0
            ]
            status, match = hall_matching(edges, list(range(1, n + 1)), list(range(n)))
            if status != "matching":
                raise StructuralError("averaged components fail the matching")
            pi = {j: i + 1 for j, i in match.items()}
            for j in range(1, n + 1):
                if all(labs[pi[j] - 1].values[v] != alpha[j - 1] * j for v in f):
                    raise StructuralError("matched labeling misses its value")
            return f, pi
    raise StructuralError(
        "no covering simplex for the averaged map: hypothesis violated"
    )


# ---------------------------------------------------------------------------
# balanced colorings: one pair per permutation


def validate_balanced_coloring(k: Z2Complex, coloring: dict[int, int], n: int) -> list[Violation]:
    out = []
    for v in k.vertex_ids:
        if coloring.get(v) not in range(1, n + 1):
            out.append(Violation("range", (v,), "color out of range"))
            continue
        if coloring[v] != coloring[k.opposite(v)]:
            out.append(Violation("symmetry", (v,), "color differs across the orbit"))
    for s in k.maximal_simplices:
        if len({coloring[v] for v in s}) != len(s):
            out.append(Violation("colorful", s, "maximal simplex not colorful"))
    return out


def balanced_fan_pairs(
    k: Z2Complex, labs: list[FanLabeling], coloring: dict[int, int]
) -> list[tuple[Simplex, dict[int, int]]]:
    """One negative alternating simplex per color permutation.

    Composing each labeling choice through a balanced coloring yields a
    valid signed labeling whenever the family is compatible; distinct
    permutations give distinct (simplex, assignment) pairs because every
    maximal simplex shows all colors.
    """
    n = len(labs)
    if k.dim != n - 1:
        raise ValueError("need as many labelings as vertex colors")
    bad = validate_balanced_coloring(k, coloring, n)
    if bad:
        raise ValueError(f"coloring is not balanced: {bad[:3]}")
    if not validate_compatible(k, labs):
        raise StructuralError("labelings are not compatible")
    bound = max(lab.bound for lab in labs)
    pairs = []
    seen = set()
    for perm in itertools.permutations(range(1, n + 1)):
        composite = FanLabeling(
            values={v: labs[perm[coloring[v] - 1] - 1].values[v] for v in k.vertex_ids},
            bound=bound,
        )
        if validate_fan(k, composite):
            raise StructuralError("composite labeling invalid: compatibility broken")
        sigma = fan_search(k, composite, d=n - 1, sign=-1)
        assignment = {v: perm[coloring[v] - 1] for v in sigma}
        key = (sigma, tuple(sorted(assignment.items())))
        if key in seen:
            raise StructuralError("two permutations produced the same pair")
        seen.add(key)
        # the witness chain: ordered by magnitude, alternating from negative
        ordered = sorted(sigma, key=lambda v: abs(composite.values[v]))
        vals = [labs[assignment[v] - 1].values[v] for v in ordered]
        for t, x in enumerate(vals):
            if (-1) ** (t + 1) * x <= 0:
                raise StructuralError("pair fails the alternation pattern")
        pairs.append((sigma, assignment))
    return pairs


def dimension_coloring(previous: Triangulation) -> dict[int, int]:
    """Color each barycenter vertex of the subdivision by its face size.

    Every maximal chain uses each face size once, so the subdivision of a
    complex is balanced under this coloring, and antipodal faces share
    their size.
    """
    return {i: len(f) for i, f in enumerate(previous.all_faces())}
