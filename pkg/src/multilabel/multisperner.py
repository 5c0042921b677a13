"""Covering certificates on products of simplices, and signed counts.

The engine behind the degree-prescribed simplex searches: given several
supported labelings of a triangulated simplex, each vertex (u_i, v) of a
staircase product carries the affine image (u_i, corner picked by labeling
i at v).  A chosen target point of the product is covered by some simplex
of the product triangulation; a minimal one induces a bipartite graph
between labelings and labels whose edge weights reproduce the target's
marginals exactly.  Degree and matching lemmas on that graph drive all
the solvers downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .complexes import (
    Simplex,
    StructuralError,
    Triangulation,
    orientation_sign,
    parse_domain,
    product_vertex_parts,
    staircase_product,
)
from .labelings import SpernerLabeling
from .rational import frac_to_json, transportation_weights

Edge = tuple[int, int]  # (labeling row, 0-based) x (label, 1-based)


@dataclass(frozen=True)
class TargetPoint:
    """A point (a, b) of the product of two standard simplices."""

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        if any(x < 0 for x in self.a) or any(x < 0 for x in self.b):
            raise ValueError("target coordinates must be nonnegative")
        if sum(self.a) != 1 or sum(self.b) != 1:
            raise ValueError("each target block must sum to 1")


@dataclass(frozen=True)
class CoveringCertificate:
    """Minimal product simplex covering a target, with its edge weights.

    ``sigma_bar`` lives in the product triangulation, ``sigma`` is its
    projection; ``weights`` assigns each bipartite edge (i, j) a positive
    rational; row sums equal a_i, column sums equal b_j; the underlying
    simple bipartite graph has at most m+n-1 edges.
    """

    sigma_bar: Simplex
    sigma: Simplex
    weights: dict[Edge, Fraction]

    @property
    def graph(self) -> list[Edge]:
        return sorted(self.weights)

    def row_degree(self, i: int) -> int:
        return sum(1 for e in self.weights if e[0] == i)

    def col_degree(self, j: int) -> int:
        return sum(1 for e in self.weights if e[1] == j)

    def to_json(self) -> dict:
        return {
            "sigma_bar": list(self.sigma_bar),
            "sigma": list(self.sigma),
            "weights": [
                {"labeling": i, "label": j, "weight": frac_to_json(w)}
                for (i, j), w in sorted(self.weights.items())
            ],
        }


@dataclass(frozen=True)
class SignedCount:
    positive: int
    negative: int

    @property
    def difference(self) -> int:
        return self.positive - self.negative


def lambda_image(t_bar: Triangulation, labelers, vid: int) -> Edge:
    """Image of a product vertex: its own row, the labeled corner below.

    The image is always a vertex of the minimal face of the product
    containing the input, provided the labelings are supported.
    """
    row, base = product_vertex_parts(t_bar, vid)
    return row, _label_of(labelers, row, base)


def _label_of(labelers, row: int, base: int) -> int:
    lab = labelers[row]
    if isinstance(lab, SpernerLabeling):
        return lab.values[base]
    if callable(lab):
        return lab(base)
    return lab[base]


def certificate_for_face(
    t_bar: Triangulation, labelers, face: Simplex, target: TargetPoint
) -> CoveringCertificate | None:
    """Exact feasibility of one face: does its image cover the target?

    The convex-combination system is a transportation problem between the
    target's two marginal vectors on the face's image edges; on candidate
    minimal faces it is acyclic with a unique strictly positive solution.
    Faces with repeated images, wrong support coverage, cycles, or
    non-positive solutions are rejected: any point they cover is covered
    by a proper subface seen earlier in a dimension-increasing scan.
    """
    images = [lambda_image(t_bar, labelers, v) for v in face]
    if len(set(images)) != len(images):
        return None
    row_marg = {i: x for i, x in enumerate(target.a)}
    col_marg = {j + 1: x for j, x in enumerate(target.b)}
    weights = transportation_weights(images, row_marg, col_marg)
    if weights is None:
        return None
    sigma = tuple(sorted({product_vertex_parts(t_bar, v)[1] for v in face}))
    return CoveringCertificate(sigma_bar=face, sigma=sigma, weights=weights)


def find_covering_simplex(
    t_bar: Triangulation, labelers, target: TargetPoint
) -> CoveringCertificate:
    """Scan faces by increasing dimension; first feasible face wins.

    Within a dimension the lexicographically smallest feasible vertex
    tuple is returned; cells are sorted, so cells whose smallest vertex
    already exceeds the current best cannot improve it and the scan cuts
    off early.  Exhausting all faces without a cover breaks the
    surjectivity guarantee and raises a structural error.
    """
    kind, (m, n) = parse_domain(t_bar.domain)
    nv = len(t_bar.vertices) // m
    image = [
        (vid // nv, _label_of(labelers, vid // nv, vid % nv))
        for vid in range(len(t_bar.vertices))
    ]
    row_marg = {i: x for i, x in enumerate(target.a)}
    col_marg = {j + 1: x for j, x in enumerate(target.b)}
    need_rows = {i for i, x in row_marg.items() if x > 0}
    need_cols = {j for j, x in col_marg.items() if x > 0}
    d_min = max(len(need_rows), len(need_cols)) - 1

    for d in range(d_min, t_bar.dim + 1):
        best: tuple | None = None
        best_weights = None
        for cell in t_bar.maximal_simplices:
            if len(cell) < d + 1:
                continue
            if best is not None and cell[0] > best[0]:
                break
            for face in itertools.combinations(cell, d + 1):
                if best is not None and face >= best:
                    continue
                images = [image[v] for v in face]
                if len(set(images)) != len(images):
                    continue
                if {r for r, _ in images} != need_rows:
                    continue
                if {c for _, c in images} != need_cols:
                    continue
                weights = transportation_weights(images, row_marg, col_marg)
                if weights is not None:
                    best, best_weights = face, weights
        if best is not None:
            sigma = tuple(sorted({v % nv for v in best}))
            return CoveringCertificate(
                sigma_bar=best, sigma=sigma, weights=best_weights
            )
    raise StructuralError(
        "no covering simplex: labeling or triangulation violates the "
        "surjectivity guarantee"
    )


def staircase_cells_of(sigma: Simplex, m: int, nv: int):
    """Product cells over one base cell, without building the product.

    Yields the same staircase cells the product constructor would emit
    for this base simplex, as sorted tuples of row*nv+vertex ids.
    """
    d = len(sigma) - 1
    for updown in itertools.combinations(range(m - 1 + d), m - 1):
        path = [(0, 0)]
        i = j = 0
        for step in range(m - 1 + d):
            if step in updown:
                i += 1
            else:
                j += 1
            path.append((i, j))
        yield tuple(sorted(i * nv + sigma[j] for i, j in path))


def find_covering_simplex_near(
    t: Triangulation, m: int, labelers, target: TargetPoint, center
) -> CoveringCertificate:
    """Covering certificate scanning outward from a base-domain point.

    Base cells are visited by L1 distance of their barycenter from
    ``center``; product cells are generated per base cell, so the product
    triangulation never materializes and labels are only evaluated for
    vertices the scan touches.  Minimality holds cell-locally: within a
    product cell, faces go by dimension then lexicographic order.
    """
    nv = len(t.vertices)
    row_marg = {i: x for i, x in enumerate(target.a)}
    col_marg = {j + 1: x for j, x in enumerate(target.b)}
    need_rows = {i for i, x in row_marg.items() if x > 0}
    need_cols = {j for j, x in col_marg.items() if x > 0}
    d_min = max(len(need_rows), len(need_cols)) - 1
    label_cache: dict[tuple[int, int], int] = {}

    def image(vid: int) -> Edge:
        row, base = vid // nv, vid % nv
        key = (row, base)
        if key not in label_cache:
            label_cache[key] = _label_of(labelers, row, base)
        return row, label_cache[key]

    # scan order is a heuristic, so float distances are fine (and still
    # deterministic); every cell is visited eventually either way
    approx = [tuple(map(float, v.coords)) for v in t.vertices]
    center_f = tuple(map(float, center))

    def distance(sigma: Simplex) -> float:
        k = len(sigma)
        return sum(
            abs(sum(approx[v][i] for v in sigma) / k - center_f[i])
            for i in range(len(center_f))
        )

    base_cells = sorted(t.maximal_simplices, key=lambda s: (distance(s), s))
    for sigma in base_cells:
        for cell in sorted(staircase_cells_of(sigma, m, nv)):
            for d in range(d_min, len(cell)):
                for face in itertools.combinations(cell, d + 1):
                    images = [image(v) for v in face]
                    if len(set(images)) != len(images):
                        continue
                    if {r for r, _ in images} != need_rows:
                        continue
                    if {c for _, c in images} != need_cols:
                        continue
                    weights = transportation_weights(images, row_marg, col_marg)
                    if weights is not None:
                        proj = tuple(sorted({v % nv for v in face}))
                        return CoveringCertificate(
                            sigma_bar=face, sigma=proj, weights=weights
                        )
    raise StructuralError(
        "no covering simplex: labeling or triangulation violates the "
        "surjectivity guarantee"
    )


def check_certificate(cert: CoveringCertificate, target: TargetPoint) -> bool:
    """Recompute both marginal identities exactly."""
    m, n = len(target.a), len(target.b)
    for i in range(m):
        if sum((w for (r, _), w in cert.weights.items() if r == i), Fraction(0)) != target.a[i]:
            return False
    for j in range(1, n + 1):
        if sum((w for (_, c), w in cert.weights.items() if c == j), Fraction(0)) != target.b[j - 1]:
            return False
    return len(cert.weights) <= m + n - 1 and all(w > 0 for w in cert.weights.values())


# ---------------------------------------------------------------------------
# degree-prescribed searches


def distinct_labels_target(n: int, ks: list[int]) -> TargetPoint:
    m = len(ks)
    a = tuple(Fraction(k - 1, n) + Fraction(1, m * n) for k in ks)
    b = tuple(Fraction(1, n) for _ in range(n))
    return TargetPoint(a=a, b=b)


def popular_labels_target(m: int, ls: list[int]) -> TargetPoint:
    n = len(ls)
    a = tuple(Fraction(1, m) for _ in range(m))
    b = tuple(Fraction(l - 1, m) + Fraction(1, m * n) for l in ls)
    return TargetPoint(a=a, b=b)


def solve_distinct_labels(
    t: Triangulation, labs: list[SpernerLabeling], ks: list[int]
) -> tuple[Simplex, list[set[int]], CoveringCertificate]:
    """A simplex on which labeling i shows at least ks[i] distinct labels.

    Also guarantees every label appears under some labeling there.  The
    certificate's row degrees equal ks exactly.
    """
    kind, (n,) = parse_domain(t.domain)
    m = len(labs)
    if len(ks) != m or any(k < 1 for k in ks) or sum(ks) != m + n - 1:
        raise ValueError("counts must be positive and sum to m+n-1")
    t_bar = staircase_product(t, m)
    cert = find_covering_simplex(t_bar, labs, distinct_labels_target(n, ks))
    label_sets = [set(lab.values[v] for v in cert.sigma) for lab in labs]
    for i, k in enumerate(ks):
        if cert.row_degree(i) != k:
            raise StructuralError("certificate degree drifted from prescription")
    return cert.sigma, label_sets, cert


def solve_popular_labels(
    t: Triangulation, labs: list[SpernerLabeling], ls: list[int]
) -> tuple[Simplex, dict[int, int], CoveringCertificate]:
    """A simplex on which label j is used by at least ls[j-1] labelings."""
    kind, (n,) = parse_domain(t.domain)
    m = len(labs)
    if len(ls) != n or any(l < 1 for l in ls) or sum(ls) != m + n - 1:
        raise ValueError("counts must be positive and sum to m+n-1")
    t_bar = staircase_product(t, m)
    cert = find_covering_simplex(t_bar, labs, popular_labels_target(m, ls))
    counts = {
        j: sum(1 for lab in labs if j in {lab.values[v] for v in cert.sigma})
        for j in range(1, n + 1)
    }
    for j, l in enumerate(ls, start=1):
        if cert.col_degree(j) != l:
            raise StructuralError("certificate degree drifted from prescription")
    return cert.sigma, counts, cert


# ---------------------------------------------------------------------------
# matchings


def hall_matching(edges: list[Edge], xs: list, ys: list, removed=()):
    """Matching covering the X side of a bipartite graph minus removed Ys.

    ``edges`` are (x, y) pairs; ``removed`` is a set of Y-side vertices to
    delete first.  Returns ("matching", {x: y}) when every X vertex is
    covered, else ("deficient", X') with a Hall violator set whose
    neighborhood is smaller than itself.
    """
    removed = set(removed)
    ys = [y for y in ys if y not in removed]
    adj = {x: [] for x in xs}
    for x, y in edges:
        if x in adj and y not in removed:
            adj[x].append(y)
    match_x: dict = {}
    match_y: dict = {}

    def augment(x, seen) -> bool:
        for y in adj[x]:
            if y in seen:
                continue
            seen.add(y)
            if y not in match_y or augment(match_y[y], seen):
                match_x[x] = y
                match_y[y] = x
                return True
        return False

    for x in xs:
        if not augment(x, set()):
            # alternately-reachable X vertices form a Hall violator
            violator = {x}
            frontier_y = set()
            changed = True
            while changed:
                changed = False
                for xv in list(violator):
                    for y in adj[xv]:
                        if y not in frontier_y:
                            frontier_y.add(y)
                            if y in match_y and match_y[y] not in violator:
                                violator.add(match_y[y])
                                changed = True
            return "deficient", violator
    return "matching", match_x


def quota_assignment(edges: list[Edge], workers: list, quotas: dict) -> dict | None:
    """Assign each worker one slot so that each y gets exactly quotas[y].

    Slot-expands the y side and runs the matching; returns {worker: y} or
    None when no such assignment exists.
    """
    slots = [(y, s) for y in sorted(quotas) for s in range(quotas[y])]
    slot_edges = [(x, (y, s)) for (x, y) in edges for (yy, s) in slots if yy == y]
    status, match = hall_matching(slot_edges, workers, slots)
    if status != "matching" or len(match) != len(workers):
        return None
    return {x: ys[0] for x, ys in match.items()}


# ---------------------------------------------------------------------------
# signed counts


def oriented_sperner_count(t: Triangulation, lab: SpernerLabeling) -> SignedCount:
    """Signed count of fully-labeled cells, ordered by increasing label."""
    kind, (n,) = parse_domain(t.domain)
    pos = neg = 0
    for cell in t.maximal_simplices:
        labels = {lab.values[v]: v for v in cell}
        if len(labels) != n:
            continue
        order = tuple(labels[j] for j in sorted(labels))
        if orientation_sign(cell, t, order) > 0:
            pos += 1
        else:
            neg += 1
    return SignedCount(positive=pos, negative=neg)


def bapat_signed_count(t: Triangulation, labs: list[SpernerLabeling]) -> SignedCount:
    """Signed count over (cell, bijection) pairs with all-distinct picks.

    For each maximal cell and each bijection pi from its vertices to the
    labelings, the picked labels lab_{pi(v)}(v) must be pairwise distinct;
    vertices are then ordered by increasing picked label and the cell's
    orientation under that order is accumulated.
    """
    kind, (n,) = parse_domain(t.domain)
    if len(labs) != n:
        raise ValueError("need exactly n labelings")
    pos = neg = 0
    for cell in t.maximal_simplices:
        for perm in itertools.permutations(range(n)):
            picked = {v: labs[perm[k]].values[v] for k, v in enumerate(cell)}
            if len(set(picked.values())) != n:
                continue
            order = tuple(sorted(cell, key=lambda v: picked[v]))
            if orientation_sign(cell, t, order) > 0:
                pos += 1
            else:
                neg += 1
    return SignedCount(positive=pos, negative=neg)
