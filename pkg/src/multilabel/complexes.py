"""Geometric simplicial complexes with exact rational coordinates.

Three families of domains are supported and tagged on the triangulation:

* ``simplex(n)`` -- the standard simplex on n corners, barycentric coords;
* ``product(m,n)`` -- a product of two standard simplices, coords are the
  two barycentric blocks concatenated;
* ``sphere(n)`` -- the boundary of the n-dimensional cross-polytope (the
  unit L1-sphere in R^n), optionally refined, with the antipodal map as a
  free involution.

All constructors are pure and return immutable values.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .rational import det, det_sign, frac_vec, vec_to_json

Simplex = tuple[int, ...]


class StructuralError(RuntimeError):
    """A solver hit a state the underlying theory rules out.

    Raised e.g. when no covering simplex exists for a valid-looking input,
    which means a labeling or triangulation invariant was broken upstream.
    """


@dataclass(frozen=True)
class Vertex:
    id: int
    coords: tuple[Fraction, ...]


@dataclass(frozen=True)
class Triangulation:
    """A triangulated domain given by vertices and maximal simplices.

    ``maximal_simplices`` are sorted vertex-id tuples.  ``involution``,
    when present, is a fixed-point-free order-2 vertex permutation mapping
    simplices to simplices (the antipodal map for sphere domains).
    """

    vertices: tuple[Vertex, ...]
    maximal_simplices: tuple[Simplex, ...]
    dim: int
    domain: str
    involution: tuple[int, ...] | None = None
    _faces_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def coords(self, vid: int) -> tuple[Fraction, ...]:
        return self.vertices[vid].coords

    @property
    def vertex_ids(self) -> range:
        return range(len(self.vertices))

    def faces(self, d: int) -> list[Simplex]:
        """All d-dimensional faces, deduplicated and sorted."""
        if d not in self._faces_cache:
            out = set()
            for s in self.maximal_simplices:
                out.update(itertools.combinations(s, d + 1))
            self._faces_cache[d] = sorted(out)
        return self._faces_cache[d]

    def all_faces(self) -> list[Simplex]:
        out: list[Simplex] = []
        for d in range(self.dim + 1):
            out.extend(self.faces(d))
        return out

    def edges(self) -> list[Simplex]:
        return self.faces(1)

    def opposite(self, vid: int) -> int:
        if self.involution is None:
            raise ValueError("triangulation has no involution")
        return self.involution[vid]

    def map_simplex(self, s: Simplex) -> Simplex:
        return tuple(sorted(self.opposite(v) for v in s))

    def barycenter(self, s: Simplex) -> tuple[Fraction, ...]:
        k = Fraction(len(s))
        n = len(self.coords(s[0]))
        return tuple(sum((self.coords(v)[i] for v in s), Fraction(0)) / k for i in range(n))


@dataclass(frozen=True)
class Chain:
    """Strictly nested faces of one maximal simplex.

    These are exactly the simplices of a barycentric subdivision, kept as
    face tuples of the original complex.
    """

    simplices: tuple[Simplex, ...]

    def __post_init__(self):
        for f, g in zip(self.simplices, self.simplices[1:]):
            if not set(f) < set(g):
                raise ValueError("each face must be a proper face of the next")

    @property
    def top(self) -> Simplex:
        return self.simplices[-1]


def domain_simplex(n: int) -> str:
    return f"simplex({n})"


def domain_product(m: int, n: int) -> str:
    return f"product({m},{n})"


def domain_sphere(n: int) -> str:
    return f"sphere({n})"


@lru_cache(maxsize=None)
def parse_domain(tag: str) -> tuple[str, tuple[int, ...]]:
    m = re.fullmatch(r"(simplex|product|sphere)\(([-0-9,]+)\)", tag)
    if not m:
        raise ValueError(f"bad domain tag {tag!r}")
    return m.group(1), tuple(int(x) for x in m.group(2).split(","))


# ---------------------------------------------------------------------------
# constructors


def trivial_simplex(n: int) -> Triangulation:
    """The standard simplex on n corners as its own (single) cell."""
    return kuhn_triangulation(n, 1)


def kuhn_triangulation(n: int, k: int) -> Triangulation:
    """Standard refinement of the (n-1)-simplex at resolution k.

    Vertices are the barycentric points with coordinates in (1/k)Z; the
    cells come from the staircase decomposition of the order polytope
    {k >= x_1 >= ... >= x_{n-1} >= 0}, giving k^(n-1) maximal simplices
    that share faces consistently.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    d = n - 1
    # lattice points with k >= x_1 >= ... >= x_d >= 0
    points: list[tuple[int, ...]] = []
    for x in itertools.product(range(k + 1), repeat=d):
        if all(x[i] >= x[i + 1] for i in range(d - 1)):
            points.append(x)
    points.sort(reverse=True)  # corner (k,k,..) variants first; any fixed order works
    index = {p: i for i, p in enumerate(points)}

    def to_bary(x: tuple[int, ...]) -> tuple[Fraction, ...]:
        ys = []
        prev = k
        for i in range(d):
            ys.append(Fraction(prev - x[i], k))
            prev = x[i]
        ys.append(Fraction(prev, k))
        return tuple(ys)

    vertices = tuple(Vertex(i, to_bary(p)) for i, p in enumerate(points))
    cells = set()
    if d == 0:
        cells.add((0,))
    else:
        inside = set(points)
        for base in itertools.product(range(k), repeat=d):
            if any(base[i] < base[i + 1] for i in range(d - 1)):
                continue
            for perm in itertools.permutations(range(d)):
                chain = [base]
                cur = list(base)
                ok = True
                for step in perm:
                    cur[step] += 1
                    pt = tuple(cur)
                    if pt not in inside:
                        ok = False
                        break
                    chain.append(pt)
                if ok:
                    cells.add(tuple(sorted(index[p] for p in chain)))
    return Triangulation(
        vertices=vertices,
        maximal_simplices=tuple(sorted(cells)),
        dim=d,
        domain=domain_simplex(n),
    )


def barycentric_subdivision(t: Triangulation) -> Triangulation:
    """Barycentric subdivision; an involution on t induces one on the result."""
    faces = t.all_faces()
    face_ids = {f: i for i, f in enumerate(faces)}
    vertices = tuple(Vertex(i, t.barycenter(f)) for i, f in enumerate(faces))
    cells = set()
    for s in t.maximal_simplices:
        d = len(s) - 1
        # maximal chains F_0 < F_1 < ... < F_d inside s: built by vertex orderings
        for order in itertools.permutations(s):
            chain = [tuple(sorted(order[: i + 1])) for i in range(d + 1)]
            cells.add(tuple(sorted(face_ids[f] for f in chain)))
    involution = None
    if t.involution is not None:
        involution = tuple(face_ids[t.map_simplex(f)] for f in faces)
    return Triangulation(
        vertices=vertices,
        maximal_simplices=tuple(sorted(cells)),
        dim=t.dim,
        domain=t.domain,
        involution=involution,
    )


def staircase_product(t: Triangulation, m: int) -> Triangulation:
    """Triangulate (simplex on m corners) x t without new vertices.

    Vertices are the pairs (i, v) with i in [m] and v a vertex of t; each
    prism over a cell of t is cut along monotone staircase paths under the
    global (i, vertex-id) order, so faces of adjacent prisms agree.  Every
    simplex of the result projects to a simplex of t.
    """
    kind, params = parse_domain(t.domain)
    if kind != "simplex":
        raise ValueError("staircase_product needs a simplex-domain triangulation")
    n = params[0]
    if m < 1:
        raise ValueError("need m >= 1")
    nv = len(t.vertices)

    def pid(i: int, v: int) -> int:
        return i * nv + v

    vertices = []
    for i in range(m):
        a = tuple(Fraction(1) if r == i else Fraction(0) for r in range(m))
        for v in t.vertices:
            vertices.append(Vertex(pid(i, v.id), a + v.coords))
    cells = set()
    for s in t.maximal_simplices:
        d = len(s) - 1
        # monotone paths from (0, s[0]) to (m-1, s[d]) in the (m)x(d+1) grid
        for updown in itertools.combinations(range(m - 1 + d), m - 1):
            path = [(0, 0)]
            i = j = 0
            for step in range(m - 1 + d):
                if step in updown:
                    i += 1
                else:
                    j += 1
                path.append((i, j))
            cells.add(tuple(sorted(pid(i, s[j]) for i, j in path)))
    return Triangulation(
        vertices=tuple(vertices),
        maximal_simplices=tuple(sorted(cells)),
        dim=(m - 1) + t.dim,
        domain=domain_product(m, n),
    )


def product_vertex_parts(t_bar: Triangulation, vid: int) -> tuple[int, int]:
    """Split a product-domain vertex id into (row index, base vertex id)."""
    kind, (m, n) = parse_domain(t_bar.domain)
    if kind != "product":
        raise ValueError("not a product triangulation")
    nv = len(t_bar.vertices) // m
    return vid // nv, vid % nv


def edgewise_sphere(n: int, k: int) -> Triangulation:
    """L1-sphere triangulated by the k-fold grid in every orthant.

    Each orthant simplex of the cross-polytope boundary carries the
    standard k-fold staircase subdivision under the corner order e_1 <
    ... < e_n, which restricts consistently to shared coordinate faces
    and commutes with the antipodal map.  Mesh shrinks like 1/k at cell
    count 2^n k^(n-1), much faster than repeated barycentric subdivision.
    """
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    base = kuhn_triangulation(n, k)
    coord_index: dict[tuple[Fraction, ...], int] = {}
    coords_list: list[tuple[Fraction, ...]] = []

    def vid(coords: tuple[Fraction, ...]) -> int:
        if coords not in coord_index:
            coord_index[coords] = len(coords_list)
            coords_list.append(coords)
        return coord_index[coords]

    cells = set()
    for signs in itertools.product((1, -1), repeat=n):
        mapped = {}
        for v in base.vertices:
            mapped[v.id] = vid(tuple(s * c for s, c in zip(signs, v.coords)))
        for cell in base.maximal_simplices:
            cells.add(tuple(sorted(mapped[v] for v in cell)))
    involution = tuple(
        coord_index[tuple(-c for c in coords)] for coords in coords_list
    )
    return Triangulation(
        vertices=tuple(Vertex(i, c) for i, c in enumerate(coords_list)),
        maximal_simplices=tuple(sorted(cells)),
        dim=n - 1,
        domain=domain_sphere(n),
        involution=involution,
    )


def cross_polytope_sphere(n: int, r: int = 0) -> Triangulation:
    """Boundary of the n-dim cross-polytope, subdivided r times.

    Vertices carry exact L1-sphere coordinates; the antipodal map is the
    involution.  Every simplex stays inside one closed orthant, so
    barycenters keep L1 norm exactly 1.
    """
    if n < 2 or r < 0:
        raise ValueError("need n >= 2 and r >= 0")
    vertices = []
    for j in range(n):
        plus = tuple(Fraction(1) if i == j else Fraction(0) for i in range(n))
        minus = tuple(-x for x in plus)
        vertices.append(plus)
        vertices.append(minus)
    verts = tuple(Vertex(i, c) for i, c in enumerate(vertices))
    cells = []
    for signs in itertools.product((0, 1), repeat=n):
        cells.append(tuple(sorted(2 * j + signs[j] for j in range(n))))
    involution = tuple(i ^ 1 for i in range(2 * n))
    t = Triangulation(
        vertices=verts,
        maximal_simplices=tuple(sorted(cells)),
        dim=n - 1,
        domain=domain_sphere(n),
        involution=involution,
    )
    for _ in range(r):
        t = barycentric_subdivision(t)
    return t


# ---------------------------------------------------------------------------
# orientation


def _chart(t: Triangulation, coords: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    kind, params = parse_domain(t.domain)
    if kind == "simplex":
        return coords[:-1]
    if kind == "product":
        m, n = params
        return coords[: m - 1] + coords[m : m + n - 1]
    return coords  # sphere: full ambient coordinates


def _reference_sign(t: Triangulation) -> int:
    kind, params = parse_domain(t.domain)
    if kind == "simplex":
        n = params[0]
        corners = [tuple(Fraction(1) if i == j else Fraction(0) for i in range(n)) for j in range(n)]
    elif kind == "product":
        m, n = params
        us = [tuple(Fraction(1) if i == j else Fraction(0) for i in range(m)) for j in range(m)]
        vs = [tuple(Fraction(1) if i == j else Fraction(0) for i in range(n)) for j in range(n)]
        corners = [us[i] + vs[0] for i in range(m)] + [us[0] + vs[j] for j in range(1, n)]
    else:
        n = params[0]
        corners = [tuple(Fraction(1) if i == j else Fraction(0) for i in range(n)) for j in range(n)]
        rows = [list(c) for c in corners]
        return det_sign(rows)
    base = _chart(t, corners[0])
    rows = [
        [x - y for x, y in zip(_chart(t, c), base)]
        for c in corners[1:]
    ]
    return det_sign(rows)


def orientation_sign(sigma: Simplex, t: Triangulation, order: Simplex) -> int:
    """Orientation of a maximal simplex for a given vertex order.

    +1 when the ordered edge vectors agree with the fixed reference
    orientation of the domain; swapping two vertices flips the sign.  A
    zero determinant is impossible for a valid triangulation and reported
    as a structural error.
    """
    if sorted(order) != sorted(sigma):
        raise ValueError("order must be a permutation of the simplex vertices")
    if len(sigma) != t.dim + 1:
        raise ValueError("orientation is defined for maximal simplices only")
    kind, _ = parse_domain(t.domain)
    if kind == "sphere":
        rows = [list(t.coords(v)) for v in order]
        s = det_sign(rows)
    else:
        base = _chart(t, t.coords(order[0]))
        rows = [
            [x - y for x, y in zip(_chart(t, t.coords(v)), base)]
            for v in order[1:]
        ]
        s = det_sign(rows)
    if s == 0:
        raise StructuralError(f"degenerate simplex {sigma}")
    return s * _reference_sign(t)


def simplex_volume(t: Triangulation, sigma: Simplex) -> Fraction:
    """Unsigned volume of a maximal simplex in chart coordinates."""
    base = _chart(t, t.coords(sigma[0]))
    rows = [
        [x - y for x, y in zip(_chart(t, t.coords(v)), base)]
        for v in sigma[1:]
    ]
    d = det(rows)
    f = 1
    for i in range(2, len(rows) + 1):
        f *= i
    return abs(d) / f


# ---------------------------------------------------------------------------
# validation

def validate_triangulation(t: Triangulation) -> list[str]:
    """Structural checks; returns human-readable problem descriptions."""
    problems = []
    kind, params = parse_domain(t.domain)
    for v in t.vertices:
        if kind == "simplex":
            if any(c < 0 for c in v.coords) or sum(v.coords) != 1:
                problems.append(f"vertex {v.id}: bad barycentric coordinates")
        elif kind == "sphere":
            if sum(abs(c) for c in v.coords) != 1:
                problems.append(f"vertex {v.id}: not on the L1 sphere")
        else:
            m, n = params
            a, b = v.coords[:m], v.coords[m:]
            if any(c < 0 for c in v.coords) or sum(a) != 1 or sum(b) != 1:
                problems.append(f"vertex {v.id}: bad product coordinates")
    # pseudomanifold ridges: every (dim-1)-face in at most two cells
    ridge_count: dict[Simplex, int] = {}
    for s in t.maximal_simplices:
        if len(s) != t.dim + 1:
            problems.append(f"simplex {s}: wrong dimension")
            continue
        for f in itertools.combinations(s, t.dim):
            ridge_count[f] = ridge_count.get(f, 0) + 1
    for f, c in ridge_count.items():
        if c > 2:
            problems.append(f"ridge {f} shared by {c} cells")
    if t.involution is not None:
        inv = t.involution
        for v in t.vertex_ids:
            if inv[inv[v]] != v:
                problems.append(f"involution not an order-2 map at {v}")
            if inv[v] == v:
                problems.append(f"involution fixes vertex {v}")
        cell_set = set(t.maximal_simplices)
        for s in t.maximal_simplices:
            img = t.map_simplex(s)
            if img not in cell_set:
                problems.append(f"involution breaks simplex {s}")
            if set(img) & set(s):
                problems.append(f"involution not free on simplex {s}")
    return problems


# ---------------------------------------------------------------------------
# JSON round trip

def triangulation_to_json(t: Triangulation) -> dict:
    return {
        "dim": t.dim,
        "domain": t.domain,
        "vertices": [vec_to_json(v.coords) for v in t.vertices],
        "simplices": [list(s) for s in t.maximal_simplices],
        "involution": list(t.involution) if t.involution is not None else None,
    }


def triangulation_from_json(doc: dict) -> Triangulation:
    parse_domain(doc["domain"])
    vertices = tuple(
        Vertex(i, frac_vec(coords)) for i, coords in enumerate(doc["vertices"])
    )
    inv = doc.get("involution")
    return Triangulation(
        vertices=vertices,
        maximal_simplices=tuple(tuple(sorted(s)) for s in doc["simplices"]),
        dim=int(doc["dim"]),
        domain=doc["domain"],
        involution=tuple(inv) if inv is not None else None,
    )


def save_triangulation(t: Triangulation, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(triangulation_to_json(t), fh)


def load_triangulation(path: str) -> Triangulation:
    with open(path) as fh:
        return triangulation_from_json(json.load(fh))
