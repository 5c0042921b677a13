"""Exact linear algebra over Fraction.

Everything in this package runs on rational numbers: strict inequalities in
the underlying combinatorial arguments must hold exactly, so no floating
point is allowed anywhere near a solver.  The systems are tiny (at most a
couple of dozen unknowns), so plain fraction Gaussian elimination is fine.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]


def frac(x) -> Fraction:
    """Coerce ints, strings, [num, den] pairs and Fractions to Fraction.

    Floats are accepted via their decimal string so that JSON numbers like
    0.25 mean the decimal value, not the binary float.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(x))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def frac_vec(xs: Iterable) -> Vec:
    return tuple(frac(x) for x in xs)


def frac_to_json(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def vec_to_json(v: Sequence[Fraction]) -> list[list[int]]:
    return [frac_to_json(x) for x in v]


def det_sign(rows: Sequence[Sequence[Fraction]]) -> int:
    """Sign of the determinant of a square rational matrix: -1, 0 or +1."""
    n = len(rows)
    m = [list(r) for r in rows]
    if any(len(r) != n for r in m):
        raise ValueError("matrix is not square")
    sign = 1
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        if m[col][col] < 0:
            sign = -sign
        inv = m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] / inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return sign


def det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    n = len(rows)
    m = [list(map(Fraction, r)) for r in rows]
    result = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        result *= m[col][col]
        inv = m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] / inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return result


def solve_pinned(
    a: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
    pins: Sequence[Fraction],
) -> list[Fraction] | None:
    """Solve A x = b exactly, pinning free variables.

    Row-reduces [A | b]; columns without a pivot take the corresponding
    value from ``pins``.  Returns None when the system is inconsistent.
    Used for tie systems whose certificate graph may be disconnected, in
    which case the solution closest in spirit to a given anchor is wanted.
    """
    nrows = len(a)
    ncols = len(pins)
    m = [list(map(Fraction, row)) + [Fraction(b[i])] for i, row in enumerate(a)]
    pivot_of_col: dict[int, int] = {}
    r = 0
    for col in range(ncols):
        pr = None
        for rr in range(r, nrows):
            if m[rr][col] != 0:
                pr = rr
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][col]
        m[r] = [x / inv for x in m[r]]
        for rr in range(nrows):
            if rr != r and m[rr][col] != 0:
                f = m[rr][col]
                m[rr] = [x - f * y for x, y in zip(m[rr], m[r])]
        pivot_of_col[col] = r
        r += 1
        if r == nrows:
            break
    # inconsistency: a zero row with nonzero rhs
    for rr in range(r, nrows):
        if all(x == 0 for x in m[rr][:ncols]) and m[rr][ncols] != 0:
            return None
    x = [Fraction(p) for p in pins]
    for col, pr in sorted(pivot_of_col.items(), reverse=True):
        val = m[pr][ncols]
        for c in range(col + 1, ncols):
            if m[pr][c] != 0:
                val -= m[pr][c] * x[c]
        x[col] = val
    return x


def transportation_weights(
    edges: Sequence[tuple[int, int]],
    row_marginals: dict[int, Fraction],
    col_marginals: dict[int, Fraction],
) -> dict[tuple[int, int], Fraction] | None:
    """Edge weights with prescribed marginals on an acyclic bipartite graph.

    ``edges`` are (row, col) pairs.  Returns None when the graph has a
    cycle, repeats an edge, misses a positive marginal, touches a zero
    marginal, or when the (then unique) solution has a negative or zero
    entry.  On a forest the weights are forced by leaf elimination, which
    is exact over Fraction.
    """
    if len(set(edges)) != len(edges):
        return None
    rows = {e[0] for e in edges}
    cols = {e[1] for e in edges}
    pos_rows = {i for i, v in row_marginals.items() if v > 0}
    pos_cols = {j for j, v in col_marginals.items() if v > 0}
    if rows != pos_rows or cols != pos_cols:
        return None
    # forest check: |E| <= |V| - #components, via union-find
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in rows:
        parent[("r", i)] = ("r", i)
    for j in cols:
        parent[("c", j)] = ("c", j)
    for i, j in edges:
        ri, rj = find(("r", i)), find(("c", j))
        if ri == rj:
            return None  # cycle
        parent[ri] = rj

    need = {("r", i): row_marginals[i] for i in rows}
    need.update({("c", j): col_marginals[j] for j in cols})
    incident: dict = {v: set() for v in need}
    for i, j in edges:
        incident[("r", i)].add((i, j))
        incident[("c", j)].add((i, j))
    weights: dict[tuple[int, int], Fraction] = {}
    leaves = [v for v, es in incident.items() if len(es) == 1]
    remaining = set(edges)
    while leaves:
        v = leaves.pop()
        if not incident[v]:
            continue
        (e,) = incident[v]
        w = need[v]
        if w <= 0:
            return None
        weights[e] = w
        remaining.discard(e)
        other = ("c", e[1]) if v[0] == "r" else ("r", e[0])
        incident[v].clear()
        incident[other].discard(e)
        need[other] -= w
        need[v] = Fraction(0)
        if len(incident[other]) == 1:
            leaves.append(other)
        elif len(incident[other]) == 0 and need[other] != 0:
            return None
    if remaining:
        return None
    if any(v != 0 for v in need.values()):
        return None
    return weights


def convex_combination(
    points: Sequence[Sequence[Fraction]], target: Sequence[Fraction]
) -> list[Fraction] | None:
    """Weights t >= 0, sum 1, with sum t_i * points[i] = target, or None.

    Only treats the affinely independent case; a rank-deficient system
    returns None.  Callers that scan faces in increasing dimension may
    rely on Caratheodory: any point covered through a dependent family is
    covered by a proper subfamily, hence found at a smaller face.
    """
    k = len(points)
    if k == 0:
        return None
    dim = len(target)
    a = [[points[i][r] for i in range(k)] for r in range(dim)]
    a.append([Fraction(1)] * k)
    b = list(target) + [Fraction(1)]
    # eliminate; require full column rank
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    nrows = len(m)
    r = 0
    pivots = []
    for col in range(k):
        pr = None
        for rr in range(r, nrows):
            if m[rr][col] != 0:
                pr = rr
                break
        if pr is None:
            return None  # rank deficient
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][col]
        m[r] = [x / inv for x in m[r]]
        for rr in range(nrows):
            if rr != r and m[rr][col] != 0:
                f = m[rr][col]
                m[rr] = [x - f * y for x, y in zip(m[rr], m[r])]
        pivots.append(col)
        r += 1
    for rr in range(r, nrows):
        if m[rr][k] != 0:
            return None  # inconsistent
    t = [Fraction(0)] * k
    for idx, col in enumerate(pivots):
        t[col] = m[idx][k]
    if any(x < 0 for x in t):
        return None
    return t
