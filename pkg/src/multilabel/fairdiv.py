"""Envy-free style division solvers on top of the covering machinery.

Each solver runs the same loop: label a triangulation of the relevant
simplex through preference oracles, locate a covering certificate for the
uniform-marginal target, then try to pin down the exact limit point by
solving the tie system suggested by the near-argmax structure around the
certificate.  A solution is only accepted after an independent exact
re-verification (values re-integrated, matchings rebuilt per removal
scenario); failing that, the triangulation is refined and the loop
repeats up to a resolution cap.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass, replace
from fractions import Fraction
from math import ceil

from .complexes import (
    StructuralError,
    Triangulation,
    kuhn_triangulation,
    staircase_product,
)
from .labelings import SpernerLabeling, support
from .measures import Valuation, affine_table
from .multisperner import (
    TargetPoint,
    find_covering_simplex,
    find_covering_simplex_near,
    hall_matching,
    quota_assignment,
)
from .rational import frac, frac_to_json, solve_pinned

DEFAULT_START_RESOLUTION = 4
DEFAULT_MAX_RESOLUTION = 2 ** 10
LAZY_SCAN_RESOLUTION = 16  # above this, scan near the last candidate
MAX_BASE_CELLS = 2_000_000


class NeedAnswer(Exception):
    """Raised by an interactive source when a human answer is required."""

    def __init__(self, player: int, division: tuple[Fraction, ...], allowed: list[int]):
        super().__init__(f"player {player} must pick one of {allowed}")
        self.player = player
        self.division = division
        self.allowed = allowed


@dataclass(frozen=True)
class Division:
    """Lengths of consecutive pieces of [0,1], numbered left to right."""

    lengths: tuple[Fraction, ...]

    def __post_init__(self):
        if any(x < 0 for x in self.lengths) or sum(self.lengths) != 1:
            raise ValueError("lengths must be nonnegative and sum to 1")

    @property
    def cuts(self) -> tuple[Fraction, ...]:
        out, acc = [], Fraction(0)
        for x in self.lengths[:-1]:
            acc += x
            out.append(acc)
        return tuple(out)

    @classmethod
    def from_cuts(cls, cuts, n: int) -> "Division":
        pts = [Fraction(0)] + [frac(c) for c in cuts] + [Fraction(1)]
        if len(pts) != n + 1:
            raise ValueError("cut count does not match piece count")
        return cls(tuple(pts[i + 1] - pts[i] for i in range(n)))


# ---------------------------------------------------------------------------
# preference sources


class CakeSource:
    """Automated player: prefers the allowed piece of largest mass."""

    def __init__(self, valuation: Valuation):
        if valuation.total <= 0:
            raise ValueError("valuation must have positive total mass")
        self.valuation = valuation

    def preferred(self, division: Division, allowed: list[int]) -> int:
        values = self.valuation.piece_values(division.cuts)
        return max(allowed, key=lambda j: (values[j - 1], -j))

    def piece_values(self, division: Division) -> list[Fraction]:
        return self.valuation.piece_values(division.cuts)


class RentSource:
    """Automated roommate with quasilinear utility (room value - price)."""

    def __init__(self, values):
        self.values = tuple(frac(v) for v in values)

    def utilities(self, prices) -> list[Fraction]:
        return [v - p for v, p in zip(self.values, prices)]

    def preferred_room(self, prices, allowed: list[int]) -> int:
        utils = self.utilities(prices)
        return max(allowed, key=lambda j: (utils[j - 1], -j))


class OracleSource:
    """Interactive player backed by a transcript of recorded answers.

    ``answers`` maps (division lengths) -> piece.  Unknown queries raise
    NeedAnswer, which a session layer converts into a pending question.
    Answers outside the allowed set are rejected and re-asked.
    """

    def __init__(self, player: int, answers: dict):
        self.player = player
        self.answers = dict(answers)

    def preferred(self, division: Division, allowed: list[int]) -> int:
        key = division.lengths
        if key in self.answers:
            piece = self.answers[key]
            if piece in allowed:
                return piece
            raise NeedAnswer(self.player, key, allowed)
        raise NeedAnswer(self.player, key, allowed)

    # rent sessions reuse the same storage, keyed by price shares
    def preferred_room(self, prices, allowed: list[int]) -> int:
        key = tuple(prices)
        if key in self.answers and self.answers[key] in allowed:
            return self.answers[key]
        raise NeedAnswer(self.player, key, allowed)


def preferred_piece(source, division: Division, allowed: list[int]) -> int:
    """Ask one source for a preferred piece among the allowed ones."""
    if not allowed:
        raise ValueError("allowed set must be nonempty")
    return source.preferred(division, list(allowed))


# ---------------------------------------------------------------------------
# outcome containers


@dataclass(frozen=True)
class Scenario:
    removed: tuple
    matching: dict
    gap: Fraction


@dataclass(frozen=True)
class FairOutcome:
    kind: str
    mode: str
    division: tuple[Fraction, ...]
    scenarios: tuple[Scenario, ...]
    envy_gap: Fraction | None
    certified: bool
    flag: str
    resolution: int
    gap_history: tuple = ()
    prices: tuple[Fraction, ...] | None = None
    wages: tuple[Fraction, ...] | None = None
    assignment: dict | None = None

    @property
    def cuts(self) -> tuple[Fraction, ...]:
        return Division(self.division).cuts

    def to_json(self) -> dict:
        doc = {
            "kind": self.kind,
            "mode": self.mode,
            "division": [frac_to_json(x) for x in self.division],
            "envy_gap": frac_to_json(self.envy_gap) if self.envy_gap is not None else None,
            "certified": self.certified,
            "flag": self.flag,
            "resolution": self.resolution,
            "scenarios": [
                {
                    "removed": list(s.removed),
                    "matching": {str(a): b for a, b in sorted(s.matching.items())},
                    "gap": frac_to_json(s.gap) if s.gap is not None else None,
                }
                for s in self.scenarios
            ],
        }
        if self.kind == "cake":
            doc["cuts"] = [frac_to_json(x) for x in self.cuts]
        if self.prices is not None:
            doc["prices"] = [frac_to_json(x) for x in self.prices]
        if self.wages is not None:
            doc["wages"] = [frac_to_json(x) for x in self.wages]
        if self.assignment is not None:
            doc["assignment"] = {str(a): b for a, b in sorted(self.assignment.items())}
        return doc


# ---------------------------------------------------------------------------
# scenario evaluation


def bottleneck_assignment(regret: dict, xs: list, ys: list):
    """Cheapest-worst-regret assignment covering the xs injectively.

    ``regret[(x, y)]`` is the exact regret of giving y to x.  Finds the
    smallest threshold t so that the graph of pairs with regret <= t has
    an X-covering matching, and returns (t, matching).  None when even the
    full graph fails Hall's condition.
    """
    thresholds = sorted({regret[(x, y)] for x in xs for y in ys})
    lo, hi = 0, len(thresholds) - 1
    best = None
    while lo <= hi:
        midt = (lo + hi) // 2
        t = thresholds[midt]
        edges = [(x, y) for x in xs for y in ys if regret[(x, y)] <= t]
        status, match = hall_matching(edges, xs, ys)
        if status == "matching":
            best = (t, dict(match))
            hi = midt - 1
        else:
            lo = midt + 1
    return best


def _cake_regrets(sources, division: Division):
    values = [s.piece_values(division) for s in sources]
    best = [max(v) for v in values]
    return values, best


def evaluate_cake_scenarios(sources, division: Division, spec) -> tuple[list[Scenario], Fraction]:
    """Exact per-scenario bottleneck matchings for a candidate division.

    ``spec`` comes from _mode_spec: which side must be covered and what is
    removed per scenario.  Regret of (player, piece) is the player's best
    piece value minus that piece's value, so a zero-gap scenario family is
    an envy-free family.
    """
    values, best = _cake_regrets(sources, division)
    m = len(sources)
    n = len(division.lengths)
    players = list(range(m))
    pieces = list(range(1, n + 1))
    out = []
    worst = Fraction(0)
    for removed in spec["scenarios"]:
        if spec["cover"] == "players":
            avail = [j for j in pieces if j not in removed]
            regret = {(i, j): best[i] - values[i][j - 1] for i in players for j in avail}
            got = bottleneck_assignment(regret, players, avail)
        else:
            avail = [i for i in players if i not in removed]
            regret = {(j, i): best[i] - values[i][j - 1] for j in pieces for i in avail}
            got = bottleneck_assignment(regret, pieces, avail)
        if got is None:
            return [], None
        gap, match = got
        out.append(Scenario(removed=tuple(sorted(removed)), matching=match, gap=gap))
        worst = max(worst, gap)
    return out, worst


def _mode_spec(k: int, mode: str, p: int | None, q: int | None) -> dict:
    if mode == "envyfree":
        m, n = k, k
        scenarios = [frozenset()]
        cover = "players"
    elif mode == "secretive":
        if p is None or not 1 <= p <= k:
            raise ValueError("secretive mode needs 1 <= p <= k")
        m, n = p, k
        r = ceil((k - p) / p)
        scenarios = [frozenset(c) for c in itertools.combinations(range(1, k + 1), r)]
        cover = "players"
    elif mode == "survivor":
        if q is None or not 1 <= q <= k:
            raise ValueError("survivor mode needs 1 <= q <= k")
        m, n = k, q
        r = ceil((k - q) / q)
        scenarios = [frozenset(c) for c in itertools.combinations(range(k), r)]
        cover = "pieces"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return {"m": m, "n": n, "scenarios": scenarios, "cover": cover}


# ---------------------------------------------------------------------------
# exact polishing


def _cell_of(grid: list[Fraction], x: Fraction) -> int:
    c = bisect_right(grid, x) - 1
    return min(max(c, 0), len(grid) - 2)


def solve_cut_ties(
    tie_groups: list[tuple[int, list[int]]],
    valuations: list[Valuation],
    n: int,
    anchor: tuple[Fraction, ...],
) -> Division | None:
    """Cuts making each listed player exactly indifferent within a group.

    ``tie_groups`` holds (player, pieces) pairs.  Piece values are affine
    in the cuts once each cut is assigned a breakpoint cell, and the cut
    order makes the assignments monotone, so all of them are enumerable;
    assignments near the anchor's cells go first.  A solution must land
    inside its assumed cells and reproduce the ties exactly.
    """
    grid = sorted({b for v in valuations for b in v.breakpoints})
    tables = [affine_table(v, grid) for v in valuations]
    totals = [v.total for v in valuations]

    def try_cells(cells) -> list[Fraction] | None:
        rows, rhs = [], []
        for player, pieces in tie_groups:
            table = tables[player]
            exprs = []
            for j in pieces:
                coeff = [Fraction(0)] * (n - 1)
                const = Fraction(0)
                if j == n:
                    const += totals[player]
                else:
                    c0, d0 = table[cells[j - 1]]
                    const += c0
                    coeff[j - 1] += d0
                if j > 1:
                    c1, d1 = table[cells[j - 2]]
                    const -= c1
                    coeff[j - 2] -= d1
                exprs.append((const, coeff))
            base_const, base_coeff = exprs[0]
            for const, coeff in exprs[1:]:
                rows.append([a - b for a, b in zip(coeff, base_coeff)])
                rhs.append(base_const - const)
        sol = solve_pinned(rows, rhs, list(anchor))
        if sol is None:
            return None
        pts = [Fraction(0)] + sol + [Fraction(1)]
        if any(pts[i] > pts[i + 1] for i in range(len(pts) - 1)):
            return None
        return sol

    def accept(cells, sol) -> Division | None:
        if any(not grid[c] <= x <= grid[c + 1] for c, x in zip(cells, sol)):
            return None
        division = Division.from_cuts(sol, n)
        for player, pieces in tie_groups:
            values = valuations[player].piece_values(division.cuts)
            target = values[pieces[0] - 1]
            if any(values[j - 1] != target for j in pieces):
                return None
        return division

    anchor_cells = tuple(_cell_of(grid, c) for c in anchor)
    # fixed-point iteration on the cell guess settles almost always
    cells = anchor_cells
    solvable = False
    for _ in range(4):
        sol = try_cells(cells)
        if sol is None:
            break
        solvable = True
        got = accept(cells, sol)
        if got is not None:
            return got
        nxt = tuple(_cell_of(grid, c) for c in sol)
        if nxt == cells:
            break
        cells = nxt
    if not solvable:
        return None
    # a consistent system missed its assumed cells: try the nearest
    # monotone cell assignments exhaustively
    num_cells = len(grid) - 1
    combos = sorted(
        itertools.combinations_with_replacement(range(num_cells), n - 1),
        key=lambda cs: (sum(abs(a - b) for a, b in zip(cs, anchor_cells)), cs),
    )
    for cs in combos[:128]:
        sol = try_cells(cs)
        if sol is None:
            continue
        got = accept(cs, sol)
        if got is not None:
            return got
    return None


def _near_tie_ladder(values: list[list[Fraction]], best: list[Fraction]):
    """Candidate tie structures from near-argmax slacks, tightest first.

    Yields lists of (player, tied pieces) built from every regret
    threshold that changes the structure; verification downstream decides
    which candidate is the true limit structure.
    """
    slacks = sorted({best[i] - v for i, row in enumerate(values) for v in row})
    seen = set()
    for t in slacks[:8]:
        groups = []
        for i, row in enumerate(values):
            tied = [j + 1 for j, v in enumerate(row) if best[i] - v <= t]
            if len(tied) > 1:
                groups.append((i, tied))
        key = tuple((i, tuple(g)) for i, g in groups)
        if key not in seen:
            seen.add(key)
            yield groups


def polish_cake(sources, division_hint: Division, spec, eps) -> tuple[Division, list[Scenario], Fraction] | None:
    """Try to land on the exact limit division near a candidate point."""
    valuations = [s.valuation for s in sources]
    values, best = _cake_regrets(sources, division_hint)
    n = len(division_hint.lengths)
    for groups in _near_tie_ladder(values, best):
        division = solve_cut_ties(groups, valuations, n, division_hint.cuts)
        if division is None:
            continue
        scenarios, gap = evaluate_cake_scenarios(sources, division, spec)
        if gap is not None and gap <= eps:
            return division, scenarios, gap
    return None


# ---------------------------------------------------------------------------
# cake solver


def cake_labelings(t: Triangulation, sources, n: int) -> list[SpernerLabeling]:
    labs = []
    for src in sources:
        values = {}
        for v in t.vertices:
            allowed = [j + 1 for j in support(v.coords)]
            values[v.id] = src.preferred(Division(v.coords), allowed)
        labs.append(SpernerLabeling(values, n))
    return labs


def _lazy_cake_labeler(t: Triangulation, src):
    def label(base: int) -> int:
        coords = t.coords(base)
        allowed = [j + 1 for j in support(coords)]
        return src.preferred(Division(coords), allowed)

    return label


def _lazy_rent_labeler(t: Triangulation, src, total_rent, n: int):
    def label(base: int) -> int:
        coords = t.coords(base)
        prices = tuple(total_rent * c for c in coords)
        free = [j + 1 for j, c in enumerate(coords) if c == 0]
        allowed = free if free else list(range(1, n + 1))
        return src.preferred_room(prices, allowed)

    return label


def cake_divide(
    sources,
    mode: str = "envyfree",
    p: int | None = None,
    q: int | None = None,
    eps=Fraction(1, 10 ** 6),
    start_resolution: int = DEFAULT_START_RESOLUTION,
    max_resolution: int = DEFAULT_MAX_RESOLUTION,
) -> FairOutcome:
    """Divide [0,1] so that a whole removal-scenario family stays envy-free.

    mode fixes the shape: 'envyfree' (k players, k pieces, no removals),
    'secretive' (first p sources are the active players, k pieces, every
    set of ceil((k-p)/p) pieces removable), 'survivor' (k players, q
    pieces, every set of ceil((k-q)/q) players removable).
    """
    eps = frac(eps)
    k = len(sources)
    if k == 0:
        raise ValueError("need at least one player")
    spec = _mode_spec(k, mode, p, q)
    m, n = spec["m"], spec["n"]
    active = list(sources[:m]) if mode == "secretive" else list(sources)
    target = TargetPoint(a=(Fraction(1, m),) * m, b=(Fraction(1, n),) * n)

    if n == 1:
        # whole cake to whoever stays; nothing to cut
        division = Division((Fraction(1),))
        scenarios, gap = evaluate_cake_scenarios(active, division, spec)
        return FairOutcome(
            kind="cake", mode=mode, division=division.lengths,
            scenarios=tuple(scenarios), envy_gap=gap, certified=True,
            flag="exact", resolution=1, gap_history=(gap,),
        )

    best = None
    history = []
    res = start_resolution
    last = tuple(target.b)
    while res <= max_resolution and res ** (n - 1) <= MAX_BASE_CELLS:
        t = kuhn_triangulation(n, res)
        if res <= LAZY_SCAN_RESOLUTION:
            labs = cake_labelings(t, active, n)
            t_bar = staircase_product(t, m)
            cert = find_covering_simplex(t_bar, labs, target)
        else:
            # at fine resolutions, scan outward from the last candidate
            # with lazily evaluated labels instead of building the product
            labelers = [_lazy_cake_labeler(t, src) for src in active]
            cert = find_covering_simplex_near(t, m, labelers, target, last)
        hint = Division(t.barycenter(cert.sigma))
        last = hint.lengths

        polished = None
        for anchor in [hint] + [Division(t.coords(v)) for v in cert.sigma]:
            polished = polish_cake(active, anchor, spec, eps)
            if polished is not None:
                break
        if polished is not None:
            division, scenarios, gap = polished
            history.append(gap)
            return FairOutcome(
                kind="cake", mode=mode, division=division.lengths,
                scenarios=tuple(scenarios), envy_gap=gap, certified=True,
                flag="exact" if gap == 0 else "eps-certified",
                resolution=res, gap_history=tuple(history),
            )

        scenarios, gap = evaluate_cake_scenarios(active, hint, spec)
        if gap is not None and (best is None or gap < best[1]):
            best = ((hint, scenarios), gap, res)
        if best is not None:
            history.append(best[1])
        if gap is not None and gap <= eps:
            return FairOutcome(
                kind="cake", mode=mode, division=hint.lengths,
                scenarios=tuple(scenarios), envy_gap=gap, certified=True,
                flag="eps-certified", resolution=res, gap_history=tuple(history),
            )
        res *= 2

    if best is None:
        raise StructuralError("no evaluable division found")
    (division, scenarios), gap, res = best
    return FairOutcome(
        kind="cake", mode=mode, division=division.lengths,
        scenarios=tuple(scenarios), envy_gap=gap, certified=False,
        flag="non-certified", resolution=res, gap_history=tuple(history),
    )


# ---------------------------------------------------------------------------
# rental harmony


def rent_labelings(t: Triangulation, sources, total_rent: Fraction, n: int):
    """Room picks at each price vertex; free rooms override the support.

    At boundary vertices some rooms are free and the oracle must choose
    among them (the relabeling that restores the covering guarantee); at
    interior vertices every room is allowed.
    """
    labs = []
    for src in sources:
        values = {}
        for v in t.vertices:
            prices = tuple(total_rent * c for c in v.coords)
            free = [j + 1 for j, c in enumerate(v.coords) if c == 0]
            allowed = free if free else list(range(1, n + 1))
            values[v.id] = src.preferred_room(prices, allowed)
        labs.append(SpernerLabeling(values, n))
    return labs


def evaluate_rent_scenarios(sources, prices):
    """Bottleneck room->player matchings for every single-player removal."""
    k = len(sources)
    n = len(prices)
    utilities = [src.utilities(prices) for src in sources]
    best = [max(u) for u in utilities]
    rooms = list(range(1, n + 1))
    out = []
    worst = Fraction(0)
    for removed in range(k):
        avail = [i for i in range(k) if i != removed]
        regret = {(j, i): best[i] - utilities[i][j - 1] for j in rooms for i in avail}
        got = bottleneck_assignment(regret, rooms, avail)
        if got is None:
            return None, None
        gap, match = got
        out.append(Scenario(removed=(removed,), matching=match, gap=gap))
        worst = max(worst, gap)
    return out, worst


def polish_rent(sources, total_rent, y_hint, eps):
    """Exact price vector from a candidate's near-tie structure."""
    n = len(y_hint)
    prices_hint = [total_rent * c for c in y_hint]
    utilities = [src.utilities(prices_hint) for src in sources]
    best = [max(u) for u in utilities]
    for groups in _near_tie_ladder(utilities, best):
        rows, rhs = [], []
        for player, rooms in groups:
            vals = sources[player].values
            base = rooms[0]
            for j in rooms[1:]:
                # v_base - R*y_base = v_j - R*y_j
                row = [Fraction(0)] * n
                row[base - 1] = -total_rent
                row[j - 1] = total_rent
                rows.append(row)
                rhs.append(vals[j - 1] - vals[base - 1])
        rows.append([Fraction(1)] * n)
        rhs.append(Fraction(1))
        y = solve_pinned(rows, rhs, list(y_hint))
        if y is None or any(c < 0 for c in y):
            continue
        prices = tuple(total_rent * c for c in y)
        scenarios, gap = evaluate_rent_scenarios(sources, prices)
        if gap is not None and gap <= eps:
            return tuple(y), prices, scenarios, gap
    return None


def rent_divide(
    sources,
    total_rent,
    eps=Fraction(1, 10 ** 6),
    start_resolution: int = DEFAULT_START_RESOLUTION,
    max_resolution: int = DEFAULT_MAX_RESOLUTION,
) -> FairOutcome:
    """Price k-1 rooms so any single roommate's exit leaves an envy-free
    assignment of every room to the remaining k-1 roommates."""
    total_rent = frac(total_rent)
    if total_rent <= 0:
        raise ValueError("total rent must be positive")
    k = len(sources)
    if k < 2:
        raise ValueError("need at least two roommates")
    n = k - 1
    m = k
    target = TargetPoint(a=(Fraction(1, m),) * m, b=(Fraction(1, n),) * n)

    if n == 1:
        prices = (total_rent,)
        scenarios, gap = evaluate_rent_scenarios(sources, prices)
        return FairOutcome(
            kind="rent", mode="survivor", division=(Fraction(1),),
            scenarios=tuple(scenarios), envy_gap=gap, certified=gap <= eps,
            flag="exact" if gap == 0 else "eps-certified",
            resolution=1, gap_history=(gap,), prices=prices,
        )

    best = None
    history = []
    res = start_resolution
    last = tuple(target.b)
    while res <= max_resolution and res ** (n - 1) <= MAX_BASE_CELLS:
        t = kuhn_triangulation(n, res)
        if res <= LAZY_SCAN_RESOLUTION:
            labs = rent_labelings(t, sources, total_rent, n)
            t_bar = staircase_product(t, m)
            cert = find_covering_simplex(t_bar, labs, target)
        else:
            labelers = [
                _lazy_rent_labeler(t, src, total_rent, n) for src in sources
            ]
            cert = find_covering_simplex_near(t, m, labelers, target, last)
        y_hint = t.barycenter(cert.sigma)
        last = tuple(y_hint)

        polished = None
        for anchor in [y_hint] + [t.coords(v) for v in cert.sigma]:
            polished = polish_rent(sources, total_rent, anchor, eps)
            if polished is not None:
                break
        if polished is not None:
            y, prices, scenarios, gap = polished
            history.append(gap)
            return FairOutcome(
                kind="rent", mode="survivor", division=tuple(y),
                scenarios=tuple(scenarios), envy_gap=gap, certified=True,
                flag="exact" if gap == 0 else "eps-certified",
                resolution=res, gap_history=tuple(history), prices=prices,
            )

        prices = tuple(total_rent * c for c in y_hint)
        scenarios, gap = evaluate_rent_scenarios(sources, prices)
        if gap is not None and (best is None or gap < best[1]):
            best = ((y_hint, prices, scenarios), gap, res)
        if best is not None:
            history.append(best[1])
        if gap is not None and gap <= eps:
            return FairOutcome(
                kind="rent", mode="survivor", division=tuple(y_hint),
                scenarios=tuple(scenarios), envy_gap=gap, certified=True,
                flag="eps-certified", resolution=res,
                gap_history=tuple(history), prices=prices,
            )
        res *= 2

    if best is None:
        raise StructuralError("no evaluable price vector found")
    (y, prices, scenarios), gap, res = best
    return FairOutcome(
        kind="rent", mode="survivor", division=tuple(y),
        scenarios=tuple(scenarios), envy_gap=gap, certified=False,
        flag="non-certified", resolution=res, gap_history=tuple(history),
        prices=prices,
    )


# ---------------------------------------------------------------------------
# worker wages


@dataclass(frozen=True)
class LinearWageUtility:
    """u(j, x) = weight_j * x_j: zero at zero wage by construction."""

    weights: tuple[Fraction, ...]

    def __call__(self, j: int, x) -> Fraction:
        return self.weights[j - 1] * x[j - 1]


@dataclass(frozen=True)
class WageProblem:
    utilities: tuple
    quotas: tuple[int, ...]
    budget: Fraction

    def __post_init__(self):
        if any(k < 0 for k in self.quotas):
            raise ValueError("quotas must be nonnegative")
        if sum(self.quotas) != len(self.utilities):
            raise ValueError("quotas must sum to the number of workers")
        if self.budget <= 0:
            raise ValueError("budget must be positive")


def _wages_from_shares(problem: WageProblem, active: list[int], y) -> tuple[Fraction, ...]:
    x = [Fraction(0)] * len(problem.quotas)
    for idx, j in enumerate(active):
        x[j - 1] = problem.budget * y[idx] / problem.quotas[j - 1]
    return tuple(x)


def evaluate_wage_assignment(problem: WageProblem, x, assignment):
    """Worst regret of the assignment at wage vector x, exactly."""
    worst = Fraction(0)
    n = len(problem.quotas)
    for i, u in enumerate(problem.utilities):
        own = u(assignment[i], x)
        top = max(u(j, x) for j in range(1, n + 1))
        worst = max(worst, top - own)
    return worst


def polish_wages(problem: WageProblem, active, y_hint, eps) -> list:
    """Exact wage-share candidates from the near-tie structure.

    Only linear utilities admit the exact solve; other callables fall back
    to plain refinement.
    """
    if not all(isinstance(u, LinearWageUtility) for u in problem.utilities):
        return []
    out = []
    n_act = len(active)
    x_hint = _wages_from_shares(problem, active, y_hint)
    utilities = [[u(j, x_hint) for j in active] for u in problem.utilities]
    best = [max(row) for row in utilities]
    b = problem.budget
    for groups in _near_tie_ladder(utilities, best):
        rows, rhs = [], []
        for worker, tied in groups:
            w = problem.utilities[worker].weights
            base = active[tied[0] - 1]
            for jj in tied[1:]:
                j = active[jj - 1]
                row = [Fraction(0)] * n_act
                row[tied[0] - 1] = w[base - 1] * b / problem.quotas[base - 1]
                row[jj - 1] = -w[j - 1] * b / problem.quotas[j - 1]
                rows.append(row)
                rhs.append(Fraction(0))
        rows.append([Fraction(1)] * n_act)
        rhs.append(Fraction(1))
        y = solve_pinned(rows, rhs, list(y_hint))
        if y is None or any(c < 0 for c in y):
            continue
        out.append(tuple(y))
    return out


def worker_wages(
    problem: WageProblem,
    eps=Fraction(1, 10 ** 6),
    start_resolution: int = DEFAULT_START_RESOLUTION,
    max_resolution: int = DEFAULT_MAX_RESOLUTION,
):
    """Wages meeting the budget with exact per-factory quotas, making every
    assigned worker's own factory a near-best choice."""
    eps = frac(eps)
    m = len(problem.utilities)
    active = [j + 1 for j, kq in enumerate(problem.quotas) if kq > 0]
    n_act = len(active)
    target = TargetPoint(
        a=(Fraction(1, m),) * m,
        b=tuple(Fraction(problem.quotas[j - 1], m) for j in active),
    )

    def attempt(y) -> FairOutcome | None:
        x = _wages_from_shares(problem, active, y)
        n = len(problem.quotas)
        utilities = [[u(j, x) for j in range(1, n + 1)] for u in problem.utilities]
        best = [max(row) for row in utilities]
        edges = [
            (i, j)
            for i in range(m)
            for j in active
            if best[i] - utilities[i][j - 1] <= eps
        ]
        quotas = {j: problem.quotas[j - 1] for j in active}
        assignment = quota_assignment(edges, list(range(m)), quotas)
        if assignment is None:
            return None
        gap = evaluate_wage_assignment(problem, x, assignment)
        if gap > eps:
            return None
        return FairOutcome(
            kind="wages", mode="quota", division=tuple(y),
            scenarios=(), envy_gap=gap, certified=True,
            flag="exact" if gap == 0 else "eps-certified",
            resolution=0, wages=x, assignment=assignment,
        )

    if n_act == 1:
        out = attempt((Fraction(1),))
        if out is None:
            raise StructuralError("single-factory assignment failed")
        return out

    best_raw = None
    res = start_resolution
    while res <= max_resolution:
        t = kuhn_triangulation(n_act, res)
        labs = []
        for u in problem.utilities:
            values = {}
            for v in t.vertices:
                x = _wages_from_shares(problem, active, v.coords)
                allowed = [idx + 1 for idx in support(v.coords)]
                values[v.id] = max(
                    allowed, key=lambda idx: (u(active[idx - 1], x), -idx)
                )
            labs.append(SpernerLabeling(values, n_act))
        t_bar = staircase_product(t, m)
        cert = find_covering_simplex(t_bar, labs, target)
        y_hint = t.barycenter(cert.sigma)

        for anchor in [y_hint] + [t.coords(v) for v in cert.sigma]:
            for y in polish_wages(problem, active, anchor, eps):
                out = attempt(y)
                if out is not None:
                    return replace(out, resolution=res)
        out = attempt(y_hint)
        if out is not None:
            return replace(out, resolution=res)
        x = _wages_from_shares(problem, active, y_hint)
        if best_raw is None:
            best_raw = (tuple(y_hint), x, res)
        res *= 2

    y, x, res = best_raw
    return FairOutcome(
        kind="wages", mode="quota", division=y, scenarios=(),
        envy_gap=None, certified=False, flag="non-certified",
        resolution=res, wages=x, assignment=None,
    )
