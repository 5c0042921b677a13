"""Interactive division sessions driven by recorded answers.

A session is a pure function of its parameters and transcript: replaying
the recorded answers reproduces the same pending query or final outcome
bit for bit.  The solver runs at a fixed resolution announced up front
and scans product cells outward from the target point, so only vertices
near the expected answer ever reach a human.  Outcomes are flagged
resolution-limited: they carry the certificate's matching family but no
exactness claim.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .complexes import StructuralError, kuhn_triangulation, staircase_product
from .fairdiv import Division, _mode_spec
from .labelings import support
from .multisperner import (
    TargetPoint,
    certificate_for_face,
    hall_matching,
    product_vertex_parts,
)
from .rational import frac, frac_to_json

DEFAULT_SESSION_RESOLUTION = 8


class PendingQuery(Exception):
    """The solver needs a human answer before it can continue."""

    def __init__(self, player: int, values: tuple[Fraction, ...], allowed: list[int]):
        super().__init__(f"player {player} must answer")
        self.player = player
        self.values = values
        self.allowed = allowed


@dataclass
class SessionParams:
    kind: str  # "cake" | "rent"
    k: int
    mode: str = "envyfree"  # cake only
    p: int | None = None
    q: int | None = None
    eps: Fraction = Fraction(1, 10 ** 6)
    resolution: int = DEFAULT_SESSION_RESOLUTION
    total_rent: Fraction = Fraction(1)

    def validate(self) -> list[str]:
        problems = []
        if self.kind not in ("cake", "rent"):
            problems.append("kind must be cake or rent")
        if self.k < 1:
            problems.append("k must be positive")
        if self.kind == "rent" and self.k < 2:
            problems.append("rent needs at least two players")
        if self.kind == "cake":
            if self.mode not in ("envyfree", "secretive", "survivor"):
                problems.append("mode must be envyfree, secretive or survivor")
            if self.mode == "secretive" and not (self.p and 1 <= self.p <= self.k):
                problems.append("secretive mode needs 1 <= p <= k")
            if self.mode == "survivor" and not (self.q and 1 <= self.q <= self.k):
                problems.append("survivor mode needs 1 <= q <= k")
        if self.eps <= 0:
            problems.append("eps must be positive")
        if not 1 <= self.resolution <= 64:
            problems.append("resolution must be between 1 and 64")
        if self.kind == "rent" and self.total_rent <= 0:
            problems.append("total rent must be positive")
        return problems

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "mode": self.mode,
            "p": self.p,
            "q": self.q,
            "eps": frac_to_json(self.eps),
            "resolution": self.resolution,
            "total_rent": frac_to_json(self.total_rent),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SessionParams":
        return cls(
            kind=doc["kind"],
            k=int(doc["k"]),
            mode=doc.get("mode", "envyfree"),
            p=doc.get("p"),
            q=doc.get("q"),
            eps=frac(doc.get("eps", [1, 10 ** 6])),
            resolution=int(doc.get("resolution", DEFAULT_SESSION_RESOLUTION)),
            total_rent=frac(doc.get("total_rent", 1)),
        )


def transcript_key(values: tuple[Fraction, ...]) -> tuple:
    return tuple(values)


class TranscriptOracle:
    """Answers lazy label queries from a transcript, else raises."""

    def __init__(self, answers: dict):
        self.answers = answers

    def ask(self, player: int, values: tuple[Fraction, ...], allowed: list[int]) -> int:
        key = (player, transcript_key(values))
        if key in self.answers:
            answer = self.answers[key]
            if answer in allowed:
                return answer
        raise PendingQuery(player, values, allowed)


def _lazy_scan(t, t_bar, target, label_of):
    """First covering face, visiting cells outward from the target.

    Cells are ordered by the L1 distance between their projected
    barycenter and the target's label-side marginal; within a cell, faces
    go by dimension then lexicographic order, which preserves the
    minimality argument cell-locally.
    """
    b = target.b

    def cell_distance(cell):
        proj = tuple(sorted({product_vertex_parts(t_bar, v)[1] for v in cell}))
        bar = t.barycenter(proj)
        return sum(abs(x - y) for x, y in zip(bar, b))

    cells = sorted(t_bar.maximal_simplices, key=lambda c: (cell_distance(c), c))
    for cell in cells:
        faces = []
        for r in range(1, len(cell) + 1):
            faces.extend(itertools.combinations(cell, r))
        faces.sort(key=lambda f: (len(f), f))
        for face in faces:
            cert = certificate_for_face(t_bar, label_of, face, target)
            if cert is not None:
                return cert
    raise StructuralError("no covering simplex at the session resolution")


def run_session(params: SessionParams, answers: dict) -> dict:
    """Advance a session until its next query or final outcome.

    ``answers`` maps (player, point values) to the recorded answer.
    Raises PendingQuery when a new human answer is needed; otherwise
    returns the outcome document.
    """
    oracle = TranscriptOracle(answers)
    if params.kind == "cake":
        spec = _mode_spec(params.k, params.mode, params.p, params.q)
        m, n = spec["m"], spec["n"]
    else:
        m, n = params.k, params.k - 1
    if n == 1:
        return _degenerate_outcome(params, m)
    t = kuhn_triangulation(n, params.resolution)
    t_bar = staircase_product(t, m)
    target = TargetPoint(a=(Fraction(1, m),) * m, b=(Fraction(1, n),) * n)
    cache: dict[tuple[int, int], int] = {}

    class _RowLabeler:
        def __init__(self, row: int):
            self.row = row

        def __getitem__(self, base: int) -> int:
            key = (self.row, base)
            if key not in cache:
                coords = t.coords(base)
                if params.kind == "cake":
                    allowed = [j + 1 for j in support(coords)]
                    values = coords
                else:
                    prices = tuple(params.total_rent * c for c in coords)
                    free = [j + 1 for j, c in enumerate(coords) if c == 0]
                    allowed = free if free else list(range(1, n + 1))
                    values = prices
                cache[key] = oracle.ask(self.row, values, allowed)
            return cache[key]

    labelers = [_RowLabeler(row) for row in range(m)]
    cert = _lazy_scan(t, t_bar, target, labelers)
    division = Division(t.barycenter(cert.sigma))

    scenarios = []
    if params.kind == "cake":
        cover = spec["cover"]
        for removed in spec["scenarios"]:
            if cover == "players":
                edges = list(cert.graph)
                status, match = hall_matching(
                    edges, list(range(m)), list(range(1, n + 1)), removed
                )
            else:
                edges = [(j, i) for (i, j) in cert.graph]
                status, match = hall_matching(
                    edges, list(range(1, n + 1)), list(range(m)), removed
                )
            if status != "matching":
                raise StructuralError("certificate lost a scenario matching")
            scenarios.append(
                {
                    "removed": sorted(removed),
                    "matching": {str(a): b for a, b in sorted(match.items())},
                }
            )
    else:
        for removed in range(m):
            edges = [(j, i) for (i, j) in cert.graph]
            status, match = hall_matching(
                edges, list(range(1, n + 1)), list(range(m)), {removed}
            )
            if status != "matching":
                raise StructuralError("certificate lost a scenario matching")
            scenarios.append(
                {
                    "removed": [removed],
                    "matching": {str(a): b for a, b in sorted(match.items())},
                }
            )

    doc = {
        "kind": params.kind,
        "mode": params.mode if params.kind == "cake" else "survivor",
        "division": [frac_to_json(x) for x in division.lengths],
        "cuts": [frac_to_json(x) for x in division.cuts],
        "scenarios": scenarios,
        "certificate": cert.to_json(),
        "envy_gap": None,
        "certified": False,
        "flag": "resolution-limited",
        "resolution": params.resolution,
    }
    if params.kind == "rent":
        doc["prices"] = [
            frac_to_json(params.total_rent * x) for x in division.lengths
        ]
    return doc


def _degenerate_outcome(params: SessionParams, m: int) -> dict:
    if params.kind == "rent":
        scenarios = [
            {"removed": [i], "matching": {"1": min(x for x in range(m) if x != i)}}
            for i in range(m)
        ]
    else:
        scenarios = [{"removed": [], "matching": {"0": 1}}]
    doc = {
        "kind": params.kind,
        "mode": params.mode if params.kind == "cake" else "survivor",
        "division": [frac_to_json(Fraction(1))],
        "cuts": [],
        "scenarios": scenarios,
        "certificate": None,
        "envy_gap": None,
        "certified": True,
        "flag": "exact",
        "resolution": 1,
    }
    if params.kind == "rent":
        doc["prices"] = [frac_to_json(params.total_rent)]
    return doc


def answers_from_transcript(transcript: list[dict]) -> dict:
    out = {}
    for entry in transcript:
        values = tuple(frac(x) for x in entry["values"])
        out[(int(entry["player"]), values)] = int(entry["answer"])
    return out


def scripted_answers(params: SessionParams, sources) -> list[dict]:
    """Drive a session to completion with automated sources; returns the
    transcript an interactive player would have produced."""
    transcript: list[dict] = []
    while True:
        try:
            run_session(params, answers_from_transcript(transcript))
            return transcript
        except PendingQuery as q:
            src = sources[q.player]
            if params.kind == "cake":
                answer = src.preferred(Division(q.values), q.allowed)
            else:
                answer = src.preferred_room(q.values, q.allowed)
            transcript.append(
                {
                    "player": q.player,
                    "values": [frac_to_json(x) for x in q.values],
                    "allowed": q.allowed,
                    "answer": answer,
                }
            )
