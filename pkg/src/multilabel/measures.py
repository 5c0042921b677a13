"""Piecewise-constant measures on [0,1] with exact rational arithmetic."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .rational import frac, frac_to_json


@dataclass(frozen=True)
class Valuation:
    """Nonnegative piecewise-constant density on [0,1].

    ``breakpoints`` must start at 0, end at 1 and strictly increase;
    ``densities`` holds one value per segment.
    """

    breakpoints: tuple[Fraction, ...]
    densities: tuple[Fraction, ...]

    def __post_init__(self):
        bp, de = self.breakpoints, self.densities
        if len(bp) < 2 or len(de) != len(bp) - 1:
            raise ValueError("need one density per segment")
        if bp[0] != 0 or bp[-1] != 1:
            raise ValueError("breakpoints must span [0,1]")
        if any(bp[i] >= bp[i + 1] for i in range(len(bp) - 1)):
            raise ValueError("breakpoints must strictly increase")
        if any(d < 0 for d in de):
            raise ValueError("densities must be nonnegative")

    @property
    def total(self) -> Fraction:
        return self.mass(Fraction(0), Fraction(1))

    def mass(self, lo: Fraction, hi: Fraction) -> Fraction:
        """Exact integral of the density over [lo, hi]."""
        if hi < lo:
            raise ValueError("empty interval bounds reversed")
        out = Fraction(0)
        for i, d in enumerate(self.densities):
            if d == 0:
                continue
            a, b = self.breakpoints[i], self.breakpoints[i + 1]
            left, right = max(a, lo), min(b, hi)
            if right > left:
                out += d * (right - left)
        return out

    def cumulative(self, x: Fraction) -> Fraction:
        return self.mass(Fraction(0), x)

    def piece_values(self, cuts: tuple[Fraction, ...]) -> list[Fraction]:
        """Masses of the pieces delimited by 0 <= cuts <= 1."""
        points = (Fraction(0),) + tuple(cuts) + (Fraction(1),)
        return [self.mass(points[i], points[i + 1]) for i in range(len(points) - 1)]

    def to_json(self) -> dict:
        return {
            "breakpoints": [frac_to_json(x) for x in self.breakpoints],
            "densities": [frac_to_json(x) for x in self.densities],
        }


def uniform_valuation() -> Valuation:
    return Valuation((Fraction(0), Fraction(1)), (Fraction(1),))


def block_valuation(lo, hi, density=1) -> Valuation:
    """Uniform mass on [lo, hi], zero elsewhere."""
    lo, hi, density = frac(lo), frac(hi), frac(density)
    if not 0 <= lo < hi <= 1:
        raise ValueError("need 0 <= lo < hi <= 1")
    bp = [Fraction(0)]
    de = []
    if lo > 0:
        bp.append(lo)
        de.append(Fraction(0))
    bp.append(hi)
    de.append(density)
    if hi < 1:
        bp.append(Fraction(1))
        de.append(Fraction(0))
    return Valuation(tuple(bp), tuple(de))


def affine_table(valuation: Valuation, grid: list[Fraction]) -> list[tuple[Fraction, Fraction]]:
    """Per-cell (constant, slope) of the cumulative mass on a refinement.

    ``grid`` must refine the valuation's breakpoints; entry c describes
    F(x) = const + slope * x on [grid[c], grid[c+1]].
    """
    out = []
    for c in range(len(grid) - 1):
        a = grid[c]
        slope = Fraction(0)
        for i, d in enumerate(valuation.densities):
            if valuation.breakpoints[i] <= a < valuation.breakpoints[i + 1]:
                slope = d
                break
        else:
            if a == 1:
                slope = valuation.densities[-1]
        out.append((valuation.cumulative(a) - slope * a, slope))
    return out


def valuation_from_json(doc: dict) -> Valuation:
    return Valuation(
        breakpoints=tuple(frac(x) for x in doc["breakpoints"]),
        densities=tuple(frac(x) for x in doc["densities"]),
    )


def random_valuation(rng: random.Random, grid: int = 16, segments: int = 4) -> Valuation:
    """Seeded random valuation with total mass 1 on a 1/grid lattice."""
    cuts = sorted(rng.sample(range(1, grid), min(segments - 1, grid - 1)))
    bp = [Fraction(0)] + [Fraction(c, grid) for c in cuts] + [Fraction(1)]
    de = [Fraction(rng.randint(0, 9)) for _ in range(len(bp) - 1)]
    if all(d == 0 for d in de):
        de[rng.randrange(len(de))] = Fraction(1)
    v = Valuation(tuple(bp), tuple(de))
    scale = v.total
    return Valuation(v.breakpoints, tuple(d / scale for d in v.densities))
