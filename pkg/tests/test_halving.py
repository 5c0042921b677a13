import random
from fractions import Fraction

import pytest

from multilabel.halving import (
    consensus_halving,
    perturbation_family,
    signed_discrepancy,
)
from multilabel.measures import (
    block_valuation,
    random_valuation,
    uniform_valuation,
)


def interval_discrepancy(measure, outcome):
    """Oracle: odd-union minus even-union mass by direct integration."""
    out = Fraction(0)
    for t, (lo, hi) in enumerate(outcome.intervals):
        sign = 1 if t % 2 == 0 else -1
        out += sign * measure.mass(lo, hi)
    return out


class TestPerturbation:
    def test_disjoint_blocks(self):
        fam = perturbation_family(3, Fraction(1, 8), Fraction(0))
        assert len(fam) == 3
        supports = []
        for v in fam:
            segs = [
                (v.breakpoints[i], v.breakpoints[i + 1])
                for i, d in enumerate(v.densities)
                if d > 0
            ]
            assert len(segs) == 1
            supports.append(segs[0])
        for (a1, b1), (a2, b2) in zip(supports, supports[1:]):
            assert b1 <= a2
        assert all(v.total == Fraction(1, 24) for v in fam)


class TestSingleUniform:
    def test_cut_at_half(self):
        out = consensus_halving([[uniform_valuation()]], n=2, ks=[2])
        assert out.certified
        assert out.intervals[0][1] == Fraction(1, 2)
        v = out.verdicts[0]
        assert v.kind == "splitting"
        assert abs(interval_discrepancy(uniform_valuation(), out)) <= out.eps


class TestHobbyRice:
    @pytest.mark.parametrize("n,seed", [(3, 0), (3, 1), (4, 2), (4, 3)])
    def test_n_minus_one_measures_split(self, n, seed):
        rng = random.Random(seed)
        measures = [random_valuation(rng, grid=8, segments=3) for _ in range(n - 1)]
        out = consensus_halving([measures], n=n, ks=[n])
        assert out.certified
        assert out.verdicts[0].kind == "splitting"
        for mu in measures:
            assert abs(interval_discrepancy(mu, out)) <= out.eps

    def test_interval_count_padded(self):
        out = consensus_halving([[uniform_valuation()]], n=3, ks=[3])
        assert len(out.intervals) == 3


class TestExtremal:
    @pytest.mark.parametrize("n", [2, 3])
    def test_disjoint_blocks_tie_at_extreme(self, n):
        blocks = [
            block_valuation(Fraction(t, n), Fraction(t + 1, n), n) for t in range(n)
        ]
        out = consensus_halving([blocks], n=n, ks=[n])
        assert out.certified
        v = out.verdicts[0]
        assert v.kind == "extremal"
        assert len(v.attained) >= n
        assert v.signs.count(1) >= n // 2
        assert v.signs.count(-1) >= n // 2
        # oracle: recompute the discrepancies by direct integration
        gammas = [abs(interval_discrepancy(mu, out)) for mu in blocks]
        top = max(gammas)
        assert v.gamma == top
        assert sum(1 for g in gammas if top - g <= out.eps) >= n


class TestTwoCollections:
    def test_mixed_family(self):
        rng = random.Random(9)
        m1 = [random_valuation(rng, grid=8, segments=3)]
        m2 = [random_valuation(rng, grid=8, segments=3)]
        # m = 2, n = 2: counts k1 + k2 = 3
        out = consensus_halving([m1, m2], n=2, ks=[1, 2])
        assert out.certified
        for verdict, measures, k in zip(out.verdicts, (m1, m2), (1, 2)):
            if verdict.kind == "extremal":
                assert len(verdict.attained) >= k

    def test_bad_counts_rejected(self):
        with pytest.raises(ValueError):
            consensus_halving([[uniform_valuation()]], n=2, ks=[1])

    def test_extremal_and_splitting_mix(self):
        # two opposed blocks must tie at the extreme; a single uniform
        # measure can always be split at one cut
        blocks = [block_valuation(0, Fraction(1, 2), 2), block_valuation(Fraction(1, 2), 1, 2)]
        out = consensus_halving([blocks, [uniform_valuation()]], n=2, ks=[2, 1])
        assert out.certified
        assert out.verdicts[0].kind == "extremal"
        v = out.verdicts[0]
        assert v.signs.count(1) >= 1 and v.signs.count(-1) >= 1
        # opposing blocks tie exactly at the half cut, splitting the rest
        assert out.verdicts[1].kind == "splitting"
        assert abs(interval_discrepancy(uniform_valuation(), out)) <= out.eps


def test_signed_discrepancy_matches_piece_sum():
    v = uniform_valuation()
    cuts = [Fraction(1, 4), Fraction(1, 2)]
    signs = [1, -1, 1]
    d = signed_discrepancy(v, cuts, signs)
    assert d == Fraction(1, 4) - Fraction(1, 4) + Fraction(1, 2)
