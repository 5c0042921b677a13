import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multilabel.complexes import Chain, edgewise_sphere, validate_triangulation
from multilabel.rational import (
    convex_combination,
    det,
    det_sign,
    frac,
    solve_pinned,
    transportation_weights,
)


class TestFrac:
    def test_accepted_forms(self):
        assert frac(3) == Fraction(3)
        assert frac("2/6") == Fraction(1, 3)
        assert frac([2, 6]) == Fraction(1, 3)
        assert frac(0.25) == Fraction(1, 4)
        # decimal semantics, not binary-float semantics
        assert frac(0.1) == Fraction(1, 10)

    def test_rejects_bool_and_junk(self):
        with pytest.raises(TypeError):
            frac(True)
        with pytest.raises(TypeError):
            frac({"n": 1})


class TestDet:
    def test_known_values(self):
        m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(2)]]
        assert det(m) == 3 and det_sign(m) == 1
        m = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
        assert det(m) == -1 and det_sign(m) == -1
        m = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
        assert det(m) == 0 and det_sign(m) == 0

    @given(
        st.lists(
            st.lists(st.integers(-5, 5), min_size=3, max_size=3),
            min_size=3,
            max_size=3,
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_matches_cofactor_expansion(self, rows):
        m = [[Fraction(x) for x in r] for r in rows]
        ref = Fraction(0)
        for perm in itertools.permutations(range(3)):
            sign = 1
            for i in range(3):
                for j in range(i + 1, 3):
                    if perm[i] > perm[j]:
                        sign = -sign
            term = Fraction(1)
            for i in range(3):
                term *= m[i][perm[i]]
            ref += sign * term
        assert det(m) == ref
        assert det_sign(m) == (0 if ref == 0 else (1 if ref > 0 else -1))


class TestSolvePinned:
    def test_square_system(self):
        a = [[Fraction(1), Fraction(1)], [Fraction(1), Fraction(-1)]]
        b = [Fraction(3), Fraction(1)]
        assert solve_pinned(a, b, [Fraction(0), Fraction(0)]) == [Fraction(2), Fraction(1)]

    def test_underdetermined_pins_free_variables(self):
        a = [[Fraction(1), Fraction(1), Fraction(0)]]
        b = [Fraction(1)]
        pins = [Fraction(0), Fraction(1, 3), Fraction(7)]
        x = solve_pinned(a, b, pins)
        assert x is not None
        assert x[0] + x[1] == 1
        assert x[1] == Fraction(1, 3) and x[2] == Fraction(7)

    def test_inconsistent_returns_none(self):
        a = [[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)]]
        b = [Fraction(1), Fraction(3)]
        assert solve_pinned(a, b, [Fraction(0)] * 2) is None


class TestTransportation:
    def test_tree_solution_unique(self):
        edges = [(0, 1), (0, 3), (1, 2), (1, 3)]
        rows = {0: Fraction(1, 2), 1: Fraction(1, 2)}
        cols = {1: Fraction(1, 3), 2: Fraction(1, 3), 3: Fraction(1, 3)}
        w = transportation_weights(edges, rows, cols)
        assert w is not None
        for i, total in rows.items():
            assert sum(v for (r, _), v in w.items() if r == i) == total
        for j, total in cols.items():
            assert sum(v for (_, c), v in w.items() if c == j) == total

    def test_cycle_rejected(self):
        edges = [(0, 1), (0, 2), (1, 1), (1, 2)]
        rows = {0: Fraction(1, 2), 1: Fraction(1, 2)}
        cols = {1: Fraction(1, 2), 2: Fraction(1, 2)}
        assert transportation_weights(edges, rows, cols) is None

    def test_negative_forced_weight_rejected(self):
        edges = [(0, 1), (1, 1), (1, 2)]
        rows = {0: Fraction(3, 4), 1: Fraction(1, 4)}
        cols = {1: Fraction(1, 2), 2: Fraction(1, 2)}
        assert transportation_weights(edges, rows, cols) is None

    def test_coverage_mismatch_rejected(self):
        edges = [(0, 1)]
        rows = {0: Fraction(1)}
        cols = {1: Fraction(1, 2), 2: Fraction(1, 2)}
        assert transportation_weights(edges, rows, cols) is None


class TestConvexCombination:
    def test_triangle_interior(self):
        pts = [
            [Fraction(1), Fraction(0)],
            [Fraction(0), Fraction(1)],
            [Fraction(0), Fraction(0)],
        ]
        t = convex_combination(pts, [Fraction(1, 4), Fraction(1, 4)])
        assert t == [Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)]

    def test_outside_hull(self):
        pts = [[Fraction(0)], [Fraction(1, 2)]]
        assert convex_combination(pts, [Fraction(3, 4)]) is None

    def test_dependent_family_skipped(self):
        pts = [[Fraction(0)], [Fraction(1)], [Fraction(1, 2)]]
        assert convex_combination(pts, [Fraction(1, 2)]) is None


class TestEdgewiseSphere:
    @pytest.mark.parametrize("n,k", [(2, 3), (3, 2), (3, 4), (4, 2)])
    def test_counts_and_closed_surface(self, n, k):
        t = edgewise_sphere(n, k)
        assert len(t.maximal_simplices) == 2 ** n * k ** (n - 1)
        assert validate_triangulation(t) == []
        # closed pseudomanifold: every ridge in exactly two cells
        ridges = {}
        for cell in t.maximal_simplices:
            for f in itertools.combinations(cell, n - 1):
                ridges[f] = ridges.get(f, 0) + 1
        assert set(ridges.values()) == {2}

    def test_antipodal_free_and_equivariant(self):
        t = edgewise_sphere(3, 3)
        cells = set(t.maximal_simplices)
        for cell in t.maximal_simplices:
            img = t.map_simplex(cell)
            assert img in cells
            assert not set(img) & set(cell)

    def test_mesh_shrinks(self):
        t = edgewise_sphere(2, 8)
        for u, v in t.edges():
            d = sum(abs(a - b) for a, b in zip(t.coords(u), t.coords(v)))
            assert d <= Fraction(2, 8)


def test_chain_validation():
    Chain(((1,), (1, 4), (1, 2, 4)))
    with pytest.raises(ValueError):
        Chain(((1, 2), (1, 3)))
    with pytest.raises(ValueError):
        Chain(((1, 2), (1, 2)))
