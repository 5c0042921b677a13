import itertools
import random
from fractions import Fraction

import pytest

from multilabel.complexes import StructuralError, cross_polytope_sphere
from multilabel.fan import (
    Z2Complex,
    balanced_fan_pairs,
    dimension_coloring,
    fan_search,
    gale_fan,
    multifan_dual,
    multilabeled_fan,
    sphere_complex,
    validate_balanced_coloring,
)
from multilabel.labelings import (
    FanLabeling,
    axis_priority_fan,
    max_alternating_face,
    random_fan,
    validate_compatible,
    validate_fan,
)


def signed_circle(r: int = 5):
    """Symmetric circle triangulation subdivided to mesh below 0.1."""
    return cross_polytope_sphere(2, r)


def crossing_labelings(t):
    """The two valid but incompatible labelings around the circle.

    First: +-2 at (+-1, 0), otherwise the sign of the second coordinate.
    Second: +-2 at (0, +-1), otherwise the sign of the first coordinate.
    """
    v1, v2 = {}, {}
    for v in t.vertices:
        x, y = v.coords
        if (x, y) == (1, 0):
            v1[v.id] = 2
        elif (x, y) == (-1, 0):
            v1[v.id] = -2
        else:
            v1[v.id] = 1 if y > 0 else -1
        if (x, y) == (0, 1):
            v2[v.id] = 2
        elif (x, y) == (0, -1):
            v2[v.id] = -2
        else:
            v2[v.id] = 1 if x > 0 else -1
    return FanLabeling(v1, 2), FanLabeling(v2, 2)


class TestFanSearch:
    def test_square(self):
        t = cross_polytope_sphere(2, 0)
        k = sphere_complex(t)
        lab = FanLabeling({0: 1, 1: -1, 2: 2, 3: -2}, 2)
        edge = fan_search(k, lab, sign=-1)
        labels = sorted((lab.values[v] for v in edge), key=abs)
        assert labels[0] < 0 < labels[1] or (labels[0] < 0 and labels[1] > 0)
        pos = fan_search(k, lab, sign=1)
        assert pos != edge

    @pytest.mark.parametrize("seed", range(30))
    def test_octahedron_random(self, seed):
        t = cross_polytope_sphere(3, 0)
        k = sphere_complex(t)
        lab = random_fan(t, random.Random(seed))
        f = fan_search(k, lab, d=2)
        rep = max_alternating_face(f, lab)
        assert rep.alt == 3 and rep.sign == -1
        # some vertex label exceeds the dimension
        assert any(abs(lab.values[v]) > 2 for v in t.vertex_ids)

    def test_no_witness_is_structural(self):
        t = cross_polytope_sphere(2, 0)
        k = Z2Complex(
            maximal_simplices=t.maximal_simplices,
            involution=t.involution,
            declared_index=1,
            dim=1,
            triangulation=t,
        )
        lab = FanLabeling({0: 1, 1: -1, 2: 1, 3: -1}, 2)
        # adjacent +1/-1 labels are invalid; the search need not succeed
        assert validate_fan(k, lab) != []
        with pytest.raises(StructuralError):
            fan_search(k, lab)


class TestMultilabeledFan:
    def test_single_labeling_reduces_to_plain_search(self):
        t = cross_polytope_sphere(3, 1)
        k = sphere_complex(t)
        lab = random_fan(t, random.Random(3))
        out = multilabeled_fan(k, [lab], [2])
        face = out.alternating_faces[0]
        rep = max_alternating_face(out.simplex, lab)
        assert rep.alt >= 3
        labels = [lab.values[v] for v in face]
        assert all(labels[i] * labels[i + 1] < 0 for i in range(len(labels) - 1))

    @pytest.mark.parametrize("seed", range(25))
    def test_pairs_on_twice_subdivided_octahedron(self, seed):
        t = cross_polytope_sphere(3, 2)
        k = sphere_complex(t)
        rng = random.Random(seed)
        labs = [random_fan(t, rng), random_fan(t, rng)]
        out = multilabeled_fan(k, labs, [1, 1])
        for i, face in enumerate(out.alternating_faces):
            assert len(face) == 2
            # recheck by the independent alternation computation
            rep = max_alternating_face(out.simplex, labs[i])
            assert rep.alt >= 2
            a, b = (labs[i].values[v] for v in face)
            assert abs(a) < abs(b) and a * b < 0

    def test_chain_is_well_formed(self):
        t = cross_polytope_sphere(3, 1)
        k = sphere_complex(t)
        rng = random.Random(7)
        labs = [random_fan(t, rng), random_fan(t, rng)]
        out = multilabeled_fan(k, labs, [1, 1])
        vals = out.chain.mu_values
        assert vals[0] < 0
        assert abs(vals[-1]) > k.declared_index
        for f, g in zip(out.chain.chain, out.chain.chain[1:]):
            assert set(f) < set(g)

    def test_bad_dimension_split_rejected(self):
        t = cross_polytope_sphere(3, 0)
        k = sphere_complex(t)
        lab = axis_priority_fan(t)
        with pytest.raises(ValueError):
            multilabeled_fan(k, [lab, lab], [2, 2])


class TestDualRegression:
    def test_crossing_labelings_are_valid_but_incompatible(self):
        t = signed_circle()
        l1, l2 = crossing_labelings(t)
        assert validate_fan(t, l1) == []
        assert validate_fan(t, l2) == []
        assert not validate_compatible(t, [l1, l2])

    def test_no_simplex_carries_two_in_both(self):
        # exhaustive scan: the large label never appears in both labelings
        t = signed_circle()
        l1, l2 = crossing_labelings(t)
        for f in t.all_faces():
            in_l1 = any(abs(l1.values[v]) == 2 for v in f)
            in_l2 = any(abs(l2.values[v]) == 2 for v in f)
            assert not (in_l1 and in_l2)

    def test_dual_witness_pattern(self):
        t = signed_circle()
        k = sphere_complex(t)
        l1, l2 = crossing_labelings(t)
        out = multifan_dual(k, [l1, l2], [1, 2])
        assert out.js == (1, 1)
        assert out.is_ == (1, 2)
        # the witness sits at the bottom pole reaching into x > 0
        v1, v2 = out.vertices
        assert t.coords(v1) == (Fraction(0), Fraction(-1))
        x, y = t.coords(v2)
        assert x > 0 and y < 0
        assert l1.values[v1] == -1 and l2.values[v2] == 1

    def test_dual_obeys_popularity_on_witness(self):
        t = signed_circle(4)
        k = sphere_complex(t)
        l1, l2 = crossing_labelings(t)
        out = multifan_dual(k, [l1, l2], [1, 2])
        for j in out.js:
            pop = sum(
                1
                for lab in (l1, l2)
                if any(abs(lab.values[v]) == j for v in out.simplex)
            )
            assert pop >= [1, 2][j - 1]

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_compatible_instances_give_increasing_js(self, r):
        # with compatible labelings the label numbers strictly increase
        t = cross_polytope_sphere(2, r)
        lab = axis_priority_fan(t)
        k = sphere_complex(t)
        assert validate_compatible(t, [lab, lab])
        out = multifan_dual(k, [lab, lab], [1, 2])
        assert out.js[0] < out.js[1]
        # recheck r_j counts by enumeration
        for j in out.js:
            pop = sum(
                1
                for la in (lab, lab)
                if any(abs(la.values[v]) == j for v in out.simplex)
            )
            assert pop >= [1, 2][j - 1]

    @pytest.mark.parametrize("seed", range(20))
    def test_random_instances_satisfy_all_conditions(self, seed):
        rng = random.Random(40000 + seed)
        t = cross_polytope_sphere(2, rng.choice([1, 2, 3]))
        k = sphere_complex(t)
        m = rng.choice([1, 2, 3])
        bound = 3
        labs = [random_fan(t, rng, bound=bound) for _ in range(m)]
        # random positive counts summing to m + N - 1
        ls = [1] * bound
        for _ in range(m - 1):
            ls[rng.randrange(bound)] += 1
        out = multifan_dual(k, labs, ls)
        n = k.declared_index + 1
        assert len(out.vertices) == n
        assert len(set(out.vertices)) == n
        for idx, (j, i, v) in enumerate(zip(out.js, out.is_, out.vertices)):
            assert labs[i - 1].values[v] == (-1) ** (idx + 1) * j
            assert v in out.simplex
        for (j1, i1), (j2, i2) in zip(zip(out.js, out.is_), list(zip(out.js, out.is_))[1:]):
            assert j1 <= j2
            if j1 == j2:
                assert i1 < i2
        for j in set(out.js):
            pop = sum(
                1
                for lab in labs
                if any(abs(lab.values[v]) == j for v in out.simplex)
            )
            assert pop >= ls[j - 1]

    def test_single_labeling_is_plain_alternation(self):
        # one labeling with unit popularity counts: the witness vertices
        # carry strictly increasing label numbers with alternating signs
        t = cross_polytope_sphere(3, 1)
        lab = axis_priority_fan(t)
        k = sphere_complex(t)
        out = multifan_dual(k, [lab], [1, 1, 1])
        assert len(out.js) == 3
        assert out.js[0] < out.js[1] < out.js[2]
        assert out.is_ == (1, 1, 1)
        labels = [lab.values[v] for v in out.vertices]
        for idx, x in enumerate(labels):
            assert x == (-1) ** (idx + 1) * out.js[idx]


class TestGaleFan:
    @pytest.mark.parametrize("alpha", list(itertools.product((1, -1), repeat=2)))
    def test_all_sign_vectors_on_circle(self, alpha):
        t = cross_polytope_sphere(2, 2)
        k = sphere_complex(t)
        lab = axis_priority_fan(t)
        sigma, pi = gale_fan(k, [lab, lab], alpha)
        for j in (1, 2):
            assert any(lab.values[v] == alpha[j - 1] * j for v in sigma)
        # oracle: exhaustive search over all simplices and permutations
        assert brute_force_gale(t, [lab, lab], alpha)

    def test_self_paired_permutation_free(self):
        t = cross_polytope_sphere(2, 1)
        k = sphere_complex(t)
        lab = axis_priority_fan(t)
        sigma, pi = gale_fan(k, [lab, lab], (1, 1))
        assert sorted(pi.values()) == [1, 2]

    def test_per_vertex_cancellation_rejected(self):
        t = cross_polytope_sphere(2, 0)
        k = sphere_complex(t)
        l1 = FanLabeling({0: 1, 1: -1, 2: 2, 3: -2}, 2)
        l2 = FanLabeling({0: -1, 1: 1, 2: 2, 3: -2}, 2)
        with pytest.raises(ValueError):
            gale_fan(k, [l1, l2], (1, 1))


def brute_force_gale(t, labs, alpha):
    n = len(labs)
    for f in t.all_faces():
        for perm in itertools.permutations(range(n)):
            if all(
                any(labs[perm[j - 1]].values[v] == alpha[j - 1] * j for v in f)
                for j in range(1, n + 1)
            ):
                return True
    return False


class TestBalancedPairs:
    def test_circle_axis_coloring(self):
        t = cross_polytope_sphere(2, 0)
        k = sphere_complex(t)
        lab = axis_priority_fan(t)
        coloring = {v.id: v.id // 2 + 1 for v in t.vertices}
        assert validate_balanced_coloring(k, coloring, 2) == []
        pairs = balanced_fan_pairs(k, [lab, lab], coloring)
        assert len(pairs) == 2
        assert len({(s, tuple(sorted(a.items()))) for s, a in pairs}) == 2

    def test_subdivided_octahedron_dimension_coloring(self):
        base = cross_polytope_sphere(3, 0)
        t = cross_polytope_sphere(3, 1)
        k = sphere_complex(t)
        coloring = dimension_coloring(base)
        assert validate_balanced_coloring(k, coloring, 3) == []
        lab = axis_priority_fan(t)
        pairs = balanced_fan_pairs(k, [lab, lab, lab], coloring)
        assert len(pairs) == 6
        for sigma, assignment in pairs:
            ordered = sorted(
                sigma, key=lambda v: abs(lab.values[v])
            )
            vals = [lab.values[v] for v in ordered]
            assert vals[0] < 0 < -vals[0]
            for a, b in zip(vals, vals[1:]):
                assert abs(b) > abs(a) and a * b < 0

    def test_degenerate_coloring_rejected(self):
        t = cross_polytope_sphere(2, 0)
        k = sphere_complex(t)
        lab = axis_priority_fan(t)
        bad = {v.id: 1 for v in t.vertices}
        with pytest.raises(ValueError):
            balanced_fan_pairs(k, [lab, lab], bad)
