"""Exact max-affine calculus: values, subdifferentials, stratification,
duality map, conjugation.

Expected subdifferentials come from hand enumeration of active sign
patterns; stratum counts come from combinatorial enumeration (sign patterns
for l1, nonempty argmax subsets for max, faces of the orthant for the
indicator).
"""

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from spectralift import corpus
from spectralift.errors import DomainError, InputError
from spectralift.polyfun import (MaxAffineFn, biconjugate_check,
                                 conjugate_stratification, conjugate_value,
                                 dual_map, fenchel_young_check, normal_cone,
                                 polar, tangent_cone)
from spectralift.polyhedra import GenPolyhedron
from spectralift.symmetry import PermutationElement

from conftest import cached_stratification


def fvec(*xs):
    return tuple(F(x) for x in xs)


class TestValue:
    def test_l1(self, l1_2):
        assert l1_2.value([1, -2]) == 3

    def test_max(self):
        assert corpus.f_max(2).value([1, 1]) == 1

    def test_indicator_outside(self):
        f = corpus.neg_orthant_indicator(2)
        assert f.value([1, 0]) == math.inf
        assert f.value([-1, 0]) == 0

    def test_symmetric_closure_enforced(self):
        f = MaxAffineFn.create([((F(1), F(0)), F(0))],
                               symmetry_mode="permutation")
        assert len(f.pieces) == 2  # e1 and e2

    def test_empty_domain_rejected(self):
        with pytest.raises(InputError):
            MaxAffineFn.create([((F(0), F(0)), F(0))],
                               [((F(1), F(0)), F(-1)),
                                ((F(-1), F(0)), F(-1))],
                               symmetry_mode="plain")


class TestSubdiff:
    def test_max_at_tie(self):
        sd = corpus.f_max(2).subdiff([1, 1])
        assert set(sd.points) == {fvec(1, 0), fvec(0, 1)}
        assert not sd.rays

    def test_l1_on_axis(self, l1_2):
        sd = l1_2.subdiff([2, 0])
        assert set(sd.points) == {fvec(1, 1), fvec(1, -1)}

    def test_indicator_normal_cone_at_origin(self):
        sd = corpus.neg_orthant_indicator(2).subdiff([0, 0])
        assert sd.contains(fvec(3, 5))
        assert not sd.contains(fvec(-1, 0))

    def test_outside_domain_raises(self):
        with pytest.raises(DomainError):
            corpus.neg_orthant_indicator(2).subdiff([1, 0])

    def test_constant_on_stratum(self, l1_2, strat_l1_2):
        for s in strat_l1_2.strata:
            other = s.closure.ri_point()
            assert l1_2.subdiff(other).poly_eq(l1_2.subdiff(s.representative))

    def test_permutation_equivariance(self, l1_3):
        x = fvec(2, 0, -1)
        sigma = PermutationElement((2, 0, 1))
        sd_perm = l1_3.subdiff(sigma.apply(x))
        sd_mapped = l1_3.subdiff(x).map_permutation(sigma)
        assert sd_perm.poly_eq(sd_mapped)


class TestStratify:
    def test_l1_2_has_9_strata(self, strat_l1_2):
        assert len(strat_l1_2.strata) == 9
        assert sorted(s.dim for s in strat_l1_2.strata) == \
            [0, 1, 1, 1, 1, 2, 2, 2, 2]

    def test_fmax_2_has_3_strata(self):
        s = cached_stratification(corpus.f_max(2))
        assert len(s.strata) == 3
        assert sorted(st_.dim for st_ in s.strata) == [1, 2, 2]

    def test_neg_orthant_2_has_4_strata(self):
        s = cached_stratification(corpus.neg_orthant_indicator(2))
        assert len(s.strata) == 4
        assert sorted(st_.dim for st_ in s.strata) == [0, 1, 1, 2]

    def test_fmax_3_matches_argmax_enumeration(self):
        s = cached_stratification(corpus.f_max(3))
        assert len(s.strata) == 7  # nonempty subsets of {1,2,3}

    def test_l1_3_has_27_strata(self, strat_l1_3):
        assert len(strat_l1_3.strata) == 27  # 3^n sign patterns

    def test_partition_property(self, l1_2, strat_l1_2):
        pts = [fvec(0, 0), fvec(1, 1), fvec(1, 0), fvec(-3, 2),
               fvec(F(1, 3), F(-2, 7))]
        for x in pts:
            hits = [s for s in strat_l1_2.strata if s.contains(l1_2, x)]
            assert len(hits) == 1

    def test_frontier_checked(self, strat_l1_2):
        assert strat_l1_2.frontier_checked
        # origin lies in the closure of everything
        origin = strat_l1_2.stratum_of(fvec(0, 0))
        preds = [i for i, j in strat_l1_2.closure_order if i == origin]
        assert len(preds) == 8

    def test_sym_orbits_l1_2(self, strat_l1_2):
        sizes = sorted(len(o) for o in strat_l1_2.sym_orbits)
        # origin, ++ and -- quadrants fixed; axes pair up, +- pairs with -+
        assert sizes == [1, 1, 1, 2, 2, 2]


class TestDualMap:
    def test_open_quadrant_maps_to_vertex(self, l1_2, strat_l1_2):
        i = strat_l1_2.stratum_of(fvec(1, 1))
        d = dual_map(l1_2, strat_l1_2.strata[i])
        assert d.closure.points == (fvec(1, 1),)
        assert d.contains(fvec(1, 1))

    def test_origin_maps_to_open_box(self, l1_2, strat_l1_2):
        i = strat_l1_2.stratum_of(fvec(0, 0))
        d = dual_map(l1_2, strat_l1_2.strata[i])
        assert d.contains(fvec(0, 0))
        assert not d.contains(fvec(1, 0))  # boundary of the box

    def test_interior_of_domain_maps_to_zero(self):
        f = corpus.neg_orthant_indicator(2)
        s = cached_stratification(f)
        i = s.stratum_of(fvec(-1, -1))
        d = dual_map(f, s.strata[i])
        assert d.closure.points == (fvec(0, 0),)

    def test_orbit_union(self, l1_2, strat_l1_2):
        i = strat_l1_2.stratum_of(fvec(2, 0))
        orbit = strat_l1_2.orbit_of(i)
        u = dual_map(l1_2, orbit, strat_l1_2)
        assert u.contains(fvec(1, F(1, 2)))   # ri of {1} x [-1,1]
        assert u.contains(fvec(F(1, 2), 1))   # the swapped copy
        assert not u.contains(fvec(1, 1))     # corner: boundary of both


class TestConjugation:
    def test_fmax_conjugate_is_simplex_indicator(self):
        f = corpus.f_max(2)
        assert conjugate_value(f, [F(1, 2), F(1, 2)]) == 0
        assert conjugate_value(f, [1, 1]) == math.inf
        assert conjugate_value(f, [F(1, 4), F(1, 4)]) == math.inf  # off plane

    def test_l1_conjugate_is_box_indicator(self, l1_2):
        assert conjugate_value(l1_2, [1, 1]) == 0
        assert conjugate_value(l1_2, [2, 0]) == math.inf

    def test_support_function_of_orthant(self):
        f = corpus.neg_orthant_indicator(2)
        assert conjugate_value(f, [1, 1]) == 0
        assert conjugate_value(f, [3, 5]) == 0
        assert conjugate_value(f, [-1, 1]) == math.inf

    def test_fenchel_young(self, l1_2):
        assert fenchel_young_check(l1_2, [2, 0], [1, 0])
        assert fenchel_young_check(l1_2, [2, 0], [0, 1])
        assert fenchel_young_check(l1_2, [0, 0], [0, 0])

    @given(st.lists(st.integers(-4, 4), min_size=2, max_size=2),
           st.lists(st.integers(-2, 2), min_size=2, max_size=2))
    @settings(max_examples=40, deadline=None)
    def test_fenchel_young_random(self, x, y):
        f = corpus.ell1(2)
        assert fenchel_young_check(f, [F(v, 3) for v in x],
                                   [F(v, 2) for v in y])

    def test_biconjugation(self, l1_2):
        assert biconjugate_check(l1_2, [1, -2])
        assert biconjugate_check(corpus.f_max(2), [0, 0])
        assert biconjugate_check(corpus.neg_orthant_indicator(2), [-1, -1])

    def test_biconjugation_random_rationals(self, l1_2):
        pts = [fvec(F(1, 3), F(-5, 7)), fvec(2, 2), fvec(0, F(9, 4))]
        for x in pts:
            assert biconjugate_check(l1_2, x)


class TestDualityBijection:
    @pytest.mark.parametrize("fname", ["ell1", "f_max", "neg_orthant"])
    def test_j_fstar_inverts_j_f(self, fname):
        f = {"ell1": corpus.ell1, "f_max": corpus.f_max,
             "neg_orthant": corpus.neg_orthant_indicator}[fname](2)
        strat = cached_stratification(f)
        # raises AssertionError inside if the bijection fails
        ds = conjugate_stratification(f, strat, verify_bijection=True)
        assert len(ds.dual_strata) == len(strat.strata)

    def test_l1_dual_strata_shapes(self, l1_2, strat_l1_2):
        ds = conjugate_stratification(l1_2, strat_l1_2,
                                      verify_bijection=False)
        dims = sorted(d.dim() for d in ds.dual_strata)
        assert dims == [0, 0, 0, 0, 1, 1, 1, 1, 2]  # vertices, edges, box

    def test_dual_partition_of_dom_fstar(self, l1_2, strat_l1_2):
        ds = conjugate_stratification(l1_2, strat_l1_2,
                                      verify_bijection=False)
        samples = [fvec(0, 0), fvec(1, 1), fvec(1, F(1, 2)), fvec(1, -1),
                   fvec(F(1, 3), F(2, 3))]
        for y in samples:
            hits = [i for i, d in enumerate(ds.dual_strata) if d.contains(y)]
            assert len(hits) == 1

    def test_dim_complementarity_bound(self, l1_2, strat_l1_2):
        ds = conjugate_stratification(l1_2, strat_l1_2,
                                      verify_bijection=False)
        for s, d in zip(strat_l1_2.strata, ds.dual_strata):
            assert s.dim + d.dim() <= l1_2.n


class TestCones:
    def test_orthant(self):
        f = corpus.neg_orthant_indicator(2)
        t = tangent_cone(f, fvec(0, 0))
        n = normal_cone(f, fvec(0, 0))
        assert t.contains(fvec(-1, -1)) and not t.contains(fvec(1, 0))
        assert n.contains(fvec(1, 1)) and not n.contains(fvec(-1, 0))

    def test_vrep_input(self):
        p = GenPolyhedron((fvec(0, 0), fvec(1, 0))).canonical()
        t = tangent_cone(p, fvec(1, 0))
        assert t.contains(fvec(-1, 0)) and not t.contains(fvec(1, 0))
        n = normal_cone(p, fvec(1, 0))
        assert n.contains(fvec(1, 0)) and n.contains(fvec(1, 5))

    def test_polar_round_trip(self):
        k = GenPolyhedron((fvec(0, 0),), (fvec(1, 0), fvec(1, 1))).canonical()
        assert polar(polar(k)).poly_eq(k)
