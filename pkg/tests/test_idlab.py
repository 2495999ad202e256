"""Verification-lab probes: expected passes on regular fixtures, expected
failures on the constructed counterexamples."""

from fractions import Fraction as F

import numpy as np
import pytest

from spectralift import corpus
from spectralift.errors import InputError
from spectralift.idlab import (InconclusiveError, identifiability_test,
                               local_uniqueness_check, moreau_gradient_check,
                               numeric_conjugate, orbit_distance_samples,
                               partial_smoothness_check,
                               projection_derivative_check,
                               prox_regularity_probe,
                               proximal_identification_run,
                               scalar_soft_threshold_trace)
from spectralift.lift import spectral_distance
from spectralift.matdecomp import SymMatrix, diag_embed
from spectralift.polyfun import conjugate_value
from spectralift.polyhedra import GenPolyhedron
from spectralift.reports import SpectrumPattern

from conftest import cached_stratification


class TestMoreauGradient:
    def test_orthant_clip(self):
        rep = moreau_gradient_check(corpus.neg_orthant_set(2), [1.0, -2.0])
        assert rep.passed

    def test_inside_set_gradient_is_identity(self):
        rep = moreau_gradient_check(corpus.neg_orthant_set(2), [-1.0, -0.5])
        assert rep.passed

    def test_box_random_points(self):
        rng = np.random.default_rng(0)
        q = corpus.box_set(2)
        worst = 0.0
        for _ in range(25):
            x = rng.uniform(-3, 3, size=2)
            rep = moreau_gradient_check(q, x)
            worst = max(worst, rep.worst_case["deviation"])
            assert rep.passed
        assert worst <= 1e-5

    def test_defect_shrinks_with_step(self):
        # first-order convergence of the central differences, down to the
        # float noise floor
        q = corpus.sym_halfspace_set(2)
        x = [1.3, 0.7]
        defects = [moreau_gradient_check(q, x, step=s,
                                         tol=1.0).worst_case["deviation"]
                   for s in (1e-2, 1e-3, 1e-4)]
        for a, b in zip(defects, defects[1:]):
            assert b <= max(a, 1e-9)


class TestProjectionDerivative:
    def test_line_in_plane(self):
        rep = projection_derivative_check(corpus.axis_line_set(2), [0.0, 0.0])
        assert rep.passed

    def test_orthant_interior_point(self):
        rep = projection_derivative_check(corpus.neg_orthant_set(2),
                                          [-0.5, -0.5])
        assert rep.passed

    def test_orthant_boundary_point(self):
        rep = projection_derivative_check(corpus.neg_orthant_set(2),
                                          [0.0, -1.0])
        assert rep.passed

    def test_requires_point_in_set(self):
        with pytest.raises(InputError):
            projection_derivative_check(corpus.neg_orthant_set(2), [1.0, 0.0])


class TestProxRegularity:
    def test_convex_box_passes(self):
        rep = prox_regularity_probe(corpus.box_set(2), [0.2, -0.1], 0.6, 40, 1)
        assert rep.passed

    def test_two_point_set_small_radius(self):
        rep = prox_regularity_probe(corpus.two_point_set(), [1.0], 0.5, 40, 2)
        assert rep.passed

    def test_two_point_set_large_radius_fails_near_zero(self):
        rep = prox_regularity_probe(corpus.two_point_set(), [1.0], 1.5, 40, 2)
        assert not rep.passed
        assert abs(rep.worst_case["y"][0]) < 1e-9

    def test_polygon_center_fails(self):
        rep = prox_regularity_probe(corpus.polygon_point_set(8), [0.0, 0.0],
                                    0.4, 40, 3)
        assert not rep.passed

    def test_matrix_level_agreement(self):
        rep = prox_regularity_probe(corpus.box_set(2), [0.3, 0.1], 0.5, 15, 4,
                                    spectral=True)
        assert rep.passed
        assert rep.details["matrix_vector_gap"] <= 1e-8


class TestIdentifiability:
    def test_ri_subgradient_identifies(self, l1_2, strat_l1_2):
        mi = strat_l1_2.stratum_of([1, 0])
        rep = identifiability_test(l1_2, strat_l1_2, mi, [1, 0],
                                   [F(1), F(3, 10)], "prox_path", 5, 7)
        assert rep.passed

    def test_boundary_subgradient_counterexample(self, l1_2, strat_l1_2):
        mi = strat_l1_2.stratum_of([1, 0])
        rep = identifiability_test(l1_2, strat_l1_2, mi, [1, 0],
                                   [F(1), F(1)], "stratum_hop", 5, 7,
                                   expect_admissible_failure=True)
        assert rep.passed  # the expected failure occurred

    def test_ri_subgradient_has_no_admissible_hops(self, l1_2, strat_l1_2):
        mi = strat_l1_2.stratum_of([1, 0])
        rep = identifiability_test(l1_2, strat_l1_2, mi, [1, 0],
                                   [F(1), F(3, 10)], "stratum_hop", 5, 7)
        assert rep.details["n_sequences"] == 0  # all hops inadmissible

    def test_lifted_verdict_matches(self, l1_2, strat_l1_2):
        mi = strat_l1_2.stratum_of([1, 0])
        vec = identifiability_test(l1_2, strat_l1_2, mi, [1, 0],
                                   [F(1), F(3, 10)], "all", 3, 11)
        mat = identifiability_test(l1_2, strat_l1_2, mi, [1, 0],
                                   [F(1), F(3, 10)], "all", 3, 11, lifted=True)
        assert vec.passed and mat.passed

    def test_rejects_non_subgradient(self, l1_2, strat_l1_2):
        mi = strat_l1_2.stratum_of([1, 0])
        with pytest.raises(InputError):
            identifiability_test(l1_2, strat_l1_2, mi, [1, 0], [F(2), F(0)],
                                 "prox_path", 2, 0)


class TestPartialSmoothness:
    def test_every_stratum_of_l1(self, l1_2, strat_l1_2):
        for s in strat_l1_2.strata:
            assert partial_smoothness_check(l1_2, s).passed

    def test_linf_at_origin(self):
        f = corpus.linf_norm(2)
        strat = cached_stratification(f)
        i = strat.stratum_of([0, 0])
        rep = partial_smoothness_check(f, strat.strata[i])
        assert rep.passed  # aff subdiff(0) = R^2 = normal space of {0}

    def test_sharpness_failure_on_fattened_manifold(self, l1_2):
        axis = GenPolyhedron(((F(0), F(0)),),
                             ((F(1), F(0)), (F(-1), F(0)))).canonical()
        rep = partial_smoothness_check(l1_2, axis, [0, 0])
        assert not rep.passed
        assert not rep.details["sharpness"]


class TestLocalUniqueness:
    def test_same_stratum_agrees(self, l1_2, strat_l1_2):
        mi = strat_l1_2.stratum_of([1, 0])
        rep = local_uniqueness_check(l1_2, strat_l1_2.strata[mi],
                                     strat_l1_2.strata[mi], [1, 0], 0.4)
        assert rep.passed and not rep.details["vacuous"]

    def test_gate_reports_vacuous(self, l1_2, strat_l1_2):
        mi = strat_l1_2.stratum_of([1, 0])
        axis = GenPolyhedron(((F(0), F(0)),),
                             ((F(1), F(0)), (F(-1), F(0)))).canonical()
        rep = local_uniqueness_check(l1_2, strat_l1_2.strata[mi], axis,
                                     [0, 0], 0.4)
        assert rep.passed and rep.details["vacuous"]

    def test_axis_patch_agrees_near_interior_point(self, l1_2, strat_l1_2):
        mi = strat_l1_2.stratum_of([1, 0])
        axis = GenPolyhedron(((F(0), F(0)),),
                             ((F(1), F(0)), (F(-1), F(0)))).canonical()
        rep = local_uniqueness_check(l1_2, strat_l1_2.strata[mi], axis,
                                     [1, 0], 0.3, samples=500, seed=5)
        assert rep.passed and not rep.details["vacuous"]


class TestProximalRuns:
    def test_trace_matches_scalar_oracle(self):
        fn = corpus.sum_abs_eigenvalues(3)
        tr = proximal_identification_run(fn, diag_embed([1.2, 0.3, -0.2]),
                                         F(1, 2), 40)
        assert tr.identified_at == 3
        oracle = scalar_soft_threshold_trace([1.2, 0.3, -0.2], 0.5, 40, 1e-8)
        assert tr.limit_pattern == oracle

    def test_fixed_point_start(self):
        fn = corpus.sum_abs_eigenvalues(2)
        tr = proximal_identification_run(fn, diag_embed([0.0, 0.0]), F(1, 2),
                                         20)
        assert tr.identified_at == 0

    def test_truncated_run_reports_none(self):
        fn = corpus.sum_abs_eigenvalues(2)
        tr = proximal_identification_run(fn, diag_embed([5.0, -4.0]), F(1, 10),
                                         1)
        assert len(tr.iterates) == 2
        assert tr.identified_at is None

    def test_pattern_json(self):
        p = SpectrumPattern.from_values([0.7, 0.0, 0.0], 1e-8)
        assert p.to_json() == [[1, 1], [0, 2]]


class TestNumericConjugate:
    def test_quartic_pair(self):
        v = numeric_conjugate(corpus.quartic_quarter, [1.0, 1.0])
        assert v == pytest.approx(corpus.quartic_conjugate_exact([1, 1]),
                                  abs=1e-4)

    def test_zero(self):
        v = numeric_conjugate(corpus.quartic_quarter, [0.0, 0.0])
        assert v == pytest.approx(0.0, abs=1e-8)

    def test_agrees_with_exact_conjugate_of_l1(self, l1_2):
        oracle = lambda x: l1_2.value_float(x, 0.0)
        v = numeric_conjugate(oracle, [0.5, 0.0], grid=(-2.0, 2.0, 21))
        assert v == pytest.approx(float(conjugate_value(l1_2,
                                                        [F(1, 2), F(0)])),
                                  abs=1e-6)

    def test_boundary_attainment_is_inconclusive(self):
        linear = lambda x: float(0.1 * x[0])
        with pytest.raises(InconclusiveError):
            numeric_conjugate(linear, [1.0], grid=(-2.0, 2.0, 11))


class TestOrbitDistanceOracle:
    def test_library_never_exceeds_samples(self):
        q = corpus.box_set(2)
        x = SymMatrix([[1.4, 0.3], [0.3, -2.2]])
        lib = spectral_distance(q, x)
        samples = orbit_distance_samples(q, x, 60, seed=5)
        assert all(lib <= s + 1e-9 for s in samples)
        assert abs(lib - min(samples)) <= 1e-5
