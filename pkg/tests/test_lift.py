"""Transfer-principle machinery: spectral values, subdifferential
certificates, ri/rb/aff tests, distance/projection/prox, lifted strata with
the dimension formula, conjugation transfer, singular analogues.

Oracles: classical negative-part projection for the PSD-cone projection,
scalar soft-thresholding for the prox, orbit sampling for distances, and
numerical tangent-rank estimates for lifted dimensions.
"""

import math
from fractions import Fraction as F

import numpy as np
import pytest

from spectralift import corpus
from spectralift.errors import AmbiguousProjectionError, DomainError, InputError
from spectralift.lift import (SpectralFn, lift_dim, lift_stratification,
                              numerical_tangent_dim, prox_fixed_point_residual,
                              sing_project, sing_subdiff,
                              sing_subdiff_membership, sing_value,
                              spectral_conjugate_value, spectral_distance,
                              spectral_project, spectral_prox,
                              spectral_ri_aff_rb, spectral_subdiff,
                              spectral_subdiff_membership, spectral_value,
                              vector_prox)
from spectralift.matdecomp import (SymMatrix, conjugate_by, diag_embed,
                                   eig_sym, random_orthogonal)
from spectralift.rationals import from_float_exact

from conftest import cached_stratification


def random_sym(n, seed):
    rng = np.random.default_rng(seed)
    b = rng.standard_normal((n, n))
    return SymMatrix((b + b.T) / 2)


class TestSpectralValue:
    def test_sum_abs_on_reflection(self):
        fn = corpus.sum_abs_eigenvalues(2)
        assert spectral_value(fn, SymMatrix([[0, 1], [1, 0]])) == \
            pytest.approx(2.0, abs=1e-10)

    def test_top_eigenvalue_identity(self):
        fn = corpus.top_eigenvalue(3)
        assert spectral_value(fn, SymMatrix(np.eye(3))) == \
            pytest.approx(1.0, abs=1e-12)

    def test_indicator_infinite_off_cone(self):
        fn = corpus.nsd_indicator(2)
        assert spectral_value(fn, diag_embed([1, -1])) == math.inf
        assert spectral_value(fn, diag_embed([-1, -1])) == 0.0

    def test_orthogonal_invariance(self):
        fn = corpus.sum_abs_eigenvalues(3)
        rng = np.random.default_rng(0)
        for seed in range(5):
            x = random_sym(3, seed)
            u = random_orthogonal(3, rng)
            assert spectral_value(fn, conjugate_by(u, x)) == \
                pytest.approx(spectral_value(fn, x), abs=1e-9)

    def test_kind_enforced(self):
        with pytest.raises(InputError):
            SpectralFn(corpus.ell1_signed(2), kind="eigenvalue")
        with pytest.raises(InputError):
            SpectralFn(corpus.ell1(2), kind="singular")


class TestSpectralSubdiff:
    def test_top_eig_at_identity_members(self):
        cert = spectral_subdiff(corpus.top_eigenvalue(2), SymMatrix(np.eye(2)))
        assert spectral_subdiff_membership(cert, diag_embed([0.5, 0.5]))
        assert spectral_subdiff_membership(cert, diag_embed([1.0, 0.0]))
        # rank-one projector in a rotated basis still belongs
        rng = np.random.default_rng(2)
        u = random_orthogonal(2, rng).entries
        v = SymMatrix(u.T @ np.diag([1.0, 0.0]) @ u)
        assert spectral_subdiff_membership(cert, v)

    def test_top_eig_rejections(self):
        cert = spectral_subdiff(corpus.top_eigenvalue(2), SymMatrix(np.eye(2)))
        assert not spectral_subdiff_membership(cert, diag_embed([2.0, -1.0]))
        assert not spectral_subdiff_membership(cert, diag_embed([0.4, 0.4]))

    def test_noncommuting_rejected(self):
        fn = corpus.sum_abs_eigenvalues(2)
        cert = spectral_subdiff(fn, diag_embed([2.0, -3.0]))
        assert not spectral_subdiff_membership(
            cert, SymMatrix([[1.0, 0.2], [0.2, -1.0]]))

    def test_unique_gradient_at_simple_spectrum(self):
        fn = corpus.sum_abs_eigenvalues(2)
        cert = spectral_subdiff(fn, diag_embed([2.0, -3.0]))
        assert spectral_subdiff_membership(cert, diag_embed([1.0, -1.0]))
        assert not spectral_subdiff_membership(cert, diag_embed([1.0, 1.0]))

    def test_psd_normal_cone_at_zero(self):
        cert = spectral_subdiff(corpus.nsd_indicator(2),
                                SymMatrix(np.zeros((2, 2))))
        assert spectral_subdiff_membership(cert,
                                           SymMatrix([[1.0, 0.5], [0.5, 1.0]]))
        assert not spectral_subdiff_membership(cert, diag_embed([1.0, -0.1]))

    def test_domain_error(self):
        with pytest.raises(DomainError):
            spectral_subdiff(corpus.nsd_indicator(2), diag_embed([1.0, -1.0]))

    def test_equivariance_under_conjugation(self):
        fn = corpus.sum_abs_eigenvalues(3)
        x = diag_embed([2.0, 1.0, -1.0])
        v = diag_embed([1.0, 1.0, -1.0])
        rng = np.random.default_rng(7)
        u = random_orthogonal(3, rng)
        assert spectral_subdiff_membership(spectral_subdiff(fn, x), v)
        xc, vc = conjugate_by(u, x), conjugate_by(u, v)
        assert spectral_subdiff_membership(spectral_subdiff(fn, xc), vc)

    def test_convex_inequality_for_members(self):
        fn = corpus.sum_abs_eigenvalues(3)
        x = diag_embed([1.0, 1.0, -2.0])
        cert = spectral_subdiff(fn, x)
        rng = np.random.default_rng(5)
        v = diag_embed([1.0, 1.0, -1.0])
        assert spectral_subdiff_membership(cert, v)
        fx = spectral_value(fn, x)
        for seed in range(30):
            y = random_sym(3, seed)
            gap = spectral_value(fn, y) - fx - float(
                np.trace(v.entries @ (y.entries - x.entries)))
            assert gap >= -1e-8


class TestRiRbAff:
    def test_segment_structure_at_identity(self):
        cert = spectral_subdiff(corpus.top_eigenvalue(2), SymMatrix(np.eye(2)))
        assert spectral_ri_aff_rb(cert, "ri", diag_embed([0.5, 0.5]))
        assert spectral_ri_aff_rb(cert, "rb", diag_embed([1.0, 0.0]))
        assert not spectral_ri_aff_rb(cert, "ri", diag_embed([1.0, 0.0]))
        assert spectral_ri_aff_rb(cert, "aff", diag_embed([2.0, -1.0]))
        assert not spectral_ri_aff_rb(cert, "aff", diag_embed([1.0, 1.0]))

    def test_singleton_ri_is_the_point(self):
        fn = corpus.sum_abs_eigenvalues(2)
        cert = spectral_subdiff(fn, diag_embed([2.0, -3.0]))
        assert spectral_ri_aff_rb(cert, "ri", diag_embed([1.0, -1.0]))
        assert not spectral_ri_aff_rb(cert, "rb", diag_embed([1.0, -1.0]))


class TestDistanceAndProjection:
    def test_clip_positive_eigenvalue(self):
        q = corpus.neg_orthant_set(2)
        x = diag_embed([1.0, -2.0])
        assert spectral_distance(q, x) == pytest.approx(1.0, abs=1e-12)
        p = spectral_project(q, x)
        np.testing.assert_allclose(p.entries, np.diag([0.0, -2.0]), atol=1e-12)

    def test_fixed_point_inside(self):
        q = corpus.neg_orthant_set(2)
        x = diag_embed([-1.0, -2.0])
        assert spectral_distance(q, x) == 0.0
        np.testing.assert_allclose(spectral_project(q, x).entries, x.entries)

    def test_matches_negative_part_subtraction(self):
        # projection onto the NSD cone = X minus its positive part
        q = corpus.neg_orthant_set(3)
        for seed in range(10):
            x = random_sym(3, seed)
            p = spectral_project(q, x)
            e = eig_sym(x)
            neg = e.U.entries.T @ np.diag(np.minimum(e.lam, 0.0)) @ e.U.entries
            assert np.linalg.norm(p.entries - neg, "fro") <= 1e-8
            d = spectral_distance(q, x)
            assert abs(np.linalg.norm(x.entries - p.entries, "fro") - d) <= 1e-8

    def test_projection_lands_in_lifted_set(self):
        q = corpus.box_set(3)
        for seed in range(5):
            x = random_sym(3, seed + 40)
            p = spectral_project(q, x)
            lam = [from_float_exact(round(v, 9)) for v in eig_sym(p).lam]
            assert q.contains(lam)

    def test_ambiguous_projection_raises(self):
        q = corpus.two_point_set()
        with pytest.raises(AmbiguousProjectionError):
            spectral_project(q, SymMatrix([[0.0]]))


class TestProx:
    def test_eigenvalue_soft_threshold(self):
        fn = corpus.sum_abs_eigenvalues(2)
        r = spectral_prox(fn, 1, diag_embed([2.0, -0.5]))
        np.testing.assert_allclose(r.entries, np.diag([1.0, 0.0]), atol=1e-12)

    def test_small_t_limit(self):
        fn = corpus.sum_abs_eigenvalues(2)
        x = diag_embed([0.7, -0.3])
        r = spectral_prox(fn, F(1, 10**6), x)
        assert np.linalg.norm(r.entries - x.entries, "fro") <= 1e-5

    def test_optimality_residual(self):
        fn = corpus.sum_abs_eigenvalues(3)
        for seed in range(5):
            x = random_sym(3, seed + 7)
            p = spectral_prox(fn, F(1, 2), x)
            assert prox_fixed_point_residual(fn, F(1, 2), x, p)

    def test_vector_prox_is_soft_threshold(self, l1_3):
        z = tuple(from_float_exact(v) for v in (1.2, 0.3, -0.2))
        p = vector_prox(l1_3, F(1, 2), z)
        assert [float(v) for v in p] == pytest.approx([0.7, 0.0, 0.0])

    def test_rejects_nonpositive_t(self):
        with pytest.raises(InputError):
            spectral_prox(corpus.sum_abs_eigenvalues(2), 0, diag_embed([1., 0.]))


class TestLiftedStrata:
    def test_dim_formula_examples(self, strat_l1_3):
        # point with three distinct values: dim 0 + orbit term 3
        fm3 = cached_stratification(corpus.f_max(3))
        # {(a,a,b): a>b} inside fmax(3): base dim 2, fiber 2
        idx = next(i for i, s in enumerate(fm3.strata)
                   if len(s.active_pieces) == 2 and s.dim == 2)
        ls = lift_dim(fm3, fm3.orbit_of(idx))
        assert ls.dim_lifted == 4

    def test_numeric_tangent_dim_matches(self, strat_l1_3):
        for orbit in strat_l1_3.sym_orbits:
            ls = lift_dim(strat_l1_3, orbit)
            num = numerical_tangent_dim(strat_l1_3.strata[orbit[0]])
            assert num == ls.dim_lifted, (orbit, num, ls.dim_lifted)

    def test_constant_rank_manifold_dims(self):
        # rank-k stratum of the NSD shadow: k(k+1)/2 + k(n-k)
        n = 3
        strat = cached_stratification(corpus.neg_orthant_indicator(n))
        for orbit in strat.sym_orbits:
            s = strat.strata[orbit[0]]
            k = sum(1 for v in s.representative if v != 0)
            ls = lift_dim(strat, orbit)
            assert ls.dim_lifted == k * (k + 1) // 2 + k * (n - k)

    def test_orbit_membership_of_matrix(self):
        fn = corpus.sum_abs_eigenvalues(2)
        lifted = lift_stratification(fn)
        k = lifted.orbit_of_matrix(SymMatrix(np.eye(2)))
        rep = lifted.base.strata[lifted.lifted[k].orbit[0]].representative
        assert all(float(v) > 0 for v in rep)  # identity sits over ++ orbit

    def test_commuting_diagram_members(self):
        fn = corpus.sum_abs_eigenvalues(2)
        lifted = lift_stratification(fn)
        k = lifted.orbit_of_matrix(diag_embed([2.0, 1.0]))
        # J_f of the all-positive orbit is the vertex (1,1); its lift is {I}
        assert lifted.dual_membership_vector_route(k, SymMatrix(np.eye(2)))
        assert lifted.dual_membership_subdiff_route(k, SymMatrix(np.eye(2)))
        assert not lifted.dual_membership_vector_route(k, diag_embed([1., 0.]))


class TestConjugationTransfer:
    def test_value_against_aligned_samples(self):
        fn = corpus.sum_abs_eigenvalues(2)
        rng = np.random.default_rng(3)
        for seed in range(5):
            y = SymMatrix(np.diag([0.6, -0.2]))
            u = random_orthogonal(2, rng)
            yc = conjugate_by(u, y)
            fstar = spectral_conjugate_value(fn, yc)
            assert fstar == pytest.approx(0.0, abs=1e-9)  # inside unit box
            # sampled pairings never beat the conjugate
            for s2 in range(20):
                x = random_sym(2, 100 + s2)
                val = float(np.trace(x.entries @ yc.entries)) - \
                    spectral_value(fn, x)
                assert val <= fstar + 1e-9


class TestSingularAnalogues:
    def test_nuclear_norm_value(self):
        fn = corpus.nuclear_norm(2)
        assert sing_value(fn, np.diag([2.0, -3.0])) == pytest.approx(5.0,
                                                                     abs=1e-9)

    def test_zero_matrix(self):
        fn = corpus.nuclear_norm(2)
        assert sing_value(fn, np.zeros((3, 2))) == pytest.approx(0.0, abs=0)

    def test_subgradient_sign_pattern(self):
        fn = corpus.nuclear_norm(2)
        a = np.diag([2.0, -3.0])
        cert = sing_subdiff(fn, a)
        assert sing_subdiff_membership(cert, np.diag([1.0, -1.0]))
        assert not sing_subdiff_membership(cert, np.diag([1.0, 1.0]))

    def test_subdiff_membership_rotated(self):
        fn = corpus.nuclear_norm(2)
        rng = np.random.default_rng(8)
        u = random_orthogonal(3, rng).entries
        v = random_orthogonal(2, rng).entries
        dbase = np.zeros((3, 2)); dbase[0, 0], dbase[1, 1] = 3.0, 1.0
        gbase = np.zeros((3, 2)); gbase[0, 0], gbase[1, 1] = 1.0, 1.0
        a = u.T @ dbase @ v
        cert = sing_subdiff(fn, a)
        assert sing_subdiff_membership(cert, u.T @ gbase @ v)

    def test_rank_one_projection(self):
        q = corpus.rank_at_most_set(2, 1)
        p = sing_project(q, np.diag([3.0, 1.0]))
        np.testing.assert_allclose(p, np.diag([3.0, 0.0]), atol=1e-9)

    def test_projection_of_member_is_identity(self):
        q = corpus.rank_at_most_set(2, 1)
        a = np.zeros((3, 2))
        a[0, 0] = 2.0
        np.testing.assert_allclose(sing_project(q, a), a, atol=1e-9)

    def test_zero_matrix_projects_to_itself(self):
        # any closed signed-symmetric set containing 0 fixes the zero matrix
        for q in (corpus.rank_at_most_set(2, 1), corpus.box_set(2)):
            p = sing_project(q, np.zeros((3, 2)))
            np.testing.assert_allclose(p, np.zeros((3, 2)), atol=0)
