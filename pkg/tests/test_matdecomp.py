"""Eigendecomposition, SVD and conjugation primitives.

Oracles: reconstruction residuals are computed directly from the output;
the SVD is cross-checked against sqrt of the eigenvalues of A^T A.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectralift.errors import InputError
from spectralift.matdecomp import (OrthMatrix, SymMatrix,
                                   conjugate_by, diag_embed, eig_sym,
                                   grouped_spectrum, random_orthogonal,
                                   stabilizer_sample, svd)


def random_sym(n, seed):
    rng = np.random.default_rng(seed)
    b = rng.standard_normal((n, n))
    return SymMatrix((b + b.T) / 2)


class TestEig:
    def test_reflection(self):
        e = eig_sym(SymMatrix([[0, 1], [1, 0]]))
        np.testing.assert_allclose(e.lam, [1, -1], atol=1e-14)

    def test_already_diagonal_with_ties(self):
        e = eig_sym(diag_embed([3, 1, 1]))
        np.testing.assert_allclose(e.lam, [3, 1, 1], atol=0)
        # U stays a signed permutation within the repeated block
        assert np.max(np.abs(np.abs(e.U.entries) - np.eye(3))) < 1e-14

    def test_random_8x8_reconstruction(self):
        x = random_sym(8, 123)
        e = eig_sym(x)
        assert e.residual(x) <= 1e-10 * (1 + x.fro_norm())

    def test_deterministic_bitwise(self):
        x = random_sym(6, 5)
        e1, e2 = eig_sym(x), eig_sym(x)
        assert np.array_equal(e1.lam, e2.lam)
        assert np.array_equal(e1.U.entries, e2.U.entries)

    def test_sorted_round_trip(self):
        v = [2.5, 2.5, 1.0, -0.5]
        e = eig_sym(diag_embed(sorted(v, reverse=True)))
        np.testing.assert_allclose(e.lam, sorted(v, reverse=True), atol=1e-12)

    def test_rejects_nonfinite(self):
        with pytest.raises(InputError):
            eig_sym(SymMatrix(np.full((2, 2), np.nan)))

    def test_rejects_asymmetric(self):
        with pytest.raises(InputError):
            SymMatrix([[0, 1], [0.5, 0]])

    def test_n_equals_one(self):
        e = eig_sym(SymMatrix([[4.0]]))
        assert e.lam[0] == 4.0

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=25, deadline=None)
    def test_reconstruction_property(self, seed):
        n = 2 + seed % 7
        x = random_sym(n, seed)
        e = eig_sym(x)
        assert e.residual(x) <= 1e-10 * (1 + x.fro_norm())
        assert np.max(np.abs(e.U.entries.T @ e.U.entries - np.eye(n))) <= 1e-10


class TestConjugation:
    def test_identity_action(self):
        x = random_sym(4, 9)
        u = OrthMatrix(np.eye(4))
        np.testing.assert_allclose(conjugate_by(u, x).entries, x.entries)

    def test_permutation_conjugation_reorders_diagonal(self):
        p = np.zeros((3, 3))
        p[0, 1] = p[1, 2] = p[2, 0] = 1.0
        out = conjugate_by(OrthMatrix(p), diag_embed([1, 2, 3]))
        diag = np.diag(out.entries)
        assert sorted(diag.tolist()) == [1, 2, 3]
        assert not np.allclose(diag, [1, 2, 3])

    def test_spectrum_invariance(self):
        rng = np.random.default_rng(3)
        x = random_sym(5, 31)
        u = random_orthogonal(5, rng)
        l1 = eig_sym(x).lam
        l2 = eig_sym(conjugate_by(u, x)).lam
        np.testing.assert_allclose(l1, l2, atol=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            conjugate_by(OrthMatrix(np.eye(3)), random_sym(2, 0))


class TestDiagEmbed:
    def test_zero(self):
        assert np.all(diag_embed([0, 0]).entries == 0)

    def test_values(self):
        np.testing.assert_array_equal(diag_embed([1, 2]).entries,
                                      [[1, 0], [0, 2]])

    def test_eig_round_trip_sorts(self):
        v = [0.3, -1.2, 2.0]
        e = eig_sym(diag_embed(v))
        np.testing.assert_allclose(e.lam, sorted(v, reverse=True), atol=1e-12)


class TestSVD:
    def test_diagonal_with_sign(self):
        t = svd(np.diag([2.0, -3.0]))
        np.testing.assert_allclose(t.sigma, [3, 2], atol=1e-12)
        np.testing.assert_allclose(t.reconstruct(), np.diag([2.0, -3.0]),
                                   atol=1e-12)

    def test_zero_matrix(self):
        t = svd(np.zeros((3, 2)))
        assert np.all(t.sigma == 0)
        np.testing.assert_allclose(t.reconstruct(), np.zeros((3, 2)), atol=0)

    def test_rectangular_crosscheck_with_eig(self):
        rng = np.random.default_rng(17)
        a = rng.standard_normal((5, 3))
        t = svd(a)
        gram = eig_sym(SymMatrix(a.T @ a))
        np.testing.assert_allclose(t.sigma,
                                   np.sqrt(np.maximum(gram.lam, 0.0)),
                                   atol=1e-8)
        assert np.linalg.norm(a - t.reconstruct(), "fro") <= \
            1e-9 * (1 + np.linalg.norm(a, "fro"))

    def test_requires_n_ge_m(self):
        with pytest.raises(InputError):
            svd(np.ones((2, 4)))


class TestStabilizerSample:
    def test_distinct_eigenvalues_gives_signed_identity_block(self):
        x = diag_embed([3.0, 1.0, -2.0])
        e = eig_sym(x)
        u = stabilizer_sample(e, 1e-8, seed=4)
        # W is diagonal +-1, so conjugation reproduces X exactly
        out = conjugate_by(u, diag_embed(grouped_spectrum(e.lam, 1e-8)))
        assert np.linalg.norm(out.entries - x.entries, "fro") <= 1e-9

    def test_repeated_block_reconstructs(self):
        x = diag_embed([1.0, 1.0, 0.0])
        e = eig_sym(x)
        u = stabilizer_sample(e, 1e-8, seed=11)
        out = conjugate_by(u, diag_embed(grouped_spectrum(e.lam, 1e-8)))
        assert np.linalg.norm(out.entries - x.entries, "fro") <= 1e-9

    def test_two_seeds_distinct_u_same_x(self):
        x = diag_embed([1.0, 1.0, 0.0])
        e = eig_sym(x)
        u1 = stabilizer_sample(e, 1e-8, seed=1)
        u2 = stabilizer_sample(e, 1e-8, seed=2)
        assert not np.allclose(u1.entries, u2.entries)
        d = diag_embed(grouped_spectrum(e.lam, 1e-8))
        for u in (u1, u2):
            out = conjugate_by(u, d)
            assert np.linalg.norm(out.entries - x.entries, "fro") <= 1e-9
