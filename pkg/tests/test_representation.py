"""Tests for the truncated discrete series representation."""

import numpy as np
import pytest

from bergman_qha.bergman import (
    TruncatedSpace, kernel_vector, normalized_kernel_vector, phi_operator, rank_one,
)
from bergman_qha.geometry import (
    GroupElement, RotationElement, act, cocycle, embed, lift_tau, random_group_elements,
)
from bergman_qha.quadrature import DiskQuadrature
from bergman_qha.representation import (
    alpha, column_zero_target, formal_dimension_estimate, homomorphism_defect,
    matrix_coefficient, pi_matrix, pi_matrix_series, rotation_phases, schur_pairing,
    tau_series, unitarity_defect,
)


def column_errors(g, space, q):
    return np.array([np.linalg.norm(pi_matrix(g[i], space, q)[:, 0] - column_zero_target(g[i], space))
                     for i in range(g.shape[0])])


class TestPiMatrix:

    def test_identity(self, q):
        np.testing.assert_allclose(pi_matrix(GroupElement.identity(), TruncatedSpace(8), q), np.eye(9), atol=1e-13)

    def test_rotation_diagonal(self, q):
        phi = 0.37
        sp = TruncatedSpace(8)
        expected = np.diag(np.exp(-2j * phi * (np.arange(9) + 1)))
        np.testing.assert_allclose(pi_matrix(embed(RotationElement(phi)), sp, q), expected, atol=1e-13)
        np.testing.assert_allclose(rotation_phases(phi, sp), np.diag(expected))

    def test_column_identity_moderate_radius(self, q, rng):
        g = random_group_elements(rng, 50, 0.8)
        assert column_errors(g, TruncatedSpace(16), q).max() <= 1e-8

    def test_column_identity_fine_angular_rule(self, rng):
        g = random_group_elements(rng, 50, 0.9)
        assert column_errors(g, TruncatedSpace(16), DiskQuadrature(64, 256)).max() <= 1e-8

    @pytest.mark.xfail(strict=True, reason="128-point angular rule aliases |g.0|^128 ~ 1e-6 at |g.0| = 0.9")
    def test_column_identity_default_rule_to_0_9(self, q, rng):
        g = random_group_elements(rng, 50, 0.9)
        assert column_errors(g, TruncatedSpace(16), q).max() <= 1e-8

    def test_matches_series(self, q, rng):
        g = random_group_elements(rng, 10, 0.5)
        sp = TruncatedSpace(12)
        series = pi_matrix_series(g, sp)
        for i in range(10):
            np.testing.assert_allclose(pi_matrix(g[i], sp, q), series[i], atol=1e-11)

    def test_series_column_zero_exact(self, rng):
        g = random_group_elements(rng, 30, 0.99)
        sp = TruncatedSpace(20)
        M = pi_matrix_series(g, sp)
        for i in range(30):
            np.testing.assert_allclose(M[i][:, 0], column_zero_target(g[i], sp), rtol=1e-12, atol=1e-14)

    def test_tau_series_factorization(self, rng):
        z = 0.6 * np.exp(1.1j)
        sp = TruncatedSpace(10)
        np.testing.assert_allclose(pi_matrix_series(lift_tau(z), sp), -(1 - abs(z) ** 2) * tau_series(z, sp), atol=1e-14)

    def test_series_batch_shape(self, rng):
        g = random_group_elements(rng, (2, 3))
        assert pi_matrix_series(g, TruncatedSpace(4)).shape == (2, 3, 5, 5)


class TestDefects:
    """Truncation defects of unitarity and of the homomorphism property."""

    def test_unitarity_defect_of_rotation(self):
        assert unitarity_defect(pi_matrix_series(embed(RotationElement(0.2)), TruncatedSpace(8))) < 1e-14

    def test_leading_block_unitarity_improves(self, rng):
        g = random_group_elements(rng, 10, 0.5)
        small = [unitarity_defect(pi_matrix_series(g[i], TruncatedSpace(8)), 5) for i in range(10)]
        big = [unitarity_defect(pi_matrix_series(g[i], TruncatedSpace(32)), 5) for i in range(10)]
        assert np.all(np.array(big) < np.array(small))

    def test_leading_block_homomorphism_improves(self, rng):
        g, h = random_group_elements(rng, 10, 0.5), random_group_elements(rng, 10, 0.5)
        eps8 = [homomorphism_defect(g[i], h[i], TruncatedSpace(8), 5) for i in range(10)]
        eps32 = [homomorphism_defect(g[i], h[i], TruncatedSpace(32), 5) for i in range(10)]
        assert np.all(np.array(eps32) < np.array(eps8))

    @pytest.mark.xfail(strict=True, reason="full operator-norm defect tends to 1, not 0, as N grows")
    def test_full_homomorphism_defect_decreases(self, rng):
        g, h = random_group_elements(rng, 10, 0.5), random_group_elements(rng, 10, 0.5)
        eps8 = [homomorphism_defect(g[i], h[i], TruncatedSpace(8)) for i in range(10)]
        eps32 = [homomorphism_defect(g[i], h[i], TruncatedSpace(32)) for i in range(10)]
        assert np.all(np.array(eps32) < np.array(eps8))

    @pytest.mark.xfail(strict=True, reason="full operator-norm defect tends to 1, not 0, as N grows")
    def test_full_unitarity_defect_decreases(self, rng):
        g = random_group_elements(rng, 10, 0.5)
        d8 = [unitarity_defect(pi_matrix_series(g[i], TruncatedSpace(8))) for i in range(10)]
        d32 = [unitarity_defect(pi_matrix_series(g[i], TruncatedSpace(32))) for i in range(10)]
        assert np.all(np.array(d32) < np.array(d8))

    def test_full_defect_approaches_one(self):
        """The top basis vectors are pushed out of the truncation by pi(g)."""
        g = lift_tau(0.5)
        defects = [unitarity_defect(pi_matrix_series(g, TruncatedSpace(n))) for n in (8, 16, 32)]
        assert defects[-1] == pytest.approx(1.0, abs=1e-3)


class TestAlpha:

    def test_identity(self, rng):
        S = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        np.testing.assert_allclose(alpha(GroupElement.identity(), S), S, atol=1e-14)

    def test_rotation_fixes_phi(self):
        P = phi_operator(TruncatedSpace(8))
        np.testing.assert_allclose(alpha(embed(RotationElement(1.3)), P), P, atol=1e-14)

    def test_lift_moves_phi_to_kernel_projection(self, q, rng):
        sp = TruncatedSpace(16)
        P = phi_operator(sp)
        for z in 0.5 * np.sqrt(rng.uniform(size=5)) * np.exp(2j * np.pi * rng.uniform(size=5)):
            k = normalized_kernel_vector(z, sp)
            np.testing.assert_allclose(alpha(lift_tau(z), P, q), rank_one(k, k), atol=1e-6)
            np.testing.assert_allclose(alpha(lift_tau(z), P), rank_one(k, k), atol=1e-14)

    def test_normalized_kernel_identity(self, rng):
        g = random_group_elements(rng, 50)
        sp = TruncatedSpace(10)
        for i in range(50):
            p = act(g[i], 0.0)
            np.testing.assert_allclose(normalized_kernel_vector(p, sp),
                                       abs(cocycle(g[i], 0.0)) * kernel_vector(p, sp), atol=1e-14)

    def test_pi_one_is_not_normalized_kernel(self):
        """pi(g)1 and k_{g.0} differ by the phase conj(j(g,0))/|j(g,0)|."""
        g = lift_tau(0.4 + 0.3j) @ embed(RotationElement(0.5))
        j = cocycle(g, 0.0)
        assert abs(np.conj(j) / abs(j) - 1.0) > 1e-3
        sp = TruncatedSpace(8)
        pi_one = pi_matrix_series(g, sp)[:, 0]
        np.testing.assert_allclose(pi_one, np.conj(j) / abs(j) * normalized_kernel_vector(act(g, 0.0), sp), atol=1e-14)


class TestMatrixCoefficient:

    def test_identity(self):
        one = TruncatedSpace(6).one()
        assert matrix_coefficient(one, one, GroupElement.identity()) == pytest.approx(1.0)

    def test_modulus(self, rng):
        sp = TruncatedSpace(6)
        g = random_group_elements(rng, 20)
        for i in range(20):
            val = matrix_coefficient(sp.one(), sp.one(), g[i])
            assert abs(val) == pytest.approx(1 - abs(act(g[i], 0.0)) ** 2, abs=1e-13)

    def test_rotation_off_diagonal(self, q):
        sp = TruncatedSpace(6)
        assert abs(matrix_coefficient(sp.unit(1), sp.unit(0), embed(RotationElement(0.9)), q)) < 1e-14

    def test_quadrature_and_series_agree(self, q, rng):
        sp = TruncatedSpace(6)
        f1, f2 = rng.normal(size=(2, 7)) + 1j * rng.normal(size=(2, 7))
        g = random_group_elements(rng, 1, 0.6)[0]
        assert matrix_coefficient(f1, f2, g, q) == pytest.approx(matrix_coefficient(f1, f2, g), abs=1e-11)


class TestSchur:

    def test_formal_dimension(self, gq):
        val = schur_pairing(*[TruncatedSpace(16).one()] * 4, gq, 0.999)
        assert abs(val - 1.0) <= 1e-3

    def test_without_tail_correction(self, gq):
        """For the constants the dz-density is exactly 1, so the bare integral is c^2."""
        val = schur_pairing(*[TruncatedSpace(16).one()] * 4, gq, 0.999, tail_correction=False)
        assert val.real == pytest.approx(0.999 ** 2, abs=1e-12)

    def test_formal_dimension_estimate(self, gq):
        assert formal_dimension_estimate(gq, 0.999, TruncatedSpace(16)) == pytest.approx(1.0, abs=1e-3)

    def test_orthogonality(self, gq):
        sp = TruncatedSpace(16)
        assert abs(schur_pairing(sp.one(), sp.one(), sp.unit(1), sp.unit(1), gq, 0.999)) <= 1e-3

    def test_zero_vector(self, gq):
        sp = TruncatedSpace(4)
        assert schur_pairing(sp.one(), np.zeros(5), sp.one(), sp.one(), gq, 0.9) == 0

    @pytest.mark.parametrize("idx", [(1, 0, 1, 0), (1, 1, 1, 1), (2, 1, 2, 1), (1, 2, 0, 1)])
    def test_basis_pairings(self, gq, idx):
        sp = TruncatedSpace(8)
        expected = float(idx[0] == idx[2] and idx[1] == idx[3])
        val = schur_pairing(*[sp.unit(i) for i in idx], gq, 0.999)
        assert abs(val - expected) <= 1e-3

    def test_sesquilinearity(self, gq_small, rng):
        """pi_{f1,f2} is conjugate-linear in f2, so the pairing is linear in f4 and conjugate-linear in f2."""
        sp = TruncatedSpace(3)
        f = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        c = 0.3 - 1.2j
        base = schur_pairing(*f, gq_small, 0.9, tail_correction=False)
        scaled = schur_pairing(f[0], f[1], f[2], c * f[3], gq_small, 0.9, tail_correction=False)
        assert scaled == pytest.approx(c * base, rel=1e-12)
        scaled = schur_pairing(f[0], c * f[1], f[2], f[3], gq_small, 0.9, tail_correction=False)
        assert scaled == pytest.approx(np.conj(c) * base, rel=1e-12)
