"""Tests for the truncated Bergman space."""

import numpy as np
import pytest

from bergman_qha.bergman import (
    Symbol, TruncatedSpace, adjoint, berezin, compress, inner, kernel_vector, norm,
    normalized_kernel_vector, op_norm, phi_operator, rank_one, read_operator_csv,
    toeplitz_matrix, trace_norm, write_operator_csv,
)
from bergman_qha.convolution import random_symbol
from bergman_qha.exceptions import NumericalError
from bergman_qha.quadrature import integrate_disk


def random_vector(rng, dim):
    return rng.normal(size=dim) + 1j * rng.normal(size=dim)


class TestTruncatedSpace:

    def test_invalid_degree(self):
        with pytest.raises(ValueError):
            TruncatedSpace(-1)

    def test_orthonormal_basis(self, q):
        sp = TruncatedSpace(20)
        E = sp.basis(q.nodes)
        gram = (np.conj(E).T * q.weights) @ E
        np.testing.assert_allclose(gram, np.eye(sp.dim), atol=1e-10)

    def test_basis_values(self):
        sp = TruncatedSpace(3)
        w = 0.3 - 0.4j
        np.testing.assert_allclose(sp.basis(w), np.sqrt([1, 2, 3, 4]) * w ** np.arange(4))

    def test_evaluate_linear(self, rng):
        sp = TruncatedSpace(5)
        f, g = random_vector(rng, 6), random_vector(rng, 6)
        w = np.array([0.1, 0.5j])
        np.testing.assert_allclose(sp.evaluate(2 * f + g, w), 2 * sp.evaluate(f, w) + sp.evaluate(g, w))

    def test_evaluate_wrong_length(self):
        with pytest.raises(ValueError):
            TruncatedSpace(3).evaluate(np.ones(3), 0.1)


class TestKernelVector:

    def test_origin(self):
        np.testing.assert_array_equal(kernel_vector(0.0, TruncatedSpace(4)), [1, 0, 0, 0, 0])

    def test_values(self):
        np.testing.assert_allclose(kernel_vector(0.5, TruncatedSpace(2)), [1, np.sqrt(2) * 0.5, np.sqrt(3) * 0.25])

    def test_reproducing(self, rng):
        sp = TruncatedSpace(10)
        f = random_vector(rng, sp.dim)
        for z in (0.0, 0.3 + 0.4j, -0.9j):
            assert abs(inner(f, kernel_vector(z, sp)) - sp.evaluate(f, z)) <= 1e-12 * np.linalg.norm(f) * 10

    def test_rejects_boundary(self):
        with pytest.raises(ValueError):
            kernel_vector(1.0, TruncatedSpace(2))

    def test_kernel_symmetry(self):
        sp = TruncatedSpace(8)
        z, w = 0.2 + 0.5j, -0.6 + 0.1j
        assert inner(kernel_vector(w, sp), kernel_vector(z, sp)) == pytest.approx(sp.evaluate(kernel_vector(w, sp), z))


class TestNormalizedKernel:

    def test_origin(self):
        np.testing.assert_array_equal(normalized_kernel_vector(0.0, TruncatedSpace(3)), [1, 0, 0, 0])

    def test_untruncated_norm(self):
        """(1 - |z|^2)^2 K_z(z) = 1 with K_z(z) = (1 - |z|^2)^{-2}."""
        z = 0.7j
        sp = TruncatedSpace(400)
        assert norm(normalized_kernel_vector(z, sp)) == pytest.approx(1.0, abs=1e-12)

    def test_truncated_norm_increases(self):
        norms = [norm(normalized_kernel_vector(0.9, TruncatedSpace(n))) for n in (4, 8, 16, 32, 64)]
        assert all(n < 1.0 for n in norms)
        assert np.all(np.diff(norms) > 0)


class TestInner:

    def test_units(self):
        sp = TruncatedSpace(2)
        assert inner(sp.unit(0), sp.unit(0)) == 1
        assert inner(sp.unit(1), sp.unit(0)) == 0

    def test_linear_in_first_slot(self, rng):
        f, g = random_vector(rng, 4), random_vector(rng, 4)
        assert inner(1j * f, g) == pytest.approx(1j * inner(f, g))

    def test_matches_quadrature(self, rng, q):
        sp = TruncatedSpace(12)
        f, g = random_vector(rng, sp.dim), random_vector(rng, sp.dim)
        via_q = integrate_disk(lambda w: sp.evaluate(f, w) * np.conj(sp.evaluate(g, w)), q)
        assert abs(inner(f, g) - via_q) <= 1e-10 * max(1.0, abs(via_q))

    def test_mismatch(self):
        with pytest.raises(ValueError):
            inner(np.ones(3), np.ones(4))


class TestToeplitz:

    def test_constant_symbol(self, q):
        np.testing.assert_allclose(toeplitz_matrix(Symbol.constant(1.0), TruncatedSpace(10), q), np.eye(11), atol=1e-13)

    def test_abs_square(self, q):
        T = toeplitz_matrix(Symbol(lambda w: np.abs(w) ** 2 + 0j, 1.0), TruncatedSpace(8), q)
        m = np.arange(9)
        np.testing.assert_allclose(T, np.diag((m + 1) / (m + 2)), atol=1e-13)

    def test_w(self, q):
        T = toeplitz_matrix(Symbol(lambda w: w, 1.0), TruncatedSpace(8), q)
        l = np.arange(8)
        np.testing.assert_allclose(T, np.diag(np.sqrt((l + 1) / (l + 2)), -1), atol=1e-13)

    def test_norm_bounded_by_sup(self, q, rng):
        sp = TruncatedSpace(10)
        for _ in range(10):
            a = random_symbol(rng)
            sup = np.max(np.abs(a(q.nodes)))
            assert op_norm(toeplitz_matrix(a, sp, q)) <= sup + 1e-8

    def test_positivity(self, q, rng):
        sp = TruncatedSpace(10)
        a = random_symbol(rng)
        b = Symbol(lambda w: np.abs(a(w)) ** 2, 1.0)
        assert np.linalg.eigvalsh(toeplitz_matrix(b, sp, q)).min() >= -1e-10

    def test_adjoint_compatibility(self, q, rng):
        sp = TruncatedSpace(10)
        a = random_symbol(rng)
        abar = Symbol(lambda w: np.conj(a(w)), a.sup_bound)
        np.testing.assert_allclose(toeplitz_matrix(abar, sp, q), adjoint(toeplitz_matrix(a, sp, q)), atol=1e-12)

    def test_non_finite_symbol(self, q):
        from bergman_qha.exceptions import IntegrationError
        blowup = Symbol(lambda w: np.where(np.abs(w) > 0.99, np.inf, 1.0) + 0j, 1.0)
        with pytest.raises(IntegrationError):
            toeplitz_matrix(blowup, TruncatedSpace(2), q)


class TestRankOne:

    def test_phi_is_matrix_unit(self):
        P = phi_operator(TruncatedSpace(3))
        E = np.zeros((4, 4))
        E[0, 0] = 1
        np.testing.assert_array_equal(P, E)

    def test_trace(self, rng):
        f, g = random_vector(rng, 5), random_vector(rng, 5)
        assert np.trace(rank_one(f, g)) == pytest.approx(inner(f, g))

    def test_action(self, rng):
        f, g, h = (random_vector(rng, 5) for _ in range(3))
        np.testing.assert_allclose(rank_one(f, g) @ h, inner(h, g) * f, atol=1e-12)

    def test_norms(self, rng):
        f, g = random_vector(rng, 6), random_vector(rng, 6)
        R = rank_one(f, g)
        assert op_norm(R) == pytest.approx(norm(f) * norm(g))
        assert trace_norm(R) == pytest.approx(norm(f) * norm(g))

    def test_mismatch(self):
        with pytest.raises(ValueError):
            rank_one(np.ones(2), np.ones(3))


class TestBerezin:

    def test_identity(self):
        assert berezin(np.eye(200), 0.1) == pytest.approx(1.0, abs=1e-12)

    def test_phi(self):
        for N in (0, 3, 10):
            z = 0.6 - 0.2j
            assert berezin(phi_operator(TruncatedSpace(N)), z) == pytest.approx((1 - abs(z) ** 2) ** 2)

    def test_zero(self):
        assert berezin(np.zeros((4, 4)), 0.3) == 0


class TestNorms:

    def test_identity(self):
        assert op_norm(np.eye(10)) == pytest.approx(1.0)
        assert trace_norm(np.eye(10)) == pytest.approx(10.0)

    def test_svd_failure_is_wrapped(self):
        with pytest.raises(NumericalError):
            op_norm(np.full((3, 3), np.nan))


class TestOperatorHelpers:

    def test_adjoint(self, rng):
        S = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        A = adjoint(S)
        assert A[1, 2] == np.conj(S[2, 1])

    def test_compress(self):
        S = np.arange(16).reshape(4, 4)
        np.testing.assert_array_equal(compress(S, 1), [[0, 1], [4, 5]])
        with pytest.raises(ValueError):
            compress(S, 5)

    def test_csv_roundtrip(self, rng, tmp_path):
        S = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        path = tmp_path / "op.csv"
        write_operator_csv(path, S)
        np.testing.assert_array_equal(read_operator_csv(path), S)

    def test_csv_rejects_non_square(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,0,2,0\n")
        with pytest.raises(ValueError):
            read_operator_csv(path)
