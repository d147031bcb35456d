"""The Bergman space of the disk truncated to polynomials of degree <= N.

Vectors are complex coefficient arrays in the orthonormal basis
``e_m(w) = sqrt(m + 1) w^m``; operators are dense ``(N+1, N+1)`` arrays with
``S[m, l] = <S e_l, e_m>`` (columns index the input basis vector).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import NumericalError
from .geometry import check_interior
from .quadrature import integrate_disk


@dataclass(frozen=True)
class TruncatedSpace:
    degree: int

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError(f"degree must be a non-negative integer, got {self.degree}")

    @property
    def dim(self):
        return self.degree + 1

    def basis(self, w):
        """Values ``e_m(w)`` with a trailing axis of length ``N + 1``."""
        w = np.asarray(w, dtype=complex)
        powers = np.empty(w.shape + (self.dim,), dtype=complex)
        powers[..., 0] = 1.0
        if self.degree:
            powers[..., 1:] = w[..., None]
            np.cumprod(powers, axis=-1, out=powers)
        return powers * np.sqrt(np.arange(1.0, self.dim + 1.0))

    def unit(self, m):
        v = np.zeros(self.dim, dtype=complex)
        v[m] = 1.0
        return v

    def one(self):
        """The constant function 1, i.e. ``e_0``."""
        return self.unit(0)

    def evaluate(self, coeffs, w):
        coeffs = self._check(coeffs)
        return self.basis(w) @ coeffs

    def _check(self, v):
        v = np.asarray(v, dtype=complex)
        if v.shape[-1] != self.dim:
            raise ValueError(f"expected length {self.dim}, got {v.shape[-1]}")
        return v


@dataclass(frozen=True)
class Symbol:
    """A pointwise function on the disk together with a declared sup bound.

    ``func`` must accept complex arrays and return arrays of the same shape.
    """

    func: Callable[[np.ndarray], np.ndarray]
    sup_bound: float

    def __call__(self, z):
        return self.func(np.asarray(z, dtype=complex))

    @classmethod
    def constant(cls, c):
        c = complex(c)
        return cls(lambda z: np.full(np.shape(z), c), abs(c))


def kernel_vector(z, space):
    """Coefficients ``sqrt(m+1) conj(z)^m`` of the truncated kernel ``K_z``."""
    z = check_interior(z)
    return np.conj(space.basis(z))


def normalized_kernel_vector(z, space):
    """``(1 - |z|^2) K_z``: normalized with the untruncated norm of ``K_z``."""
    z = check_interior(z)
    return (1.0 - np.abs(z) ** 2)[..., None] * np.conj(space.basis(z))


def inner(f, g):
    """``<f, g> = sum f conj(g)`` (linear in the first slot)."""
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if f.shape != g.shape:
        raise ValueError(f"dimension mismatch: {f.shape} vs {g.shape}")
    return np.vdot(g, f)


def norm(f):
    return float(np.linalg.norm(f))


def adjoint(S):
    return np.conj(np.asarray(S)).T


def rank_one(f, g):
    """``(f (x) g) h = <h, g> f``."""
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if f.shape != g.shape:
        raise ValueError(f"dimension mismatch: {f.shape} vs {g.shape}")
    return np.outer(f, np.conj(g))


def phi_operator(space):
    """The rank-one projection ``1 (x) 1`` onto the constants."""
    return rank_one(space.one(), space.one())


def compress(S, degree):
    """Leading ``(degree+1)``-block, i.e. ``P_degree S P_degree``."""
    S = np.asarray(S)
    if degree + 1 > S.shape[0]:
        raise ValueError("cannot compress to a larger degree")
    return S[: degree + 1, : degree + 1].copy()


def toeplitz_matrix(a, space, q):
    """``T_a[m, l] = int a(w) e_l(w) conj(e_m(w)) dz`` by quadrature."""
    E = space.basis(q.nodes)
    vals = np.asarray(a(q.nodes), dtype=complex)
    with np.errstate(invalid="ignore", over="ignore"):
        integrand_weight = q.weights * vals
    if not np.all(np.isfinite(integrand_weight)):
        # route through integrate_disk for the node diagnostics
        integrate_disk(lambda w: a(w), q)
    return (np.conj(E).T * integrand_weight) @ E


def berezin(S, z):
    """Berezin transform ``<S k_z, k_z>``."""
    S = np.asarray(S)
    k = normalized_kernel_vector(z, TruncatedSpace(S.shape[0] - 1))
    return inner(S @ k, k)


def _singular_values(S):
    S = np.asarray(S, dtype=complex)
    try:
        return np.linalg.svd(S, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        finite = np.isfinite(S)
        biggest = np.max(np.abs(S[finite]), initial=0.0)
        raise NumericalError(
            f"SVD did not converge for a {S.shape} matrix "
            f"({np.count_nonzero(~finite)} non-finite entries, max finite |entry| = {biggest:.3g})"
        ) from exc


def op_norm(S):
    """Largest singular value."""
    if np.size(S) == 0:
        return 0.0
    return float(_singular_values(S)[0])


def trace_norm(S):
    """Sum of singular values."""
    return float(np.sum(_singular_values(S)))


def write_operator_csv(path, S):
    """Row-major CSV; each matrix row becomes ``re,im,re,im,...`` at full precision."""
    S = np.asarray(S, dtype=complex)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for row in S:
            writer.writerow([f"{x:.17g}" for z in row for x in (z.real, z.imag)])


def read_operator_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [[float(x) for x in row] for row in csv.reader(fh) if row]
    arr = np.asarray(rows)
    if arr.ndim != 2 or arr.shape[1] % 2 or arr.shape[1] // 2 != arr.shape[0]:
        raise ValueError(f"{path}: expected a square matrix of re,im pairs")
    return arr[:, 0::2] + 1j * arr[:, 1::2]
