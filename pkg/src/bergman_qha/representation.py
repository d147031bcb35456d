"""The discrete series representation ``pi(g) f = j(g^{-1}, .) f(g^{-1} .)`` at truncation.

Two routes to the compressed matrix ``P pi(g) P`` are provided:

* :func:`pi_matrix` integrates against the basis with a disk quadrature.
* :func:`pi_matrix_series` builds the Taylor coefficients of
  ``pi(g) e_l = sqrt(l+1) phi^l h`` directly, where ``phi = g^{-1}.w`` is a
  Blaschke factor and ``h = j(g^{-1}, w)``.  Repeated multiplication by the
  bounded series of ``phi`` is stable, and the route is batched over many
  group elements; the group integrals use it.

Both return the same matrix up to quadrature aliasing.
"""

from __future__ import annotations

import numpy as np

from .bergman import TruncatedSpace, inner, kernel_vector
from .geometry import GroupElement, act, cocycle
from .quadrature import integrate_disk


def pi_matrix(g: GroupElement, space: TruncatedSpace, q):
    """``P pi(g) P`` with entries ``int j(g^{-1},w) e_l(g^{-1}.w) conj(e_m(w)) dz``."""
    ginv = g.inverse()

    def integrand(w):
        vals = cocycle(ginv, w)[:, None] * space.basis(act(ginv, w))
        return np.conj(space.basis(w))[:, :, None] * vals[:, None, :]

    return integrate_disk(integrand, q)


def _series_matrix(zeta, phase, N):
    """Columns ``sqrt(l+1) phi^l (1 - conj(zeta) w)^{-2}`` scaled to the orthonormal basis.

    ``phi(w) = phase (w - zeta) / (1 - conj(zeta) w)``; ``zeta`` and ``phase`` are
    1-d arrays and the result has shape ``(len(zeta), N+1, N+1)``.
    """
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    phase = np.broadcast_to(np.asarray(phase, dtype=complex), zeta.shape)
    n = np.arange(N + 1)
    zc = np.conj(zeta)[:, None]
    # series of phi
    c = np.empty((zeta.size, N + 1), dtype=complex)
    c[:, 0] = -phase * zeta
    if N > 0:
        c[:, 1:] = (phase * (1.0 - np.abs(zeta) ** 2))[:, None] * zc ** (n[1:] - 1)
    # lower-triangular Toeplitz multiplication operator by phi
    idx = n[:, None] - n[None, :]
    L = np.where(idx >= 0, c[:, np.clip(idx, 0, None)], 0.0)
    cols = np.empty((zeta.size, N + 1, N + 1), dtype=complex)
    cols[:, :, 0] = (n + 1.0) * zc ** n
    for l in range(1, N + 1):
        cols[:, :, l] = np.einsum("bij,bj->bi", L, cols[:, :, l - 1])
    s = np.sqrt(n + 1.0)
    return cols * (s[None, None, :] / s[None, :, None])


def pi_matrix_series(g: GroupElement, space: TruncatedSpace):
    """``P pi(g) P`` from the Taylor series of ``pi(g) e_l``; batched over ``g``."""
    a = np.asarray(g.a, dtype=complex).ravel()
    b = np.asarray(g.b, dtype=complex).ravel()
    zeta = b / np.conj(a)
    M = _series_matrix(zeta, np.conj(a) / a, space.degree) * (a ** -2)[:, None, None]
    return M.reshape(np.shape(g.a) + M.shape[1:])


def tau_series(z, space):
    """``-P pi(lift_tau(z)) P / (1 - |z|^2)``, batched over ``z``.

    The factor ``1 - |z|^2`` pulled out here is what cancels the invariant
    measure in the group integrals.
    """
    z = np.asarray(z, dtype=complex)
    M = _series_matrix(z.ravel(), -1.0, space.degree)
    return M.reshape(z.shape + M.shape[1:])


def rotation_phases(phi, space):
    """Diagonal of ``pi(embed(phi))``: ``exp(-2 i phi (m + 1))``."""
    m = np.arange(space.dim)
    return np.exp(-2j * np.asarray(phi, dtype=float)[..., None] * (m + 1))


def alpha(g: GroupElement, S, q=None):
    """Operator translation ``pi(g) S pi(g)^*``; ``q=None`` selects the series route."""
    S = np.asarray(S, dtype=complex)
    space = TruncatedSpace(S.shape[0] - 1)
    P = pi_matrix_series(g, space) if q is None else pi_matrix(g, space, q)
    return P @ S @ np.conj(np.swapaxes(P, -1, -2))


def matrix_coefficient(f1, f2, g: GroupElement, q=None):
    """``<f1, pi(g) f2>``."""
    space = TruncatedSpace(np.shape(f1)[0] - 1)
    P = pi_matrix_series(g, space) if q is None else pi_matrix(g, space, q)
    return inner(np.asarray(f1, dtype=complex), P @ np.asarray(f2, dtype=complex))


def column_zero_target(g: GroupElement, space):
    """``conj(j(g,0)) K_{g.0}``, the closed form of ``pi(g) 1``."""
    return np.conj(cocycle(g, 0.0)) * kernel_vector(act(g, 0.0), space)


def unitarity_defect(M, block=None):
    """Operator norm of ``M^* M - I``, optionally restricted to the leading ``block`` indices."""
    M = np.asarray(M)
    D = np.conj(M).T @ M - np.eye(M.shape[1])
    if block is not None:
        D = D[:block, :block]
    return float(np.linalg.norm(D, 2))


def homomorphism_defect(g, h, space, block=None):
    """``||P pi(gh) P - P pi(g) P pi(h) P||`` (series route)."""
    D = pi_matrix_series(g @ h, space) - pi_matrix_series(g, space) @ pi_matrix_series(h, space)
    if block is not None:
        D = D[:block, :block]
    return float(np.linalg.norm(D, 2))


def _coefficients_on_nodes(f1, f2, disk_nodes, phis):
    """``<f1, pi(tau_z k_phi) f2>`` on the product grid, shape ``(n_disk, n_circle)``."""
    space = TruncatedSpace(len(f1) - 1)
    M = tau_series(disk_nodes, space)  # P pi(tau_z) P = -(1-|z|^2) M
    rotated = rotation_phases(phis, space) * np.asarray(f2)[None, :]  # (C, dim)
    vals = np.conj(np.einsum("m,zml,cl->zc", np.conj(f1), M, rotated))
    return -(1.0 - np.abs(disk_nodes) ** 2)[:, None] * vals


def schur_pairing(f1, f2, f3, f4, gq, cutoff, tail_correction=True):
    """``int_G pi_{f1,f2}(g) conj(pi_{f3,f4}(g)) dmu_G`` over ``|g.0| < cutoff``.

    The invariant measure has infinite mass while the ``dz``-density
    ``pi_{f1,f2} conj(pi_{f3,f4}) / (1 - |z|^2)^2`` of the integrand tends to a
    bounded boundary profile.  With ``tail_correction`` the omitted annulus
    ``cutoff < |z| < 1`` is estimated by holding the angular mean of that
    density on the outermost quadrature ring constant out to the boundary.
    """
    f1, f2, f3, f4 = (np.asarray(f, dtype=complex) for f in (f1, f2, f3, f4))
    disk, dz_w, _, phis = gq.factored(cutoff)
    A = _coefficients_on_nodes(f1, f2, disk.nodes, phis)
    B = _coefficients_on_nodes(f3, f4, disk.nodes, phis)
    # |j(g,0)|^2 = (1 - |z|^2)^2 cancels d lambda; keep the dz-density explicit
    density = (A * np.conj(B)).mean(axis=1) / (1.0 - np.abs(disk.nodes) ** 2) ** 2
    total = np.dot(dz_w, density)
    if tail_correction:
        outer_ring = density.reshape(disk.radial_order, disk.angular_order)[-1]
        total += outer_ring.mean() * (1.0 - cutoff ** 2)
    return complex(total)


def formal_dimension_estimate(gq, cutoff, space, tail_correction=True):
    """``1 / <pi_{1,1}, pi_{1,1}>``; the Schur relations make this ``d_pi``."""
    one = space.one()
    return 1.0 / schur_pairing(one, one, one, one, gq, cutoff, tail_correction).real
