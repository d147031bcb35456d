"""Weak localization and the Toeplitz approximants ``S_{B_r}``.

All kernel pairings ``<S K_z, K_w>`` use truncated kernel vectors, so every
routine here computes the compression ``P R P`` of the corresponding object
``R`` built from the finite-rank operator ``P S P``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bergman import TruncatedSpace, adjoint, kernel_vector, op_norm
from .geometry import check_interior, cocycle, act, tau, RotationElement, embed, lift_tau
from .quadrature import DiskQuadrature, GroupQuadrature, region_nodes, _check_cutoff

DEFAULT_BETA = 0.5
BOUND_SLACK = 5e-3
_Z_CHUNK = 64


def default_z_grid(n_radii=12, n_angles=16, max_radius=0.95):
    """Polar grid on which the supremum in ``I_S(r)`` is estimated."""
    radii = np.linspace(0.0, max_radius, n_radii)
    angles = 2.0 * np.pi * np.arange(n_angles) / n_angles
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def _check_r(r):
    if not 0.0 <= r < 1.0:
        raise ValueError(f"r must lie in [0, 1), got {r}")


def _space_of(S):
    S = np.asarray(S)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square operator matrix, got shape {S.shape}")
    return TruncatedSpace(S.shape[0] - 1)


def i_functional(S, r, beta, z_grid, q, method="subtract"):
    """Grid estimate of ``sup_z int_{D_r(z)^c} |<S K_z, K_w>| ((1-|z|^2)/(1-|w|^2))^beta dw``.

    ``method="subtract"`` evaluates the complement as the whole-disk integral
    (Gauss-Jacobi radial rule absorbing ``(1-|w|^2)^{-beta}``) minus the
    mapped integral over ``D_r(z)``; ``method="filter"`` sums the nodes of
    ``q`` outside ``D_r(z)``, which is cruder near the boundary.  The sup over
    the finite ``z_grid`` makes the value a lower estimate of the true sup.
    """
    _check_r(r)
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    z_grid = np.atleast_1d(check_interior(z_grid, "z_grid"))
    if z_grid.size == 0:
        raise ValueError("z_grid must be nonempty")
    S = np.asarray(S, dtype=complex)
    space = _space_of(S)
    SK = kernel_vector(z_grid, space) @ S.T  # rows: S K_z
    zfac = (1.0 - np.abs(z_grid) ** 2) ** beta

    if method == "filter":
        E = space.basis(q.nodes)
        vals = np.empty(z_grid.size)
        for i, z in enumerate(z_grid):
            keep = np.abs(tau(z, q.nodes)) >= r
            h = np.abs(E[keep] @ SK[i])
            vals[i] = zfac[i] * np.sum(q.weights[keep] * h * (1.0 - np.abs(q.nodes[keep]) ** 2) ** -beta)
        return float(vals.max())
    if method != "subtract":
        raise ValueError(f"unknown method {method!r}")

    qj = q.weighted(-beta)
    total = zfac * (np.abs(space.basis(qj.nodes) @ SK.T).T @ qj.weights)
    vals = total.copy()
    if r > 0.0:
        for i, z in enumerate(z_grid):
            ns = region_nodes(z, r, q, inside=True)
            h = np.abs(space.basis(ns.nodes) @ SK[i])
            ratio = zfac[i] * (1.0 - np.abs(ns.nodes) ** 2) ** -beta
            vals[i] -= np.sum(ns.weights * h * ratio)
    return float(max(vals.max(), 0.0))


@dataclass(frozen=True)
class LocalizationProfile:
    beta: float
    r_grid: tuple
    i_values: tuple
    i_adjoint_values: tuple

    @property
    def bound_values(self):
        return tuple(a * b for a, b in zip(self.i_values, self.i_adjoint_values))


def localization_profile(S, r_grid, q, beta=DEFAULT_BETA, z_grid=None):
    """``I_S`` and ``I_{S^*}`` along ``r_grid``."""
    r_grid = tuple(float(r) for r in r_grid)
    if any(b <= a for a, b in zip(r_grid, r_grid[1:])):
        raise ValueError("r_grid must be strictly increasing")
    z_grid = default_z_grid() if z_grid is None else z_grid
    i_s = tuple(i_functional(S, r, beta, z_grid, q) for r in r_grid)
    i_a = tuple(i_functional(adjoint(S), r, beta, z_grid, q) for r in r_grid)
    return LocalizationProfile(beta, r_grid, i_s, i_a)


def _eval_series(coeffs, w):
    """Horner evaluation of ``sum_m coeffs[c, m] w[c, n]^m``."""
    out = np.broadcast_to(coeffs[:, -1:], w.shape).astype(complex)
    for m in range(coeffs.shape[1] - 2, -1, -1):
        out *= w
        out += coeffs[:, m:m + 1]
    return out


def _moments(h, x, dim):
    """``sum_n h[c, n] x[c, n]^m`` for ``m < dim``."""
    out = np.empty((h.shape[0], dim), dtype=complex)
    p = h.copy()
    for m in range(dim):
        out[:, m] = p.sum(axis=1)
        if m + 1 < dim:
            p *= x
    return out


def _kernel_double_integral(S, q, cutoff, inner_nodes):
    """``sum_z W_z (int <S K_z, K_w> K_w dw) (x) K_z`` with ``inner_nodes(z_chunk) -> (w, omega)``."""
    S = np.asarray(S, dtype=complex)
    space = _space_of(S)
    _check_cutoff(cutoff)
    outer = q.restricted(cutoff)
    scale = np.sqrt(np.arange(1.0, space.dim + 1.0))
    out = np.zeros((space.dim, space.dim), dtype=complex)
    for s in range(0, outer.nodes.size, _Z_CHUNK):
        z = outer.nodes[s:s + _Z_CHUNK]
        SK = kernel_vector(z, space) @ S.T  # (c, d)
        w, omega = inner_nodes(z)  # w: (n,) shared or (c, n); omega: (c, n)
        if w.ndim == 1:
            Ew = space.basis(w)
            v = (omega * (SK @ Ew.T)) @ np.conj(Ew)
        else:
            h = omega * _eval_series(SK * scale, w)
            v = _moments(h, np.conj(w), space.dim) * scale
        out += np.einsum("c,cm,cl->ml", outer.weights[s:s + _Z_CHUNK], v, space.basis(z))
    return out


def s_br(S, r, q, cutoff, inner=None, region="mapped"):
    """``S_{B_r} = int_B int_{D_r(z)} <S K_z, K_w> K_w (x) K_z dw dz`` (outer integral cut at ``cutoff``).

    ``region="mapped"`` pushes the rule ``inner`` (default ``q``) on
    ``|u| < r`` forward by ``tau_z``; ``region="filtered"`` keeps the nodes of
    ``q`` inside ``D_r(z)``, partitioning the same node set as
    :func:`s_br_complement`.
    """
    _check_r(r)
    S = np.asarray(S, dtype=complex)
    if r == 0.0:
        return np.zeros_like(S)
    if region == "filtered":
        return _kernel_double_integral(S, q, cutoff, _filtered(q, r, inside=True))
    if region != "mapped":
        raise ValueError(f"unknown region {region!r}")
    sub = (inner or q).restricted(r)
    u = sub.nodes[None, :]

    def mapped(z):
        zc = z[:, None]
        den = 1.0 - np.conj(zc) * u
        jac = ((1.0 - np.abs(zc) ** 2) / (den.real ** 2 + den.imag ** 2)) ** 2
        return (zc - u) / den, sub.weights[None, :] * jac

    return _kernel_double_integral(S, q, cutoff, mapped)


def _filtered(q, r, inside):
    def nodes(z):
        d = np.abs(tau(z[:, None], q.nodes[None, :]))
        mask = d < r if inside else d >= r
        return q.nodes, np.where(mask, q.weights[None, :], 0.0)

    return nodes


def s_br_complement(S, r, q, cutoff):
    """The same double integral over ``w`` outside ``D_r(z)`` (indicator filtering)."""
    _check_r(r)
    return _kernel_double_integral(S, q, cutoff, _filtered(q, r, inside=False))


def s_g(S, q, cutoff):
    """``S_G``: inner integral over the whole disk, outer over ``|z| < cutoff``."""

    def whole(z):
        return q.nodes, np.broadcast_to(q.weights, (z.size, q.nodes.size))

    return _kernel_double_integral(S, q, cutoff, whole)


def _transported_convolution(S, coeff, point, gq, cutoff, check_bound=True):
    """``a * Phi_f`` for ``f = coeff * K_point`` with ``a(x) = <S pi(x)1, pi(x) f>``.

    Returns ``int_G a(x) P pi(x) f (x) P pi(x) 1 dmu_G(x)``.  The translates
    are exact: ``pi(x) K_p = conj(j(x, p)) K_{x.p}``.
    """
    S = np.asarray(S, dtype=complex)
    space = _space_of(S)
    disk, _, lam, phis = gq.factored(cutoff)
    x = lift_tau(np.repeat(disk.nodes, phis.size)) @ embed(RotationElement(np.tile(phis, disk.nodes.size)))
    weights = np.repeat(lam, phis.size) / phis.size
    u = np.conj(cocycle(x, 0.0))[:, None] * np.conj(space.basis(np.repeat(disk.nodes, phis.size)))
    v = (coeff * np.conj(cocycle(x, point)))[:, None] * np.conj(space.basis(act(x, point)))
    a = np.einsum("nm,nm->n", np.conj(v), u @ S.T)
    if check_bound:
        s_norm = op_norm(S)
        if np.max(np.abs(a), initial=0.0) > s_norm * (1.0 + 1e-9) + 1e-14:
            raise AssertionError("|a_{S,z}| exceeded ||S||")
    return np.einsum("n,nm,nl->ml", weights * a, v, np.conj(u))


def a_conv_phi(S, z, gq, cutoff):
    """``a_{S,z} * Phi_z`` with ``Phi_z = k_z (x) 1`` and ``a_{S,z}(h) = <alpha_{h^{-1}}(S) 1, k_z>``."""
    z = complex(check_interior(z))
    return _transported_convolution(S, 1.0 - abs(z) ** 2, z, gq, cutoff)


def a_conv_phi_group(S, g, gq, cutoff):
    """``a_{S,g} * Phi_g`` with ``Phi_g = pi(g)1 (x) 1``."""
    return _transported_convolution(S, np.conj(cocycle(g, 0.0)), act(g, 0.0), gq, cutoff)


def s_br_via_convolutions(S, r, gq, cutoff, outer=None):
    """``S_{B_r} = int_{|z|<r} a_{S,z} * Phi_z d lambda(z)``.

    ``outer`` is the rule (orders only) for the ``z`` integral; it defaults to an
    8 x 16 product rule, which already resolves the smooth outer integrand.
    """
    _check_r(r)
    S = np.asarray(S, dtype=complex)
    if r == 0.0:
        return np.zeros_like(S)
    outer = (outer or DiskQuadrature(8, 16)).restricted(r)
    lam = outer.weights / (1.0 - np.abs(outer.nodes) ** 2) ** 2
    out = np.zeros_like(S)
    for z, w in zip(outer.nodes, lam):
        out += w * a_conv_phi(S, z, gq, cutoff)
    return out


def continuity_modulus_check(S, g, h, gq, cutoff):
    """``(||a_{S,g}*Phi_g - a_{S,h}*Phi_h||, 2 ||S|| ||pi(g)1 - pi(h)1||)``.

    The right side uses the exact (untruncated) norm
    ``||c_g K_p - c_h K_q||^2 = 2 - 2 Re(c_g conj(c_h) / (1 - conj(p) q)^2)``.
    """
    lhs = op_norm(a_conv_phi_group(S, g, gq, cutoff) - a_conv_phi_group(S, h, gq, cutoff))
    cg, ch = np.conj(cocycle(g, 0.0)), np.conj(cocycle(h, 0.0))
    p, pq = act(g, 0.0), act(h, 0.0)
    dist2 = 2.0 - 2.0 * np.real(cg * np.conj(ch) / (1.0 - np.conj(p) * pq) ** 2)
    rhs = 2.0 * op_norm(S) * np.sqrt(max(dist2, 0.0))
    return lhs, float(rhs)


def haar_measure_of_ball(r):
    """``mu_G(B_r) = lambda(|z| < r) = r^2 / (1 - r^2)``."""
    _check_r(r)
    return r * r / (1.0 - r * r)


def finite_measure_check(S, r, q, cutoff):
    """``(||S_{B_r}||, ||S|| mu_G(B_r))``; the first never exceeds the second."""
    return op_norm(s_br(S, r, q, cutoff)), op_norm(S) * haar_measure_of_ball(r)


def convergence_experiment(S, profile, q, cutoff, slack=BOUND_SLACK):
    """Rows ``r, err_opnorm, i_s, i_sstar, bound, bound_ok`` along ``profile.r_grid``."""
    S = np.asarray(S, dtype=complex)
    rows = []
    for r, i_s, i_a, bound in zip(profile.r_grid, profile.i_values,
                                  profile.i_adjoint_values, profile.bound_values):
        err = op_norm(S - s_br(S, r, q, cutoff))
        rows.append({"r": r, "err_opnorm": err, "i_s": i_s, "i_sstar": i_a,
                     "bound": bound, "bound_ok": bool(err <= bound + slack)})
    return rows
