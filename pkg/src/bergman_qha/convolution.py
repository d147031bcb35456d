"""Convolutions of functions and operators over SU(1,1).

* ``psi * a``  (group function with disk function)  -> disk function
* ``a * S``    (disk function with operator)         -> operator
* ``psi * S``  (group function with operator)        -> operator

Every operator integral is taken over ``g = lift_tau(z) @ embed(phi)``.  The
compressed translation factors as
``P pi(g) P = -(1 - |z|^2) M(z) D(phi)`` (see :func:`tau_series`), so the two
factors ``1 - |z|^2`` cancel the invariant measure and the remaining
integral is against plain ``dz``; no boundary weight ever blows up.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bergman import Symbol, TruncatedSpace, compress, op_norm, toeplitz_matrix, trace_norm
from .geometry import GroupElement, RotationElement, embed, lift_tau
from .quadrature import DiskQuadrature, integrate_lambda
from .representation import rotation_phases, tau_series

_CHUNK = 2048
_EVAL_BUDGET = 1 << 22  # group nodes x points evaluated at once
PUSH_THROUGH_PAD = 50


@dataclass(frozen=True)
class GroupFunction:
    """A function on G, called with a batched :class:`GroupElement`."""

    func: Callable[[GroupElement], np.ndarray]
    sup_bound: float
    l1_bound: float | None = None
    support: float | None = None  # psi(g) = 0 once |g.0| >= support

    def __call__(self, g):
        return np.asarray(self.func(g), dtype=complex)

    @classmethod
    def zero(cls):
        return cls(lambda g: np.zeros(np.shape(g.a), dtype=complex), 0.0, 0.0)


def _bump(s):
    """Smooth profile on [0, 1) vanishing with all derivatives at 1."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = s < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
    return out


def radial_group_function(support, coeffs=(1.0,)):
    """``psi(g) = p(s) bump(s)`` with ``s = |g.0| / support`` and ``p`` a polynomial.

    ``coeffs`` are the complex coefficients of ``p`` in powers of ``s^2``.
    """
    coeffs = np.asarray(coeffs, dtype=complex)

    def psi(g):
        s = np.abs(np.asarray(g.b) / np.conj(g.a)) / support
        return np.polyval(coeffs[::-1], s ** 2) * _bump(s)

    return GroupFunction(psi, float(np.sum(np.abs(coeffs))), support=float(support))


def trig_symbol(coeffs):
    """``a(z) = sum c[j, k] z^j conj(z)^k`` with the crude bound ``sum |c|``."""
    coeffs = np.asarray(coeffs, dtype=complex)

    terms = [(j, k, c) for (j, k), c in np.ndenumerate(coeffs) if c != 0]

    def a(z):
        z = np.asarray(z, dtype=complex)
        zp = [np.ones_like(z)]
        for _ in range(coeffs.shape[0] - 1):
            zp.append(zp[-1] * z)
        zc = [np.conj(p) for p in zp[: coeffs.shape[1]]]
        out = np.zeros(z.shape, dtype=complex)
        for j, k, c in terms:
            out += c * zp[j] * zc[k]
        return out

    return Symbol(a, float(np.sum(np.abs(coeffs))))


def random_symbol(rng, degree=2):
    """Seeded low-degree polynomial in ``z, conj(z)``."""
    c = rng.normal(size=(degree + 1, degree + 1)) + 1j * rng.normal(size=(degree + 1, degree + 1))
    j, k = np.indices(c.shape)
    c[j + k > degree] = 0.0
    return trig_symbol(c / (degree + 1))


def random_group_function(rng, support_range=(0.3, 0.6)):
    """Seeded compactly supported radial profile in ``|g.0|``."""
    support = rng.uniform(*support_range)
    coeffs = rng.normal(size=3) + 1j * rng.normal(size=3)
    return radial_group_function(support, coeffs / 2.0)


def _group_values(psi, gq, cutoff):
    """``psi`` on the factored grid, with the rows that vanish identically dropped."""
    disk, dz_w, lam, phis = gq.factored(cutoff)
    z = np.repeat(disk.nodes, phis.size)
    g = lift_tau(z) @ embed(RotationElement(np.tile(phis, disk.nodes.size)))
    vals = psi(g).reshape(disk.nodes.size, phis.size)
    keep = np.any(vals != 0, axis=1)
    return disk.nodes[keep], dz_w[keep], lam[keep], phis, vals[keep]


def group_lp_norm(psi, gq, cutoff, p):
    """Quadrature value of ``||psi||_{L^p(G)}`` over ``|g.0| < cutoff``."""
    _, _, lam, phis, vals = _group_values(psi, gq, cutoff)
    if p == np.inf:
        return float(np.max(np.abs(vals), initial=0.0))
    return float(np.dot(lam, (np.abs(vals) ** p).mean(axis=1)) ** (1.0 / p))


def conv_fun_fun(psi, a, gq, cutoff):
    """``(psi * a)(z) = int_G psi(g) a(g^{-1} . z) dmu_G(g)`` as a :class:`Symbol`.

    The declared sup bound is the Young bound ``||psi||_1 ||a||_inf`` with the
    L^1 norm taken by the same quadrature, so it dominates every evaluation.
    """
    nodes, _, lam, phis, vals = _group_values(psi, gq, cutoff)
    g = lift_tau(np.repeat(nodes, phis.size)) @ embed(RotationElement(np.tile(phis, nodes.size)))
    ginv = g.inverse()
    coef = (vals * (lam[:, None] / phis.size)).ravel()
    ginv_a = np.asarray(ginv.a)[:, None]
    ginv_b = np.asarray(ginv.b)[:, None]

    def conv(z):
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        out = np.empty(flat.shape, dtype=complex)
        chunk = max(1, _EVAL_BUDGET // max(coef.size, 1))
        for s in range(0, flat.size, chunk):
            zz = flat[s:s + chunk][None, :]
            moved = (ginv_a * zz + ginv_b) / (np.conj(ginv_b) * zz + np.conj(ginv_a))
            out[s:s + chunk] = coef @ a(moved)
        return out.reshape(z.shape)

    l1 = float(np.sum(np.abs(coef)))
    return Symbol(conv, l1 * a.sup_bound)


def k_average(S, gq):
    """Average of ``pi(k) S pi(k)^*`` over the circle nodes of ``gq``.

    Exact (the diagonal part of ``S``) whenever ``circle_order > N``.
    """
    S = np.asarray(S, dtype=complex)
    p = rotation_phases(gq.circle_angles, TruncatedSpace(S.shape[0] - 1))
    return S * np.einsum("jm,jl->ml", p, np.conj(p)) / p.shape[0]


def _sandwich_sum(weights, nodes, inner_ops, space):
    """``sum_i weights[i] M(z_i) X_i M(z_i)^*``; ``inner_ops`` is one matrix or a stack."""
    d = space.dim
    out = np.zeros((d, d), dtype=complex)
    for s in range(0, nodes.size, _CHUNK):
        M = tau_series(nodes[s:s + _CHUNK], space)
        X = inner_ops if np.ndim(inner_ops) == 2 else inner_ops[s:s + _CHUNK]
        MX = M @ X
        out += np.einsum("i,iml,ikl->mk", weights[s:s + _CHUNK], MX, np.conj(M))
    return out


def conv_symbol_op(a, S, gq, cutoff=None):
    """``a * S = int_G a(g.0) alpha_g(S) dmu_G``, compressed to the space of ``S``.

    Right-K-invariance of ``a(g.0)`` turns the circle integral into the
    K-average of ``S``.  After the boundary cancellation the disk integral is
    against ``dz``, so ``cutoff=None`` integrates over the whole disk.
    """
    S = np.asarray(S, dtype=complex)
    space = TruncatedSpace(S.shape[0] - 1)
    disk = gq.base if cutoff is None else gq.base.restricted(cutoff)
    weights = disk.weights * np.asarray(a(disk.nodes), dtype=complex)
    return _sandwich_sum(weights, disk.nodes, k_average(S, gq), space)


def conv_groupfun_op(psi, S, gq, cutoff):
    """``psi * S = int_G psi(g) pi(g) S pi(g)^* dmu_G`` over ``|g.0| < cutoff``.

    The result is the compression of the convolution with the finite-rank
    operator ``P S P``; compress a padded computation to approximate the
    convolution of an operator that does not commute with ``P``.
    """
    S = np.asarray(S, dtype=complex)
    space = TruncatedSpace(S.shape[0] - 1)
    nodes, dz_w, _, phis, vals = _group_values(psi, gq, cutoff)
    p = rotation_phases(phis, space)
    # circle sum: sum_j psi_ij D_j S D_j^* = S o Q_i
    Q = np.einsum("ij,jm,jl->iml", vals, p, np.conj(p)) / phis.size
    return _sandwich_sum(dz_w, nodes, S[None, :, :] * Q, space)


def young_report(samples, gq, cutoff, space=None, seed=0, probe=None, slack=1e-6):
    """Check the three Young-type inequalities on seeded random inputs.

    Rows are dicts with keys ``sample, inequality, lhs, rhs, ok``.  The
    inequalities are

    * ``young_p{1,2,inf}``: ``||psi*a||_inf <= ||psi||_p ||a||_q`` (``a`` in ``L^q(d lambda)``),
    * ``qha_young_1``: ``||psi*S|| <= ||psi||_1 ||S||``,
    * ``qha_young_2``: ``||psi*S|| <= ||psi||_inf ||S||_1``.

    ``||psi*a||_inf`` is a maximum over ``probe`` points, hence a lower bound.
    """
    space = space or TruncatedSpace(10)
    rng = np.random.default_rng(seed)
    if probe is None:
        probe = np.concatenate([[0j], DiskQuadrature(8, 16, 0.95).nodes])
    fine = gq.base
    rows = []
    for i in range(samples):
        psi = random_group_function(rng)
        a_inf = random_symbol(rng)
        support_a = rng.uniform(0.4, 0.8)
        poly = random_symbol(rng)
        a_c = Symbol(lambda z, poly=poly, R=support_a: poly(z) * _bump(np.abs(z) / R),
                     poly.sup_bound)
        S = rng.normal(size=(space.dim, space.dim)) + 1j * rng.normal(size=(space.dim, space.dim))
        S /= np.sqrt(space.dim)

        psi_p = {p: group_lp_norm(psi, gq, cutoff, p) for p in (1, 2, np.inf)}
        psi_p[np.inf] = psi.sup_bound
        a_q = {
            np.inf: a_inf.sup_bound,
            2: float(np.sqrt(integrate_lambda(lambda z: np.abs(a_c(z)) ** 2, fine, support_a).real)),
            1: float(integrate_lambda(lambda z: np.abs(a_c(z)), fine, support_a).real),
        }
        lhs_inf = np.max(np.abs(conv_fun_fun(psi, a_inf, gq, cutoff)(probe)))
        lhs_c = np.max(np.abs(conv_fun_fun(psi, a_c, gq, cutoff)(probe)))
        conv_S = op_norm(conv_groupfun_op(psi, S, gq, cutoff))
        checks = [
            ("young_p1", lhs_inf, psi_p[1] * a_q[np.inf]),
            ("young_p2", lhs_c, psi_p[2] * a_q[2]),
            ("young_pinf", lhs_c, psi_p[np.inf] * a_q[1]),
            ("qha_young_1", conv_S, psi_p[1] * op_norm(S)),
            ("qha_young_2", conv_S, psi_p[np.inf] * trace_norm(S)),
        ]
        for name, lhs, rhs in checks:
            rows.append({"sample": i, "inequality": name, "lhs": float(lhs), "rhs": float(rhs),
                         "ok": bool(lhs <= rhs * (1.0 + slack) + 1e-300)})
    return rows


def symbol_battery():
    """Named test symbols: a constant, ``|w|^2``, ``w``, ``conj(w)`` and a smooth bump."""
    return {
        "constant": Symbol.constant(1.0),
        "abs_sq": Symbol(lambda w: np.abs(w) ** 2 + 0j, 1.0),
        "w": Symbol(lambda w: w, 1.0),
        "conj_w": Symbol(np.conj, 1.0),
        "bump": Symbol(lambda w: _bump(np.abs(w) / 0.7) + 0j, 1.0),
    }


def push_through_error(psi, a, degree, q, gq, pad=PUSH_THROUGH_PAD):
    """``||psi * T_a - T_{psi * a}||`` at truncation ``degree``.

    ``T_a`` does not commute with the truncation, so ``psi * T_a`` is formed
    at ``degree + pad`` and then compressed.  The group rule enters both sides
    node by node (``alpha_g(T_a) = T_{a o g^{-1}}``), so its error cancels and a
    coarse ``gq`` suffices; the cutoff is the support radius of ``psi``.
    """
    if psi.support is None:
        raise ValueError("push_through_error needs a compactly supported psi")
    cutoff = min(psi.support, 1.0 - 1e-9)
    big = TruncatedSpace(degree + pad)
    lhs = compress(conv_groupfun_op(psi, toeplitz_matrix(a, big, q), gq, cutoff), degree)
    rhs = toeplitz_matrix(conv_fun_fun(psi, a, gq, cutoff), TruncatedSpace(degree), q)
    return op_norm(lhs - rhs)
