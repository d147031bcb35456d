"""Tensor-product quadrature on the unit disk and on SU(1,1).

Disk rules are Gauss-Legendre in ``t = |z|^2`` times the trapezoid rule in
the angle, so that ``sum(weights * f(nodes))`` approximates the integral of
``f`` against the normalized area measure ``dz = dA / pi``.  The group measure
is factored as ``d lambda(z) x dk`` through ``g = lift_tau(z) @ embed(k)``,
with ``dk`` the probability measure on the circle parameter ``phi in [0, pi)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_jacobi

from .exceptions import IntegrationError
from .geometry import RotationElement, embed, lift_tau, pseudo_dist, tau

DEFAULT_RADIAL_ORDER = 64
DEFAULT_ANGULAR_ORDER = 128
DEFAULT_CIRCLE_ORDER = 32


def _readonly(arr):
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class NodeSet:
    """Bare nodes and weights, e.g. the part of a rule inside a region."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", _readonly(np.asarray(self.nodes, dtype=complex)))
        object.__setattr__(self, "weights", _readonly(np.asarray(self.weights, dtype=float)))

    def __len__(self):
        return self.nodes.size


@dataclass(frozen=True)
class DiskQuadrature:
    """Polar product rule on ``|z| < radius`` for the measure ``(1 - |z|^2)^weight_exponent dz``.

    With the default ``radius=1`` and ``weight_exponent=0`` the weights sum to 1.
    A nonzero exponent switches the radial rule to Gauss-Jacobi, which absorbs
    the boundary singularity of ``(1 - |z|^2)^{-beta}``; it is only supported on
    the full disk.
    """

    radial_order: int = DEFAULT_RADIAL_ORDER
    angular_order: int = DEFAULT_ANGULAR_ORDER
    radius: float = 1.0
    weight_exponent: float = 0.0
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)
    radial_nodes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.radial_order) < 1 or int(self.angular_order) < 1:
            raise ValueError("quadrature orders must be positive")
        if not 0.0 <= self.radius <= 1.0:
            raise ValueError(f"radius must lie in [0, 1], got {self.radius}")
        if self.weight_exponent != 0.0 and self.radius != 1.0:
            raise ValueError("weighted rules are only available on the full disk")
        if self.weight_exponent <= -1.0:
            raise ValueError("weight_exponent must exceed -1")
        n = int(self.radial_order)
        if self.weight_exponent == 0.0:
            x, w = np.polynomial.legendre.leggauss(n)
        else:
            # Jacobi weight (1 - x)^alpha on [-1, 1]  ->  (1 - t)^alpha on [0, 1]
            x, w = roots_jacobi(n, self.weight_exponent, 0.0)
            w = w / 2.0 ** self.weight_exponent
        r2 = self.radius ** 2
        t = 0.5 * r2 * (x + 1.0)
        wt = 0.5 * r2 * w
        m = int(self.angular_order)
        theta = 2.0 * np.pi * np.arange(m) / m
        nodes = np.sqrt(t)[:, None] * np.exp(1j * theta)[None, :]
        weights = np.repeat(wt[:, None] / m, m, axis=1)
        object.__setattr__(self, "nodes", _readonly(nodes.ravel()))
        object.__setattr__(self, "weights", _readonly(weights.ravel()))
        object.__setattr__(self, "radial_nodes", _readonly(np.sqrt(t)))

    def __len__(self):
        return self.nodes.size

    def restricted(self, radius):
        """Same orders, mapped onto ``|z| < radius``."""
        return DiskQuadrature(self.radial_order, self.angular_order, radius)

    def weighted(self, exponent):
        """Same orders on the full disk with weight ``(1 - |z|^2)^exponent``."""
        return DiskQuadrature(self.radial_order, self.angular_order, 1.0, exponent)


@dataclass(frozen=True)
class GroupQuadrature:
    base: DiskQuadrature = field(default_factory=DiskQuadrature)
    circle_order: int = DEFAULT_CIRCLE_ORDER

    def __post_init__(self):
        if int(self.circle_order) < 1:
            raise ValueError("circle_order must be positive")

    @property
    def circle_angles(self):
        return np.pi * np.arange(self.circle_order) / self.circle_order

    def factored(self, cutoff):
        """Disk part and circle part of the rule restricted to ``|g.0| < cutoff``.

        Returns ``(disk, dz_weights, lambda_weights, phis)``; the full weight of the
        group node ``(z_i, phi_j)`` is ``lambda_weights[i] / circle_order``.
        """
        _check_cutoff(cutoff)
        disk = self.base.restricted(cutoff)
        lam = disk.weights / (1.0 - np.abs(disk.nodes) ** 2) ** 2
        return disk, disk.weights, lam, self.circle_angles

    def elements(self, cutoff):
        """All group nodes as a flat batch, with their Haar weights."""
        disk, _, lam, phis = self.factored(cutoff)
        z = np.repeat(disk.nodes, phis.size)
        phi = np.tile(phis, disk.nodes.size)
        g = lift_tau(z) @ embed(RotationElement(phi))
        w = np.repeat(lam, phis.size) / phis.size
        return g, w


def _check_cutoff(cutoff):
    if not 0.0 < cutoff < 1.0:
        raise ValueError(f"cutoff radius must lie in (0, 1), got {cutoff}")


def _weighted_sum(values, weights, nodes):
    values = np.asarray(values)
    if values.shape[:1] != weights.shape:
        values = np.broadcast_to(values, weights.shape + values.shape[1:])
    bad = ~np.isfinite(values)
    if np.any(bad):
        idx = np.argwhere(bad)[0][0]
        raise IntegrationError(f"non-finite integrand at node {nodes[idx]!r}", node=nodes[idx])
    return np.tensordot(weights, values, axes=(0, 0))


def integrate_disk(f, q):
    """Integrate ``f`` (vectorized over nodes) against the measure carried by ``q``.

    ``f`` may return shape ``(n,)`` or ``(n, ...)`` for matrix-valued integrands.
    """
    return _weighted_sum(f(q.nodes), q.weights, q.nodes)


def integrate_lambda(f, q, cutoff_radius):
    """Integral of ``f`` against ``d lambda = dz / (1 - |z|^2)^2`` over ``|z| < cutoff_radius``.

    ``d lambda`` has infinite mass, so a cutoff is mandatory; any tail estimate
    is the caller's business.
    """
    _check_cutoff(cutoff_radius)
    sub = q.restricted(cutoff_radius)
    lam = sub.weights / (1.0 - np.abs(sub.nodes) ** 2) ** 2
    return _weighted_sum(f(sub.nodes), lam, sub.nodes)


def integrate_group(F, gq, cutoff_radius):
    """Haar integral of ``F`` (called with a batched :class:`GroupElement`) over ``|g.0| < cutoff``."""
    g, w = gq.elements(cutoff_radius)
    return _weighted_sum(F(g), w, np.asarray(g.b) / np.conj(g.a))


def region_nodes(z, r, q, inside=True):
    """Nodes for ``D_r(z) = {w : |tau_z(w)| < r}`` or for its complement.

    Inside: the rule for ``|u| < r`` pushed forward by ``w = tau_z(u)`` with the
    Jacobian ``(1 - |z|^2)^2 / |1 - conj(z) u|^4``.  Outside: the nodes of ``q``
    whose pseudohyperbolic distance to ``z`` is at least ``r``.
    """
    if not 0.0 <= r < 1.0:
        raise ValueError(f"r must lie in [0, 1), got {r}")
    z = complex(z)
    if inside:
        if r == 0.0:
            return NodeSet(np.empty(0, complex), np.empty(0))
        sub = q.restricted(r)
        u = sub.nodes
        jac = (1.0 - abs(z) ** 2) ** 2 / np.abs(1.0 - np.conj(z) * u) ** 4
        return NodeSet(tau(z, u), sub.weights * jac)
    keep = pseudo_dist(z, q.nodes) >= r
    return NodeSet(q.nodes[keep], q.weights[keep])
