"""Möbius geometry of the unit disk and the group SU(1,1).

A group element is stored through the first row ``(a, b)`` of the matrix
``[[a, b], [conj(b), conj(a)]]`` with ``|a|^2 - |b|^2 = 1``.  Fields may be
complex scalars or equally shaped complex arrays; in the latter case the
object represents a batch of elements and every operation broadcasts.

Disk points are plain complex numbers (or arrays).  Functions that require
interior points validate them with :func:`check_interior`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateInputError

#: Points with ``|z| >= 1 - BOUNDARY_MARGIN`` are rejected.
BOUNDARY_MARGIN = 1e-12
#: Relative tolerance for the determinant condition ``|a|^2 - |b|^2 = 1``.
DET_TOL = 1e-12
_TINY = 1e-300


def check_interior(z, name="z"):
    """Return ``z`` as a complex array after checking it lies in the open disk."""
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    if np.any(np.abs(arr) >= 1.0 - BOUNDARY_MARGIN):
        raise ValueError(f"{name} must lie strictly inside the unit disk, got max |{name}| = "
                         f"{np.max(np.abs(arr)):.17g}")
    return arr


def _scalar_or_array(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An element (or batch of elements) of SU(1,1)."""

    a: complex | np.ndarray
    b: complex | np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        if a.shape != b.shape:
            raise ValueError(f"shape mismatch between a {a.shape} and b {b.shape}")
        scale = np.abs(a) ** 2 + np.abs(b) ** 2
        if not np.all(np.abs(np.abs(a) ** 2 - np.abs(b) ** 2 - 1.0) <= DET_TOL * scale):
            raise ValueError("not an SU(1,1) element: |a|^2 - |b|^2 != 1")
        object.__setattr__(self, "a", _scalar_or_array(a))
        object.__setattr__(self, "b", _scalar_or_array(b))

    @classmethod
    def identity(cls):
        return cls(1.0 + 0j, 0j)

    @property
    def shape(self):
        return np.shape(self.a)

    @property
    def matrix(self):
        """The 2x2 matrix (stacked along the last two axes for batches)."""
        a, b = np.asarray(self.a), np.asarray(self.b)
        return np.stack([np.stack([a, b], -1), np.stack([np.conj(b), np.conj(a)], -1)], -2)

    def inverse(self):
        return GroupElement(np.conj(self.a), -np.asarray(self.b))

    def __matmul__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return GroupElement(a1 * a2 + b1 * np.conj(b2), a1 * b2 + b1 * np.conj(a2))

    def __getitem__(self, index):
        return GroupElement(np.asarray(self.a)[index], np.asarray(self.b)[index])

    def ravel(self):
        return GroupElement(np.ravel(self.a), np.ravel(self.b))

    def __repr__(self):
        return f"GroupElement(a={self.a!r}, b={self.b!r})"


@dataclass(frozen=True)
class RotationElement:
    """Element of K = U(1) embedded as diag(e^{i phi}, e^{-i phi}).

    It acts on the disk as ``z -> e^{2 i phi} z``, so the action has period pi in phi.
    """

    phi: float | np.ndarray

    def element(self):
        return GroupElement(np.exp(1j * np.asarray(self.phi, dtype=float)),
                            np.zeros(np.shape(self.phi), dtype=complex))

    def act(self, z):
        return np.exp(2j * np.asarray(self.phi)) * np.asarray(z)


def embed(k: RotationElement) -> GroupElement:
    return k.element()


def _denominator(g, z):
    den = np.conj(g.b) * z + np.conj(g.a)
    if np.any(np.abs(den) < _TINY):
        raise DegenerateInputError("vanishing Möbius denominator")
    return den


def act(g: GroupElement, z):
    """Fractional linear action ``(a z + b) / (conj(b) z + conj(a))``."""
    z = np.asarray(z, dtype=complex)
    return _scalar_or_array((g.a * z + g.b) / _denominator(g, z))


def cocycle(g: GroupElement, z):
    """The cocycle ``j(g, z) = (conj(b) z + conj(a))^{-2}``; equals the derivative of ``act(g, .)``."""
    z = np.asarray(z, dtype=complex)
    return _scalar_or_array(_denominator(g, z) ** -2)


def tau(w, z):
    """The involution ``tau_w(z) = (w - z) / (1 - conj(w) z)`` exchanging ``w`` and 0."""
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    return _scalar_or_array((w - z) / (1.0 - np.conj(w) * z))


def lift_tau(w) -> GroupElement:
    """SU(1,1) lift of ``tau_w`` with ``a = -i/s``, ``b = i w/s``, ``s = sqrt(1 - |w|^2)``.

    The lift squares to ``-I``; since the cocycle exponent is even, ``-I`` acts
    trivially in the representation, so the sign of the lift is immaterial.
    """
    w = check_interior(w, "w")
    s = np.sqrt(1.0 - np.abs(w) ** 2)
    return GroupElement(-1j / s, 1j * w / s)


def decompose(g: GroupElement):
    """Split ``g = lift_tau(g.0) @ embed(k)``.

    Returns ``(z, k)`` with ``z = act(g, 0)``.  With the lift convention of
    :func:`lift_tau` the reconstruction reproduces ``g`` as a matrix, not just
    its action.
    """
    z = np.asarray(g.b, dtype=complex) / np.conj(g.a)
    # lift_tau(z)^{-1} g is diagonal; its (0, 0) entry is e^{i phi}.
    k_elem = lift_tau(z).inverse() @ g
    return _scalar_or_array(z), RotationElement(_scalar_or_array(np.angle(k_elem.a)))


def pseudo_dist(z, w):
    """Pseudohyperbolic distance ``|tau_z(w)|``."""
    return _scalar_or_array(np.abs(tau(z, w)))


def abs_value_identity_check(g: GroupElement, h: GroupElement):
    """``| |h^{-1} g . 0| - |tau_{h.0}(g.0)| |``; vanishes up to rounding."""
    lhs = np.abs(act(h.inverse() @ g, 0.0))
    rhs = np.abs(tau(act(h, 0.0), act(g, 0.0)))
    return _scalar_or_array(np.abs(lhs - rhs))


def random_group_elements(rng, size, max_radius=0.9):
    """Seeded batch ``lift_tau(z) @ embed(k)`` with ``|z| <= max_radius`` (area-uniform)."""
    rho = max_radius * np.sqrt(rng.uniform(size=size))
    z = rho * np.exp(2j * np.pi * rng.uniform(size=size))
    phi = rng.uniform(0.0, np.pi, size=size)
    return lift_tau(z) @ embed(RotationElement(phi))


def random_disk_points(rng, size, max_radius=0.9):
    rho = max_radius * np.sqrt(rng.uniform(size=size))
    return rho * np.exp(2j * np.pi * rng.uniform(size=size))
