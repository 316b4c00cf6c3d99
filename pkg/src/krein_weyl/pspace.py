"""Finite-dimensional Pontryagin spaces ``(C^n, J)``.

The indefinite inner product is ``[f, g] = (Jf, g) = g^H J f`` with ``J`` a
Hermitian involution (a fundamental symmetry). The negative index ``kappa``
is the number of ``-1`` eigenvalues of ``J``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import block_diag

from ._linalg import as_vector, conj_t, null, orth, span_equal
from .config import tol
from .exceptions import DimensionError, ZeroVectorError

__all__ = [
    "PontryaginSpace",
    "Subspace",
    "VectorClass",
    "inner",
    "vector_class",
    "negative_index_of_subspace",
    "orthogonal_companion",
    "decompose_subspace",
    "count_signs",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _to_involution(j: np.ndarray) -> np.ndarray:
    j = 0.5 * (j + conj_t(j))
    n = j.shape[0]
    if np.array_equal(j @ j, np.eye(n)):
        return j
    w, q = np.linalg.eigh(j)
    if n and np.max(np.abs(np.abs(w) - 1.0)) > 1e-6:
        raise ValueError("J is not close to a Hermitian involution")
    s = np.where(w < 0, -1.0, 1.0)
    out = (q * s) @ conj_t(q)
    # Entries that are exactly representable stay exact.
    rounded = np.round(out.real) + 1j * np.round(out.imag)
    if np.allclose(out, rounded, atol=1e-12):
        out = rounded
    return out


@dataclass(frozen=True, eq=False)
class PontryaginSpace:
    """The space ``(C^n, J)``.

    Parameters
    ----------
    J : array_like
        Hermitian involution. It is symmetrized and projected onto the
        nearest exact involution at construction.

    Examples
    --------
    >>> PontryaginSpace.from_signature(3, 1).kappa
    1
    """

    J: np.ndarray

    def __post_init__(self):
        j = np.array(self.J, dtype=complex)
        if j.ndim == 0 and j.size == 1:
            j = j.reshape(1, 1)
        if j.ndim != 2 or j.shape[0] != j.shape[1]:
            raise DimensionError(f"J must be square, got shape {j.shape}")
        object.__setattr__(self, "J", _frozen(_to_involution(j)))

    @classmethod
    def from_signature(cls, dim: int, kappa: int = 0) -> "PontryaginSpace":
        """``J = diag(+1 x (dim - kappa), -1 x kappa)``."""
        if not 0 <= kappa <= dim:
            raise ValueError(f"need 0 <= kappa <= dim, got kappa={kappa}, dim={dim}")
        return cls(np.diag([1.0] * (dim - kappa) + [-1.0] * kappa))

    @classmethod
    def hilbert(cls, dim: int) -> "PontryaginSpace":
        return cls.from_signature(dim, 0)

    @property
    def dim(self) -> int:
        return self.J.shape[0]

    @property
    def kappa(self) -> int:
        if self.dim == 0:
            return 0
        return int(np.sum(np.linalg.eigvalsh(self.J) < 0))

    def negated(self) -> "PontryaginSpace":
        """The anti-space ``(C^n, -J)``."""
        return PontryaginSpace(-self.J)

    def oplus(self, other: "PontryaginSpace") -> "PontryaginSpace":
        """Orthogonal direct sum."""
        return PontryaginSpace(_block(self.J, other.J))

    def full(self) -> "Subspace":
        return Subspace(self, np.eye(self.dim, dtype=complex))

    def zero(self) -> "Subspace":
        return Subspace(self, np.zeros((self.dim, 0), dtype=complex))

    def __eq__(self, other):
        return isinstance(other, PontryaginSpace) and np.array_equal(self.J, other.J)

    __hash__ = None

    def __repr__(self):
        return f"PontryaginSpace(dim={self.dim}, kappa={self.kappa})"


def _block(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size == 0:
        return np.array(b, dtype=complex)
    if b.size == 0:
        return np.array(a, dtype=complex)
    return block_diag(a, b).astype(complex)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of a Pontryagin space, stored by an orthonormal basis.

    The basis is re-orthonormalized on construction, so any spanning set may
    be passed. Equality is span equality.
    """

    ambient: PontryaginSpace
    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=complex)
        if b.ndim == 1:
            b = b.reshape(-1, 1)
        if b.shape[0] != self.ambient.dim:
            raise DimensionError(
                f"basis has {b.shape[0]} rows, ambient dimension is {self.ambient.dim}")
        object.__setattr__(self, "basis", _frozen(orth(b)))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def gram(self) -> np.ndarray:
        """Gram matrix ``B^H J B`` of the indefinite form on the basis."""
        b = self.basis
        return conj_t(b) @ self.ambient.J @ b

    def contains(self, other: "Subspace") -> bool:
        from ._linalg import span_contains
        return span_contains(self.basis, other.basis)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and other.ambient.dim == self.ambient.dim
                and span_equal(self.basis, other.basis))

    __hash__ = None

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient.dim})"


class VectorClass(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


def inner(space: PontryaginSpace, f, g) -> complex:
    """Indefinite inner product ``[f, g] = (Jf, g)``.

    Linear in ``f``, conjugate-linear in ``g``.
    """
    f, g = as_vector(f), as_vector(g)
    if f.size != space.dim or g.size != space.dim:
        raise DimensionError(
            f"vectors of length {f.size}, {g.size} in a space of dimension {space.dim}")
    return complex(np.vdot(g, space.J @ f))


def vector_class(space: PontryaginSpace, f) -> VectorClass:
    """Classify ``f`` by the sign of ``[f, f]`` relative to ``||f||^2``."""
    f = as_vector(f)
    nrm2 = float(np.vdot(f, f).real)
    if nrm2 == 0.0:
        raise ZeroVectorError("the zero vector has no class")
    val = inner(space, f, f).real
    if abs(val) <= tol().form * nrm2:
        return VectorClass.NEUTRAL
    return VectorClass.POSITIVE if val > 0 else VectorClass.NEGATIVE


def count_signs(h: np.ndarray, rtol: float | None = None,
                floor: float = 0.0) -> tuple[int, int, int]:
    """Return ``(positive, negative, zero)`` eigenvalue counts of a Hermitian matrix.

    Eigenvalues with modulus at most ``rtol * max(||h||_2, floor)`` count as
    zero. Gram matrices of orthonormal bases pass ``floor=1``.
    """
    if h.size == 0:
        return 0, 0, 0
    h = 0.5 * (h + conj_t(h))
    w = np.linalg.eigvalsh(h)
    rtol = tol().form if rtol is None else rtol
    band = rtol * max(np.max(np.abs(w)), floor)
    pos = int(np.sum(w > band))
    neg = int(np.sum(w < -band))
    return pos, neg, len(w) - pos - neg


def negative_index_of_subspace(sub: Subspace) -> int:
    """Dimension of a maximal negative subspace of ``sub``."""
    return count_signs(sub.gram(), floor=1.0)[1]


def orthogonal_companion(sub: Subspace) -> Subspace:
    """The J-orthogonal companion ``sub^[⊥] = {g : [f, g] = 0 for f in sub}``."""
    space = sub.ambient
    if sub.dim == 0:
        return space.full()
    return Subspace(space, null(conj_t(sub.basis) @ space.J))


def decompose_subspace(sub: Subspace) -> tuple[Subspace, Subspace, Subspace]:
    """Split ``sub`` into isotropic, positive and negative parts.

    Returns
    -------
    isotropic, positive, negative : Subspace
        ``isotropic = sub ∩ sub^[⊥]``; the other two are uniformly definite,
        mutually J-orthogonal, and together with the isotropic part span
        ``sub``.
    """
    space = sub.ambient
    g = sub.gram()
    if sub.dim == 0:
        z = space.zero()
        return z, z, z
    g = 0.5 * (g + conj_t(g))
    w, v = np.linalg.eigh(g)
    band = tol().form * max(np.max(np.abs(w)), 1.0)
    b = sub.basis
    iso = Subspace(space, b @ v[:, np.abs(w) <= band])
    pos = Subspace(space, b @ v[:, w > band])
    neg = Subspace(space, b @ v[:, w < -band])
    return iso, pos, neg
