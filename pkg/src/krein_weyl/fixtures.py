"""Reusable fixtures: the four-dimensional worked example and scalar pairs."""

from __future__ import annotations

import numpy as np

from ._linalg import null
from .boundary import BoundaryPair, direct_pair, from_colligation
from .colligation import UnitaryColligation, random_colligation
from .pspace import PontryaginSpace

__all__ = [
    "antidiagonal_space",
    "example_pair",
    "example_theta",
    "example_s_kernel",
    "scalar_lambda_colligation",
    "scalar_lambda_pair",
    "constant_colligation",
    "flip_kappa1_colligation",
    "random_pair",
    "multivalued_pair",
]


def antidiagonal_space(n: int = 4) -> PontryaginSpace:
    """``(C^n, J)`` with the anti-diagonal fundamental symmetry."""
    return PontryaginSpace(np.fliplr(np.eye(n)))


def example_generators() -> np.ndarray:
    """Generators of ``Γ`` for the isometry ``e1 -> e2`` in ``(C^4, anti-diagonal J)``.

    ``dom Γ = {f3' = f4}`` and, with ``s = 1/sqrt(2)``,

        Γ1 f_hat = s (f1' - f4', f1 - f2' + f4, f2 + f3)
        Γ2 f_hat = s (f1' + f4', f1 - f2' - f4, f2 - f3).
    """
    constraint = np.zeros((1, 8))
    constraint[0, 6], constraint[0, 3] = 1.0, -1.0
    dom = null(constraint)
    f, fp = dom[:4], dom[4:]
    s = 1 / np.sqrt(2)
    g1 = s * np.vstack([fp[0] - fp[3], f[0] - fp[1] + f[3], f[1] + f[2]])
    g2 = s * np.vstack([fp[0] + fp[3], f[0] - fp[1] - f[3], f[1] - f[2]])
    return np.vstack([f, fp, g1, g2])


def example_pair() -> BoundaryPair:
    """The four-dimensional single-valued boundary triple with ``L1 = L2 = C^3``."""
    return direct_pair(antidiagonal_space(4), example_generators(), 3, 3)


def example_theta(lam: complex) -> np.ndarray:
    """Closed form ``Θ(λ) = (1/(3λ^2)) [[λ^2, 2λ^3, 2λ^4], [2λ, λ^2, -2λ^3], [2, -2λ, λ^2]]``."""
    l = complex(lam)
    m = np.array([[l**2, 2 * l**3, 2 * l**4],
                  [2 * l, l**2, -2 * l**3],
                  [2, -2 * l, l**2]])
    return m / (3 * l**2)


def example_s_kernel(lam: complex, omega: complex) -> np.ndarray:
    """Closed form of ``(I - Θ(ω)^* Θ(λ)) / (1 - λ conj(ω))`` for the example."""
    l, wb = complex(lam), np.conj(complex(omega))
    x = l * wb
    m = np.array([[2 * (1 + 2 * x), -(2 + x), 1 - x],
                  [-(2 + x), 2 * (1 - x), -(1 + 2 * x)],
                  [1 - x, -(1 + 2 * x), -2 * (2 + x)]])
    return (-2 / (9 * l**2 * wb**2)) * np.diag([1, wb, wb**2]) @ m @ np.diag([1, l, l**2])


def scalar_lambda_colligation() -> UnitaryColligation:
    """``T = 0, F = G = 1, H = 0``: the flip, with ``Θ(λ) = λ``."""
    return UnitaryColligation(PontryaginSpace.hilbert(1), 0, 1, 1, 0)


def scalar_lambda_pair() -> BoundaryPair:
    return from_colligation(scalar_lambda_colligation())


def constant_colligation(h) -> UnitaryColligation:
    """Empty-state colligation whose characteristic function is the constant ``h``."""
    h = np.atleast_2d(np.asarray(h, dtype=complex))
    return UnitaryColligation(PontryaginSpace.hilbert(0), np.zeros((0, 0)),
                              np.zeros((0, h.shape[1])), np.zeros((h.shape[0], 0)), h)


def flip_kappa1_colligation() -> UnitaryColligation:
    """``Θ(ζ) = (2 + ζ)/(1 + 2ζ)`` on ``(C^1, J = -1)``: ``T = -2, F = √3, G = -√3, H = 2``."""
    r = np.sqrt(3.0)
    return UnitaryColligation(PontryaginSpace.from_signature(1, 1), -2, r, -r, 2)


def random_pair(rng, state_dim: int, kappa: int = 0, boundary_dim: int = 1,
                **kw) -> BoundaryPair:
    """Pair of a random closely connected colligation."""
    return from_colligation(random_colligation(rng, state_dim, kappa, boundary_dim, **kw))


def multivalued_pair() -> BoundaryPair:
    """Unitary pair on Hilbert ``C^1`` with ``mul Γ = span{(1, 1)}``.

    ``Γ`` is spanned by ``((1, 1), (0, 0))`` and ``((0, 0), (1, 1))``.
    """
    gens = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
    return direct_pair(PontryaginSpace.hilbert(1), gens, 1, 1)
