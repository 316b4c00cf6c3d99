"""Proper extensions ``V_Φ`` and their Kreĭn-type resolvent formulas.

A boundary parameter ``Φ = {(Φ1 h, Φ2 h) : h ∈ 𝓗}`` selects

    V_Φ = {f_hat ∈ V_* : (f_hat, (Φ1 h, Φ2 h)) ∈ Γ for some h}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import conj_t, cond, null, solve_square
from .boundary import (BoundaryPair, gamma1, gamma2, gamma_sharp, region, theta,
                       theta_sharp, v1_boundary_lift)
from .config import tol
from .exceptions import DegenerateParameterError, ExcludedPointError, SingularPencilError
from .relation import LinearRelation, coresolvent_matrix, resolvent_matrix

__all__ = [
    "ExtensionParameter",
    "NotInvertible",
    "NOT_INVERTIBLE",
    "build_extension",
    "resolvent",
    "coresolvent",
    "direct_resolvent_oracle",
    "direct_coresolvent_oracle",
    "spectral_point_check",
]


@dataclass(frozen=True, eq=False)
class ExtensionParameter:
    """Boundary parameter ``(Φ1, Φ2)`` with ``ker(Φ1^*Φ1 + Φ2^*Φ2) = 0``."""

    Phi1: np.ndarray
    Phi2: np.ndarray

    def __post_init__(self):
        p1 = np.atleast_2d(np.asarray(self.Phi1, dtype=complex))
        p2 = np.atleast_2d(np.asarray(self.Phi2, dtype=complex))
        if p1.shape[1] != p2.shape[1]:
            raise ValueError("Phi1 and Phi2 need the same number of columns")
        m = p1.shape[1]
        if m == 0:
            raise DegenerateParameterError("parameter space is trivial")
        gram = conj_t(p1) @ p1 + conj_t(p2) @ p2
        if cond(gram) > tol().cond_cap:
            raise DegenerateParameterError("ker(Φ1*Φ1 + Φ2*Φ2) ≠ 0")
        p1.setflags(write=False)
        p2.setflags(write=False)
        object.__setattr__(self, "Phi1", p1)
        object.__setattr__(self, "Phi2", p2)

    @classmethod
    def from_graph(cls, theta0) -> "ExtensionParameter":
        """``Φ = graph of θ0``: ``Φ1 = I``, ``Φ2 = θ0``."""
        t = np.atleast_2d(np.asarray(theta0, dtype=complex))
        return cls(np.eye(t.shape[1]), t)

    @property
    def param_dim(self) -> int:
        return self.Phi1.shape[1]


class NotInvertible:
    """Sentinel returned by the direct oracles."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NOT_INVERTIBLE"


NOT_INVERTIBLE = NotInvertible()


def _check_dims(bp: BoundaryPair, phi: ExtensionParameter) -> None:
    if phi.Phi1.shape[0] != bp.L1_dim or phi.Phi2.shape[0] != bp.L2_dim:
        raise ValueError(
            f"Φ rows ({phi.Phi1.shape[0]}, {phi.Phi2.shape[0]}) do not match "
            f"boundary dims ({bp.L1_dim}, {bp.L2_dim})")


def build_extension(bp: BoundaryPair, phi: ExtensionParameter) -> LinearRelation:
    """``V_Φ`` as the null space of the joint system on (Γ generators) x 𝓗.

    Examples
    --------
    >>> from krein_weyl.fixtures import scalar_lambda_pair
    >>> v = build_extension(scalar_lambda_pair(), ExtensionParameter.from_graph(0.5))
    >>> round(complex(v.matrix()[0, 0]).real, 12)
    0.5
    """
    _check_dims(bp, phi)
    f, fp, u1, u2 = bp.blocks()
    k = f.shape[1]
    system = np.block([[u1, -phi.Phi1], [u2, -phi.Phi2]])
    sol = null(system)
    c = sol[:k]
    return LinearRelation.from_generators(bp.H, bp.H, np.vstack([f @ c, fp @ c]))


def _pencil_scale(a: np.ndarray, th: np.ndarray, b: np.ndarray) -> float:
    """Natural size of the pencil ``a - th @ b``."""
    def n2(m):
        return float(np.linalg.norm(m, 2)) if m.size else 0.0
    return n2(a) + n2(th) * n2(b)


def _pencil_solve(p: np.ndarray, rhs: np.ndarray, scale: float) -> np.ndarray:
    return solve_square(p, rhs, SingularPencilError, "boundary pencil", scale=scale)


def resolvent(bp: BoundaryPair, phi: ExtensionParameter, lam: complex) -> np.ndarray:
    """``(V_Φ - λ)^{-1}`` by the Kreĭn formula.

    For ``λ ∈ 𝒟``::

        (V1 - λ)^{-1} + (1/λ) γ1(λ) Φ1 (Φ2 - Θ(λ)Φ1)^{-1} γ2#(λ)

    with ``(1/λ) γ2#(λ)`` replaced by its limit ``(γ2#)'(0)`` at ``λ = 0``.
    For ``λ ∈ 𝒟_e``::

        (V2 - λ)^{-1} - (1/λ) γ2(λ) Φ2 (Φ1 - Θ#(λ)Φ2)^{-1} γ1#(λ)

    Raises
    ------
    SingularPencilError
        If the boundary pencil is not boundedly invertible.
    ExcludedPointError
        If ``λ`` is outside ``𝒟 ∪ 𝒟_e``.
    """
    _check_dims(bp, phi)
    lam = complex(lam)
    pp = bp.parts
    p1, p2 = phi.Phi1, phi.Phi2
    if region(lam) == "D":
        base = resolvent_matrix(pp.V1, lam, ExcludedPointError)
        g1 = gamma1(bp, lam)
        th = theta(bp, lam)
        pencil = p2 - th @ p1
        tail = v1_boundary_lift(bp, 0.0) if lam == 0 else gamma_sharp(bp, lam, 2) / lam
        return base + g1 @ p1 @ _pencil_solve(pencil, tail, _pencil_scale(p2, th, p1))
    base = resolvent_matrix(pp.V2, lam, ExcludedPointError)
    g2 = gamma2(bp, lam)
    th = theta_sharp(bp, lam)
    pencil = p1 - th @ p2
    tail = gamma_sharp(bp, lam, 1) / lam
    return base - g2 @ p2 @ _pencil_solve(pencil, tail, _pencil_scale(p1, th, p2))


def coresolvent(bp: BoundaryPair, phi: ExtensionParameter, z: complex) -> np.ndarray:
    """``(I - z V_Φ)^{-1}``.

    For ``|z| < 1`` (``conj z ∈ 𝒟``)::

        (I - zV2)^{-1} + γ2(1/z) Φ2 (Φ1 - Θ(conj z)^* Φ2)^{-1} γ1(conj z)^[*]

    and for ``|z| > 1``::

        (I - zV1)^{-1} - γ1(1/z) Φ1 (Φ2 - Θ(1/z) Φ1)^{-1} γ2(conj z)^[*]

    At ``z = 0`` the result is ``I``.
    """
    _check_dims(bp, phi)
    z = complex(z)
    n = bp.n
    if z == 0:
        return np.eye(n, dtype=complex)
    j = bp.H.J
    pp = bp.parts
    p1, p2 = phi.Phi1, phi.Phi2
    if region(z) == "D":
        zc = np.conj(z)
        base = coresolvent_matrix(pp.V2, z, ExcludedPointError)
        th = conj_t(theta(bp, zc))
        pencil = p1 - th @ p2
        tail = conj_t(gamma1(bp, zc)) @ j
        return base + gamma2(bp, 1 / z) @ p2 @ _pencil_solve(pencil, tail,
                                                           _pencil_scale(p1, th, p2))
    base = coresolvent_matrix(pp.V1, z, ExcludedPointError)
    th = theta(bp, 1 / z)
    pencil = p2 - th @ p1
    tail = conj_t(gamma2(bp, np.conj(z))) @ j
    return base - gamma1(bp, 1 / z) @ p1 @ _pencil_solve(pencil, tail, _pencil_scale(p2, th, p1))


def direct_resolvent_oracle(v_phi: LinearRelation, lam: complex):
    """``(V_Φ - λ)^{-1}`` by direct pencil inversion, or ``NOT_INVERTIBLE``."""
    try:
        return resolvent_matrix(v_phi, complex(lam), SingularPencilError)
    except SingularPencilError:
        return NOT_INVERTIBLE


def direct_coresolvent_oracle(v_phi: LinearRelation, z: complex):
    """``(I - z V_Φ)^{-1}`` by direct pencil inversion, or ``NOT_INVERTIBLE``."""
    try:
        return coresolvent_matrix(v_phi, complex(z), SingularPencilError)
    except SingularPencilError:
        return NOT_INVERTIBLE


def spectral_point_check(bp: BoundaryPair, phi: ExtensionParameter, lam: complex) -> dict:
    """Relate the boundary pencil at ``λ`` to the spectrum of ``V_Φ``.

    Returns
    -------
    dict
        ``implies_eigenvalue``: the pencil has a kernel, so ``λ ∈ σ_p(V_Φ)``.
        ``pencil_invertible``: the pencil is square with bounded inverse, so
        ``λ ∈ ρ(V_Φ)`` for ordinary triples.
    """
    _check_dims(bp, phi)
    lam = complex(lam)
    p1, p2 = phi.Phi1, phi.Phi2
    if region(lam) == "D":
        th = theta(bp, lam)
        pencil, scale = p2 - th @ p1, _pencil_scale(p2, th, p1)
    else:
        th = theta_sharp(bp, lam)
        pencil, scale = p1 - th @ p2, _pencil_scale(p1, th, p2)
    s = np.linalg.svd(pencil, compute_uv=False) if pencil.size else np.zeros(0)
    ref = max(scale, s[0]) if s.size else scale
    # A kernel is declared with the same cutoff that refuses bounded inversion.
    rank = int(np.sum(s * tol().cond_cap >= ref))
    has_kernel = rank < pencil.shape[1]
    invertible = pencil.shape[0] == pencil.shape[1] and not has_kernel
    return {"implies_eigenvalue": bool(has_kernel), "pencil_invertible": bool(invertible)}
