"""Generalized coresolvents through a coupling of two boundary pairs.

The base pair ``Γ`` (an ordinary triple for ``V`` in ``H``) is coupled with a
parameter pair ``Γ⁻`` for ``V⁻`` in ``H⁻`` whose Weyl function is ``ε``. The
parameter enters through its transpose, so the coupled pair lives on
``H ⊕ H⁻`` with kernel ``V ⊕ (V⁻)^{-1}`` and elements

    ((f+, g'), (f+', g)),  ((u1+, u2-), (u1-, u2+))

for ``((f+, f+'), (u1+, u2+)) ∈ Γ`` and ``((g, g'), (u1-, u2-)) ∈ Γ⁻``. Its
Weyl function is ``[[0, ε^T], [Θ, 0]]`` with ``ε^T(z) = ε(conj z)^*``. The
extension with ``Φ1 = Φ2 = I`` is unitary and compresses to

    K_z = (I - zV2)^{-1} + γ2(1/z) ε(z) (I - Θ(conj z)^* ε(z))^{-1} γ1(conj z)^[*].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._linalg import conj_t, orth, solve_square
from .boundary import (BoundaryPair, _make_pair, gamma1, gamma2, region, theta)
from .config import tol
from .exceptions import (DimensionMismatchError, ExcludedPointError, KreinWeylError,
                         NotOrdinaryError, RegularityError, UnimodularProductError)
from .extensions import ExtensionParameter, build_extension, coresolvent
from .kernels import SamplerConfig, NegativeSquares, classify_pair
from .pspace import count_signs
from .relation import LinearRelation, coresolvent_matrix, is_simple

__all__ = [
    "Coupling",
    "couple",
    "generalized_coresolvent",
    "coresolvent_formula",
    "coupled_extension",
    "compression_oracle",
    "coresolvent_kernel",
    "regularity_index",
    "formula_regularity_index",
    "ShtrausParameter",
    "shtraus_parameter",
]


@dataclass(frozen=True, eq=False)
class Coupling:
    base: BoundaryPair
    parameter_pair: BoundaryPair
    tilde: BoundaryPair

    def eps(self, z: complex) -> np.ndarray:
        """``ε(z)``, the Weyl function of the parameter pair."""
        return theta(self.parameter_pair, z)

    def tilde_theta_expected(self, z: complex) -> np.ndarray:
        th = theta(self.base, z)
        eps_t = conj_t(theta(self.parameter_pair, np.conj(z)))
        l1, l2 = th.shape[1], th.shape[0]
        out = np.zeros((l1 + l2, l1 + l2), dtype=complex)
        out[:l1, l1:] = eps_t
        out[l1:, :l1] = th
        return out


def _coupled_pair(base: BoundaryPair, par: BoundaryPair) -> BoundaryPair:
    fa, fpa, u1a, u2a = base.blocks()
    g, gp, v1, v2 = par.blocks()
    ka, kb = fa.shape[1], g.shape[1]
    n, m, l1, l2 = base.n, par.n, base.L1_dim, base.L2_dim

    def z(r, k):
        return np.zeros((r, k), dtype=complex)

    gens = np.vstack([
        np.hstack([fa, z(n, kb)]),         # f+
        np.hstack([z(m, ka), gp]),         # f- = g'
        np.hstack([fpa, z(n, kb)]),        # f+'
        np.hstack([z(m, ka), g]),          # f-' = g
        np.hstack([u1a, z(l1, kb)]),       # u1+
        np.hstack([z(l2, ka), v2]),        # u2-
        np.hstack([z(l1, ka), v1]),        # u1-
        np.hstack([u2a, z(l2, kb)]),       # u2+
    ])
    return _make_pair(base.H.oplus(par.H), l1 + l2, l1 + l2, gens)


_PROBES = (0.31 + 0.17j, -0.23 + 0.41j, 0.52j)


def couple(base: BoundaryPair, parameter_pair: BoundaryPair) -> Coupling:
    """Build the coupled pair and check its Weyl function at probe points.

    Raises
    ------
    NotOrdinaryError
        If the base pair is not an ordinary boundary triple.
    DimensionMismatchError
        If the boundary spaces of the two pairs differ.
    """
    if (parameter_pair.L1_dim, parameter_pair.L2_dim) != (base.L1_dim, base.L2_dim):
        raise DimensionMismatchError(
            f"parameter boundary dims {(parameter_pair.L1_dim, parameter_pair.L2_dim)} "
            f"differ from base {(base.L1_dim, base.L2_dim)}")
    if classify_pair(base).kind != "ordinary":
        raise NotOrdinaryError("the base pair must be an ordinary boundary triple")
    cp = Coupling(base, parameter_pair, _coupled_pair(base, parameter_pair))
    for p in _PROBES:
        try:
            want = cp.tilde_theta_expected(p)
            got = theta(cp.tilde, p)
        except KreinWeylError:
            continue
        if np.linalg.norm(got - want) > 1e-6 * max(1.0, np.linalg.norm(want)):
            raise RuntimeError("coupled Weyl function lost its block structure")
    return cp


def coresolvent_formula(base: BoundaryPair, eps: Callable[[complex], np.ndarray],
                        z: complex) -> np.ndarray:
    """Generalized coresolvent for a Schur parameter given as a callable.

    Interior branch (``|z| < 1``)::

        (I - zV2)^{-1} + γ2(1/z) ε(z) (I - Θ(conj z)^* ε(z))^{-1} γ1(conj z)^[*]

    Exterior branch (``|z| > 1``), with ``ε^T(w) = ε(conj w)^*``::

        (I - zV1)^{-1} - γ1(1/z) ε^T(1/z) (I - Θ(1/z) ε^T(1/z))^{-1} γ2(conj z)^[*]

    Raises
    ------
    RegularityError
        If the middle pencil is singular.
    """
    z = complex(z)
    n = base.n
    if z == 0:
        return np.eye(n, dtype=complex)
    j = base.H.J
    pp = base.parts
    if region(z) == "D":
        zc = np.conj(z)
        e = np.atleast_2d(eps(z))
        th_star = conj_t(theta(base, zc))
        pencil = np.eye(e.shape[1]) - th_star @ e
        first = coresolvent_matrix(pp.V2, z, ExcludedPointError)
        tail = conj_t(gamma1(base, zc)) @ j
        mid = solve_square(pencil, tail, RegularityError, "I - Θ(z̄)*ε(z)",
                           scale=1 + np.linalg.norm(th_star, 2) * np.linalg.norm(e, 2))
        return first + gamma2(base, 1 / z) @ e @ mid
    w = 1 / z
    e_t = conj_t(np.atleast_2d(eps(np.conj(w))))
    th = theta(base, w)
    pencil = np.eye(e_t.shape[1]) - th @ e_t
    first = coresolvent_matrix(pp.V1, z, ExcludedPointError)
    tail = conj_t(gamma2(base, np.conj(z))) @ j
    mid = solve_square(pencil, tail, RegularityError, "I - Θ(1/z)ε^T(1/z)",
                       scale=1 + np.linalg.norm(th, 2) * np.linalg.norm(e_t, 2))
    return first - gamma1(base, w) @ e_t @ mid


def generalized_coresolvent(coupling: Coupling, z: complex) -> np.ndarray:
    """``K_z`` of the coupling by the Kreĭn-type formula."""
    return coresolvent_formula(coupling.base, coupling.eps, z)


def coupled_extension(coupling: Coupling) -> LinearRelation:
    """``Ṽ_Φ`` on ``H ⊕ H⁻`` with ``Φ1 = Φ2 = I``."""
    l = coupling.tilde.L1_dim
    return build_extension(coupling.tilde, ExtensionParameter(np.eye(l), np.eye(l)))


def compression_oracle(coupling: Coupling, z: complex) -> np.ndarray:
    """``P_H (I - zṼ_Φ)^{-1}|_H`` by direct inversion on the coupled space."""
    v = coupled_extension(coupling)
    full = coresolvent_matrix(v, complex(z), ExcludedPointError)
    n = coupling.base.n
    return full[:n, :n]


def coresolvent_kernel(k: Callable[[complex], np.ndarray], z: complex, w: complex,
                       J: np.ndarray) -> np.ndarray:
    """``R_w(z) = (K_z + K_w^[*] - I)/(1 - z conj w) - K_w^[*] K_z``.

    ``K^[*] = J K^* J`` is the adjoint in the state space with metric ``J``.
    """
    d = 1 - complex(z) * np.conj(complex(w))
    if abs(d) <= 1e-12:
        raise UnimodularProductError("z conj(w) = 1")
    kz = k(z)
    kw_adj = J @ conj_t(k(w)) @ J
    i = np.eye(kz.shape[0])
    return (kz + kw_adj - i) / d - kw_adj @ kz


def _kernel_count(k: Callable[[complex], np.ndarray], J: np.ndarray,
                  sampler: SamplerConfig) -> NegativeSquares:
    cache: dict = {}

    def kval(z):
        if z not in cache:
            cache[z] = k(z)
        return cache[z]

    def usable(pts):
        good = []
        for p in pts:
            try:
                kval(p)
            except KreinWeylError:
                continue
            good.append(p)
        return good

    n = sampler.start()
    history = []
    pts: list = []
    for _ in range(sampler.max_refinements + 1):
        pts = usable(sampler.points(n))
        if not pts:
            raise RegularityError("the coresolvent formula is singular at every sample point")
        # Block (i, j) is J R_{z_i}(z_j), which makes the Gram matrix Hermitian.
        blocks = [[J @ coresolvent_kernel(kval, zj, zi, J) for zj in pts] for zi in pts]
        g = np.block(blocks)
        g = 0.5 * (g + conj_t(g))
        history.append(count_signs(g, rtol=tol().kernel)[1])
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            return NegativeSquares(history[-1], True, len(pts), tuple(history))
        n *= 2
    return NegativeSquares(history[-1], False, len(pts), tuple(history))


def regularity_index(coupling: Coupling, sampler: SamplerConfig | None = None,
                     check_minimal: bool = True) -> NegativeSquares:
    """Negative squares of ``R_w(z)`` built from ``K_z`` of the coupling.

    For a simple parameter isometry the count equals the negative index of
    the parameter state space.

    Raises
    ------
    ValueError
        If ``check_minimal`` and the parameter isometry is not simple.
    """
    sampler = sampler or SamplerConfig(expected=coupling.parameter_pair.H.kappa)
    if check_minimal and coupling.parameter_pair.n and not is_simple(coupling.parameter_pair.parts.V):
        raise ValueError("parameter isometry is not simple; the representation is not minimal")
    return _kernel_count(lambda z: generalized_coresolvent(coupling, z),
                         coupling.base.H.J, sampler)


def formula_regularity_index(base: BoundaryPair, eps: Callable[[complex], np.ndarray],
                             sampler: SamplerConfig | None = None) -> NegativeSquares:
    """Same as :func:`regularity_index` for a parameter given as a callable."""
    sampler = sampler or SamplerConfig()
    return _kernel_count(lambda z: coresolvent_formula(base, eps, z), base.H.J, sampler)


def _boundary_values(bp: BoundaryPair, fhat: np.ndarray) -> np.ndarray:
    f, fp, u1, u2 = bp.blocks()
    dom = np.vstack([f, fp])
    c, *_ = np.linalg.lstsq(dom, fhat, rcond=None)
    res = np.linalg.norm(dom @ c - fhat)
    if res > 1e-8 * max(1.0, np.linalg.norm(fhat)):
        raise ExcludedPointError("vector is not in dom Γ")
    return np.vstack([u1 @ c, u2 @ c])


@dataclass(frozen=True)
class ShtrausParameter:
    z: complex
    relation: np.ndarray
    matrix: np.ndarray | None
    residual: float


def shtraus_parameter(coupling: Coupling, z: complex) -> ShtrausParameter:
    """Extract ``ε(z) = {(Γ1 K̂_z g, Γ2 K̂_z g)}`` from the compressed coresolvent.

    ``K̂_z g = (z K_z g, K_z g - g)`` lies in ``V^{-[*]}``. The extracted
    relation is frozen into an extension parameter and the coresolvent it
    produces is compared with ``K_z``; the comparison is ``residual``.
    """
    z = complex(z)
    if z == 0:
        raise ExcludedPointError("the Shtraus parameter is not determined at z = 0")
    base = coupling.base
    k = compression_oracle(coupling, z)
    n = base.n
    kh = np.vstack([z * k, k - np.eye(n)])
    uv = _boundary_values(base, kh)
    l1 = base.L1_dim
    rel = orth(uv)
    u1, u2 = rel[:l1], rel[l1:]
    mat = None
    if u1.shape[1] == l1 and np.linalg.matrix_rank(u1) == l1:
        mat = u2 @ np.linalg.inv(u1)
    phi = ExtensionParameter(u1, u2)
    res = float(np.max(np.abs(coresolvent(base, phi, z) - k)))
    return ShtrausParameter(z, rel, mat, res)
