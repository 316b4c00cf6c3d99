"""Unitary boundary pairs, γ-fields and Weyl functions.

A boundary pair for an isometric relation ``V`` in ``H`` is a unitary
relation ``Γ`` from the graph space ``(H^2, diag(J, -J))`` to the boundary
space ``(L1 x L2, diag(I, -I))`` with ``ker Γ = V``. Unitarity of ``Γ`` is
the abstract Green identity

    [f, g] - [f', g'] = (u1, v1) - (u2, v2).

Evaluation points are split into the disk ``D`` and its exterior ``D_e``.
On ``D`` the pair yields ``γ1(λ)`` and the Weyl function ``Θ(λ)``, on
``D_e`` it yields ``γ2(λ)`` and ``Θ#(λ) = Θ(1/conj(λ))^*``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from ._linalg import conj_t, null, solve_square
from .colligation import UnitaryColligation, require_valid
from .config import tol
from .exceptions import (DimensionError, EigenvalueCollisionError, ExcludedPointError,
                         MixedRegionError, MultivaluedWeylError, NotUnitaryError,
                         UnimodularAlphaError, UnimodularPointError)
from .pspace import PontryaginSpace
from .relation import (LinearRelation, classify, eigen_subspace, graph_metric,
                       resolvent_matrix)

__all__ = [
    "BoundaryPair",
    "PairParts",
    "boundary_space",
    "boundary_structure",
    "WeylEvaluation",
    "region",
    "from_colligation",
    "direct_pair",
    "main_transform",
    "from_main_transform",
    "green_identity_residual",
    "parts",
    "weyl",
    "weyl_family",
    "theta",
    "gamma1",
    "gamma2",
    "theta_sharp",
    "gamma_sharp",
    "gamma2_sharp_derivative_at_zero",
    "v1_boundary_lift",
    "v2_boundary_lift",
    "mobius",
    "mobius_matrix",
    "mobius_map",
    "transpose",
    "pair_direct_sum",
    "gamma_resolvent_identity_residual",
]


def boundary_space(l1: int, l2: int) -> PontryaginSpace:
    """``(L1 x L2, diag(I, -I))``."""
    return PontryaginSpace(np.diag([1.0] * l1 + [-1.0] * l2))


def region(lam: complex) -> str:
    """``"D"`` for ``|λ| < 1`` and ``"De"`` for ``|λ| > 1``."""
    lam = complex(lam)
    if abs(abs(lam) - 1.0) <= tol().spectrum:
        raise UnimodularPointError(f"λ = {lam} lies on the unit circle")
    return "D" if abs(lam) < 1 else "De"


class PairParts(NamedTuple):
    V: LinearRelation
    V1: LinearRelation
    V2: LinearRelation
    V_star: LinearRelation


@dataclass(frozen=True, eq=False)
class BoundaryPair:
    """A unitary boundary pair.

    Attributes
    ----------
    H : PontryaginSpace
        State space.
    L1_dim, L2_dim : int
        Dimensions of the Hilbert boundary spaces.
    gamma : LinearRelation
        ``Γ`` with graph rows ordered ``(f, f', u1, u2)``.
    colligation : UnitaryColligation or None
        Set for pairs built by :func:`from_colligation`.
    """

    H: PontryaginSpace
    L1_dim: int
    L2_dim: int
    gamma: LinearRelation
    colligation: UnitaryColligation | None = field(default=None)

    @property
    def backing(self) -> str:
        return "direct" if self.colligation is None else "colligation"

    @property
    def n(self) -> int:
        return self.H.dim

    def blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Rows ``f, f', u1, u2`` of the orthonormal graph basis of ``Γ``."""
        b = self.gamma.graph.basis
        n, l1 = self.n, self.L1_dim
        return b[:n], b[n:2 * n], b[2 * n:2 * n + l1], b[2 * n + l1:]

    @cached_property
    def parts(self) -> PairParts:
        return _compute_parts(self)

    def __eq__(self, other):
        return (isinstance(other, BoundaryPair) and self.H == other.H
                and self.L1_dim == other.L1_dim and self.L2_dim == other.L2_dim
                and self.gamma == other.gamma)

    __hash__ = None

    def __repr__(self):
        return (f"BoundaryPair(dim_H={self.n}, kappa={self.H.kappa}, L1={self.L1_dim}, "
                f"L2={self.L2_dim}, backing={self.backing!r})")


def _make_pair(h: PontryaginSpace, l1: int, l2: int, gens,
               colligation: UnitaryColligation | None = None) -> BoundaryPair:
    rel = LinearRelation.from_generators(graph_metric(h, h), boundary_space(l1, l2), gens)
    return BoundaryPair(h, l1, l2, rel, colligation)


def from_colligation(c: UnitaryColligation) -> BoundaryPair:
    """Pair ``Γ = {((Th + Fu1, h), (u1, Gh + Hu1))}`` of a unitary colligation.

    Raises
    ------
    InvalidColligationError
        If the colligation identities fail.
    """
    require_valid(c)
    n, l1, l2 = c.dim, c.L1_dim, c.L2_dim
    gens = np.block([
        [c.T, c.F],
        [np.eye(n), np.zeros((n, l1))],
        [np.zeros((l1, n)), np.eye(l1)],
        [c.G, c.H],
    ])
    return _make_pair(c.state, l1, l2, gens, c)


def direct_pair(h: PontryaginSpace, gamma, l1: int, l2: int | None = None) -> BoundaryPair:
    """Pair given directly by the generators (or relation) of ``Γ``.

    Raises
    ------
    NotUnitaryError
        With the worst-violated generator pair, or the dimension deficit when
        ``Γ`` is isometric but not maximal.
    """
    l2 = l1 if l2 is None else l2
    gens = gamma.graph.basis if isinstance(gamma, LinearRelation) else np.asarray(gamma)
    if gens.shape[0] != 2 * h.dim + l1 + l2:
        raise DimensionError(f"Γ generators need {2 * h.dim + l1 + l2} rows, got {gens.shape[0]}")
    bp = _make_pair(h, l1, l2, gens)
    form = bp.gamma.form()
    if form.size and np.max(np.abs(form)) > tol().isometry:
        i, j = np.unravel_index(np.argmax(np.abs(form)), form.shape)
        raise NotUnitaryError(
            f"Green identity fails on generators ({i}, {j}) with defect {abs(form[i, j]):.3g}")
    if not classify(bp.gamma).unitary:
        need = h.dim + (l1 + l2) // 2
        raise NotUnitaryError(
            f"Γ is isometric but not unitary: dim Γ = {bp.gamma.dim}, unitary needs {need}")
    return bp


def main_transform(bp: BoundaryPair) -> LinearRelation:
    """``((f, f'), (u1, u2)) -> ((f, u2), (f', u1))`` from ``H x L2`` to ``H x L1``.

    For colligation-backed pairs this is the graph of ``U^{-1}``.
    """
    f, fp, u1, u2 = bp.blocks()
    s2 = bp.H.oplus(PontryaginSpace.hilbert(bp.L2_dim))
    s1 = bp.H.oplus(PontryaginSpace.hilbert(bp.L1_dim))
    return LinearRelation.from_generators(s2, s1, np.vstack([f, u2, fp, u1]))


def from_main_transform(u: LinearRelation, n: int, l1: int, l2: int,
                        h: PontryaginSpace | None = None) -> BoundaryPair:
    """Inverse of :func:`main_transform` (no unitarity check)."""
    b = u.graph.basis
    f, u2, fp, u1 = b[:n], b[n:n + l2], b[n + l2:2 * n + l2], b[2 * n + l2:]
    h = PontryaginSpace(u.space_in.J[:n, :n]) if h is None else h
    return _make_pair(h, l1, l2, np.vstack([f, fp, u1, u2]))


def green_identity_residual(bp: BoundaryPair) -> float:
    """Largest Green-identity defect over pairs of orthonormal generators."""
    form = bp.gamma.form()
    return float(np.max(np.abs(form))) if form.size else 0.0


def _rank(a: np.ndarray) -> int:
    if not a.size:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > tol().rank * max(1.0, s[0])))


def boundary_structure(bp: BoundaryPair) -> dict:
    """Dimensions of ``ran Γ1``, ``ran Γ2`` and of ``mul Γ1``, ``mul Γ2``, ``mul Γ``.

    For a unitary pair ``ran Γ1 = L1``, ``ran Γ2 = L2`` and the three
    multivalued parts vanish together.
    """
    f, fp, u1, u2 = bp.blocks()
    c = null(np.vstack([f, fp]))
    return {
        "ran_gamma1": _rank(u1),
        "ran_gamma2": _rank(u2),
        "mul_gamma1": _rank(u1 @ c),
        "mul_gamma2": _rank(u2 @ c),
        "mul_gamma": _rank(np.vstack([u1, u2]) @ c),
    }


def _restricted(bp: BoundaryPair, mask_rows: np.ndarray) -> LinearRelation:
    f, fp, _, _ = bp.blocks()
    c = null(mask_rows) if mask_rows.shape[0] else np.eye(f.shape[1])
    gens = np.vstack([f @ c, fp @ c])
    return LinearRelation.from_generators(bp.H, bp.H, gens)


def _compute_parts(bp: BoundaryPair) -> PairParts:
    f, fp, u1, u2 = bp.blocks()
    v = _restricted(bp, np.vstack([u1, u2]))
    v1 = _restricted(bp, u1)
    v2 = _restricted(bp, u2)
    vs = LinearRelation.from_generators(bp.H, bp.H, np.vstack([f, fp]))
    return PairParts(v, v1, v2, vs)


def parts(bp: BoundaryPair) -> PairParts:
    """``V = ker Γ``, ``V1 = ker Γ1``, ``V2 = ker Γ2`` and ``V_* = dom Γ``."""
    return bp.parts


def _check_resolvent(rel: LinearRelation, lam: complex, name: str) -> None:
    try:
        resolvent_matrix(rel, lam, ExcludedPointError)
    except ExcludedPointError as exc:
        raise ExcludedPointError(f"λ = {lam} is not in the resolvent set of {name}: {exc}") from None


@dataclass(frozen=True)
class WeylEvaluation:
    """Weyl data at one point.

    ``branch == "D"``: ``theta = Θ(λ)`` and ``gamma = γ1(λ)``.
    ``branch == "De"``: ``theta = Θ#(λ)`` and ``gamma = γ2(λ)``.
    """

    lam: complex
    branch: str
    theta: np.ndarray
    gamma: np.ndarray
    residual: float


def weyl_family(bp: BoundaryPair, lam: complex) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Defect elements ``f`` with ``(f, λf) in V_*`` and their boundary values.

    Returns the column-matched triple ``(f, u1, u2)``.
    """
    f, fp, u1, u2 = bp.blocks()
    c = null(fp - lam * f) if bp.n else np.eye(f.shape[1])
    return f @ c, u1 @ c, u2 @ c


def _operator_fit(src: np.ndarray, dst: np.ndarray, lam, what: str):
    """Solve ``dst = M src`` when ``src`` has full row rank, else raise."""
    rows = src.shape[0]
    if rows:
        s = np.linalg.svd(src, compute_uv=False)
        if s.size < rows or s[rows - 1] <= tol().rank * max(s[0], 1.0):
            raise MultivaluedWeylError(
                f"{what} at λ = {lam}: boundary values do not cover the boundary space",
            )
    m = dst @ np.linalg.pinv(src) if rows else np.zeros((dst.shape[0], 0), dtype=complex)
    res = float(np.linalg.norm(dst - m @ src)) if dst.size else 0.0
    scale = max(1.0, float(np.linalg.norm(dst)) if dst.size else 1.0)
    if res > tol().weyl * scale:
        err = MultivaluedWeylError(f"{what} at λ = {lam} is multivalued (residual {res:.3g})")
        err.generators = np.vstack([src, dst])
        raise err
    return m, res / scale


def weyl(bp: BoundaryPair, lam: complex) -> WeylEvaluation:
    """Evaluate the Weyl function and the matching γ-field at ``λ``.

    Parameters
    ----------
    bp : BoundaryPair
    lam : complex
        ``|λ| < 1`` needs ``λ ∈ ρ(V1)``; ``|λ| > 1`` needs ``λ ∈ ρ(V2)``.

    Returns
    -------
    WeylEvaluation

    Raises
    ------
    ExcludedPointError
        Outside ``𝒟 ∪ 𝒟_e``.
    MultivaluedWeylError
        When the boundary family is not an operator graph.

    Examples
    --------
    >>> from krein_weyl.colligation import UnitaryColligation
    >>> c = UnitaryColligation(PontryaginSpace.hilbert(1), 0, 1, 1, 0)
    >>> round(complex(weyl(from_colligation(c), 0.3).theta[0, 0]).real, 12)
    0.3
    """
    lam = complex(lam)
    reg = region(lam)
    pp = bp.parts
    if reg == "D":
        _check_resolvent(pp.V1, lam, "V1")
    else:
        _check_resolvent(pp.V2, lam, "V2")
    f, u1, u2 = weyl_family(bp, lam)
    if reg == "D":
        src, dst = u1, u2
    else:
        src, dst = u2, u1
    th, r1 = _operator_fit(src, dst, lam, "Weyl function")
    gm, r2 = _operator_fit(src, f, lam, "γ-field")
    return WeylEvaluation(lam, reg, th, gm, max(r1, r2))


def theta(bp: BoundaryPair, lam: complex) -> np.ndarray:
    """``Θ(λ)`` for ``λ ∈ 𝒟``."""
    ev = weyl(bp, lam)
    if ev.branch != "D":
        raise ExcludedPointError(f"Θ is evaluated inside the disk, got λ = {lam}")
    return ev.theta


def theta_sharp(bp: BoundaryPair, lam: complex) -> np.ndarray:
    """``Θ#(λ)`` for ``λ ∈ 𝒟_e``."""
    ev = weyl(bp, lam)
    if ev.branch != "De":
        raise ExcludedPointError(f"Θ# is evaluated outside the disk, got λ = {lam}")
    return ev.theta


def gamma1(bp: BoundaryPair, lam: complex) -> np.ndarray:
    ev = weyl(bp, lam)
    if ev.branch != "D":
        raise ExcludedPointError(f"γ1 lives on the disk, got λ = {lam}")
    return ev.gamma


def gamma2(bp: BoundaryPair, lam: complex) -> np.ndarray:
    """``γ2(λ)`` for ``λ ∈ 𝒟_e``; ``γ2(∞) = 0``."""
    if lam == np.inf:
        return np.zeros((bp.n, bp.L2_dim), dtype=complex)
    ev = weyl(bp, lam)
    if ev.branch != "De":
        raise ExcludedPointError(f"γ2 lives outside the disk, got λ = {lam}")
    return ev.gamma


def gamma_sharp(bp: BoundaryPair, lam: complex, which: int = 2) -> np.ndarray:
    """``γ#(λ) = γ(1/conj(λ))^[*]`` with the J-weighted adjoint ``A^[*] = A^H J``.

    ``which=2`` needs ``|λ| < 1`` (``γ2#(0) = 0``); ``which=1`` needs ``|λ| > 1``.
    """
    lam = complex(lam)
    j = bp.H.J
    if which == 2:
        if lam == 0:
            return np.zeros((bp.L2_dim, bp.n), dtype=complex)
        if region(lam) != "D":
            raise ExcludedPointError("γ2# is defined for |λ| < 1")
        return conj_t(gamma2(bp, 1 / np.conj(lam))) @ j
    if which == 1:
        if region(lam) != "De":
            raise ExcludedPointError("γ1# is defined for |λ| > 1")
        return conj_t(gamma1(bp, 1 / np.conj(lam))) @ j
    raise ValueError("which must be 1 or 2")


def _lift(bp: BoundaryPair, lam: complex, zero_rows: np.ndarray, read_rows: np.ndarray,
          name: str) -> np.ndarray:
    """``g -> u`` where ``((f, f'), ...) in Γ`` with vanishing ``zero_rows`` part
    and ``f' - λ f = g``; ``u`` is read from ``read_rows``."""
    f, fp, _, _ = bp.blocks()
    c = null(zero_rows) if zero_rows.shape[0] else np.eye(f.shape[1])
    # Quotient by coefficients that carry no graph element.
    dead = null(np.vstack([f @ c, fp @ c]))
    if dead.shape[1]:
        if np.linalg.norm(read_rows @ c @ dead) > tol().weyl:
            raise MultivaluedWeylError(f"{name} lift is multivalued")
        keep = null(conj_t(dead))
        c = c @ keep
    pencil = (fp - lam * f) @ c
    sol = solve_square(pencil, np.eye(bp.n, dtype=complex), ExcludedPointError,
                       f"{name} - λ pencil")
    return read_rows @ c @ sol


def v1_boundary_lift(bp: BoundaryPair, lam: complex) -> np.ndarray:
    """``A(λ): g -> u2`` for the element of ``V1`` with ``f' - λf = g``.

    Equals ``(1/λ) γ2#(λ)`` for ``λ ≠ 0`` and ``(γ2#)'(0)`` at ``λ = 0``.
    """
    _, _, u1, u2 = bp.blocks()
    return _lift(bp, complex(lam), u1, u2, "V1")


def v2_boundary_lift(bp: BoundaryPair, lam: complex) -> np.ndarray:
    """``B(λ): g -> u1`` for the element of ``V2`` with ``f' - λf = g``.

    Equals ``-(1/λ) γ1#(λ)`` for ``λ ∈ 𝒟_e``.
    """
    _, _, u1, u2 = bp.blocks()
    return _lift(bp, complex(lam), u2, u1, "V2")


def gamma2_sharp_derivative_at_zero(bp: BoundaryPair) -> np.ndarray:
    """``(γ2#)'(0)``; for a colligation-backed pair it equals ``G``."""
    return v1_boundary_lift(bp, 0.0)


def mobius_matrix(alpha: complex, n: int = 1) -> np.ndarray:
    """``M^(α) = (1/β) [[I, -αI], [-conj(α) I, I]]``, ``β = sqrt(1 - |α|^2)``."""
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) <= tol().spectrum:
        raise UnimodularAlphaError(f"|α| = 1 for α = {alpha}")
    if abs(alpha) > 1:
        raise ValueError("Möbius parameter must satisfy |α| < 1")
    beta = np.sqrt(1 - abs(alpha) ** 2)
    i = np.eye(n)
    return np.block([[i, -alpha * i], [-np.conj(alpha) * i, i]]) / beta


def mobius_map(alpha: complex, lam: complex) -> complex:
    """``μ^(α)(λ) = (λ - conj(α)) / (1 - αλ)``."""
    alpha, lam = complex(alpha), complex(lam)
    if lam == np.inf:
        return -1 / alpha if alpha else np.inf
    den = 1 - alpha * lam
    return np.inf if den == 0 else (lam - np.conj(alpha)) / den


def mobius(bp: BoundaryPair, alpha: complex) -> BoundaryPair:
    """Transformed pair ``Γ^(α) = {(M^(α) f_hat, u) : (f_hat, u) in Γ}``.

    Its Weyl function satisfies ``Θ^(α)(μ^(α)(λ)) = Θ(λ)``.

    Raises
    ------
    UnimodularAlphaError
        For ``|α| = 1``.
    EigenvalueCollisionError
        When ``1/α`` is an eigenvalue of ``V``.
    """
    alpha = complex(alpha)
    m = mobius_matrix(alpha, bp.n)
    if alpha != 0 and eigen_subspace(bp.parts.V, 1 / alpha).dim:
        raise EigenvalueCollisionError(f"1/α = {1 / alpha} is an eigenvalue of V")
    f, fp, u1, u2 = bp.blocks()
    fhat = m @ np.vstack([f, fp])
    return _make_pair(bp.H, bp.L1_dim, bp.L2_dim, np.vstack([fhat, u1, u2]))


def transpose(bp: BoundaryPair) -> BoundaryPair:
    """``Γ^T = {((f', f), (u2, u1))}``, a boundary pair for ``V^{-1}``."""
    f, fp, u1, u2 = bp.blocks()
    return _make_pair(bp.H, bp.L2_dim, bp.L1_dim, np.vstack([fp, f, u2, u1]))


def pair_direct_sum(a: BoundaryPair, b: BoundaryPair) -> BoundaryPair:
    """Orthogonal sum of two pairs, with boundary spaces ``L1a ⊕ L1b`` and ``L2a ⊕ L2b``."""
    fa, fpa, u1a, u2a = a.blocks()
    fb, fpb, u1b, u2b = b.blocks()
    ka, kb = fa.shape[1], fb.shape[1]

    def z(r, k):
        return np.zeros((r, k), dtype=complex)

    gens = np.vstack([
        np.hstack([fa, z(a.n, kb)]), np.hstack([z(b.n, ka), fb]),
        np.hstack([fpa, z(a.n, kb)]), np.hstack([z(b.n, ka), fpb]),
        np.hstack([u1a, z(b.L1_dim, kb)]), np.hstack([z(b.L1_dim, ka), u1b]),
        np.hstack([u2a, z(b.L2_dim, kb)]), np.hstack([z(b.L2_dim, ka), u2b]),
    ])
    coll = None
    if a.colligation is not None and b.colligation is not None:
        from .colligation import direct_sum
        coll = direct_sum(a.colligation, b.colligation)
    return _make_pair(a.H.oplus(b.H), a.L1_dim + b.L1_dim, a.L2_dim + b.L2_dim, gens, coll)


def gamma_resolvent_identity_residual(bp: BoundaryPair, lam: complex, mu: complex) -> float:
    """``||γ(λ) - γ(μ) - (λ - μ)(W - λ)^{-1} γ(μ)||`` with ``(γ, W) = (γ1, V1)``
    on the disk and ``(γ2, V2)`` outside it."""
    r1, r2 = region(lam), region(mu)
    if r1 != r2:
        raise MixedRegionError("λ and μ must lie on the same side of the unit circle")
    if r1 == "D":
        g_l, g_m, w = gamma1(bp, lam), gamma1(bp, mu), bp.parts.V1
    else:
        g_l, g_m, w = gamma2(bp, lam), gamma2(bp, mu), bp.parts.V2
    res = resolvent_matrix(w, lam, ExcludedPointError)
    d = g_l - g_m - (lam - mu) * res @ g_m
    return float(np.linalg.norm(d, 2)) if d.size else 0.0
