"""Schur-type kernels, negative squares and boundary-pair classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._linalg import conj_t, cond
from .boundary import (BoundaryPair, gamma1, gamma2, region, theta, theta_sharp)
from .config import tol
from .exceptions import (KreinWeylError, MixedRegionError,
                         UnimodularProductError)
from .pspace import count_signs
from .relation import defect_subspace, eigen_subspace, parts as relation_parts

__all__ = [
    "SamplerConfig",
    "NegativeSquares",
    "schur_kernel",
    "s_kernel",
    "negative_squares",
    "kernel_gram",
    "gram_matrix_lemma_check",
    "kernel_gamma_identities_residual",
    "classify_pair",
    "PairClassification",
]

ThetaFn = Callable[[complex], np.ndarray]


def _den(lam: complex, omega: complex) -> complex:
    d = 1 - complex(lam) * np.conj(complex(omega))
    if abs(d) <= 1e-12:
        raise UnimodularProductError(f"λ conj(ω) = 1 at λ = {lam}, ω = {omega}")
    return d


def _mat(x) -> np.ndarray:
    return np.atleast_2d(np.asarray(x, dtype=complex))


def _sharp(theta_fn: ThetaFn) -> ThetaFn:
    return lambda lam: conj_t(_mat(theta_fn(1 / np.conj(lam))))


def s_kernel(theta_fn: ThetaFn, lam: complex, mu: complex,
             theta_sharp_fn: ThetaFn | None = None) -> np.ndarray:
    """Four-branch kernel ``S^Θ_μ(λ)``.

    ============  ============  ==========================================
    ``λ``         ``μ``         value
    ============  ============  ==========================================
    ``D``         ``D``         ``(I - Θ(μ)^* Θ(λ)) / (1 - λ conj(μ))``
    ``D_e``       ``D_e``       ``(I - Θ#(μ)^* Θ#(λ)) / (1 - λ conj(μ))``
    ``D``         ``D_e``       ``(Θ(λ) - Θ#(μ)^*) / (1 - λ conj(μ))``
    ``D_e``       ``D``         ``(Θ#(λ) - Θ(μ)^*) / (1 - λ conj(μ))``
    ============  ============  ==========================================

    ``Θ#(λ) = Θ(1/conj(λ))^*`` unless ``theta_sharp_fn`` is supplied.
    """
    d = _den(lam, mu)
    sharp = theta_sharp_fn or _sharp(theta_fn)
    rl, rm = region(lam), region(mu)
    if rl == "D" and rm == "D":
        a, b = _mat(theta_fn(mu)), _mat(theta_fn(lam))
        return (np.eye(b.shape[1]) - conj_t(a) @ b) / d
    if rl == "De" and rm == "De":
        a, b = _mat(sharp(mu)), _mat(sharp(lam))
        return (np.eye(b.shape[1]) - conj_t(a) @ b) / d
    if rl == "D":
        return (_mat(theta_fn(lam)) - conj_t(_mat(sharp(mu)))) / d
    return (_mat(sharp(lam)) - conj_t(_mat(theta_fn(mu)))) / d


def schur_kernel(theta_fn: ThetaFn, lam: complex, omega: complex) -> np.ndarray:
    """``K_ω(λ) = (I - Θ(λ) Θ(ω)^*) / (1 - λ conj(ω))`` on ``D x D``.

    If either point lies outside the disk the four-branch kernel
    :func:`s_kernel` is returned instead.

    Examples
    --------
    >>> complex(schur_kernel(lambda z: 1 / z, 0.5, 0.5)[0, 0])
    (-4+0j)
    """
    d = _den(lam, omega)
    if region(lam) == "D" and region(omega) == "D":
        a, b = _mat(theta_fn(lam)), _mat(theta_fn(omega))
        return (np.eye(a.shape[0]) - a @ conj_t(b)) / d
    return s_kernel(theta_fn, lam, omega)


@dataclass(frozen=True)
class SamplerConfig:
    """Sampling plan for negative-squares estimates.

    Points are drawn uniformly in angle and radius from the annulus
    ``r_min <= |λ| <= r_max`` (reflected through the circle for
    ``region="De"``). Each refinement doubles the point set, keeping the old
    points.
    """

    seed: int = 0
    r_min: float = 0.15
    r_max: float = 0.85
    expected: int = 0
    n_start: int | None = None
    max_refinements: int = 4
    region: str = "D"
    exclude: tuple = ()
    exclusion_radius: float = 1e-6

    def start(self) -> int:
        return self.n_start or max(8, 2 * self.expected + 2)

    def points(self, count: int) -> list[complex]:
        rng = np.random.default_rng(self.seed)
        out: list[complex] = []
        while len(out) < count:
            r = rng.uniform(self.r_min, self.r_max)
            p = r * np.exp(2j * np.pi * rng.uniform())
            if self.region == "De":
                p = 1 / np.conj(p)
            if all(abs(p - e) > self.exclusion_radius for e in self.exclude):
                out.append(complex(p))
        return out


@dataclass(frozen=True)
class NegativeSquares:
    count: int
    stabilized: bool
    samples: int
    history: tuple = field(default=())

    def as_dict(self) -> dict:
        return {"count": self.count, "stabilized": self.stabilized, "samples": self.samples}


def kernel_gram(kernel: Callable[[complex, complex], np.ndarray],
                points: Sequence[complex]) -> np.ndarray:
    """Hermitian block Gram matrix with block ``(i, j) = kernel(ω_i, ω_j)``."""
    blocks = [[_mat(kernel(wi, wj)) for wj in points] for wi in points]
    g = np.block(blocks)
    return 0.5 * (g + conj_t(g))


def _usable(theta_fn: ThetaFn, pts: Sequence[complex]) -> list[complex]:
    good = []
    for p in pts:
        try:
            v = _mat(theta_fn(p))
        except KreinWeylError:
            continue
        if np.all(np.isfinite(v)):
            good.append(p)
    return good


def negative_squares(theta_fn: ThetaFn, sampler: SamplerConfig | None = None,
                     kernel: Callable | None = None) -> NegativeSquares:
    """Estimate the number of negative squares of the Schur kernel of ``Θ``.

    The count is the number of Gram eigenvalues below ``-τ`` with
    ``τ = tol().kernel * ||gram||``. The point set is doubled until the count
    repeats on three consecutive sets or ``max_refinements`` is reached.

    Parameters
    ----------
    theta_fn : callable
        ``λ -> Θ(λ)``; points where it raises a package error are skipped.
    sampler : SamplerConfig, optional
    kernel : callable, optional
        ``(λ, ω) -> matrix``; defaults to :func:`schur_kernel` of ``theta_fn``.
    """
    sampler = sampler or SamplerConfig()
    kern = kernel or (lambda a, b: schur_kernel(theta_fn, a, b))
    n = sampler.start()
    history = []
    pts: list[complex] = []
    for _ in range(sampler.max_refinements + 1):
        pts = _usable(theta_fn, sampler.points(n)) if kernel is None else sampler.points(n)
        g = kernel_gram(kern, pts)
        history.append(count_signs(g, rtol=tol().kernel)[1])
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            return NegativeSquares(history[-1], True, len(pts), tuple(history))
        n *= 2
    return NegativeSquares(history[-1], False, len(pts), tuple(history))


def gram_matrix_lemma_check(points: Sequence[complex], vectors: Sequence,
                            nodes: int = 4096) -> dict:
    """Compare ``(u_j, u_k)/(1 - λ_j conj(λ_k))`` with quadrature on the circle.

    The functions ``t -> u_j / (1 - λ_j e^{it})`` are integrated by the
    trapezoid rule. Inside the disk their Gram matrix equals the closed form,
    outside it equals its negative.

    Returns
    -------
    dict
        ``closed`` (the closed form), ``quadrature`` and ``residual``.
    """
    pts = [complex(p) for p in points]
    regs = {region(p) for p in pts}
    if len(regs) > 1:
        raise MixedRegionError("all points must be in D or all in D_e")
    sign = 1.0 if regs == {"D"} else -1.0
    u = [np.atleast_1d(np.asarray(v, dtype=complex)) for v in vectors]
    k = len(pts)
    closed = np.empty((k, k), dtype=complex)
    for j in range(k):
        for m in range(k):
            closed[j, m] = np.vdot(u[m], u[j]) / (1 - pts[j] * np.conj(pts[m]))
    t = 2 * np.pi * np.arange(nodes) / nodes
    e = np.exp(1j * t)
    vals = [np.outer(1 / (1 - p * e), uj) for p, uj in zip(pts, u)]  # nodes x dim
    quad = np.empty((k, k), dtype=complex)
    for j in range(k):
        for m in range(k):
            quad[j, m] = np.mean(np.sum(vals[j] * np.conj(vals[m]), axis=1))
    res = float(np.max(np.abs(quad - sign * closed))) if k else 0.0
    return {"closed": closed, "quadrature": quad, "sign": sign, "residual": res}


def kernel_gamma_identities_residual(bp: BoundaryPair, lam: complex, mu: complex) -> float:
    """Residual of the kernel identity matching the regions of ``λ`` and ``μ``.

    * ``λ, μ ∈ 𝒟``:  ``(I - Θ(μ)^*Θ(λ))/(1 - λ conj μ) = γ1(μ)^[*] γ1(λ)``
    * ``λ, μ ∈ 𝒟_e``: ``(I - Θ#(μ)^*Θ#(λ))/(1 - λ conj μ) = -γ2(μ)^[*] γ2(λ)``
    * ``λ ∈ 𝒟, μ ∈ 𝒟_e``: ``(Θ(λ) - Θ#(μ)^*)/(1 - λ conj μ) = -γ2(μ)^[*] γ1(λ)``
    * ``λ ∈ 𝒟_e, μ ∈ 𝒟``: ``(Θ#(λ) - Θ(μ)^*)/(1 - λ conj μ) = γ1(μ)^[*] γ2(λ)``
    """
    j = bp.H.J
    d = _den(lam, mu)
    rl, rm = region(lam), region(mu)

    def adj(g):
        return conj_t(g) @ j

    if rl == "D" and rm == "D":
        a, b = theta(bp, mu), theta(bp, lam)
        lhs = (np.eye(b.shape[1]) - conj_t(a) @ b) / d
        rhs = adj(gamma1(bp, mu)) @ gamma1(bp, lam)
    elif rl == "De" and rm == "De":
        a, b = theta_sharp(bp, mu), theta_sharp(bp, lam)
        lhs = (np.eye(b.shape[1]) - conj_t(a) @ b) / d
        rhs = -adj(gamma2(bp, mu)) @ gamma2(bp, lam)
    elif rl == "D":
        lhs = (theta(bp, lam) - conj_t(theta_sharp(bp, mu))) / d
        rhs = -adj(gamma2(bp, mu)) @ gamma1(bp, lam)
    else:
        lhs = (theta_sharp(bp, lam) - conj_t(theta(bp, mu))) / d
        rhs = adj(gamma1(bp, mu)) @ gamma2(bp, lam)
    return float(np.linalg.norm(lhs - rhs, 2)) if lhs.size else 0.0


@dataclass(frozen=True)
class PairClassification:
    kind: str
    mul_dim: int
    ran_dim: int
    probe: complex | None
    defect_dims: tuple | None
    gamma1_injective: bool | None
    s_kernel_invertible: bool | None

    def as_dict(self) -> dict:
        return {
            "kind": self.kind, "mul_dim": self.mul_dim, "ran_dim": self.ran_dim,
            "probe": self.probe, "defect_dims": self.defect_dims,
            "gamma1_injective": self.gamma1_injective,
            "s_kernel_invertible": self.s_kernel_invertible,
        }


_PROBES = (0.3 + 0.2j, -0.41 + 0.13j, 0.17 - 0.52j, 0.61j, -0.23)


def classify_pair(bp: BoundaryPair) -> PairClassification:
    """``general``, ``single_valued`` (``mul Γ = 0``) or ``ordinary``.

    Ordinary additionally needs ``ran Γ = L1 x L2``. Probe-point diagnostics
    (defect dimensions of ``V_*`` and ``V``, injectivity of ``γ1`` and
    invertibility of ``S^Θ_λ(λ)``) are reported when a probe in ``𝒟`` is
    found.
    """
    _, ran, _, mul = relation_parts(bp.gamma)
    l = bp.L1_dim + bp.L2_dim
    if mul.dim:
        kind = "general"
    elif ran.dim == l:
        kind = "ordinary"
    else:
        kind = "single_valued"
    probe = dims = inj = sinv = None
    for p in _PROBES:
        try:
            g1 = gamma1(bp, p)
            th = theta(bp, p)
        except KreinWeylError:
            continue
        probe = p
        v = bp.parts
        dims = (eigen_subspace(v.V_star, p).dim, defect_subspace(v.V, p).dim)
        inj = bool(g1.shape[1] == 0 or np.linalg.matrix_rank(g1, tol=tol().rank * max(1, np.linalg.norm(g1))) == g1.shape[1])
        s = (np.eye(th.shape[1]) - conj_t(th) @ th) / (1 - abs(p) ** 2)
        sinv = bool(cond(s) <= tol().cond_cap)
        break
    return PairClassification(kind, mul.dim, ran.dim, probe, dims, inj, sinv)
