"""Realization of rational generalized Schur functions as unitary colligations.

The route is Ho-Kalman on the Hankel matrix of Taylor coefficients, followed
by a Stein equation for the state metric ``P`` that makes the realization
unitary. ``P`` is then diagonalized by congruence onto an exact fundamental
symmetry. Functions given around a center ``conj(α) ≠ 0`` are first moved to
the origin by the Möbius shift and moved back on the boundary-pair side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._linalg import conj_t, cond
from .boundary import BoundaryPair, from_colligation, mobius
from .colligation import UnitaryColligation, is_closely_connected, require_valid
from .config import tol
from .exceptions import (DimensionMismatchError, NotSchurClassError, RankNotStabilizedError,
                         SteinSingularError, UnimodularAlphaError)
from .pspace import PontryaginSpace

__all__ = [
    "RationalFunctionData",
    "minimal_realization",
    "solve_stein",
    "install_metric",
    "shift_coefficients",
    "taylor_coefficients",
    "realize",
]


@dataclass(frozen=True, eq=False)
class RationalFunctionData:
    """Taylor coefficients ``s(λ) = Σ c_k (λ - center)^k`` of an ``L2 x L1`` function."""

    taylor: tuple
    center: complex = 0j
    degree_hint: int | None = None

    def __post_init__(self):
        coeffs = tuple(np.atleast_2d(np.asarray(c, dtype=complex)) for c in self.taylor)
        if not coeffs:
            raise ValueError("at least one Taylor coefficient is required")
        shape = coeffs[0].shape
        if any(c.shape != shape for c in coeffs):
            raise DimensionMismatchError("Taylor coefficients must share one shape")
        if self.degree_hint is not None and len(coeffs) < 2 * self.degree_hint + 1:
            raise ValueError(f"degree {self.degree_hint} needs at least "
                             f"{2 * self.degree_hint + 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "taylor", coeffs)
        object.__setattr__(self, "center", complex(self.center))

    @property
    def shape(self) -> tuple[int, int]:
        return self.taylor[0].shape

    def evaluate(self, lam: complex) -> np.ndarray:
        """Truncated Taylor sum; useful only well inside the disc of convergence."""
        h = complex(lam) - self.center
        return sum(c * h**k for k, c in enumerate(self.taylor))


def _hankel(markov: Sequence[np.ndarray], m: int, shift: int = 0) -> np.ndarray:
    return np.block([[markov[i + j + shift] for j in range(m)] for i in range(m)])


def _numerical_rank(a: np.ndarray) -> int:
    s = np.linalg.svd(a, compute_uv=False)
    if not s.size or s[0] == 0:
        return 0
    return int(np.sum(s > tol().hankel * s[0]))


def minimal_realization(data: RationalFunctionData):
    """``(T, F, G, H)`` of minimal state dimension with the given Taylor data at 0.

    The Markov parameters are ``h_k = taylor[k] = G T^{k-1} F`` for ``k ≥ 1``
    and ``H = taylor[0]``. The Hankel factorization is balanced, so the state
    basis is fixed only up to the usual SVD ambiguity.

    Raises
    ------
    RankNotStabilizedError
        If the Hankel rank does not settle over the last two block sizes
        (without a degree hint), or the realization misses a coefficient.

    Examples
    --------
    >>> t, f, g, h = minimal_realization(RationalFunctionData([2, -3, 6, -12, 24, -48, 96]))
    >>> complex(t[0, 0]).real.__round__(12), complex(g[0, 0] * f[0, 0]).real.__round__(12)
    (-2.0, -3.0)
    """
    p, q = data.shape
    h0 = data.taylor[0]
    markov = list(data.taylor[1:])
    m_max = len(markov) // 2
    if m_max == 0 or all(np.abs(c).max() == 0 for c in markov):
        return (np.zeros((0, 0), complex), np.zeros((0, q), complex),
                np.zeros((p, 0), complex), h0.copy())
    ranks = [_numerical_rank(_hankel(markov, m)) for m in range(1, m_max + 1)]
    if data.degree_hint is not None:
        r = data.degree_hint
    else:
        if len(ranks) < 3 or not ranks[-1] == ranks[-2] == ranks[-3]:
            raise RankNotStabilizedError(
                f"Hankel ranks {ranks} did not stabilize; supply more coefficients")
        r = ranks[-1]
    m = m_max
    hk = _hankel(markov, m)
    hs = _hankel(markov, m, shift=1)
    u, s, vh = np.linalg.svd(hk)
    if r > s.size or (r and s[r - 1] <= tol().hankel * s[0]):
        raise RankNotStabilizedError(f"Hankel rank is below the requested degree {r}")
    ur, vr = u[:, :r], conj_t(vh[:r])
    sq = np.sqrt(s[:r])
    obs = ur * sq
    ctr = sq[:, None] * vh[:r]
    t = (conj_t(ur) @ hs @ vr) / sq[:, None] / sq[None, :]
    f = ctr[:, :q]
    g = obs[:p, :]
    # Every supplied coefficient must be reproduced.
    scale = max(1.0, max(np.abs(c).max() for c in markov))
    tk = np.eye(r, dtype=complex)
    for k, hk_ in enumerate(markov):
        if np.abs(g @ tk @ f - hk_).max() > 1e3 * tol().hankel * scale * (k + 1):
            raise RankNotStabilizedError(f"realization misses Taylor coefficient {k + 1}")
        tk = tk @ t
    return t, f, g, h0.copy()


def solve_stein(t: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Hermitian ``P`` with ``T^* P T - P = -G^* G`` via the Kronecker system.

    Raises
    ------
    SteinSingularError
        If ``λ conj(μ) = 1`` for eigenvalues of ``T`` (condition above the cap).

    Examples
    --------
    >>> solve_stein(np.array([[-2.0]]), np.array([[-3.0]])).real
    array([[-3.]])
    """
    n = t.shape[0]
    if n == 0:
        return np.zeros((0, 0), complex)
    a = np.kron(t.T, conj_t(t)) - np.eye(n * n)
    if cond(a) > tol().cond_cap:
        raise SteinSingularError("Stein equation is not uniquely solvable")
    rhs = -(conj_t(g) @ g).reshape(-1, order="F")
    p = np.linalg.solve(a, rhs).reshape(n, n, order="F")
    return 0.5 * (p + conj_t(p))


def install_metric(t, f, g, h) -> UnitaryColligation:
    """Unitary colligation similar to ``(T, F, G, H)`` with an exact ``J``.

    Raises
    ------
    SteinSingularError
        If the Stein equation is singular.
    NotSchurClassError
        If the remaining unitarity identities fail, or ``P`` is singular.
    """
    t, f, g, h = (np.atleast_2d(np.asarray(x, dtype=complex)) for x in (t, f, g, h))
    n = t.shape[0] if t.size else 0
    if h.shape[0] != h.shape[1]:
        raise NotSchurClassError("a finite unitary colligation needs dim L1 = dim L2")
    if n == 0:
        t, f, g = np.zeros((0, 0)), np.zeros((0, h.shape[1])), np.zeros((h.shape[0], 0))
        if np.abs(conj_t(h) @ h - np.eye(h.shape[1])).max() > tol().colligation:
            raise NotSchurClassError("constant function is not unitary")
        return require_valid(UnitaryColligation(PontryaginSpace.hilbert(0), t, f, g, h))
    p = solve_stein(t, g)
    scale = max(1.0, np.linalg.norm(p, 2)) * max(1.0, np.linalg.norm(f, 2), np.linalg.norm(g, 2)) ** 2
    r1 = np.abs(conj_t(t) @ p @ f + conj_t(g) @ h).max()
    r2 = np.abs(conj_t(f) @ p @ f + conj_t(h) @ h - np.eye(h.shape[1])).max()
    if max(r1, r2) > 1e3 * tol().colligation * scale:
        raise NotSchurClassError(
            f"unitarity identities fail (residuals {r1:.2e}, {r2:.2e}); "
            "the data is not a generalized Schur function")
    e, q = np.linalg.eigh(p)
    if np.min(np.abs(e)) * tol().cond_cap < np.max(np.abs(e)):
        raise NotSchurClassError("state metric is singular; the realization is not minimal")
    order = np.argsort(-np.sign(e), kind="stable")
    e, q = e[order], q[:, order]
    signs = np.sign(e)
    s_mat = np.sqrt(np.abs(e))[:, None] * conj_t(q)
    s_inv = q / np.sqrt(np.abs(e))[None, :]
    col = UnitaryColligation(PontryaginSpace(np.diag(signs)),
                             s_mat @ t @ s_inv, s_mat @ f, g @ s_inv, h)
    return require_valid(col)


def _compose_power_series(coeffs: Sequence[np.ndarray], t_series: np.ndarray) -> list:
    """Coefficients of ``Σ c_k t(ζ)^k`` truncated at the input length."""
    n = len(coeffs)
    out = [np.zeros_like(coeffs[0]) for _ in range(n)]
    power = np.zeros(n, complex)
    power[0] = 1.0
    for c in coeffs:
        for j in range(n):
            if power[j]:
                out[j] = out[j] + power[j] * c
        power = np.convolve(power, t_series)[:n]
    return out


def shift_coefficients(data: RationalFunctionData, alpha: complex) -> RationalFunctionData:
    """Taylor data at 0 of ``s^(α)(ζ) = s((ζ + conj α)/(1 + αζ))``.

    The data must be given around ``conj α``. With ``β^2 = 1 - |α|^2`` the
    inner map is ``λ - conj α = β^2 ζ / (1 + αζ)``.

    Examples
    --------
    >>> d = RationalFunctionData([2 * (-2.0) ** k for k in range(4)], center=0.5)
    >>> [complex(c[0, 0]).real for c in shift_coefficients(d, 0.5).taylor]
    [2.0, -3.0, 6.0, -12.0]
    """
    alpha = complex(alpha)
    if abs(abs(alpha) - 1) <= tol().spectrum:
        raise UnimodularAlphaError(f"|α| = 1 for α = {alpha}")
    if abs(data.center - np.conj(alpha)) > 1e-12:
        raise ValueError(f"data centered at {data.center}, expected conj(α) = {np.conj(alpha)}")
    n = len(data.taylor)
    if alpha == 0:
        return data
    beta2 = 1 - abs(alpha) ** 2
    t_series = np.zeros(n, complex)
    for k in range(1, n):
        t_series[k] = beta2 * (-alpha) ** (k - 1)
    shifted = _compose_power_series(data.taylor, t_series)
    return RationalFunctionData(shifted, 0j, data.degree_hint)


def taylor_coefficients(c: UnitaryColligation, count: int, center: complex = 0) -> list:
    """First ``count`` Taylor coefficients of the characteristic function at ``center``.

    With ``A = I - center T`` and ``M = A^{-1} T`` the coefficients are
    ``H + center G A^{-1} F`` and ``center G M^k A^{-1} F + G M^{k-1} A^{-1} F``.
    """
    center = complex(center)
    n = c.dim
    a_inv_f = np.linalg.solve(np.eye(n) - center * c.T, c.F) if n else c.F
    m = np.linalg.solve(np.eye(n) - center * c.T, c.T) if n else c.T
    out = [c.H + center * c.G @ a_inv_f]
    prev = a_inv_f
    for _ in range(1, count):
        nxt = m @ prev
        out.append(center * c.G @ nxt + c.G @ prev)
        prev = nxt
    return out


@dataclass(frozen=True, eq=False)
class Realization:
    pair: BoundaryPair
    kappa: int
    colligation: UnitaryColligation = field(repr=False)
    alpha: complex = 0j


def realize(data: RationalFunctionData, alpha: complex = 0) -> Realization:
    """Boundary pair whose Weyl function is the rational function ``s``.

    The shifted function ``s^(α)`` is realized at 0 by a closely connected
    colligation; the inverse Möbius shift ``-α`` turns its pair into one for
    ``s`` itself.

    Examples
    --------
    >>> r = realize(RationalFunctionData([2 * (-2.0) ** k for k in range(9)], center=0.5), 0.5)
    >>> r.kappa
    1
    """
    alpha = complex(alpha)
    shifted = shift_coefficients(data, alpha)
    col = install_metric(*minimal_realization(shifted))
    if not is_closely_connected(col):
        raise RuntimeError("realization is not closely connected")
    pair = from_colligation(col)
    if alpha != 0:
        pair = mobius(pair, -alpha)
    return Realization(pair, col.kappa, col, alpha)
