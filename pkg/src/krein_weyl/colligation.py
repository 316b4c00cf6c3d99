"""Unitary colligations with a Pontryagin state space.

A colligation ``Δ = (H, L1, L2, U)`` has connecting block matrix

    U = [[T, F],
         [G, H]] : H ⊕ L1 -> H ⊕ L2

which is unitary for the metrics ``J_H ⊕ I``. Its characteristic function is
``Θ(λ) = H + λ G (I - λT)^{-1} F``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.stats import unitary_group

from ._linalg import as_matrix, conj_t, orth, solve_square
from .config import tol
from .exceptions import InvalidColligationError, SingularResolventError
from .pspace import PontryaginSpace
from .relation import LinearRelation

__all__ = [
    "UnitaryColligation",
    "validate",
    "characteristic_function",
    "is_closely_connected",
    "random_colligation",
    "direct_sum",
]


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class UnitaryColligation:
    """Blocks ``T, F, G, H`` over the state space ``state``.

    Construction checks shapes only; call :func:`validate` for the metric
    identities.
    """

    state: PontryaginSpace
    T: np.ndarray
    F: np.ndarray
    G: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        n = self.state.dim
        f = np.array(self.F, dtype=complex)
        g = np.array(self.G, dtype=complex)
        h = np.array(self.H, dtype=complex)
        l1 = f.shape[1] if f.ndim == 2 else (h.shape[1] if h.ndim == 2 else 1)
        l2 = g.shape[0] if g.ndim == 2 else (h.shape[0] if h.ndim == 2 else 1)
        object.__setattr__(self, "T", _frozen(as_matrix(self.T, n, n)))
        object.__setattr__(self, "F", _frozen(as_matrix(f, n, l1) if f.size else np.zeros((n, l1))))
        object.__setattr__(self, "G", _frozen(as_matrix(g, l2, n) if g.size else np.zeros((l2, n))))
        object.__setattr__(self, "H", _frozen(as_matrix(h, l2, l1)))

    @property
    def dim(self) -> int:
        return self.state.dim

    @property
    def L1_dim(self) -> int:
        return self.H.shape[1]

    @property
    def L2_dim(self) -> int:
        return self.H.shape[0]

    @property
    def kappa(self) -> int:
        return self.state.kappa

    # J-adjoints of the state legs.
    @property
    def T_adj(self) -> np.ndarray:
        j = self.state.J
        return j @ conj_t(self.T) @ j

    @property
    def F_adj(self) -> np.ndarray:
        return conj_t(self.F) @ self.state.J

    @property
    def G_adj(self) -> np.ndarray:
        return self.state.J @ conj_t(self.G)

    def block(self) -> np.ndarray:
        """The connecting matrix ``U``."""
        return np.block([[self.T, self.F], [self.G, self.H]])

    def connecting_relation(self) -> LinearRelation:
        """``U`` as a relation between ``(H ⊕ L1, J ⊕ I)`` and ``(H ⊕ L2, J ⊕ I)``."""
        s1 = self.state.oplus(PontryaginSpace.hilbert(self.L1_dim))
        s2 = self.state.oplus(PontryaginSpace.hilbert(self.L2_dim))
        return LinearRelation.from_operator(self.block(), s1, s2)


def validate(c: UnitaryColligation) -> dict:
    """Residuals of the six colligation identities.

    Returns
    -------
    dict
        ``residuals`` maps each identity to its spectral-norm residual,
        ``max_residual`` is their maximum and ``passed`` compares it with the
        colligation tolerance.
    """
    t, f, g, h = c.T, c.F, c.G, c.H
    ta, fa, ga = c.T_adj, c.F_adj, c.G_adj
    i_h, i_1, i_2 = np.eye(c.dim), np.eye(c.L1_dim), np.eye(c.L2_dim)

    def nrm(m):
        return float(np.linalg.norm(m, 2)) if m.size else 0.0

    res = {
        "TadjT+GadjG=I": nrm(ta @ t + ga @ g - i_h),
        "FadjF+HH*=I": nrm(fa @ f + conj_t(h) @ h - i_1),
        "TadjF+GadjH=0": nrm(ta @ f + ga @ h),
        "TTadj+FFadj=I": nrm(t @ ta + f @ fa - i_h),
        "GGadj+HH*=I": nrm(g @ ga + h @ conj_t(h) - i_2),
        "TGadj+FH*=0": nrm(t @ ga + f @ conj_t(h)),
    }
    worst = max(res.values()) if res else 0.0
    return {"residuals": res, "max_residual": worst, "passed": worst <= tol().colligation}


def require_valid(c: UnitaryColligation) -> UnitaryColligation:
    rep = validate(c)
    if not rep["passed"]:
        raise InvalidColligationError(
            f"colligation identities fail (max residual {rep['max_residual']:.3g})")
    return c


def characteristic_function(c: UnitaryColligation, lam: complex) -> np.ndarray:
    """``Θ(λ) = H + λ G (I - λT)^{-1} F``.

    Raises
    ------
    SingularResolventError
        If ``I - λT`` is not boundedly invertible.
    """
    lam = complex(lam)
    if c.dim == 0 or lam == 0:
        return np.array(c.H)
    x = solve_square(np.eye(c.dim) - lam * c.T, c.F, SingularResolventError, "I - λT")
    return c.H + lam * c.G @ x


def _krylov(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    block = b
    basis = orth(b)
    for _ in range(max(n - 1, 0)):
        if basis.shape[1] == n:
            break
        block = a @ block
        new = orth(np.hstack([basis, block]))
        if new.shape[1] == basis.shape[1]:
            break
        basis = new
    return basis


def is_closely_connected(c: UnitaryColligation) -> bool:
    """Whether the Krylov spaces of ``(T, F)`` and ``(T^[*], G^[*])`` span ``H``."""
    if c.dim == 0:
        return True
    b1 = _krylov(c.T, c.F)
    b2 = _krylov(c.T_adj, c.G_adj)
    return orth(np.hstack([b1, b2])).shape[1] == c.dim


def _block_haar(n_pos: int, n_neg: int, rng) -> np.ndarray:
    def haar(k):
        if k == 0:
            return np.zeros((0, 0), dtype=complex)
        if k == 1:
            return np.array([[np.exp(2j * np.pi * rng.uniform())]])
        return unitary_group.rvs(k, random_state=rng)
    out = np.zeros((n_pos + n_neg, n_pos + n_neg), dtype=complex)
    out[:n_pos, :n_pos] = haar(n_pos)
    out[n_pos:, n_pos:] = haar(n_neg)
    return out


def random_colligation(rng: np.random.Generator | int, state_dim: int, kappa: int = 0,
                       boundary_dim: int = 1, boost: float = 0.4,
                       max_tries: int = 50) -> UnitaryColligation:
    """Seeded random colligation with a prescribed negative index.

    The connecting matrix is ``W expm(i J S)`` where ``J = J_H ⊕ I``, ``S`` is
    Hermitian with spectral norm ``boost`` and ``W`` is Haar-unitary on each
    eigenspace of ``J``. Both factors are ``J``-unitary, so the product is.

    Parameters
    ----------
    rng : Generator or int
    state_dim, kappa : int
        State dimension and its negative index.
    boundary_dim : int
        ``dim L1 = dim L2``.
    boost : float
        Size of the hyperbolic part; ``0`` gives a block-Hilbert unitary.
    """
    rng = np.random.default_rng(rng)
    if kappa > state_dim:
        raise ValueError("kappa cannot exceed the state dimension")
    n, m = state_dim, boundary_dim
    signs = np.array([1.0] * (n - kappa) + [-1.0] * kappa + [1.0] * m)
    # Positive directions first for the Haar factor, then permute back.
    perm = np.argsort(-signs, kind="stable")
    n_pos = int(np.sum(signs > 0))
    for _ in range(max_tries):
        w = _block_haar(n_pos, kappa, rng)
        p = np.eye(n + m)[:, perm]
        w = p @ w @ p.T
        s = rng.standard_normal((n + m, n + m)) + 1j * rng.standard_normal((n + m, n + m))
        s = s + conj_t(s)
        s *= boost / max(np.linalg.norm(s, 2), 1e-300)
        u = w @ expm(1j * np.diag(signs) @ s)
        c = UnitaryColligation(PontryaginSpace.from_signature(n, kappa),
                               u[:n, :n], u[:n, n:], u[n:, :n], u[n:, n:])
        if validate(c)["passed"]:
            return c
    raise RuntimeError("could not draw a valid colligation")


def direct_sum(a: UnitaryColligation, b: UnitaryColligation) -> UnitaryColligation:
    """Colligation acting as ``a`` on the first and ``b`` on the second summands."""
    from scipy.linalg import block_diag

    def bd(x, y):
        return block_diag(np.asarray(x), np.asarray(y)).astype(complex)

    return UnitaryColligation(a.state.oplus(b.state), bd(a.T, b.T), bd(a.F, b.F),
                              bd(a.G, b.G), bd(a.H, b.H))
