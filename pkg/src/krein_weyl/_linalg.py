"""Small dense linear-algebra helpers shared by all modules."""

from __future__ import annotations

import numpy as np

from .config import tol

__all__ = [
    "as_matrix", "as_vector", "orth", "null", "span_equal", "span_contains",
    "solve_square", "cond", "is_unimodular", "conj_t",
]


def as_matrix(a, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Return ``a`` as a 2-D complex array, checking optional shape."""
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim == 1:
        m = m.reshape(-1, 1) if cols in (None, 1) else m.reshape(1, -1)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {m.shape}")
    if rows is not None and cols is not None and m.size == 0 and rows * cols == 0:
        return np.zeros((rows, cols), dtype=complex)
    if rows is not None and m.shape[0] != rows:
        raise ValueError(f"expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise ValueError(f"expected {cols} columns, got {m.shape[1]}")
    return m


def as_vector(v) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(-1)


def conj_t(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def _rank(s: np.ndarray, rtol: float | None) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    rtol = tol().rank if rtol is None else rtol
    return int(np.sum(s > rtol * s[0]))


def orth(a: np.ndarray, rtol: float | None = None) -> np.ndarray:
    """Orthonormal basis of the column span of ``a``."""
    a = np.asarray(a, dtype=complex)
    if a.shape[1] == 0 or a.shape[0] == 0:
        return np.zeros((a.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    return u[:, :_rank(s, rtol)]


def null(a: np.ndarray, rtol: float | None = None) -> np.ndarray:
    """Orthonormal basis of the null space of ``a``."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=complex)
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    r = _rank(s, rtol)
    return vh[r:].conj().T


def span_contains(big: np.ndarray, small: np.ndarray, atol: float | None = None) -> bool:
    """Whether the span of orthonormal ``small`` lies in that of orthonormal ``big``."""
    if small.shape[1] == 0:
        return True
    if big.shape[1] == 0:
        return False
    atol = tol().span if atol is None else atol
    resid = small - big @ (conj_t(big) @ small)
    return float(np.linalg.norm(resid, 2)) <= atol


def span_equal(a: np.ndarray, b: np.ndarray, atol: float | None = None) -> bool:
    """Span equality of two orthonormal bases via the largest principal angle."""
    if a.shape[1] != b.shape[1]:
        return False
    return span_contains(a, b, atol)


def cond(m: np.ndarray) -> float:
    if m.size == 0:
        return 1.0
    s = np.linalg.svd(m, compute_uv=False)
    return float(np.inf) if s[-1] == 0 else float(s[0] / s[-1])


def solve_square(m: np.ndarray, rhs: np.ndarray, err, what: str = "matrix",
                 scale: float | None = None) -> np.ndarray:
    """Solve ``m x = rhs`` if ``m`` is square and boundedly invertible.

    Invertibility means ``σ_max(m) / σ_min(m)`` under the condition cap.
    ``scale`` replaces ``σ_max`` when larger, which matters for 1x1 pencils
    whose natural size is known from their entries.
    """
    if m.shape[0] != m.shape[1]:
        raise err(f"{what} is {m.shape[0]}x{m.shape[1]}, not square")
    if m.size:
        s = np.linalg.svd(m, compute_uv=False)
        ref = s[0] if scale is None else max(s[0], scale)
        if not s[-1] * tol().cond_cap >= ref or ref == 0:
            c = np.inf if s[-1] == 0 else ref / s[-1]
            raise err(f"{what} is not boundedly invertible (condition number {c:.3g})")
    if m.size == 0:
        return np.zeros((0, rhs.shape[1]), dtype=complex)
    return np.linalg.solve(m, rhs)


def is_unimodular(z: complex, atol: float = 1e-12) -> bool:
    return abs(abs(z) - 1.0) <= atol
