"""Linear relations between Pontryagin spaces.

A relation ``T`` from ``H1`` to ``H2`` is a subspace of ``H1 x H2``. It is
stored by an orthonormal basis of its graph whose columns are split as
``(f; f')`` with ``f`` in ``H1`` and ``f'`` in ``H2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._linalg import as_matrix, conj_t, null, orth, solve_square
from .config import tol
from .exceptions import (DimensionError, InsufficientSamplesError, NotUnitaryError,
                         UnimodularPointError)
from .pspace import PontryaginSpace, Subspace, count_signs, orthogonal_companion

__all__ = [
    "LinearRelation",
    "RelationClass",
    "graph_metric",
    "parts",
    "inverse",
    "adjoint",
    "classify",
    "check_unitary_identities",
    "defect_subspace",
    "point_spectrum",
    "is_simple",
    "resolvent_matrix",
    "coresolvent_matrix",
]


def graph_metric(space_in: PontryaginSpace, space_out: PontryaginSpace) -> PontryaginSpace:
    """Product space with ``J = diag(J1, -J2)``.

    The form of a graph vector ``(f, f')`` is ``[f, f]_1 - [f', f']_2``.
    """
    return space_in.oplus(space_out.negated())


@dataclass(frozen=True, eq=False)
class LinearRelation:
    """A linear relation from ``space_in`` to ``space_out``.

    Use :meth:`from_generators` or :meth:`from_operator` to build one.
    Equality is span equality of the graphs.
    """

    space_in: PontryaginSpace
    space_out: PontryaginSpace
    graph: Subspace

    def __post_init__(self):
        n = self.space_in.dim + self.space_out.dim
        if self.graph.ambient.dim != n:
            raise DimensionError(f"graph lives in dimension {self.graph.ambient.dim}, expected {n}")

    @classmethod
    def from_generators(cls, space_in: PontryaginSpace, space_out: PontryaginSpace,
                        generators) -> "LinearRelation":
        """Relation spanned by the columns of ``generators`` (rows ``f`` then ``f'``)."""
        n = space_in.dim + space_out.dim
        g = np.array(generators, dtype=complex)
        if g.ndim == 1:
            g = g.reshape(-1, 1)
        if g.size == 0:
            g = np.zeros((n, 0), dtype=complex)
        if g.shape[0] != n:
            raise DimensionError(f"generators need {n} rows, got {g.shape[0]}")
        return cls(space_in, space_out, Subspace(graph_metric(space_in, space_out), g))

    @classmethod
    def from_operator(cls, a, space_in: PontryaginSpace,
                      space_out: PontryaginSpace | None = None) -> "LinearRelation":
        """Graph ``{(f, Af)}`` of a matrix ``A``."""
        space_out = space_in if space_out is None else space_out
        a = as_matrix(a, space_out.dim, space_in.dim)
        return cls.from_generators(space_in, space_out,
                                   np.vstack([np.eye(space_in.dim), a]))

    @property
    def dim(self) -> int:
        return self.graph.dim

    @property
    def X(self) -> np.ndarray:
        """First-component block of the graph basis."""
        return self.graph.basis[: self.space_in.dim]

    @property
    def Y(self) -> np.ndarray:
        """Second-component block of the graph basis."""
        return self.graph.basis[self.space_in.dim:]

    def form(self) -> np.ndarray:
        """Hermitian form ``X^H J1 X - Y^H J2 Y`` on the graph basis."""
        return self.graph.gram()

    def is_operator(self) -> bool:
        return parts(self)[3].dim == 0

    def matrix(self) -> np.ndarray:
        """Matrix of an everywhere defined single-valued relation."""
        if self.dim != self.space_in.dim:
            raise ValueError("relation is not the graph of an everywhere defined operator")
        return solve_square(self.X.T, self.Y.T, ValueError, "domain block").T

    def __eq__(self, other):
        return (isinstance(other, LinearRelation)
                and self.space_in.dim == other.space_in.dim
                and self.space_out.dim == other.space_out.dim
                and self.graph == other.graph)

    __hash__ = None

    def __repr__(self):
        return (f"LinearRelation(dim={self.dim}, in={self.space_in.dim}, "
                f"out={self.space_out.dim})")


def parts(t: LinearRelation) -> tuple[Subspace, Subspace, Subspace, Subspace]:
    """Domain, range, kernel and multivalued part of ``t``.

    Examples
    --------
    >>> h = PontryaginSpace.hilbert(2)
    >>> [s.dim for s in parts(LinearRelation.from_operator(np.eye(2), h))]
    [2, 2, 0, 0]
    """
    x, y = t.X, t.Y
    dom = Subspace(t.space_in, x)
    ran = Subspace(t.space_out, y)
    ker = Subspace(t.space_in, x @ null(y) if y.shape[0] else x)
    mul = Subspace(t.space_out, y @ null(x) if x.shape[0] else y)
    return dom, ran, ker, mul


def inverse(t: LinearRelation) -> LinearRelation:
    """``{(f', f) : (f, f') in t}``."""
    return LinearRelation.from_generators(t.space_out, t.space_in, np.vstack([t.Y, t.X]))


def adjoint(t: LinearRelation) -> LinearRelation:
    """J-adjoint ``{(h, k) : [k, f]_1 = [h, g]_2 for all (f, g) in t}``.

    The pairing is one linear system ``X^H J1 k - Y^H J2 h = 0`` on the
    generators, so the adjoint is a single null-space computation.
    """
    j1, j2 = t.space_in.J, t.space_out.J
    pairing = np.hstack([-conj_t(t.Y) @ j2, conj_t(t.X) @ j1])
    if t.dim == 0:
        gens = np.eye(t.space_in.dim + t.space_out.dim, dtype=complex)
    else:
        gens = null(pairing)
    return LinearRelation.from_generators(t.space_out, t.space_in, gens)


@dataclass(frozen=True)
class RelationClass:
    isometric: bool
    unitary: bool
    contractive: bool
    expanding: bool


def classify(t: LinearRelation) -> RelationClass:
    """Metric classification through the form ``X^H J1 X - Y^H J2 Y``.

    The zero form is detected first, on the orthonormal graph basis, so an
    isometric relation reports ``contractive`` and ``expanding`` as well.
    """
    form = t.form()
    if t.dim == 0 or np.max(np.abs(form)) <= tol().isometry:
        iso = True
        pos = neg = 0
    else:
        iso = False
        pos, neg, _ = count_signs(form, floor=1.0)
    unitary = iso and adjoint(t) == inverse(t)
    return RelationClass(isometric=iso, unitary=unitary,
                         contractive=neg == 0, expanding=pos == 0)


def _inclusion_gap(big: Subspace, small: Subspace) -> float:
    if small.dim == 0:
        return 0.0
    if big.dim == 0:
        return 1.0
    r = small.basis - big.basis @ (conj_t(big.basis) @ small.basis)
    return float(np.linalg.norm(r, 2))


def check_unitary_identities(t: LinearRelation) -> dict:
    """Check ``ker t = (dom t)^[⊥]`` and ``mul t = (ran t)^[⊥]`` for unitary ``t``.

    Returns
    -------
    dict
        Dimensions of the parts, the sines of the largest principal angles in
        each direction of both identities, and the boolean verdicts.
    """
    if not classify(t).unitary:
        raise NotUnitaryError("relation is not unitary")
    dom, ran, ker, mul = parts(t)
    dom_perp = orthogonal_companion(dom)
    ran_perp = orthogonal_companion(ran)
    r_ker = max(_inclusion_gap(dom_perp, ker), _inclusion_gap(ker, dom_perp))
    r_mul = max(_inclusion_gap(ran_perp, mul), _inclusion_gap(mul, ran_perp))
    return {
        "dims": {"dom": dom.dim, "ran": ran.dim, "ker": ker.dim, "mul": mul.dim},
        "ker_residual": r_ker,
        "mul_residual": r_mul,
        "ker_identity": ker == dom_perp,
        "mul_identity": mul == ran_perp,
    }


def _check_off_circle(lam: complex) -> complex:
    lam = complex(lam)
    if abs(abs(lam) - 1.0) <= tol().spectrum:
        raise UnimodularPointError(f"|λ| = 1 at λ = {lam}")
    return lam


def eigen_subspace(t: LinearRelation, lam: complex) -> Subspace:
    """``ker(t - λ) = {f : (f, λf) in t}`` for a relation in one space."""
    x, y = t.X, t.Y
    if t.dim == 0:
        return t.space_in.zero()
    return Subspace(t.space_in, x @ null(y - lam * x))


def defect_subspace(v: LinearRelation, lam: complex) -> Subspace:
    """Defect subspace ``N_λ = {f : (f, λf) in V^{-[*]}}``."""
    lam = _check_off_circle(lam)
    return eigen_subspace(adjoint(inverse(v)), lam)


def point_spectrum(t: LinearRelation, seed: int = 0) -> np.ndarray:
    """Finite eigenvalues of a relation in one space.

    ``λ`` is an eigenvalue when the pencil ``Y - λX`` on the graph basis has
    a nontrivial kernel. Candidates come from a random square compression of
    the pencil and are certified by the smallest singular value of the full
    rectangular pencil.
    """
    x, y = t.X, t.Y
    k = t.dim
    if k == 0:
        return np.zeros(0, dtype=complex)
    from scipy.linalg import eigvals
    rng = np.random.default_rng(seed)
    n = x.shape[0]
    w = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    a, b = conj_t(w) @ y, conj_t(w) @ x
    cands = eigvals(a, b)
    cands = cands[np.isfinite(cands)]
    out = []
    for c in cands:
        s = np.linalg.svd(y - c * x, compute_uv=False)
        if s[-1] <= 1e-8 * max(1.0, abs(c)) and not any(abs(c - o) <= tol().spectrum for o in out):
            out.append(c)
    return np.array(out, dtype=complex)


def _sample_points(count: int, seed: int) -> list[complex]:
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.15, 0.85, count)
    th = rng.uniform(0, 2 * np.pi, count)
    pts = r * np.exp(1j * th)
    # Alternate between the disk and its reflection.
    return [p if i % 2 == 0 else 1 / np.conj(p) for i, p in enumerate(pts)]


def is_simple(v: LinearRelation, samples: Iterable[complex] | None = None,
              max_refinements: int = 3) -> bool:
    """Whether the isometric relation ``v`` is simple.

    ``v`` is simple when it has no eigenvalues off the unit circle and the
    defect subspaces at the sample points span the whole space. The span is
    recomputed with twice as many (seeded) extra points until its dimension
    repeats.

    Raises
    ------
    InsufficientSamplesError
        If the span dimension keeps growing through all refinements.
    """
    spec = point_spectrum(v)
    if any(abs(abs(e) - 1.0) > tol().spectrum for e in spec):
        return False
    n = v.space_in.dim
    vinv_adj = adjoint(inverse(v))

    def span_dim(pts):
        cols = [eigen_subspace(vinv_adj, p).basis for p in pts
                if abs(abs(p) - 1) > tol().spectrum
                and all(abs(p - e) > tol().spectrum for e in spec)]
        if not cols:
            return 0
        return orth(np.hstack(cols)).shape[1]

    pts = list(samples) if samples is not None else _sample_points(4, 1)
    prev = span_dim(pts)
    if prev == n:
        return True
    extra = max(len(pts), 2)
    for i in range(max_refinements):
        pts = pts + _sample_points(extra, 100 + i)
        extra *= 2
        cur = span_dim(pts)
        if cur == n:
            return True
        if cur == prev:
            return False
        prev = cur
    raise InsufficientSamplesError("defect span did not stabilize")


def resolvent_matrix(t: LinearRelation, lam: complex, err=ValueError) -> np.ndarray:
    """Matrix of ``(t - λ)^{-1}``; ``err`` is raised when it is not bounded."""
    x, y = t.X, t.Y
    m = y - lam * x
    return x @ solve_square(m, np.eye(m.shape[0], dtype=complex), err, "resolvent pencil",
                            scale=1.0 + abs(lam))


def coresolvent_matrix(t: LinearRelation, z: complex, err=ValueError) -> np.ndarray:
    """Matrix of ``(I - z t)^{-1}``, i.e. ``h -> f`` with ``(f, f') in t`` and ``f - z f' = h``."""
    x, y = t.X, t.Y
    m = x - z * y
    return x @ solve_square(m, np.eye(m.shape[0], dtype=complex), err, "coresolvent pencil",
                            scale=1.0 + abs(z))
