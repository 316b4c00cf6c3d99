"""The nine acceptance criteria as plain functions.

Each criterion returns a :class:`CriterionResult` holding the verdict and the
worst residuals seen. The test-suite and the ``suite`` CLI verb share them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._linalg import conj_t
from .boundary import (boundary_structure, from_colligation,
                       from_main_transform, gamma1, gamma2, gamma_resolvent_identity_residual,
                       green_identity_residual, main_transform, mobius, mobius_map,
                       pair_direct_sum, theta, transpose)
from .colligation import characteristic_function, random_colligation
from .exceptions import KreinWeylError, SingularPencilError
from .extensions import (NOT_INVERTIBLE, ExtensionParameter, build_extension, coresolvent,
                         direct_coresolvent_oracle, direct_resolvent_oracle, resolvent,
                         spectral_point_check)
from .fixtures import (example_pair, example_theta, flip_kappa1_colligation, multivalued_pair,
                       scalar_lambda_pair)
from .gencores import (compression_oracle, coresolvent_formula, couple,
                       generalized_coresolvent, regularity_index)
from .kernels import SamplerConfig, kernel_gamma_identities_residual, negative_squares, s_kernel
from .pspace import PontryaginSpace
from .realize import (RationalFunctionData, minimal_realization, realize, shift_coefficients,
                      solve_stein, taylor_coefficients)
from .relation import (LinearRelation, adjoint, check_unitary_identities, classify,
                       coresolvent_matrix, inverse)

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all"]


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number}: {self.title}"

    def as_dict(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "details": self.details}


def _disk_points(rng: np.random.Generator, count: int, r_min: float = 0.2,
                 r_max: float = 0.9) -> list[complex]:
    r = rng.uniform(r_min, r_max, count)
    return list(r * np.exp(2j * np.pi * rng.uniform(size=count)))


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(b))))


def _random_colligation(rng, max_dim: int = 8, max_kappa: int = 3, max_l: int = 3):
    n = int(rng.integers(1, max_dim + 1))
    kappa = int(rng.integers(0, min(max_kappa, n) + 1))
    l = int(rng.integers(1, max_l + 1))
    return random_colligation(rng, n, kappa, l)


def _poles(c) -> tuple:
    eig = np.linalg.eigvals(c.T) if c.dim else np.zeros(0)
    return tuple(complex(1 / e) for e in eig if abs(e) > 1e-14)


def criterion_1(seed: int) -> CriterionResult:
    """Golden test on the four-dimensional worked example."""
    rng = np.random.default_rng(seed)
    bp = example_pair()
    lams = _disk_points(rng, 20)
    theta_err = max(_rel(theta(bp, l), example_theta(l)) for l in lams)
    th = lambda l: theta(bp, l)  # noqa: E731
    pairs = list(zip(_disk_points(rng, 20, 0.4), _disk_points(rng, 20, 0.4)))
    det_max = 0.0
    for l, w in pairs:
        s = s_kernel(th, l, w)
        det_max = max(det_max, abs(np.linalg.det(s)) / max(1.0, np.linalg.norm(s, 2)) ** 3)
    l0 = 0.5
    stacked = np.vstack([s_kernel(th, l0, 0.3), s_kernel(th, l0, -0.4j)])
    rank = int(np.linalg.matrix_rank(stacked, tol=1e-9 * np.linalg.norm(stacked, 2)))
    ok = theta_err <= 1e-9 and det_max <= 1e-9 and rank == 3
    return CriterionResult(1, "worked example Weyl function and S-kernel", ok, {
        "theta_rel_err": theta_err, "det_max": det_max, "stacked_rank": rank})


def criterion_2(seed: int, count: int = 50) -> CriterionResult:
    """Colligation dictionary on random validated colligations."""
    rng = np.random.default_rng(seed)
    green = weyl_err = gamma_err = 0.0
    round_trip = True
    evaluated = 0
    grid = [0.55 * np.exp(2j * np.pi * k / 10) for k in range(10)]
    for _ in range(count):
        c = _random_colligation(rng)
        bp = from_colligation(c)
        green = max(green, green_identity_residual(bp))
        j = c.state.J
        for l in grid:
            try:
                w = theta(bp, l)
                g1 = gamma1(bp, l)
            except KreinWeylError:
                continue
            evaluated += 1
            weyl_err = max(weyl_err, _rel(w, characteristic_function(c, l)))
            closed1 = np.linalg.solve(np.eye(c.dim) - l * c.T, c.F)
            gamma_err = max(gamma_err, _rel(g1, closed1))
            le = 1 / np.conj(l)
            try:
                g2 = gamma2(bp, le)
            except KreinWeylError:
                continue
            closed2 = np.linalg.solve(le * np.eye(c.dim) - c.T_adj, j @ conj_t(c.G))
            gamma_err = max(gamma_err, _rel(g2, closed2))
        u = main_transform(bp)
        back = from_main_transform(u, c.dim, c.L1_dim, c.L2_dim, c.state)
        round_trip &= back == bp and classify(u).unitary
    ok = green <= 1e-9 and weyl_err <= 1e-9 and gamma_err <= 1e-9 and round_trip
    return CriterionResult(2, "colligation dictionary", ok, {
        "colligations": count, "grid_evaluations": evaluated, "green_residual": green,
        "weyl_vs_characteristic": weyl_err, "gamma_closed_forms": gamma_err,
        "main_transform_round_trip": round_trip})


def _criterion_fixtures(rng) -> list:
    out = [example_pair(), scalar_lambda_pair(), from_colligation(flip_kappa1_colligation())]
    out += [from_colligation(random_colligation(rng, int(rng.integers(2, 6)), k, 2))
            for k in range(3)]
    return out


def criterion_3(seed: int) -> CriterionResult:
    """Kernel identities and γ-field resolvent identities."""
    rng = np.random.default_rng(seed)
    m_res = r_res = 0.0
    checked = 0
    for bp in _criterion_fixtures(rng):
        # Region of (λ, μ): outside the disk when the flag is set.
        for flip_l, flip_m in ((False, False), (True, True), (False, True), (True, False)):
            done = 0
            while done < 5:
                l, m = _disk_points(rng, 2, 0.3, 0.85)
                l = 1 / np.conj(l) if flip_l else l
                m = 1 / np.conj(m) if flip_m else m
                try:
                    r = kernel_gamma_identities_residual(bp, l, m)
                except KreinWeylError:
                    continue
                m_res, done, checked = max(m_res, r), done + 1, checked + 1
        for outside in (False, True):
            done = 0
            while done < 5:
                l, m = _disk_points(rng, 2, 0.3, 0.85)
                if outside:
                    l, m = 1 / np.conj(l), 1 / np.conj(m)
                try:
                    r = gamma_resolvent_identity_residual(bp, l, m)
                except KreinWeylError:
                    continue
                r_res, done = max(r_res, r), done + 1
    ok = m_res <= 1e-9 and r_res <= 1e-9
    return CriterionResult(3, "kernel and resolvent identities", ok, {
        "kernel_identity_residual": m_res, "resolvent_identity_residual": r_res,
        "kernel_checks": checked})


def criterion_4(seed: int, count: int = 20) -> CriterionResult:
    """Negative squares of Schur kernels."""
    rng = np.random.default_rng(seed)
    lam = negative_squares(lambda z: np.array([[z]]), SamplerConfig(seed=seed))
    inv = negative_squares(lambda z: np.array([[1 / z]]), SamplerConfig(seed=seed, expected=1))
    ok = lam.count == 0 and lam.stabilized and inv.count == 1 and inv.stabilized
    misses = []
    for i in range(count):
        c = _random_colligation(rng, max_dim=6, max_l=2)
        sampler = SamplerConfig(seed=seed + i, expected=c.kappa, exclude=_poles(c),
                                exclusion_radius=1e-3)
        res = negative_squares(lambda z, c=c: characteristic_function(c, z), sampler)
        if res.count != c.kappa or not res.stabilized:
            misses.append({"index": i, "kappa": c.kappa, "estimate": res.as_dict()})
    ok = ok and not misses
    return CriterionResult(4, "negative squares", ok, {
        "lambda": lam.as_dict(), "inverse_lambda": inv.as_dict(), "random": count,
        "misses": misses})


def _random_phi(rng, l: int) -> ExtensionParameter:
    def g():
        return rng.standard_normal((l, l)) + 1j * rng.standard_normal((l, l))
    return ExtensionParameter(g(), g())


def criterion_5(seed: int, trials: int = 10) -> CriterionResult:
    """Kreĭn-type resolvent formulas against direct inversion."""
    rng = np.random.default_rng(seed)
    fixtures = [scalar_lambda_pair(), from_colligation(flip_kappa1_colligation())]
    fixtures += [from_colligation(random_colligation(rng, int(rng.integers(2, 6)), k, 2))
                 for k in range(3)]
    worst = 0.0
    disagreements = 0
    compared = 0
    for bp in fixtures:
        l = bp.L1_dim
        for t in range(trials):
            phi = _random_phi(rng, l)
            v = build_extension(bp, phi)
            (p,) = _disk_points(rng, 1, 0.1, 0.9)
            points = [("res", 0.0 if t == 0 else p), ("res", 1 / np.conj(p)),
                      ("cores", p), ("cores", 1 / np.conj(p))]
            for kind, x in points:
                oracle = (direct_resolvent_oracle if kind == "res" else direct_coresolvent_oracle)(v, x)
                fn = resolvent if kind == "res" else coresolvent
                try:
                    got = fn(bp, phi, x)
                except SingularPencilError:
                    disagreements += oracle is not NOT_INVERTIBLE
                    continue
                except KreinWeylError:
                    continue
                if oracle is NOT_INVERTIBLE:
                    disagreements += 1
                    continue
                worst = max(worst, _rel(got, oracle))
                compared += 1
        # Spectral verdicts: a forced eigenvalue and a generic point.
        for lam0 in (0.35 + 0.2j, -0.5j):
            try:
                th0 = theta(bp, lam0)
            except KreinWeylError:
                continue
            for phi in (ExtensionParameter(np.eye(l), th0), _random_phi(rng, l)):
                chk = spectral_point_check(bp, phi, lam0)
                oracle = direct_resolvent_oracle(build_extension(bp, phi), lam0)
                disagreements += chk["pencil_invertible"] == (oracle is NOT_INVERTIBLE)
    ok = worst <= 1e-8 and disagreements == 0
    return CriterionResult(5, "resolvent formulas", ok, {
        "worst_relative_error": worst, "comparisons": compared,
        "verdict_disagreements": disagreements})


def _inverse_lambda_pair():
    data = RationalFunctionData([2 * (-2.0) ** k for k in range(9)], center=0.5)
    return realize(data, 0.5).pair


def criterion_6(seed: int) -> CriterionResult:
    """Generalized coresolvents of couplings with κ̃ - κ ∈ {0, 1, 2}."""
    rng = np.random.default_rng(seed)
    inv = _inverse_lambda_pair()
    couplings = {
        0: couple(from_colligation(random_colligation(rng, 3, 1, 1)),
                  from_colligation(random_colligation(rng, 3, 0, 1))),
        1: couple(from_colligation(random_colligation(rng, 3, 0, 1)), inv),
        2: couple(from_colligation(random_colligation(rng, 4, 1, 2)), pair_direct_sum(inv, inv)),
    }
    worst = 0.0
    indices = {}
    ok = True
    for diff, cp in couplings.items():
        done = 0
        while done < 10:
            (z,) = _disk_points(rng, 1, 0.15, 0.85)
            z = z if done % 2 == 0 else 1 / np.conj(z)
            try:
                got = generalized_coresolvent(cp, z)
                want = compression_oracle(cp, z)
            except KreinWeylError:
                continue
            worst = max(worst, _rel(got, want))
            done += 1
        ri = regularity_index(cp, SamplerConfig(seed=seed, expected=diff))
        indices[diff] = ri.as_dict()
        ok &= ri.count == diff and ri.stabilized
    base = couplings[2].base
    zero = lambda z: np.zeros((base.L2_dim, base.L1_dim))  # noqa: E731
    zero_err = 0.0
    for z in _disk_points(rng, 5, 0.1, 0.9):
        k = coresolvent_formula(base, zero, z)
        zero_err = max(zero_err, float(np.max(np.abs(k - coresolvent_matrix(base.parts.V2, z)))))
    ok = ok and worst <= 1e-8 and zero_err == 0.0
    return CriterionResult(6, "generalized coresolvents", ok, {
        "worst_relative_error": worst, "regularity_index": indices, "zero_parameter_error": zero_err})


def criterion_7(seed: int, count: int = 6) -> CriterionResult:
    """Realization round trip and the 1/λ pipeline."""
    rng = np.random.default_rng(seed)
    grid = [0.7 * np.exp(2j * np.pi * k / 15) * (0.3 + 0.7 * k / 15) for k in range(15)]
    worst = 0.0
    kappa_ok = True
    for i in range(count):
        n = int(rng.integers(3, 7))
        c = random_colligation(rng, n, i % 4, int(rng.integers(1, 3)))
        r = realize(RationalFunctionData(taylor_coefficients(c, 4 * c.dim + 4)), 0)
        kappa_ok &= r.kappa == c.kappa
        for l in grid:
            try:
                worst = max(worst, _rel(theta(r.pair, l), characteristic_function(c, l)))
            except KreinWeylError:
                continue
    data = RationalFunctionData([2 * (-2.0) ** k for k in range(9)], center=0.5)
    r = realize(data, 0.5)
    t, f, g, _ = minimal_realization(shift_coefficients(data, 0.5))
    # Stein solution in the state basis where F = 1.
    p = float((solve_stein(t, g) * abs(f[0, 0]) ** 2)[0, 0].real)
    inv_err = max(abs(theta(r.pair, l)[0, 0] - 1 / l) for l in (0.3, 0.5j, -0.7))
    ok = worst <= 1e-7 and kappa_ok and r.kappa == 1 and abs(p + 3) <= 1e-9 and inv_err <= 1e-9
    return CriterionResult(7, "realization", ok, {
        "round_trip_error": worst, "kappa_match": kappa_ok, "inverse_lambda_kappa": r.kappa,
        "stein_P": p, "inverse_lambda_error": inv_err})


def criterion_8(seed: int) -> CriterionResult:
    """Möbius invariance and transpose duality."""
    rng = np.random.default_rng(seed)
    pairs = [example_pair()] + [from_colligation(random_colligation(rng, 4, k, 2)) for k in range(3)]
    mob = trans = 0.0
    for bp in pairs:
        tb = transpose(bp)
        for alpha in (0.3, -0.6j):
            mp = mobius(bp, alpha)
            done = 0
            while done < 10:
                (l,) = _disk_points(rng, 1, 0.1, 0.9)
                try:
                    lhs = theta(mp, mobius_map(alpha, l))
                    rhs = theta(bp, l)
                except KreinWeylError:
                    continue
                mob = max(mob, _rel(lhs, rhs))
                done += 1
        for l in _disk_points(rng, 10, 0.2, 0.9):
            try:
                trans = max(trans, _rel(theta(tb, l), conj_t(theta(bp, np.conj(l)))))
            except KreinWeylError:
                continue
    ok = mob <= 1e-9 and trans <= 1e-9
    return CriterionResult(8, "Möbius invariance and transpose duality", ok, {
        "mobius_error": mob, "transpose_error": trans})


def _random_relation(rng) -> LinearRelation:
    n1, n2 = int(rng.integers(1, 5)), int(rng.integers(1, 5))
    s1 = PontryaginSpace.from_signature(n1, int(rng.integers(0, n1 + 1)))
    s2 = PontryaginSpace.from_signature(n2, int(rng.integers(0, n2 + 1)))
    k = int(rng.integers(0, n1 + n2 + 1))
    r = int(rng.integers(0, k + 1))
    # k generators spanning an r-dimensional graph.
    a = rng.standard_normal((n1 + n2, r)) + 1j * rng.standard_normal((n1 + n2, r))
    gens = a @ rng.standard_normal((r, k))
    return LinearRelation.from_generators(s1, s2, gens)


def criterion_9(seed: int, count: int = 100) -> CriterionResult:
    """Structural invariants."""
    rng = np.random.default_rng(seed)
    dim_ok = all(t.dim + adjoint(t).dim == t.space_in.dim + t.space_out.dim
                 for t in (_random_relation(rng) for _ in range(count)))
    pairs = _criterion_fixtures(rng) + [multivalued_pair()]
    eee_ok = True
    prop_ok = True
    for bp in pairs:
        for u in (bp.gamma, main_transform(bp)):
            chk = check_unitary_identities(u)
            eee_ok &= chk["ker_identity"] and chk["mul_identity"]
        st = boundary_structure(bp)
        prop_ok &= st["ran_gamma1"] == bp.L1_dim and st["ran_gamma2"] == bp.L2_dim
        zero = [st[k] == 0 for k in ("mul_gamma1", "mul_gamma2", "mul_gamma")]
        prop_ok &= all(zero) or not any(zero)
    hilbert_ok = True
    for _ in range(10):
        bp = from_colligation(random_colligation(rng, int(rng.integers(1, 6)), 0,
                                                 int(rng.integers(1, 3))))
        v1, v2 = bp.parts.V1, bp.parts.V2
        c2, c1 = classify(v2), classify(inverse(v1))
        hilbert_ok &= c2.contractive and c1.contractive
        hilbert_ok &= v2.is_operator() and inverse(v1).is_operator()
        hilbert_ok &= v2 == adjoint(inverse(v1))
    ok = dim_ok and eee_ok and prop_ok and hilbert_ok
    return CriterionResult(9, "structural invariants", ok, {
        "adjoint_dimension": dim_ok, "unitary_identities": eee_ok,
        "boundary_ranges_and_mul": prop_ok, "hilbert_contractivity": hilbert_ok})


CRITERIA: dict[int, Callable[[int], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def run_criterion(number: int, seed: int = 7) -> CriterionResult:
    """Run one criterion; an unexpected package error counts as a failure."""
    fn = CRITERIA[number]
    try:
        return fn(seed)
    except KreinWeylError as e:
        title = (fn.__doc__ or "").strip().splitlines()[0]
        return CriterionResult(number, title, False, {"error": f"{type(e).__name__}: {e}"})


def run_all(seed: int = 7) -> list[CriterionResult]:
    return [run_criterion(k, seed) for k in sorted(CRITERIA)]
