import numpy as np
import pytest

from krein_weyl.boundary import theta
from krein_weyl.colligation import characteristic_function, random_colligation, validate
from krein_weyl.exceptions import (NotSchurClassError, RankNotStabilizedError,
                                   SteinSingularError, UnimodularAlphaError)
from krein_weyl.kernels import SamplerConfig, negative_squares
from krein_weyl.realize import (RationalFunctionData, install_metric, minimal_realization,
                                realize, shift_coefficients, solve_stein, taylor_coefficients)

FLIP = [2 * (-2.0) ** k if k == 0 else -3 * (-2.0) ** (k - 1) for k in range(9)]


def scalar(x):
    return complex(np.asarray(x)[0, 0])


def test_flip_coefficients():
    assert FLIP[:4] == [2.0, -3.0, 6.0, -12.0]


def test_lambda_realization_has_rank_one():
    t, f, g, h = minimal_realization(RationalFunctionData([0, 1, 0, 0, 0, 0, 0]))
    assert t.shape == (1, 1)
    assert scalar(t) == pytest.approx(0, abs=1e-12)
    assert scalar(g @ f) == pytest.approx(1.0)
    assert scalar(h) == 0


def test_flip_realization_frozen():
    t, f, g, h = minimal_realization(RationalFunctionData(FLIP))
    assert scalar(t) == pytest.approx(-2.0)
    assert scalar(g @ f) == pytest.approx(-3.0)
    assert scalar(h) == pytest.approx(2.0)


@pytest.mark.parametrize("coeffs", [[0.5], [0.5, 0, 0, 0, 0], [[[0, 1], [1, 0]]] * 1])
def test_constant_data_has_empty_state(coeffs):
    t, f, g, h = minimal_realization(RationalFunctionData(coeffs))
    assert t.shape == (0, 0)


def test_rank_must_stabilize():
    with pytest.raises(RankNotStabilizedError):
        minimal_realization(RationalFunctionData([1.0, 1.0, 2.0, 3.0, 5.0]))


def test_degree_hint_needs_enough_coefficients():
    with pytest.raises(ValueError):
        RationalFunctionData([1.0, 2.0], degree_hint=1)


def test_degree_hint_overrides_stabilization():
    t, *_ = minimal_realization(RationalFunctionData(FLIP[:3], degree_hint=1))
    assert scalar(t) == pytest.approx(-2.0)


def test_stein_scalar_frozen():
    assert scalar(solve_stein(np.array([[-2.0]]), np.array([[-3.0]]))) == pytest.approx(-3.0)
    assert scalar(solve_stein(np.array([[0.0]]), np.array([[1.0]]))) == pytest.approx(1.0)


def test_stein_singular():
    with pytest.raises(SteinSingularError):
        solve_stein(np.array([[1.0]]), np.array([[1.0]]))


def test_stein_solves_equation(rng):
    t = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    g = rng.standard_normal((2, 3))
    p = solve_stein(t, g)
    assert np.allclose(t.conj().T @ p @ t - p, -g.conj().T @ g, atol=1e-9)
    assert np.allclose(p, p.conj().T)


def test_install_metric_flip_cross_checks():
    c = install_metric(-2.0, 1.0, -3.0, 2.0)
    assert c.kappa == 1
    assert validate(c)["passed"]
    # P |F|^2 = -3 does not depend on the state basis.
    assert (c.state.J[0, 0] * abs(c.F[0, 0]) ** 2).real == pytest.approx(-3.0)
    assert scalar(characteristic_function(c, 0.3)) == pytest.approx(2.3 / 1.6)


def test_install_metric_lambda():
    c = install_metric(0.0, 1.0, 1.0, 0.0)
    assert c.kappa == 0
    assert scalar(c.state.J) == pytest.approx(1.0)


def test_install_metric_constant_unitary():
    c = install_metric(np.zeros((0, 0)), np.zeros((0, 1)), np.zeros((1, 0)), [[1j]])
    assert c.dim == 0 and c.kappa == 0


@pytest.mark.parametrize("t, f, g, h", [
    (np.zeros((0, 0)), np.zeros((0, 1)), np.zeros((1, 0)), [[0.5]]),
    (0.5, 1.0, 1.0, 0.0),
    (0.0, 1.0, 1.0, [[0.0, 0.0]]),
])
def test_install_metric_rejects_non_schur(t, f, g, h):
    with pytest.raises(NotSchurClassError):
        install_metric(t, f, g, h)


def test_shift_coefficients_frozen():
    d = RationalFunctionData([2 * (-2.0) ** k for k in range(6)], center=0.5)
    got = [scalar(c) for c in shift_coefficients(d, 0.5).taylor]
    assert np.allclose(got, FLIP[:6])


def test_shift_requires_matching_center():
    with pytest.raises(ValueError):
        shift_coefficients(RationalFunctionData([1.0, 2.0], center=0.0), 0.5)
    with pytest.raises(UnimodularAlphaError):
        shift_coefficients(RationalFunctionData([1.0], center=1.0), 1.0)


def test_realize_lambda():
    r = realize(RationalFunctionData([0, 1, 0, 0, 0, 0, 0]))
    assert r.kappa == 0
    assert scalar(theta(r.pair, 0.4 - 0.2j)) == pytest.approx(0.4 - 0.2j)


def test_realize_inverse_lambda_frozen():
    r = realize(RationalFunctionData([2 * (-2.0) ** k for k in range(9)], center=0.5), 0.5)
    assert r.kappa == 1
    for lam in (0.3, 0.5j, -0.7):
        assert abs(scalar(theta(r.pair, lam)) - 1 / lam) <= 1e-9


@pytest.mark.parametrize("seed, n, kappa, m, center", [
    (1, 3, 1, 1, 0.0), (2, 4, 2, 2, 0.0), (3, 2, 0, 1, 0.3j), (4, 3, 1, 2, -0.2 + 0.1j)])
def test_round_trip(seed, n, kappa, m, center):
    c = random_colligation(seed, n, kappa, m)
    data = RationalFunctionData(taylor_coefficients(c, 2 * n + 5, center), center=center)
    r = realize(data, np.conj(center))
    assert r.kappa == kappa
    rng = np.random.default_rng(seed)
    grid = 0.8 * rng.uniform(0.1, 1, 15) * np.exp(2j * np.pi * rng.uniform(size=15))
    for lam in grid:
        want = characteristic_function(c, lam)
        assert np.linalg.norm(theta(r.pair, lam) - want) <= 1e-7 * max(1, np.linalg.norm(want))


@pytest.mark.parametrize("kappa", [1, 2, 3])
def test_realized_negative_squares(kappa):
    c = random_colligation(40 + kappa, kappa + 1, kappa, 1)
    r = realize(RationalFunctionData(taylor_coefficients(c, 2 * kappa + 7)))
    res = negative_squares(lambda z: theta(r.pair, z), SamplerConfig(seed=kappa, expected=kappa))
    assert res.stabilized and res.count == r.kappa == kappa


def test_taylor_coefficients_match_evaluation():
    c = random_colligation(5, 3, 1, 1)
    data = RationalFunctionData(taylor_coefficients(c, 60, 0.1), center=0.1)
    assert np.allclose(data.evaluate(0.15), characteristic_function(c, 0.15), atol=1e-10)
    assert data.shape == (1, 1)
