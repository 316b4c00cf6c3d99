import numpy as np
import pytest

from krein_weyl.colligation import (UnitaryColligation, characteristic_function, direct_sum,
                                    is_closely_connected, random_colligation, require_valid,
                                    validate)
from krein_weyl.exceptions import InvalidColligationError, SingularResolventError
from krein_weyl.fixtures import (constant_colligation, flip_kappa1_colligation,
                                 scalar_lambda_colligation)
from krein_weyl.pspace import PontryaginSpace


@pytest.mark.parametrize("lam", [0.3, -0.5j, 0.1 + 0.7j, 2.0])
def test_scalar_lambda_characteristic(lam):
    assert complex(characteristic_function(scalar_lambda_colligation(), lam)[0, 0]) == \
        pytest.approx(lam)


@pytest.mark.parametrize("lam", [0.0, 0.25, -0.4 + 0.1j])
def test_flip_kappa1_closed_form(lam):
    got = complex(characteristic_function(flip_kappa1_colligation(), lam)[0, 0])
    assert got == pytest.approx((2 + lam) / (1 + 2 * lam))


def test_flip_kappa1_is_valid_with_negative_state():
    c = flip_kappa1_colligation()
    assert c.kappa == 1
    assert validate(c)["passed"]


def test_empty_state_returns_h():
    h = np.array([[0.0, 1.0], [1.0, 0.0]])
    c = constant_colligation(h)
    assert np.allclose(characteristic_function(c, 0.4 + 0.2j), h)
    assert is_closely_connected(c)


def test_singular_resolvent():
    c = flip_kappa1_colligation()
    with pytest.raises(SingularResolventError):
        characteristic_function(c, -0.5)


def test_validate_reports_six_identities():
    rep = validate(UnitaryColligation(PontryaginSpace.hilbert(1), 0.5, 0.5, 0.5, 0.5))
    assert len(rep["residuals"]) == 6
    assert not rep["passed"]
    with pytest.raises(InvalidColligationError):
        require_valid(UnitaryColligation(PontryaginSpace.hilbert(1), 0.5, 0.5, 0.5, 0.5))


@pytest.mark.parametrize("n, kappa, m", [(1, 0, 1), (3, 1, 1), (4, 2, 2), (5, 0, 3)])
def test_random_colligation_is_unitary(n, kappa, m):
    c = random_colligation(n + 10 * kappa + m, n, kappa, m)
    assert validate(c)["max_residual"] < 1e-10
    assert (c.dim, c.kappa, c.L1_dim, c.L2_dim) == (n, kappa, m, m)


def test_random_colligation_is_seeded():
    a = random_colligation(5, 3, 1)
    b = random_colligation(5, 3, 1)
    assert np.array_equal(a.block(), b.block())


def test_direct_sum_with_uncoupled_block_not_closely_connected():
    dead = UnitaryColligation(PontryaginSpace.hilbert(1), 1.0, np.zeros((1, 0)),
                              np.zeros((0, 1)), np.zeros((0, 0)))
    c = direct_sum(scalar_lambda_colligation(), dead)
    assert validate(c)["passed"]
    assert not is_closely_connected(c)
    assert is_closely_connected(scalar_lambda_colligation())


def test_connecting_relation_is_unitary():
    from krein_weyl.relation import classify
    c = random_colligation(3, 3, 1, 2)
    assert classify(c.connecting_relation()).unitary


def test_characteristic_matches_direct_formula(rng):
    c = random_colligation(rng, 4, 1, 2)
    lam = 0.3 - 0.2j
    want = c.H + lam * c.G @ np.linalg.solve(np.eye(4) - lam * c.T, c.F)
    assert np.allclose(characteristic_function(c, lam), want, atol=1e-13)
