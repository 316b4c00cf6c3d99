import numpy as np
import pytest

from krein_weyl.boundary import (boundary_structure, direct_pair, from_colligation,
                                 from_main_transform, gamma1, gamma2, gamma2_sharp_derivative_at_zero,
                                 gamma_resolvent_identity_residual, gamma_sharp,
                                 green_identity_residual, main_transform, mobius, mobius_map,
                                 mobius_matrix, pair_direct_sum, region, theta, theta_sharp,
                                 transpose, v2_boundary_lift, weyl)
from krein_weyl.colligation import characteristic_function, random_colligation
from krein_weyl.exceptions import (ExcludedPointError, MixedRegionError,
                                   NotUnitaryError, UnimodularAlphaError, UnimodularPointError)
from krein_weyl.fixtures import (antidiagonal_space, example_generators, example_pair,
                                 example_theta, flip_kappa1_colligation, multivalued_pair,
                                 random_pair, scalar_lambda_pair)
from krein_weyl.relation import classify

EXAMPLE_THETA_HALF = np.array([[1 / 3, 1 / 3, 1 / 6],
                               [4 / 3, 1 / 3, -1 / 3],
                               [8 / 3, -4 / 3, 1 / 3]])


def test_example_theta_at_half_frozen():
    assert np.allclose(theta(example_pair(), 0.5), EXAMPLE_THETA_HALF, atol=1e-12)


@pytest.mark.parametrize("lam", [0.5, 1 / 3, 0.2 + 0.4j, -0.7j])
def test_example_theta_closed_form(lam):
    assert np.allclose(theta(example_pair(), lam), example_theta(lam), atol=1e-10)


def test_example_theta_sharp():
    lam = 2.5 - 1j
    want = example_theta(1 / np.conj(lam)).conj().T
    assert np.allclose(theta_sharp(example_pair(), lam), want, atol=1e-10)


def test_example_structure():
    bp = example_pair()
    pp = bp.parts
    assert (pp.V.dim, pp.V1.dim, pp.V2.dim, pp.V_star.dim) == (1, 4, 4, 7)
    assert classify(pp.V).isometric
    assert main_transform(bp).dim == 7
    assert green_identity_residual(bp) < 1e-12


def test_direct_pair_missing_generator():
    gens = example_generators()[:, :-1]
    with pytest.raises(NotUnitaryError):
        direct_pair(antidiagonal_space(4), gens, 3, 3)


def test_direct_pair_green_identity_violation():
    gens = example_generators().copy()
    gens[-1] *= 2
    with pytest.raises(NotUnitaryError):
        direct_pair(antidiagonal_space(4), gens, 3, 3)


@pytest.mark.parametrize("lam", [0.3, -0.2 + 0.5j])
def test_colligation_pair_weyl_is_characteristic(lam):
    c = random_colligation(4, 3, 1, 2)
    assert np.allclose(theta(from_colligation(c), lam), characteristic_function(c, lam), atol=1e-10)


def test_weyl_branches():
    bp = scalar_lambda_pair()
    assert weyl(bp, 0.3).branch == "D"
    ev = weyl(bp, 3.0)
    assert ev.branch == "De"
    assert complex(ev.theta[0, 0]) == pytest.approx(1 / 3)
    with pytest.raises(UnimodularPointError):
        weyl(bp, 1j)
    with pytest.raises(ExcludedPointError):
        theta(bp, 3.0)
    with pytest.raises(ExcludedPointError):
        gamma1(bp, 3.0)


def test_region():
    assert region(0.5) == "D" and region(-2j) == "De"
    with pytest.raises(UnimodularPointError):
        region(np.exp(0.3j))


def test_multivalued_pair_structure():
    bp = multivalued_pair()
    s = boundary_structure(bp)
    assert (s["mul_gamma"], s["mul_gamma1"], s["mul_gamma2"]) == (1, 1, 1)
    # The defect family is trivial, so Θ reduces to the identification u1 = u2.
    assert complex(theta(bp, 0.3)[0, 0]) == pytest.approx(1.0)


def test_ordinary_pair_structure():
    s = boundary_structure(example_pair())
    assert s == {"ran_gamma1": 3, "ran_gamma2": 3, "mul_gamma1": 0, "mul_gamma2": 0,
                 "mul_gamma": 0}


def test_gamma_sharp_for_zero_t():
    bp = scalar_lambda_pair()
    for lam in (0.4, -0.3j):
        assert complex(gamma_sharp(bp, lam, 2)[0, 0]) == pytest.approx(lam)
    assert gamma_sharp(bp, 0, 2)[0, 0] == 0


def test_gamma2_sharp_derivative_is_g():
    c = random_colligation(11, 3, 1, 2)
    assert np.allclose(gamma2_sharp_derivative_at_zero(from_colligation(c)), c.G, atol=1e-10)


def test_v2_lift_matches_gamma1_sharp():
    bp = random_pair(2, 3, 1)
    lam = 1.7 + 0.4j
    assert np.allclose(v2_boundary_lift(bp, lam), -gamma_sharp(bp, lam, 1) / lam, atol=1e-10)


def test_gamma2_at_infinity():
    assert gamma2(example_pair(), np.inf).shape == (4, 3)


@pytest.mark.parametrize("lam, mu", [(0.3, -0.2j), (0.5 + 0.1j, 0.1), (2.0, -3j), (1.5j, 4.0)])
def test_gamma_resolvent_identity(lam, mu):
    assert gamma_resolvent_identity_residual(random_pair(5, 3, 1), lam, mu) < 1e-9


def test_gamma_resolvent_identity_mixed():
    with pytest.raises(MixedRegionError):
        gamma_resolvent_identity_residual(example_pair(), 0.5, 2.0)


@pytest.mark.parametrize("alpha", [0.0, 0.3, -0.2 + 0.5j])
def test_mobius_matrix_inverse(alpha):
    m = mobius_matrix(alpha, 2)
    assert np.allclose(m @ mobius_matrix(-alpha, 2), np.eye(4))
    if alpha == 0:
        assert np.allclose(m, np.eye(4))


def test_mobius_matrix_rejects_unit_alpha():
    with pytest.raises(UnimodularAlphaError):
        mobius_matrix(1j)


@pytest.mark.parametrize("alpha", [0.3, -0.2 + 0.5j])
def test_mobius_weyl_transport(alpha):
    bp = random_pair(8, 3, 1)
    bpa = mobius(bp, alpha)
    lam = 0.1 + 0.2j
    assert np.allclose(theta(bpa, mobius_map(alpha, lam)), theta(bp, lam), atol=1e-9)
    assert green_identity_residual(bpa) < 1e-10


def test_mobius_map_infinity():
    assert mobius_map(0.5, np.inf) == -2
    assert mobius_map(0, np.inf) == np.inf


def test_transpose_involution_and_weyl():
    bp = random_pair(9, 3, 1)
    tt = transpose(transpose(bp))
    assert tt == bp
    lam = 0.2 + 0.4j
    want = theta(bp, np.conj(lam)).conj().T
    assert np.allclose(theta(transpose(bp), lam), want, atol=1e-10)


def test_main_transform_round_trip():
    bp = example_pair()
    back = from_main_transform(main_transform(bp), bp.n, bp.L1_dim, bp.L2_dim, bp.H)
    assert back == bp


def test_colligation_main_transform_is_inverse_block():
    c = flip_kappa1_colligation()
    u = main_transform(from_colligation(c))
    assert np.allclose(u.matrix(), np.linalg.inv(c.block()))


def test_pair_direct_sum_weyl_is_block_diagonal():
    a, b = scalar_lambda_pair(), random_pair(4, 2, 0)
    s = pair_direct_sum(a, b)
    lam = 0.35
    want = np.zeros((2, 2), complex)
    want[0, 0] = lam
    want[1, 1] = theta(b, lam)[0, 0]
    assert np.allclose(theta(s, lam), want, atol=1e-10)
    assert s.colligation is not None
