import numpy as np
import pytest

from krein_weyl.boundary import from_colligation, green_identity_residual, pair_direct_sum, theta
from krein_weyl.colligation import UnitaryColligation, direct_sum
from krein_weyl.exceptions import (DimensionMismatchError, NotOrdinaryError, RegularityError,
                                   UnimodularProductError)
from krein_weyl.fixtures import (constant_colligation, example_pair, multivalued_pair,
                                 random_pair, scalar_lambda_colligation, scalar_lambda_pair)
from krein_weyl.gencores import (compression_oracle, coresolvent_formula, coresolvent_kernel,
                                 couple, formula_regularity_index, generalized_coresolvent,
                                 regularity_index, shtraus_parameter)
from krein_weyl.kernels import SamplerConfig
from krein_weyl.pspace import PontryaginSpace
from krein_weyl.realize import RationalFunctionData, realize
from krein_weyl.relation import coresolvent_matrix


def inverse_lambda_pair():
    return realize(RationalFunctionData([2 * (-2.0) ** k for k in range(9)], center=0.5), 0.5).pair


@pytest.fixture(scope="module")
def couplings():
    inv = inverse_lambda_pair()
    return {
        0: couple(random_pair(31, 3, 1, 1), random_pair(32, 3, 0, 1)),
        1: couple(random_pair(33, 3, 0, 1), inv),
        2: couple(random_pair(34, 4, 1, 2), pair_direct_sum(inv, inv)),
    }


def zero_eps(z):
    return np.zeros((1, 1))


def test_scalar_coupling_weyl():
    cp = couple(scalar_lambda_pair(), scalar_lambda_pair())
    for z in (0.3, 0.2 - 0.4j):
        assert np.allclose(theta(cp.tilde, z), [[0, z], [z, 0]], atol=1e-12)
    assert cp.eps(0.3)[0, 0] == pytest.approx(0.3)


@pytest.mark.parametrize("diff", [0, 1, 2])
def test_coupled_pair_is_unitary(couplings, diff):
    cp = couplings[diff]
    assert green_identity_residual(cp.tilde) <= 1e-9
    z = 0.25 + 0.1j
    assert np.allclose(theta(cp.tilde, z), cp.tilde_theta_expected(z), atol=1e-9)


def test_couple_rejects_mismatch():
    with pytest.raises(DimensionMismatchError):
        couple(example_pair(), scalar_lambda_pair())


def test_couple_rejects_non_ordinary_base():
    with pytest.raises(NotOrdinaryError):
        couple(multivalued_pair(), scalar_lambda_pair())


def test_vanishing_parameter_gives_v2_coresolvent():
    base = random_pair(35, 3, 1)
    for z in (0.3, -0.5j, 0.6 + 0.2j):
        want = coresolvent_matrix(base.parts.V2, z)
        assert np.allclose(coresolvent_formula(base, zero_eps, z), want, atol=1e-12)


def test_vanishing_parameter_on_scalar_base():
    for z in (0.4, 0.1 + 0.7j):
        assert coresolvent_formula(scalar_lambda_pair(), zero_eps, z)[0, 0] == pytest.approx(1.0)


def test_coresolvent_at_zero_is_identity(couplings):
    assert np.array_equal(generalized_coresolvent(couplings[1], 0), np.eye(3))


@pytest.mark.parametrize("diff", [0, 1, 2])
def test_formula_matches_compression(couplings, diff, rng):
    cp = couplings[diff]
    done = 0
    while done < 10:
        z = rng.uniform(0.15, 0.85) * np.exp(2j * np.pi * rng.uniform())
        z = z if done % 2 else 1 / np.conj(z)
        got = generalized_coresolvent(cp, z)
        want = compression_oracle(cp, z)
        assert np.linalg.norm(got - want) <= 1e-8 * np.linalg.norm(want)
        done += 1


def test_interior_exterior_consistency(couplings):
    cp = couplings[1]
    z = 0.4 + 0.3j
    for w in (z, 1 / np.conj(z)):
        assert np.allclose(generalized_coresolvent(cp, w), compression_oracle(cp, w), atol=1e-9)


def test_coresolvent_kernel_hermitian_at_diagonal(couplings):
    cp = couplings[1]
    j = cp.base.H.J

    def k(z):
        return generalized_coresolvent(cp, z)

    r = j @ coresolvent_kernel(k, 0.3 + 0.2j, 0.3 + 0.2j, j)
    assert np.allclose(r, r.conj().T, atol=1e-10)
    with pytest.raises(UnimodularProductError):
        coresolvent_kernel(k, 2.0, 0.5, j)


@pytest.mark.parametrize("diff", [0, 1, 2])
def test_regularity_index(couplings, diff):
    res = regularity_index(couplings[diff], SamplerConfig(seed=1, expected=diff))
    assert res.stabilized
    assert res.count == diff


def test_regularity_index_of_vanishing_parameter():
    res = formula_regularity_index(random_pair(36, 3, 1), zero_eps)
    assert res.stabilized and res.count == 0


def test_regularity_index_singular_everywhere():
    # Θ = λ paired with ε = 1/λ makes the middle pencil vanish identically.
    with pytest.raises(RegularityError):
        formula_regularity_index(scalar_lambda_pair(), lambda z: np.array([[1 / z]]))


def test_regularity_index_requires_simple_parameter():
    # A unitary block with no boundary coupling makes the parameter isometry non-simple.
    dead = UnitaryColligation(PontryaginSpace.hilbert(1), 1.0, np.zeros((1, 0)),
                              np.zeros((0, 1)), np.zeros((0, 0)))
    par = from_colligation(direct_sum(scalar_lambda_colligation(), dead))
    cp = couple(random_pair(38, 3, 0), par)
    with pytest.raises(ValueError):
        regularity_index(cp)


@pytest.mark.parametrize("phase", [0.0, 0.9, 2.5])
def test_shtraus_of_constant_parameter(phase):
    h = np.exp(1j * phase)
    cp = couple(random_pair(39, 3, 0), from_colligation(constant_colligation(h)))
    for z in (0.3, -0.2 + 0.5j, 0.7j):
        sp = shtraus_parameter(cp, z)
        assert sp.matrix[0, 0] == pytest.approx(h, abs=1e-8)
        assert sp.residual <= 1e-8


@pytest.mark.parametrize("diff", [0, 1, 2])
def test_shtraus_matches_parameter_weyl(couplings, diff):
    cp = couplings[diff]
    for z in (0.31 - 0.12j, -0.45j, 0.6):
        sp = shtraus_parameter(cp, z)
        assert np.allclose(sp.matrix, cp.eps(z), atol=1e-8)
        assert sp.residual <= 1e-8
