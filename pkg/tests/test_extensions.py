import numpy as np
import pytest
from scipy.stats import unitary_group

from krein_weyl.exceptions import DegenerateParameterError, SingularPencilError
from krein_weyl.extensions import (NOT_INVERTIBLE, ExtensionParameter, build_extension,
                                   coresolvent, direct_coresolvent_oracle,
                                   direct_resolvent_oracle, resolvent, spectral_point_check)
from krein_weyl.fixtures import example_pair, random_pair, scalar_lambda_pair
from krein_weyl.pspace import PontryaginSpace
from krein_weyl.relation import LinearRelation, classify


def scalar(x):
    return complex(np.asarray(x)[0, 0])


@pytest.fixture
def third():
    return ExtensionParameter.from_graph(1 / 3)


def test_zero_parameter_rejected():
    with pytest.raises(DegenerateParameterError):
        ExtensionParameter(np.zeros((1, 1)), np.zeros((1, 1)))
    with pytest.raises(DegenerateParameterError):
        ExtensionParameter(np.zeros((1, 0)), np.zeros((1, 0)))


@pytest.mark.parametrize("theta0", [0.0, 1 / 3, 0.5 - 0.2j, 2.0])
def test_scalar_extension_is_multiplication(theta0):
    v = build_extension(scalar_lambda_pair(), ExtensionParameter.from_graph(theta0))
    assert scalar(v.matrix()) == pytest.approx(theta0)


def test_scalar_resolvent_frozen(third):
    assert scalar(resolvent(scalar_lambda_pair(), third, 0.5)) == pytest.approx(-6.0)


def test_scalar_resolvent_at_zero(third):
    assert scalar(resolvent(scalar_lambda_pair(), third, 0.0)) == pytest.approx(3.0)


def test_scalar_resolvent_exterior(third):
    assert scalar(resolvent(scalar_lambda_pair(), third, 2.0)) == pytest.approx(1 / (1 / 3 - 2))


@pytest.mark.parametrize("z, expected", [(0.0, 1.0), (0.25, 12 / 11), (2.0, 3.0)])
def test_scalar_coresolvent(third, z, expected):
    assert scalar(coresolvent(scalar_lambda_pair(), third, z)) == pytest.approx(expected)


def test_scalar_coresolvent_singular(third):
    with pytest.raises(SingularPencilError):
        coresolvent(scalar_lambda_pair(), third, 3.0)


def test_direct_oracle(third):
    v = build_extension(scalar_lambda_pair(), third)
    assert scalar(direct_resolvent_oracle(v, 0.5)) == pytest.approx(-6.0)
    assert direct_resolvent_oracle(v, 1 / 3) is NOT_INVERTIBLE
    assert direct_coresolvent_oracle(v, 3.0) is NOT_INVERTIBLE
    assert repr(NOT_INVERTIBLE) == "NOT_INVERTIBLE"


def test_spectral_point_check_scalar(third):
    bp = scalar_lambda_pair()
    hit = spectral_point_check(bp, third, 1 / 3)
    assert hit == {"implies_eigenvalue": True, "pencil_invertible": False}
    v = build_extension(bp, third)
    assert direct_resolvent_oracle(v, 1 / 3) is NOT_INVERTIBLE
    miss = spectral_point_check(bp, third, 0.5)
    assert miss == {"implies_eigenvalue": False, "pencil_invertible": True}


def test_vanishing_phi1_gives_kernel_of_gamma1():
    bp = example_pair()
    phi = ExtensionParameter(np.zeros((3, 3)), np.eye(3))
    assert build_extension(bp, phi) == bp.parts.V1
    for lam in (0.2, -0.5j, 0.7 + 0.1j):
        assert spectral_point_check(bp, phi, lam)["pencil_invertible"]


def contractive_phi(rng, l):
    a = rng.standard_normal((l, l)) + 1j * rng.standard_normal((l, l))
    return ExtensionParameter.from_graph(0.5 * a / np.linalg.norm(a, 2))


@pytest.mark.parametrize("lam", [0.3, -0.4 + 0.2j, 0.0, 1.8, -2.5j])
def test_resolvent_matches_oracle(rng, lam):
    bp = random_pair(21, 4, 1, 2)
    phi = contractive_phi(rng, 2)
    v = build_extension(bp, phi)
    got = resolvent(bp, phi, lam)
    want = direct_resolvent_oracle(v, lam)
    assert np.linalg.norm(got - want) <= 1e-8 * np.linalg.norm(want)


def test_coresolvent_matches_oracle_at_ten_points(rng):
    bp = random_pair(22, 4, 1, 2)
    phi = contractive_phi(rng, 2)
    v = build_extension(bp, phi)
    zs = list(0.8 * np.exp(2j * np.pi * rng.uniform(size=5))) + \
        list(1.6 * np.exp(2j * np.pi * rng.uniform(size=5)))
    for z in zs:
        got = coresolvent(bp, phi, z)
        want = direct_coresolvent_oracle(v, z)
        assert np.linalg.norm(got - want) <= 1e-8 * np.linalg.norm(want)


def test_coresolvent_inverts_pencil(rng):
    bp = random_pair(23, 3, 1)
    phi = contractive_phi(rng, 1)
    v = build_extension(bp, phi)
    z = 0.4 - 0.3j
    k = coresolvent(bp, phi, z)
    # Each column h = K e_j must satisfy (h, h') in V_Φ with h - z h' = e_j.
    c, *_ = np.linalg.lstsq(v.X, k, rcond=None)
    assert np.allclose(v.X @ c, k, atol=1e-10)
    assert np.allclose(k - z * (v.Y @ c), np.eye(3), atol=1e-10)


def test_unitary_parameter_gives_unitary_extension(rng):
    bp = example_pair()
    u = unitary_group.rvs(3, random_state=rng)
    v = build_extension(bp, ExtensionParameter.from_graph(u))
    cls = classify(v)
    assert cls.unitary and cls.isometric


def test_contractive_parameter_gives_contractive_extension(rng):
    bp = random_pair(24, 3, 0)
    v = build_extension(bp, contractive_phi(rng, 1))
    cls = classify(v)
    assert cls.contractive and not cls.isometric


def test_extension_sits_between_v_and_v_star(rng):
    bp = example_pair()
    v = build_extension(bp, contractive_phi(rng, 3))
    pp = bp.parts
    assert v.graph.contains(pp.V.graph)
    assert pp.V_star.graph.contains(v.graph)
    assert v.dim == 4


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        build_extension(example_pair(), ExtensionParameter.from_graph(0.5))


def test_parameter_is_immutable():
    phi = ExtensionParameter.from_graph([[0.1, 0.2], [0.3, 0.4]])
    assert phi.param_dim == 2
    with pytest.raises(ValueError):
        phi.Phi2[0, 0] = 1.0


def test_scalar_extension_equals_operator_graph():
    h = PontryaginSpace.hilbert(1)
    v = LinearRelation.from_operator(1 / 3, h)
    assert v == build_extension(scalar_lambda_pair(), ExtensionParameter.from_graph(1 / 3))
