import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from krein_weyl.exceptions import UnimodularPointError
from krein_weyl.fixtures import antidiagonal_space, example_pair, scalar_lambda_colligation
from krein_weyl.pspace import PontryaginSpace
from krein_weyl.relation import (LinearRelation, adjoint, check_unitary_identities, classify,
                                 coresolvent_matrix, defect_subspace, eigen_subspace, inverse,
                                 is_simple, parts, point_spectrum, resolvent_matrix)


def random_relation(rng, n_in, n_out, rank, count):
    a = rng.standard_normal((n_in + n_out, rank)) + 1j * rng.standard_normal((n_in + n_out, rank))
    b = rng.standard_normal((rank, count))
    return a @ b


def test_parts_of_identity():
    h = PontryaginSpace.hilbert(2)
    assert [s.dim for s in parts(LinearRelation.from_operator(np.eye(2), h))] == [2, 2, 0, 0]


def test_parts_of_pure_multivalued_relation():
    h = PontryaginSpace.hilbert(1)
    t = LinearRelation.from_generators(h, h, [[0.0], [1.0]])
    dom, ran, ker, mul = parts(t)
    assert (dom.dim, ran.dim, ker.dim, mul.dim) == (0, 1, 0, 1)
    assert not t.is_operator()


def test_adjoint_of_j_unitary_is_inverse():
    s = PontryaginSpace.from_signature(2, 1)
    c, sh = np.cosh(0.7), np.sinh(0.7)
    u = np.array([[c, sh], [sh, c]])
    t = LinearRelation.from_operator(u, s)
    assert adjoint(t) == inverse(t)
    assert np.allclose(adjoint(t).matrix(), np.linalg.inv(u))
    assert classify(t).unitary


def test_adjoint_of_zero_operator():
    s = antidiagonal_space(4)
    t = LinearRelation.from_operator(np.zeros((4, 4)), s)
    assert adjoint(t) == t


def test_adjoint_of_zero_relation_is_everything():
    s = PontryaginSpace.hilbert(2)
    t = LinearRelation.from_generators(s, s, np.zeros((4, 0)))
    assert adjoint(t).dim == 4


def test_matrix_adjoint_is_j_weighted():
    s = PontryaginSpace.from_signature(3, 1)
    a = np.arange(9.0).reshape(3, 3) + 1j
    t = LinearRelation.from_operator(a, s)
    j = s.J
    assert np.allclose(adjoint(t).matrix(), j @ a.conj().T @ j)


def test_example_isometry_classification():
    v = example_pair().parts.V
    cls = classify(v)
    assert cls.isometric and not cls.unitary
    assert v.dim == 1


def test_contractive_not_isometric():
    h = PontryaginSpace.hilbert(2)
    cls = classify(LinearRelation.from_operator(0.5 * np.eye(2), h))
    assert cls.contractive and not cls.isometric and not cls.expanding


def test_expanding_operator():
    h = PontryaginSpace.hilbert(1)
    cls = classify(LinearRelation.from_operator(2.0, h))
    assert cls.expanding and not cls.contractive


def test_unitary_identities_of_a_unitary_relation():
    rep = check_unitary_identities(example_pair().gamma)
    assert rep["ker_identity"] and rep["mul_identity"]
    assert rep["dims"]["dom"] == 7 and rep["dims"]["mul"] == 0


def test_unitary_identities_reject_contraction():
    from krein_weyl.exceptions import NotUnitaryError
    h = PontryaginSpace.hilbert(1)
    with pytest.raises(NotUnitaryError):
        check_unitary_identities(LinearRelation.from_operator(0.5, h))


@pytest.mark.parametrize("lam, dim", [(0.5, 3), (0.2 + 0.3j, 3), (3.0, 3), (-2j, 3)])
def test_example_defect_dimension(lam, dim):
    assert defect_subspace(example_pair().parts.V, lam).dim == dim


def test_defect_of_identity_is_trivial():
    h = PontryaginSpace.hilbert(1)
    assert defect_subspace(LinearRelation.from_operator(1.0, h), 0.5).dim == 0


def test_defect_rejects_unit_circle():
    with pytest.raises(UnimodularPointError):
        defect_subspace(example_pair().parts.V, 1.0)


def test_eigen_subspace_and_point_spectrum():
    h = PontryaginSpace.hilbert(3)
    t = LinearRelation.from_operator(np.diag([0.5, 2.0, 2.0]), h)
    assert eigen_subspace(t, 2.0).dim == 2
    assert eigen_subspace(t, 0.3).dim == 0
    assert np.allclose(np.sort(point_spectrum(t).real), [0.5, 2.0])


@pytest.mark.parametrize("v, simple", [
    (lambda: LinearRelation.from_generators(PontryaginSpace.hilbert(1),
                                            PontryaginSpace.hilbert(1), np.zeros((2, 0))), True),
    (lambda: LinearRelation.from_operator(np.diag([1.0, 1j]), PontryaginSpace.hilbert(2)), False),
    (lambda: example_pair().parts.V, True),
])
def test_is_simple(v, simple):
    assert is_simple(v()) is simple


def test_scalar_lambda_isometry_is_simple():
    from krein_weyl.boundary import from_colligation
    assert is_simple(from_colligation(scalar_lambda_colligation()).parts.V)


def test_resolvent_and_coresolvent_of_operator():
    h = PontryaginSpace.hilbert(2)
    a = np.array([[0.2, 1.0], [0.0, -0.4]])
    t = LinearRelation.from_operator(a, h)
    assert np.allclose(resolvent_matrix(t, 0.7), np.linalg.inv(a - 0.7 * np.eye(2)))
    assert np.allclose(coresolvent_matrix(t, 0.7), np.linalg.inv(np.eye(2) - 0.7 * a))
    with pytest.raises(ValueError):
        resolvent_matrix(t, 0.2)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_random_relation_adjoint_laws(n_in, n_out, data):
    rank = data.draw(st.integers(0, n_in + n_out))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**31)))
    s1 = PontryaginSpace.from_signature(n_in, data.draw(st.integers(0, n_in)))
    s2 = PontryaginSpace.from_signature(n_out, data.draw(st.integers(0, n_out)))
    t = LinearRelation.from_generators(s1, s2, random_relation(rng, n_in, n_out, rank, rank + 1))
    ta = adjoint(t)
    assert t.dim + ta.dim == n_in + n_out
    assert adjoint(ta) == t
    assert inverse(inverse(t)) == t
    assert adjoint(inverse(t)) == inverse(ta)
