import functools

import numpy as np
import pytest
from sympy.polys.domains import QQ

from sknormalform.exact_core import ExactMatrix
from sknormalform.nilpotent_algebra import (NilpotentSpec, jordan_block, jordan_matrix,
                                            random_conjugator)
from sknormalform.polynomial_maps import (ConstantTermError, VectorPoly, compose_truncated,
                                          format_poly, homological_op, invert_near_identity,
                                          monomial_basis, mult_op, operator_matrix,
                                          random_sparse_map, slice_dim, subs_op, transport,
                                          transport_back)
from sknormalform.utils import DimensionMismatchError

N2 = jordan_block(2)


def x(n, exps, comp, coeff=1):
    return VectorPoly.monomial(n, exps, comp, coeff)


def test_monomial_basis():
    assert monomial_basis(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert monomial_basis(3, 1) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert slice_dim(3, 2) == len(monomial_basis(3, 2)) == 6
    assert slice_dim(2, 0) == 1


def test_vector_poly_basics():
    f = VectorPoly.from_terms(2, [(1, (0, 1), 0), ('1/2', (2, 0), 1), (-1, (1, 1), 1)])
    assert format_poly(f) == 'x2*e1 + 1/2*x1^2*e2 - x1*x2*e2'
    assert f.degrees() == [1, 2]
    assert f.degree == 2
    assert f.linear_part() == N2
    assert f.nonlinear() == f.slice(2)
    assert f.truncate(1) == VectorPoly.linear(N2)
    assert not f.has_constant()
    assert not f.is_homogeneous()
    assert VectorPoly.zero(3).degree == -1
    assert format_poly(VectorPoly.zero(2)) == '0'
    with pytest.raises(ValueError):
        VectorPoly.from_terms(2, [(1, (1, 0, 0), 0)])
    with pytest.raises(ValueError):
        VectorPoly.from_terms(2, [(1, (1, 0), 2)])


def test_slice_coordinates():
    f = x(2, (1, 1), 1, 3) + x(2, (2, 0), 0)
    v = f.to_vector(2)
    assert v == (QQ(1), QQ(0), QQ(0), QQ(0), QQ(3), QQ(0))
    assert VectorPoly.from_vector(2, 2, v) == f


def test_mult_op():
    phi = x(2, (2, 0), 1)
    assert mult_op(ExactMatrix.identity(2), phi) == phi
    assert mult_op(N2, phi) == x(2, (2, 0), 0)
    assert mult_op(ExactMatrix.zeros(2), phi).is_zero()


def test_subs_op():
    assert subs_op(ExactMatrix.identity(2), x(2, (1, 1), 0)) == x(2, (1, 1), 0)
    assert subs_op(N2, x(2, (2, 0), 1)) == x(2, (0, 2), 1)
    assert subs_op(N2, x(2, (1, 1), 0)).is_zero()


def test_homological_op():
    expected = x(2, (2, 0), 0) - x(2, (0, 2), 1)
    assert homological_op(N2, x(2, (2, 0), 1)) == expected
    N3 = jordan_block(3)
    commuting = VectorPoly.linear(N3 @ N3)
    assert homological_op(N3, commuting).is_zero()
    assert homological_op(ExactMatrix.zeros(2), x(2, (1, 1), 1)).is_zero()


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        mult_op(ExactMatrix.identity(3), x(2, (1, 0), 0))
    with pytest.raises(DimensionMismatchError):
        homological_op(N2, x(3, (1, 0, 0), 0))


def test_operator_matrix():
    ident = operator_matrix(functools.partial(mult_op, ExactMatrix.identity(2)), 2, 2)
    assert ident.matrix == ExactMatrix.identity(6)
    S = operator_matrix(functools.partial(subs_op, N2), 2, 2)
    assert S.size == 6
    assert S.nilpotency_index(5) == 2
    L = operator_matrix(functools.partial(homological_op, N2), 2, 1)
    assert L.size == 4
    assert L.matrix.rank() == 2


def test_operator_matrix_apply(rng):
    spec = NilpotentSpec((3, ))
    N = jordan_matrix(spec)
    L = operator_matrix(functools.partial(homological_op, N), 3, 2)
    phi = random_sparse_map(spec, 2, 5, rng, linear=False)
    assert L.apply(phi) == homological_op(N, phi)


@pytest.mark.parametrize('blocks', [(2, ), (3, ), (2, 2), (2, 3)])
@pytest.mark.parametrize('d', [1, 2, 3])
def test_operator_identities(blocks, d):
    spec = NilpotentSpec(blocks)
    n, p = spec.n, spec.p
    N = jordan_matrix(spec)
    M = N.T
    mult_n = operator_matrix(functools.partial(mult_op, N), n, d)
    subs_m = operator_matrix(functools.partial(subs_op, M), n, d)
    assert mult_n.commutator(subs_m).is_zero()
    subs_n = operator_matrix(functools.partial(subs_op, N), n, d)
    subs_nm = operator_matrix(functools.partial(subs_op, N @ M), n, d)
    # substitution reverses the order of products
    assert subs_m @ subs_n == subs_nm
    assert subs_n ** p == operator_matrix(functools.partial(subs_op, N ** p), n, d)
    L_n = operator_matrix(functools.partial(homological_op, N), n, d)
    assert (L_n ** (2 * p)).is_zero()


@pytest.mark.parametrize('n', [2, 3, 4])
@pytest.mark.parametrize('d', [1, 2, 3, 4])
def test_operator_identities_random_matrices(n, d, rng):
    spec = NilpotentSpec((n, ))
    A, B = random_conjugator(n, rng), random_conjugator(n, rng)
    phi = random_sparse_map(spec, d, 4, rng, min_degree=d, linear=False)
    assert subs_op(A @ B, phi) == subs_op(B, subs_op(A, phi))
    assert mult_op(A, subs_op(B, phi)) == subs_op(B, mult_op(A, phi))
    # homological operators of commuting matrices commute
    C = A @ A + A.scale(2)
    assert (homological_op(A, homological_op(C, phi)) ==
            homological_op(C, homological_op(A, phi)))


def test_lie_homomorphism_fails_on_quadratic_maps():
    M2 = N2.T
    ops = {}
    for name, A in [('n', N2), ('m', M2), ('nm', N2 @ M2 - M2 @ N2)]:
        ops[name] = operator_matrix(functools.partial(homological_op, A), 2, 2)
    assert ops['nm'] != ops['n'].commutator(ops['m'])


def test_compose_truncated():
    f = x(1, (2, ), 0)
    g = x(1, (1, ), 0) + x(1, (2, ), 0)
    assert compose_truncated(f, g, 3) == x(1, (2, ), 0) + x(1, (3, ), 0, 2)
    ident = VectorPoly.identity(1)
    assert compose_truncated(ident, g, 1) == x(1, (1, ), 0)
    assert compose_truncated(g, ident, 5) == g
    with pytest.raises(ConstantTermError):
        compose_truncated(f, g + x(1, (0, ), 0), 3)


def test_invert_near_identity():
    phi = x(1, (1, ), 0) + x(1, (2, ), 0)
    expected = x(1, (1, ), 0) - x(1, (2, ), 0) + x(1, (3, ), 0, 2)
    assert invert_near_identity(phi, 3) == expected
    ident = VectorPoly.identity(2)
    assert invert_near_identity(ident, 4) == ident
    with pytest.raises(ValueError):
        invert_near_identity(VectorPoly.linear(ExactMatrix.diag([2])), 3)


@pytest.mark.parametrize('blocks', [(2, ), (2, 3)])
def test_inverse_is_two_sided(blocks, rng):
    spec = NilpotentSpec(blocks)
    ident = VectorPoly.identity(spec.n)
    D = 4
    for _ in range(3):
        phi = ident + random_sparse_map(spec, 3, 4, rng, linear=False)
        psi = invert_near_identity(phi, D)
        assert compose_truncated(phi, psi, D) == ident
        assert compose_truncated(psi, phi, D) == ident


def test_transport(conjugated_spec, rng):
    spec = conjugated_spec
    N = jordan_matrix(spec.jordan())
    phi = random_sparse_map(spec, 3, 4, rng, linear=False)
    moved = transport(spec, phi)
    assert transport_back(spec, moved) == phi
    assert homological_op(jordan_matrix(spec), moved) == transport(spec,
                                                                 homological_op(N, phi))


def test_random_sparse_map(rng):
    spec = NilpotentSpec((2, 3))
    f = random_sparse_map(spec, 3, 6, rng)
    assert f.linear_part() == jordan_matrix(spec)
    assert all(2 <= d <= 3 for d in f.nonlinear().degrees())
    assert isinstance(rng, np.random.Generator)
