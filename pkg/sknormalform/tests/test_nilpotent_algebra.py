import pytest
from sympy.polys.domains import QQ

from sknormalform.exact_core import ExactMatrix
from sknormalform.nilpotent_algebra import (DegenerateTripleError, NilpotentSpec,
                                            SingularConjugatorError, bracket_case,
                                            build_sl2_triple, check_bracket_cases,
                                            check_kernel_equality, check_m_reconstruction,
                                            check_nmn, check_projections, conjugate_transpose,
                                            epsilon_matrix, h_bar_weights, jordan_block,
                                            jordan_matrix, layer_projections, m_reconstruction,
                                            projection, random_conjugator,
                                            verify_word_relations)

SPECS = [(2, ), (3, ), (4, ), (5, ), (2, 2), (2, 3), (1, 3)]


def test_spec_parsing():
    spec = NilpotentSpec.from_string('2, 3')
    assert spec.block_sizes == (2, 3)
    assert spec.n == 5
    assert spec.p == 3
    assert not spec.is_irreducible
    assert spec.label() == '2,3'
    assert spec.block_of(0) == (0, 1)
    assert spec.block_of(4) == (1, 3)
    for bad in ['', '0', '2,-1', 'a']:
        with pytest.raises(ValueError):
            NilpotentSpec.from_string(bad)


def test_spec_conjugator():
    with pytest.raises(SingularConjugatorError):
        NilpotentSpec((2, ), [[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        NilpotentSpec((2, ), [[1]])
    spec = NilpotentSpec((2, ), [[1, 0], [0, 1]])
    assert not spec.has_conjugator
    assert spec == NilpotentSpec((2, ))
    assert spec.jordan().conjugator is None


def test_jordan_block():
    J = jordan_block(3)
    assert J.to_dok() == {(0, 1): QQ(1), (1, 2): QQ(1)}
    assert (J ** 3).is_zero()
    assert not (J ** 2).is_zero()


def test_conjugate_transpose(conjugated_spec):
    n = jordan_matrix(conjugated_spec)
    m = conjugate_transpose(conjugated_spec)
    assert (n @ n).is_zero()
    # not the plain transpose in a conjugated frame
    assert m != n.T
    P = conjugated_spec.conjugator
    assert P @ n @ P.inv() == jordan_block(2)


@pytest.mark.parametrize('blocks', SPECS)
def test_word_relations(blocks):
    spec = NilpotentSpec(blocks)
    assert verify_word_relations(spec, spec.p + 1)
    assert check_nmn(spec)


def test_word_relations_conjugated(rng):
    spec = NilpotentSpec((2, 3), random_conjugator(5, rng))
    assert spec.conjugator.rank() == 5
    assert verify_word_relations(spec, 3)
    assert check_nmn(spec)
    assert check_projections(spec)


def test_projection_is_diagonal():
    spec = NilpotentSpec((4, ))
    pi = projection(spec, 1, 0)
    assert pi == ExactMatrix.diag([0, 1, 1, 1])
    pi = projection(spec, 2, 1)
    assert pi == ExactMatrix.diag([0, 1, 1, 0])
    with pytest.raises(ValueError):
        projection(spec, 2, 3)


@pytest.mark.parametrize('blocks', SPECS)
def test_projections(blocks):
    assert check_projections(NilpotentSpec(blocks))


def test_layers_and_epsilon():
    spec = NilpotentSpec((4, ))
    layers = layer_projections(spec)
    assert len(layers) == 4
    assert layers[0] == ExactMatrix.diag([1, 0, 0, 0])
    assert layers[3] == ExactMatrix.diag([0, 0, 0, 1])
    assert epsilon_matrix(spec) == ExactMatrix.diag([1, 3, 4, 3])
    assert epsilon_matrix(spec).trace() == 1 + 4 * 5 * 3 // 6


@pytest.mark.parametrize('blocks', SPECS)
def test_sl2_triple(blocks):
    spec = NilpotentSpec(blocks)
    t = build_sl2_triple(spec)
    assert t.check()
    assert t.h_bar == ExactMatrix.diag(h_bar_weights(spec))
    assert check_kernel_equality(spec)


def test_sl2_triple_small():
    t = build_sl2_triple(NilpotentSpec((3, )))
    assert t.h_bar == ExactMatrix.diag([-2, 0, 2])
    assert t.m_bar == ExactMatrix.from_rows([[0, 0, 0], [2, 0, 0], [0, 2, 0]])


def test_sl2_triple_conjugated(rng):
    spec = NilpotentSpec((3, 2), random_conjugator(5, rng))
    t = build_sl2_triple(spec)
    assert t.check()
    assert check_kernel_equality(spec)


def test_degenerate_triple():
    with pytest.raises(DegenerateTripleError):
        build_sl2_triple(NilpotentSpec((1, 1)))


def test_h_bar_weights():
    assert h_bar_weights(NilpotentSpec((2, 3))) == [-1, 1, -2, 0, 2]


@pytest.mark.parametrize('p', [2, 3, 4, 5])
def test_bracket_cases(p):
    assert check_bracket_cases(p)


def test_bracket_case_letters():
    assert bracket_case(4, 1, 3, 1)[0] == 'a'
    assert bracket_case(4, 1, 2, 1)[0] == 'c'
    assert bracket_case(4, 2, 3, 0)[0] == 'b'
    assert bracket_case(4, 3, 2, 1)[0] == 'd'


@pytest.mark.parametrize('p', range(2, 10))
def test_m_reconstruction(p):
    assert check_m_reconstruction(p)


def test_m_reconstruction_from_first_index():
    M = jordan_block(4).T
    assert m_reconstruction(4, first_index=1) != M
    assert not check_m_reconstruction(4, first_index=1)
    # the i = 1 term is one extra copy of m_bar
    assert m_reconstruction(2, first_index=1) == jordan_block(2).T.scale(2)
    assert m_reconstruction(3, first_index=1) == jordan_block(3).T.scale(3)
    with pytest.raises(ValueError):
        check_m_reconstruction(10)
