import pytest
from sympy.polys.domains import QQ

from sknormalform.genfun import (BiSeries, ClosedFormGF, closed_form_check,
                                 closed_form_kernel_gf, conjecture_check, conjecture_gf,
                                 cushman_sanders_check, empirical_gf, empirical_subs_kernel_gf,
                                 inverse_power_coefficient, series_from_closed_form,
                                 subs_cs_identity_check, subs_kernel_gf_closed_form,
                                 summation_lemma_check)
from sknormalform.nilpotent_algebra import NilpotentSpec


def test_inverse_power_coefficient():
    assert inverse_power_coefficient(2, 3) == 4
    assert inverse_power_coefficient(1, 7) == 1
    assert inverse_power_coefficient(3, 2) == 6
    assert inverse_power_coefficient(0, 0) == 1
    assert inverse_power_coefficient(0, 2) == 0
    assert [inverse_power_coefficient(-2, s) for s in range(4)] == [1, -2, 1, 0]
    assert inverse_power_coefficient(2, -1) == 0


def test_biseries_arithmetic():
    a = BiSeries.from_terms(3, [(1, 0, 0), (2, 1, 1), (1, 1, 1)])
    assert a.coefficient(1, 1) == 3
    assert a.coefficient(2) == 0
    b = BiSeries.from_terms(2, [(1, 1, 0)])
    assert (a + b).order == 2
    assert (a + b).coefficient(1, 0) == 1
    assert (a - a) == BiSeries(3)
    # (1 + t)^2 truncated at t^2
    one_t = BiSeries.from_terms(2, [(1, 0, 0), (1, 1, 0)])
    assert (one_t * one_t).at_u_one() == [1, 2, 1]
    assert (one_t * one_t * one_t).coefficient(2) == 3
    assert a.scale(QQ(1, 3)).coefficient(1, 1) == 1
    # terms above the order are dropped
    assert BiSeries.from_terms(1, [(5, 2, 0)]) == BiSeries(1)
    with pytest.raises(TypeError):
        a + 1


def test_biseries_u_operations():
    g = BiSeries.from_terms(2, [(1, 0, 0), (3, 1, 1), (1, 1, 2), (2, 2, 0)])
    assert g.at_u_one() == [1, 4, 2]
    assert g.d_du_u().coefficient(1, 1) == 6
    assert g.d_du_u().coefficient(1, 2) == 3
    assert g.t_coefficient(1) == {1: 3, 2: 1}
    assert g.render().splitlines() == ['t^0: 1', 't^1: 3u + u^2', 't^2: 2']


def test_biseries_equality_uses_common_order():
    a = BiSeries.from_terms(4, [(1, 0, 0), (1, 4, 0)])
    b = BiSeries.from_terms(2, [(1, 0, 0)])
    assert a == b
    assert a != BiSeries.from_terms(2, [(2, 0, 0)])


def test_closed_form_expand_and_render():
    cf = ClosedFormGF([(1, 0, 0, 1)])
    assert cf.expand(3).at_u_one() == [1, 1, 1, 1]
    assert closed_form_kernel_gf(2, 3).render() == '2/(1-t)^5 - t/(1-t)'
    assert closed_form_kernel_gf(2, 2).render() == '2/(1-t)^4'
    assert ClosedFormGF([(QQ(1, 2), 2, 3, 0)]).render() == '1/2*u^2*t^3'
    assert ClosedFormGF([]).render() == '0'
    assert (cf + cf).expand(1).at_u_one() == [2, 2]
    assert cf.scale(3).expand(0).coefficient(0) == 3


@pytest.mark.parametrize('k2, text, values', [
    (4, '2/(1-t)^6 - t/(1-t) - t/(1-t)^2', [2, 10, 39]),
    (5, '2/(1-t)^7 - t/(1-t) - t/(1-t)^2 - t/(1-t)^3', [2, 11, 50]),
])
def test_closed_form_published(k2, text, values):
    cf = closed_form_kernel_gf(2, k2)
    assert cf.render() == text
    assert cf.expand(2).at_u_one() == values
    assert series_from_closed_form(cf, 2) == cf.expand(2)


def test_closed_form_values():
    assert closed_form_kernel_gf(2, 2).expand(1).at_u_one() == [2, 8]
    assert closed_form_kernel_gf(2, 3).expand(1).at_u_one() == [2, 9]
    with pytest.raises(ValueError):
        closed_form_kernel_gf(3, 2)
    with pytest.raises(ValueError):
        subs_kernel_gf_closed_form(0, 2)


@pytest.mark.parametrize('blocks, constant', [((2, ), {1: 1}), ((2, 2), {1: 2}),
                                              ((2, 3), {1: 1, 2: 1})])
def test_gf_constant_term(blocks, constant):
    gf = empirical_gf(NilpotentSpec(blocks), 0)
    assert gf.t_coefficient(0) == constant


def test_gf_low_degrees(spec2):
    gf = empirical_gf(spec2, 2)
    assert gf.at_u_one() == [1, 2, 3]
    assert gf.t_coefficient(1) == {0: 1, 2: 1}


@pytest.mark.parametrize('blocks', [(2, ), (3, ), (4, ), (2, 2), (2, 3)])
def test_cushman_sanders(blocks):
    rep = cushman_sanders_check(NilpotentSpec(blocks), 3)
    assert rep
    assert len(rep.rows) == 4


@pytest.mark.slow
@pytest.mark.parametrize('blocks', [(2, ), (3, ), (4, ), (2, 2), (2, 3)])
def test_cushman_sanders_high_order(blocks):
    assert cushman_sanders_check(NilpotentSpec(blocks), 6)


def test_cushman_sanders_conjugated(conjugated_spec):
    assert cushman_sanders_check(conjugated_spec, 3)


@pytest.mark.parametrize('blocks', [(2, 2), (2, 3)])
def test_closed_form_check(blocks):
    assert closed_form_check(NilpotentSpec(blocks), 3)


@pytest.mark.slow
@pytest.mark.parametrize('blocks', [(2, 4), (3, 3)])
def test_closed_form_check_larger(blocks):
    assert closed_form_check(NilpotentSpec(blocks), 3)


@pytest.mark.slow
@pytest.mark.parametrize('blocks', [(2, 2), (2, 3)])
def test_conn_kernel_closed_form_through_t8(blocks):
    found = empirical_gf(NilpotentSpec(blocks), 8)
    assert found.at_u_one() == closed_form_kernel_gf(*blocks).expand(8).at_u_one()


@pytest.mark.slow
@pytest.mark.parametrize('blocks, order', [((2, 2), 8), ((2, 3), 8), ((2, 4), 8), ((3, 5), 6)])
def test_starred_closed_form_against_kernels(blocks, order):
    found = empirical_subs_kernel_gf(NilpotentSpec(blocks), order)
    closed = subs_kernel_gf_closed_form(*blocks).expand(order)
    for d in range(order + 1):
        assert found.t_coefficient(d) == closed.t_coefficient(d)


def test_closed_form_check_needs_two_blocks(spec3):
    with pytest.raises(ValueError):
        closed_form_check(spec3, 2)


def test_starred_gf(spec23):
    gf = empirical_subs_kernel_gf(spec23, 2)
    assert gf.t_coefficient(0) == {0: 1}
    assert gf.t_coefficient(1) == {1: 1, 2: 1}
    assert gf.t_coefficient(2) == {0: 4, 1: 4, 2: 1}
    assert gf == subs_kernel_gf_closed_form(2, 3).expand(2)


@pytest.mark.parametrize('k1, k2', [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 5)])
def test_starred_identity(k1, k2):
    assert subs_cs_identity_check(k1, k2)


def test_starred_closed_form_at_u_one():
    for k1, k2 in [(2, 3), (3, 4)]:
        s = k1 + k2
        expected = ClosedFormGF([(1, 0, 0, 0), (1, 0, 0, s), (-1, 0, 0, s - 2)])
        assert (subs_kernel_gf_closed_form(k1, k2).expand(6).at_u_one() ==
                expected.expand(6).at_u_one())


@pytest.mark.parametrize('m1, m2', [(0, 0), (0, 3), (2, 5), (4, 4)])
def test_summation_lemma(m1, m2):
    assert summation_lemma_check(m1, m2, 8)


def test_summation_lemma_bounds():
    with pytest.raises(ValueError):
        summation_lemma_check(3, 2, 5)


def test_conjecture_gf():
    assert conjecture_gf((2, 3)) == closed_form_kernel_gf(2, 3)
    assert conjecture_gf((1, 2, 3)).expand(0).at_u_one() == [3]


def test_conjecture_check(spec23):
    rep = conjecture_check(spec23, 2)
    assert rep
    assert len(rep.rows) == 3
    with pytest.raises(ValueError):
        conjecture_check(spec23, 0)
