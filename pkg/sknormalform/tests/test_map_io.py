import io
import json
import os

import pytest
from sympy.polys.domains import QQ

from sknormalform.map_io import (MapFormatError, dump_map, example_map_path, load_conjugator,
                                 load_example_map, load_map, loads_map, map_from_dict,
                                 map_to_dict, parse_conjugator)
from sknormalform.nilpotent_algebra import NilpotentSpec, jordan_matrix
from sknormalform.polynomial_maps import VectorPoly


def small_doc(**changes):
    doc = {'n': 2, 'blocks': [2],
           'terms': [{'coeff': '1/2', 'exponents': [2, 0], 'component': 2}]}
    doc.update(changes)
    return doc


def bad_term(**changes):
    term = {'coeff': '1', 'exponents': [1, 1], 'component': 1}
    term.update(changes)
    return small_doc(terms=[term])


@pytest.mark.parametrize('name, blocks', [('quad2d', (2, )), ('cubic3d', (3, )),
                                          ('quad23', (2, 3))])
def test_examples(name, blocks):
    assert os.path.exists(example_map_path(name))
    spec, f = load_example_map(name)
    assert spec.block_sizes == blocks
    assert f.linear_part() == jordan_matrix(spec)
    assert not f.has_constant()


def test_quad2d_terms():
    spec, f = load_example_map('quad2d')
    assert len(f.nonlinear().terms()) == 6
    assert f.slice(2) == VectorPoly.from_terms(2, [(1, (2, 0), 0), (1, (1, 1), 0),
                                                   (3, (0, 2), 0), (2, (2, 0), 1),
                                                   (-1, (1, 1), 1), (1, (0, 2), 1)])


def test_unknown_example():
    with pytest.raises(ValueError):
        example_map_path('quartic')


def test_map_from_dict():
    spec, f = map_from_dict(small_doc(description='ignored'))
    assert spec == NilpotentSpec((2, ))
    assert f == VectorPoly.from_terms(2, [(1, (0, 1), 0), (QQ(1, 2), (2, 0), 1)])


def test_integer_coefficients_are_accepted():
    doc = small_doc(terms=[{'coeff': 3, 'exponents': [0, 2], 'component': 1}])
    _, f = map_from_dict(doc)
    assert f.slice(2) == VectorPoly.monomial(2, (0, 2), 0, 3)


def test_dump_and_load(tmp_path):
    spec, f = load_example_map('quad23')
    text = dump_map(spec, f, note='copy')
    assert json.loads(text)['note'] == 'copy'
    assert loads_map(text) == (spec, f)

    path = tmp_path / 'map.json'
    dump_map(spec, f, path)
    assert load_map(path) == (spec, f)
    buf = io.StringIO()
    out = dump_map(spec, f, buf)
    assert buf.getvalue() == out
    assert loads_map(out) == (spec, f)


def test_map_to_dict_with_conjugator():
    spec = NilpotentSpec((2, ), [[1, 0], [1, 1]])
    f = VectorPoly.linear(jordan_matrix(spec)) + VectorPoly.monomial(2, (1, 1), 1, QQ(-2, 3))
    doc = map_to_dict(spec, f)
    assert doc['conjugator'] == [['1', '0'], ['1', '1']]
    assert doc['terms'] == [{'coeff': '-2/3', 'exponents': [1, 1], 'component': 2}]
    spec2, f2 = map_from_dict(doc)
    assert spec2 == spec
    assert f2 == f
    with pytest.raises(ValueError):
        map_to_dict(NilpotentSpec((3, )), f)


@pytest.mark.parametrize('doc', [
    [],
    {'blocks': [2], 'terms': []},
    small_doc(n='2'),
    small_doc(blocks=[]),
    small_doc(blocks=[1, 2]),
    small_doc(blocks=[3, -1]),
    small_doc(terms={}),
    small_doc(terms=['x']),
    small_doc(conjugator=[[1, 1], [1, 1]]),
    small_doc(conjugator=[[1, 0]]),
    bad_term(coeff=0.5),
    bad_term(coeff='x'),
    bad_term(exponents=[1, 1, 0]),
    bad_term(exponents=[3, -1]),
    bad_term(exponents=[1, 0]),
    bad_term(exponents=[0, 0]),
    bad_term(component=0),
    bad_term(component=3),
    bad_term(component=True),
])
def test_malformed_documents(doc):
    with pytest.raises(MapFormatError):
        map_from_dict(doc)


def test_invalid_json():
    with pytest.raises(MapFormatError):
        loads_map('{"n": 2,')


def test_parse_conjugator(tmp_path):
    rows = parse_conjugator([['1', '1/2'], [0, '-3']])
    assert rows == [[QQ(1), QQ(1, 2)], [QQ(0), QQ(-3)]]
    with pytest.raises(MapFormatError):
        parse_conjugator([['1', '0']], 2)
    with pytest.raises(MapFormatError):
        parse_conjugator('1')
    path = tmp_path / 'P.json'
    path.write_text('[["2", "1"], ["1", "1"]]')
    assert load_conjugator(path) == [[2, 1], [1, 1]]
    path.write_text('[[2, 1]')
    with pytest.raises(MapFormatError):
        load_conjugator(path)
