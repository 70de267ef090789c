import json

import pytest

from sknormalform.cli import EXIT_CHECK, EXIT_INPUT, EXIT_USAGE, main
from sknormalform.map_io import example_map_path, loads_map
from sknormalform.normalizer import check_style_membership
from sknormalform.utils import DiscrepancyWarning


def test_triple(capsys):
    assert main(['triple', '--blocks', '2']) == 0
    out = capsys.readouterr().out
    assert 'sl2 relations: PASS' in out
    assert out.startswith('n_bar\n')


def test_triple_json(capsys):
    assert main(['triple', '--blocks', '3', '--json']) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc['blocks'] == [3]
    assert doc['h_bar'] == [['-2', '0', '0'], ['0', '0', '0'], ['0', '0', '2']]
    assert doc['check']['passed']


def test_triple_with_conjugator(tmp_path, capsys):
    path = tmp_path / 'P.json'
    path.write_text('[[1, 0], [1, 1]]')
    assert main(['triple', '--blocks', '2', '--conjugator', str(path)]) == 0
    path.write_text('[[1, 1], [1, 1]]')
    assert main(['triple', '--blocks', '2', '--conjugator', str(path)]) == EXIT_INPUT


def test_verify(capsys):
    assert main(['verify', '--blocks', '2,3', '--max-degree', '1', '--json']) == 0
    doc = json.loads(capsys.readouterr().out)
    assert all(r['passed'] for r in doc)


def test_normalize(capsys):
    assert main(['normalize', '--map', example_map_path('quad2d'), '--degree', '2']) == 0
    out = capsys.readouterr().out
    assert 'normal form: x2*e1 + x1^2*e1 + 2*x1^2*e2 - x1*x2*e2 + x2^2*e2' in out
    assert 'conjugation consistency' in out


def test_normalize_json(capsys):
    assert main(['normalize', '--map', example_map_path('cubic3d'), '--degree', '3',
                 '--json']) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc['blocks'] == [3]
    assert all(c['passed'] for c in doc['checks'])


def test_normalize_style_failure(capsys):
    rc = main(['normalize', '--map', example_map_path('quad23'), '--degree', '2',
               '--style', 'ker-mult-m'])
    assert rc == EXIT_CHECK
    assert 'degree 2' in capsys.readouterr().err


def test_normalize_bad_input(tmp_path, capsys):
    assert main(['normalize', '--map', str(tmp_path / 'missing.json')]) == EXIT_INPUT
    path = tmp_path / 'bad.json'
    path.write_text('{"n": 2, "blocks": [2], "terms": '
                    '[{"coeff": "1", "exponents": [1, 0], "component": 1}]}')
    assert main(['normalize', '--map', str(path)]) == EXIT_INPUT
    assert 'degree one' in capsys.readouterr().err


def test_kernel(capsys):
    assert main(['kernel', '--blocks', '2', '--degree', '2']) == 0
    out = capsys.readouterr().out
    assert 'dimension 3' in out
    assert 'sum of weight + 1: 6, slice dimension 6' in out


def test_kernel_json(capsys):
    assert main(['kernel', '--blocks', '2,2', '--degree', '1', '--json']) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc['basis']) == 8


def test_cstest(capsys):
    assert main(['cstest', '--blocks', '2,2', '--max-degree', '2']) == 0
    assert 'Cushman-Sanders (2,2): PASS' in capsys.readouterr().out


def test_genfun(capsys):
    assert main(['genfun', '--blocks', '2,3', '--max-degree', '2', '--closed-form']) == 0
    out = capsys.readouterr().out
    assert 't^0: u + u^2' in out
    assert 'closed form at u = 1: 2/(1-t)^5 - t/(1-t)' in out


def test_genfun_closed_form_needs_two_blocks(capsys):
    rc = main(['genfun', '--blocks', '1,1,2', '--max-degree', '1', '--closed-form'])
    assert rc == EXIT_INPUT


def test_describe(capsys):
    assert main(['describe', '--n', '3']) == 0
    assert len(capsys.readouterr().out.splitlines()) == 6
    assert main(['describe', '--n', '0']) == EXIT_INPUT
    assert main(['describe', '--n', '1']) == EXIT_INPUT


def test_versal(capsys):
    assert main(['versal', '--blocks', '2,2']) == 0
    assert capsys.readouterr().out.startswith('versal deformation of 2,2, 8 parameters')
    with pytest.warns(DiscrepancyWarning):
        assert main(['versal', '--blocks', '2,3', '--json']) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc['parameters']) == 9


@pytest.mark.parametrize('argv', [[], ['kernel', '--blocks', '2'], ['frobnicate'],
                                  ['kernel', '--blocks', '2', '--degree', '-1'],
                                  ['normalize', '--map', 'x.json', '--style', 'taylor']])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_USAGE


@pytest.mark.parametrize('blocks', ['0', '2,x', '1'])
def test_bad_blocks(blocks, capsys):
    assert main(['triple', '--blocks', blocks]) == EXIT_INPUT
    assert capsys.readouterr().err.startswith('sknormalform: ')


def test_normalize_json_reads_back(capsys):
    assert main(['normalize', '--map', example_map_path('quad23'), '--degree', '3',
                 '--json']) == 0
    spec, f = loads_map(capsys.readouterr().out)
    assert spec.block_sizes == (2, 3)
    assert check_style_membership(f, spec)


def test_output_is_deterministic(capsys):
    argv = ['normalize', '--map', example_map_path('quad23'), '--degree', '3', '--json']
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first
