# SPDX-License-Identifier: LGPL-2.1-or-later
#
# Copyright (C) 2024 Collabora Limited

import json
import xml.etree.ElementTree as ET

import pytest

from kernelci.legacy.cli import Args as KernelCIArgs, Command

import ccl
import crystal
import validate_yaml
from cactus_crystals.cli import (
    Args,
    check_arguments,
    exit_status,
    parse_floats,
    split_list,
)
from cactus_crystals.errors import UsageError


def _run(capsys, *argv):
    code = ccl.run(list(argv))
    return code, capsys.readouterr()


def _json(out):
    return json.loads(out.out)


def test_no_arguments(capsys):
    code, out = _run(capsys)
    assert code == 3
    assert out.err.startswith('usage: ccl')
    assert _run(capsys, '--help')[0] == 0


@pytest.mark.parametrize('argv', [
    ['nothing'],
    ['crystal'],
    ['crystal', 'build', '--type', 'A2'],
    ['crystal', 'build', '--type', 'A2', '--lambda', '1,1', '--format', 'svg'],
    ['crystal', 'build', '--type', 'Q9', '--lambda', '1'],
    ['crystal', 'build', '--type', 'A2', '--lambda', '1,-1'],
    ['crystal', 'build', '--type', 'A2', '--lambda', 'x'],
    ['crystal', 'build', '--type', 'A2', '--lambda', '1'],
    ['crystal', 'commutor', '--type', 'A1', '--first', '1', '--second', '1,1'],
    ['crystal', 'tensor', '--type', 'A2', '--factors', '1,0;1/2,0'],
    ['crystal', '--settings', 'config/ccl.toml'],
    ['crystal', 'cactus', '--type', 'A2', '--word', 's1'],
    ['moduli', 'schedule', '--n', '3'],
    ['moduli', 'chart', '--tree', '((12)3)4', '--coords', '1'],
    ['verify', 'case', '--suite', 'quick', '--case', 'missing'],
])
def test_usage_errors(capsys, argv):
    code, out = _run(capsys, *argv)
    assert code == 3
    assert out.out == ''


def test_crystal_build(capsys):
    code, out = _run(capsys, 'crystal', 'build', '--type', 'A2', '--lambda', '1,1')
    assert code == 0
    result = _json(out)
    assert result['size'] == 8
    assert len(result['elements']) == 8
    assert result['root_system']['type'] == 'A2'


def test_crystal_build_dot(capsys, tmp_path):
    path = tmp_path / 'b.dot'
    code, out = _run(capsys, 'crystal', 'build', '--type', 'A1', '--lambda', '2',
                     '--format', 'dot', '--output', str(path))
    assert code == 0
    assert out.out == ''
    assert path.read_text().startswith('digraph')


def test_crystal_tensor(capsys):
    code, out = _run(capsys, 'crystal', 'tensor', '--type', 'A2', '--factors', '1,0;0,1')
    assert code == 0
    result = _json(out)
    assert result['components'] == {'0,0': 1, '1,1': 1}
    assert result['status'] == 'equal'


def test_crystal_commutor(capsys):
    code, out = _run(capsys, 'crystal', 'commutor', '--type', 'A1',
                     '--first', '1', '--second', '2')
    assert code == 0
    result = _json(out)
    assert result['morphism'] and result['symmetric']


def test_crystal_cactus(capsys):
    code, out = _run(capsys, 'crystal', 'cactus', '--type', 'A2', '--lambda', '1,0',
                     '--word', 'sI')
    assert code == 0
    result = _json(out)
    assert result['flavor'] == 'internal'
    assert len(result['labels']) == 3
    code, out = _run(capsys, 'crystal', 'cactus', '--type', 'A1', '--factors', '1;1;1',
                     '--flavor', 'external', '--word', 's13*s12')
    assert code == 0
    assert len(_json(out)['labels']) == 8


def test_crystal_cactus_bad_word(capsys):
    code, _ = _run(capsys, 'crystal', 'cactus', '--type', 'A1', '--factors', '1;1',
                   '--flavor', 'external', '--word', 's13')
    assert code == 1


def test_moduli_chart(capsys):
    code, out = _run(capsys, 'moduli', 'chart', '--tree', '(12)3', '--coords', '1/2')
    assert code == 0
    result = _json(out)
    assert result['coordinates'] == [[1, 2]]
    assert result['point']['z'] == ['3/2', 1, 0]


def test_moduli_schedule(capsys):
    code, out = _run(capsys, 'moduli', 'schedule', '--n', '3', '--gen', 's13')
    assert code == 0
    result = _json(out)
    assert result['kind'] == 'reversal'
    assert result['segments'][0]['z_end'] == [-1.0, 0.0, 1.0]
    code, out = _run(capsys, 'moduli', 'schedule', '--n', '3', '--gen', 's12')
    assert code == 0
    assert _json(out)['kind'] == 'cluster'
    code, out = _run(capsys, 'moduli', 'schedule', '--pentagon')
    assert code == 0
    assert _json(out)['n'] == 3


def test_verify_case(capsys):
    code, out = _run(capsys, 'verify', 'case', '--suite', 'quick', '--case', 'hexagon-A1')
    assert code == 0
    result = _json(out)
    assert result['status'] == 'equal'
    assert [case['case'] for case in result['cases']] == ['hexagon-A1']


def test_verify_all(capsys, tmp_path):
    junit = tmp_path / 'junit.xml'
    output = tmp_path / 'result.json'
    code, out = _run(capsys, 'verify', 'all', '--suite', 'quick', '--workers', '2',
                     '--junit', str(junit), '--output', str(output), '--seed', '4')
    assert code == 0
    assert out.out == ''
    result = json.loads(output.read_text())
    assert result['seed'] == 4
    assert result['status'] == 'equal'
    assert ET.parse(str(junit)).getroot().get('tests') == str(len(result['cases']))


def test_verify_output_is_reproducible(capsys, tmp_path):
    texts = []
    for name in ('a.json', 'b.json'):
        path = tmp_path / name
        assert _run(capsys, 'verify', 'all', '--suite', 'quick', '--output', str(path))[0] == 0
        texts.append(path.read_text())
    assert texts[0] == texts[1]


def test_helpers():
    assert split_list(' a, b ,,c ') == ['a', 'b', 'c']
    assert split_list('1,0;0,1', ';') == ['1,0', '0,1']
    assert parse_floats('0, 1.5') == (0.0, 1.5)
    with pytest.raises(UsageError):
        parse_floats('0,x')
    assert [exit_status(s) for s in (True, 'equal', False, 'mismatch', 'inconclusive')] == \
        [0, 0, 1, 1, 2]
    assert exit_status(None) == 1


def test_suites_are_valid(capsys):
    validate_yaml.validate_yaml('config')
    assert 'Error' not in capsys.readouterr().out
    assert {'desk', 'quick'} <= validate_yaml.suites_names('config')


def test_gaudin_eigenlines(capsys):
    code, out = _run(capsys, 'gaudin', 'eigenlines', '--spins', '2')
    assert code == 0
    result = _json(out)
    assert result['size'] == 3
    assert result['weights'] == [[-2], [0], [2]]
    code, out = _run(capsys, 'gaudin', 'eigenlines', '--spins', '1,1,1', '--mu', '1',
                     '--z', '0,1,3')
    assert code == 0
    assert _json(out)['size'] == 2


def test_gaudin_eigenlines_needs_mu(capsys):
    assert _run(capsys, 'gaudin', 'eigenlines', '--spins', '1,1')[0] == 3


def test_gaudin_monodromy_internal(capsys):
    code, out = _run(capsys, 'gaudin', 'monodromy', '--spins', '1', '--gen', 'sI')
    assert code == 0
    result = _json(out)
    assert result['status'] == 'equal'
    assert result['permutation'] == [1, 0]


def test_gaudin_monodromy_config(capsys, tmp_path):
    path = tmp_path / 'experiment.toml'
    path.write_text('algebra = "sl2"\nspins = "1,1,1"\nmu = "1"\n'
                    'generator = "s13"\nseed = 2\n')
    code, out = _run(capsys, 'gaudin', 'monodromy', '--config', str(path))
    assert code == 0
    result = _json(out)
    assert result['seed'] == 2
    assert result['status'] == 'equal'
    assert sorted(result['labels']) == ['0 > 1', '2 > 1']


def test_gaudin_monodromy_needs_spins(capsys):
    assert _run(capsys, 'gaudin', 'monodromy', '--gen', 's12')[0] == 3


def test_commands_are_kernelci_commands():
    assert issubclass(Args, KernelCIArgs)
    for group in ccl.GROUPS.values():
        commands = [obj for name, obj in vars(group).items() if name.startswith('cmd_')]
        assert commands
        assert all(issubclass(obj, Command) for obj in commands)


def test_check_arguments():
    glob = vars(crystal)
    check_arguments('crystal', glob, ['--settings', 'ccl.toml', 'build', '--type=A1',
                                      '--lambda', '1'])
    with pytest.raises(UsageError):
        check_arguments('crystal', glob, ['--settings', 'ccl.toml'])
    with pytest.raises(UsageError):
        check_arguments('crystal', glob, ['draw', '--type', 'A1'])
    with pytest.raises(UsageError):
        check_arguments('crystal', glob, ['build', '--lambda', '1'])


def test_settings_before_command(capsys, tmp_path):
    path = tmp_path / 'ccl.toml'
    path.write_text('[DEFAULT]\ndefault_seed = 5\n')
    code, out = _run(capsys, 'verify', f'--settings={path}', 'case', '--suite', 'quick',
                     '--case', 'hexagon-A1')
    assert code == 0
    assert _json(out)['seed'] == 5


def test_invalid_weight_is_rejected_before_running(capsys):
    code, out = _run(capsys, 'crystal', 'cactus', '--type', 'A2', '--lambda', '2',
                     '--word', 's1')
    assert code == 3
    assert 'not a dominant weight' in out.err
