import json

import pytest
from click.testing import CliRunner

from main import cli


@pytest.fixture
def runner():
    return CliRunner()


def test_list_experiments(runner):
    result = runner.invoke(cli, ['--list-experiments'])
    assert result.exit_code == 0
    assert 'shadow' in result.output
    assert 'falsify-cf' in result.output


def test_defaults(runner):
    result = runner.invoke(cli, ['defaults', 'coding'])
    assert result.exit_code == 0
    assert 'construction = phi2f' in result.output


def test_malformed_config_exits_2(runner, tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{"experiment": "coding", "params": {"colour": 1}}', encoding='utf-8')
    result = runner.invoke(cli, ['run', '--config', str(path)])
    assert result.exit_code == 2


def test_bad_amplitude_exits_2(runner, out_dir):
    result = runner.invoke(cli, ['coding', '--amplitude', '0.5', '--out-dir', str(out_dir)])
    assert result.exit_code == 2


def test_zero_budget_exits_3(runner, out_dir):
    result = runner.invoke(cli, ['entropy', '--budget', '0', '--out-dir', str(out_dir)])
    assert result.exit_code == 3
    assert 'inconclusive' in result.output


def test_run_config_file(runner, tmp_path, out_dir):
    path = tmp_path / 'family.json'
    path.write_text(json.dumps({'experiment': 'entropy', 'params': {'system': 'separated_family', 'n_max': 2},
                                'output': {'name': 'family'}}), encoding='utf-8')
    result = runner.invoke(cli, ['run', '--config', str(path), '--out-dir', str(out_dir), '--seed', '3'])
    assert result.exit_code == 0
    payload = json.loads((out_dir / 'family.json').read_text(encoding='utf-8'))
    assert payload['config']['seed'] == 3


def test_dendrite_command(runner, out_dir):
    result = runner.invoke(cli, ['dendrite', '--k', '2', '--n', '2', '--out-dir', str(out_dir)])
    assert result.exit_code == 0
    assert (out_dir / 'dendrite.json').exists()


def test_n_schedule_parsing(runner, out_dir):
    result = runner.invoke(cli, ['entropy', '--n-schedule', '3-x', '--out-dir', str(out_dir)])
    assert result.exit_code == 2


def test_sphere_base_point_needs_two_numbers(runner, out_dir):
    result = runner.invoke(cli, ['sphere', '--x', '1,2,3', '--out-dir', str(out_dir)])
    assert result.exit_code == 2
