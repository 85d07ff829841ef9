import json
import math
from fractions import Fraction

import pytest

from src.errors import ConfigError
from src.experiments import (DEFAULTS, EXPERIMENTS, MODES, ExperimentConfig, Outcome, acceptance_criteria,
                             reproduce_all, run_experiment)
from src.export import ReportExporter, config_hash, to_jsonable


def test_defaults_cover_every_experiment():
    assert set(DEFAULTS) == set(EXPERIMENTS)


def test_config_applies_defaults():
    cfg = ExperimentConfig.from_dict({'experiment': 'coding', 'params': {'r': 3}})
    assert cfg.params['r'] == 3
    assert cfg.params['construction'] == 'phi2f'
    assert cfg.system['k'] == 1
    assert cfg.name == 'coding'


@pytest.mark.parametrize('payload', [
    {'experiment': 'teleport'},
    {'experiment': 'coding', 'params': {'colour': 1}},
    {'experiment': 'coding', 'params': {'r': 'two'}},
    {'experiment': 'coding', 'params': {'construction': 'spiral'}},
    {'experiment': 'coding', 'seed': -1},
    {'experiment': 'coding', 'system': {'k': 1, 'amplitude': 0.5}},
    {'experiment': 'coding', 'output': {'format': 'xml'}},
    {'params': {}},
    {'experiment': 'coding', 'extra': True},
])
def test_invalid_configs_are_rejected(payload):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(payload)


def test_malformed_json(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"experiment": "coding",', encoding='utf-8')
    with pytest.raises(ConfigError):
        ExperimentConfig.load(path)
    with pytest.raises(ConfigError):
        ExperimentConfig.load(tmp_path / 'missing.json')


def test_shipped_configs_load():
    from src.config import config

    paths = sorted(config.CONFIGS_DIR.glob('*.json'))
    assert paths
    for path in paths:
        ExperimentConfig.load(path)


def test_every_mode_has_a_shipped_config():
    from src.config import config

    shipped = set()
    for path in config.CONFIGS_DIR.glob('*.json'):
        cfg = ExperimentConfig.load(path)
        for key in MODES.get(cfg.kind, {}):
            shipped.add((cfg.kind, cfg.params[key]))
    expected = {(kind, mode) for kind, modes in MODES.items() for choices in modes.values() for mode in choices}
    assert expected <= shipped


def test_overrides_are_validated():
    cfg = ExperimentConfig('entropy')
    assert cfg.with_overrides(seed=4, samples=10).seed == 4
    with pytest.raises(ConfigError):
        cfg.with_overrides(samples='many')


def test_hausdorff_run_writes_report(out_dir):
    cfg = ExperimentConfig('hausdorff', params={'samples': 200, 'eta': 1e-3}, output={'name': 'small'})
    result = run_experiment(cfg, out_dir)
    assert result.outcome is Outcome.PASSED
    assert result.exit_code == 0
    payload = json.loads((out_dir / 'small.json').read_text(encoding='utf-8'))
    assert payload['outcome'] == 'passed'
    assert payload['config']['params']['samples'] == 200
    assert payload['provenance']['config_sha256'] == config_hash(cfg.to_dict())


def test_zero_budget_is_inconclusive(out_dir):
    cfg = ExperimentConfig('entropy', params={'system': 'arc', 'budget': 0})
    result = run_experiment(cfg, out_dir)
    assert result.outcome is Outcome.INCONCLUSIVE
    assert result.exit_code == 3
    assert result.report['partial']


def test_full_shift_run_checks_greedy_counts(out_dir):
    cfg = ExperimentConfig('entropy', params={'system': 'full_shift', 'symbols': 2, 'eps_schedule': [0.5],
                                              'n_schedule': [4, 5, 6]}, output={'name': 'shift'})
    result = run_experiment(cfg, out_dir)
    assert result.outcome is Outcome.PASSED
    assert result.report['greedy_agrees']
    assert (out_dir / 'shift_greedy.csv').exists()


def test_separated_family_run(out_dir):
    cfg = ExperimentConfig('entropy', params={'system': 'separated_family', 'r': 2, 'n_max': 2})
    result = run_experiment(cfg, out_dir)
    assert result.outcome is Outcome.PASSED
    assert [row['count'] for row in result.report['rows']] == [4, 16]
    assert (out_dir / 'entropy_family.csv').exists()


def test_stub_tree_run_with_pair_table(out_dir):
    cfg = ExperimentConfig('dendrite', params={'mode': 'csigma', 'k': 2, 'n': 2, 'pairs': True},
                           output={'name': 'stubs'})
    result = run_experiment(cfg, out_dir)
    assert result.outcome is Outcome.PASSED
    assert 'pair_table' not in result.report
    lines = (out_dir / 'stubs_pairs.csv').read_bytes().split(b'\r\n')
    assert len([line for line in lines if line]) == 1 + 6


def test_acceptance_criteria_are_numbered():
    criteria = acceptance_criteria(seed=0)
    assert [c.number for c in criteria] == list(range(1, 9))
    assert all(c.configs for c in criteria)


def test_reproduce_single_criterion(out_dir):
    summary = reproduce_all(out_dir, seed=0, only=[6])
    assert [row['criterion'] for row in summary['criteria']] == [6]
    assert summary['all_passed']
    assert (out_dir / 'summary.csv').exists()
    assert (out_dir / 'criterion_6' / 'stub_trees_k3_n3.json').exists()


def test_to_jsonable_conversions():
    assert to_jsonable(Fraction(1, 3)) == '1/3'
    assert to_jsonable(math.inf) == 'inf'
    assert to_jsonable(1 + 2j) == [1.0, 2.0]
    assert to_jsonable(Outcome.FAILED) == 'failed'


def test_csv_uses_crlf(out_dir):
    path = ReportExporter(out_dir).write_csv('t', [{'b': 1, 'a': 0.5}], columns=['a', 'b'])
    assert path.read_bytes() == b'a,b\r\n0.5,1\r\n'
