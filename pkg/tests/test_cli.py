import json

import pytest

from interface.cli import cli_dispatch

from .conftest import SMALL_MODEL


@pytest.fixture
def small_config_file(tmp_path):
    path = tmp_path / 'config.json'
    path.write_text(json.dumps({'model': SMALL_MODEL, 'train': {'epochs': 1, 'batch_size': 64}}))
    return path


def test_synth_rows(tmp_path):
    path = tmp_path / 's.csv'
    assert cli_dispatch(['synth', '--days', '29', '--seed', '1', '--output', str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == 'timestamp,bps'
    assert len(lines) == 8352 + 1


def test_unknown_flag_exits_one(tmp_path, capsys):
    path = tmp_path / 's.csv'
    assert cli_dispatch(['synth', '--days', '2', '--bogus', '--output', str(path)]) == 1
    assert not path.exists()
    assert 'usage' in capsys.readouterr().err


def test_unknown_subcommand_exits_one():
    assert cli_dispatch(['forecast-everything']) == 1


def test_data_error_exits_two(tmp_path):
    missing = tmp_path / 'absent.csv'
    assert cli_dispatch(['train', '--data', str(missing), '--output', str(tmp_path / 'm.json')]) == 2


def test_bad_config_exits_one(tmp_path):
    config = tmp_path / 'config.json'
    config.write_text(json.dumps({'optimizer': {}}))
    assert cli_dispatch(['describe', '--config', str(config)]) == 1


def test_ingest_counters(tmp_path):
    telemetry = tmp_path / 'telemetry.json'
    telemetry.write_text(json.dumps([
        {'ts': 1704067200, 'octets': 0},
        {'ts': 1704067500, 'octets': 3750000000},
    ]))
    output = tmp_path / 'series.csv'
    assert cli_dispatch(['ingest', '--input', str(telemetry), '--output', str(output)]) == 0
    assert output.read_text().splitlines() == ['timestamp,bps', '1704067500,100000000.0']


def test_train_evaluate_predict(tmp_path, series_csv, small_config_file, capsys):
    checkpoint = tmp_path / 'model.json'
    history = tmp_path / 'loss.csv'
    assert cli_dispatch(['train', '--data', str(series_csv), '--config', str(small_config_file),
                         '--output', str(checkpoint), '--history', str(history)]) == 0
    assert checkpoint.exists()
    assert history.read_text().splitlines()[0] == 'epoch,mean_train_loss'
    capsys.readouterr()

    assert cli_dispatch(['evaluate', '--data', str(series_csv), '--checkpoint', str(checkpoint),
                         '--format', 'json']) == 0
    reports = json.loads(capsys.readouterr().out)
    assert [report['space'] for report in reports] == ['bps', 'normalized']

    predictions = tmp_path / 'predictions.csv'
    assert cli_dispatch(['predict', '--data', str(series_csv), '--checkpoint', str(checkpoint),
                         '--output', str(predictions), '--format', 'csv']) == 0
    lines = predictions.read_text().splitlines()
    assert lines[0] == 'timestamp,actual_bps,predicted_bps'

    assert cli_dispatch(['fgsm', '--data', str(series_csv), '--checkpoint', str(checkpoint),
                         '--epsilons', '0,0.05', '--format', 'csv']) == 0
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_benchmark_grid(tmp_path, series_csv, small_config_file):
    output = tmp_path / 'table.csv'
    assert cli_dispatch(['benchmark', '--data', str(series_csv), '--windows', '6,12',
                         '--config', str(small_config_file), '--format', 'csv',
                         '--output', str(output)]) == 0
    rows = output.read_text().splitlines()[1:]
    assert len(rows) == 8
    assert all(',ok,' in row for row in rows)


def test_benchmark_bad_windows():
    assert cli_dispatch(['benchmark', '--data', 'x.csv', '--windows', 'six']) == 1


def test_describe(capsys):
    assert cli_dispatch(['describe', '--model', 'lstm', '--window', '12']) == 0
    out = capsys.readouterr().out
    assert out.startswith('lstm (L=12')
    assert cli_dispatch(['describe', '--dot']) == 0
    assert 'digraph' in capsys.readouterr().out


def _synth_train_evaluate(workdir, config_file):
    workdir.mkdir()
    series = workdir / 'series.csv'
    checkpoint = workdir / 'model.json'
    metrics = workdir / 'metrics.json'
    assert cli_dispatch(['synth', '--days', '3', '--seed', '5', '--output', str(series)]) == 0
    assert cli_dispatch(['train', '--data', str(series), '--config', str(config_file),
                         '--seed', '5', '--output', str(checkpoint)]) == 0
    assert cli_dispatch(['evaluate', '--data', str(series), '--checkpoint', str(checkpoint),
                         '--format', 'json', '--output', str(metrics)]) == 0
    return metrics.read_bytes()


def test_end_to_end_runs_are_byte_identical(tmp_path, small_config_file):
    first = _synth_train_evaluate(tmp_path / 'first', small_config_file)
    second = _synth_train_evaluate(tmp_path / 'second', small_config_file)
    assert first == second
    assert json.loads(first)[0]['space'] == 'bps'


@pytest.mark.parametrize('argv', [
    ['synth', '--days', '2', '--format', 'json'],
    ['synth', '--days', '2', '--model', 'lstm'],
    ['ingest', '--input', 'telemetry.json', '--window', '12'],
    ['gradcheck', '--model', 'gru'],
    ['evaluate', '--data', 'x.csv', '--checkpoint', 'm.json', '--window', '12'],
    ['benchmark', '--data', 'x.csv', '--models', 'rnn', '--model', 'lstm'],
    ['benchmark', '--data', 'x.csv', '--windows', '6', '--window', '12'],
])
def test_ignored_common_flags_are_usage_errors(tmp_path, argv):
    assert cli_dispatch(argv + ['--output', str(tmp_path / 'out')]) == 1
    assert not (tmp_path / 'out').exists()


def test_benchmark_single_model_and_window(tmp_path, series_csv, small_config_file):
    output = tmp_path / 'table.csv'
    assert cli_dispatch(['benchmark', '--data', str(series_csv), '--model', 'gru', '--window', '6',
                         '--config', str(small_config_file), '--format', 'csv',
                         '--output', str(output)]) == 0
    rows = output.read_text().splitlines()[1:]
    assert len(rows) == 1
    assert rows[0].startswith('gru,6,ok,')


def test_synth_accepts_csv_format(tmp_path):
    path = tmp_path / 's.csv'
    assert cli_dispatch(['synth', '--days', '1', '--format', 'csv', '--output', str(path)]) == 0
    assert path.read_text().startswith('timestamp,bps\n')


def test_malformed_checkpoint_exits_two(tmp_path, series_csv):
    checkpoint = tmp_path / 'model.json'
    checkpoint.write_text(json.dumps({'format_version': 1, 'architecture': 'lstm',
                                      'config': {'architecture': 'lstm'},
                                      'scaler': {'min': 0.0, 'max': 1.0}, 'params': []}))
    assert cli_dispatch(['evaluate', '--data', str(series_csv),
                         '--checkpoint', str(checkpoint)]) == 2
