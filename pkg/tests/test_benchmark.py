import numpy as np
import pytest

from data_pipeline import TimeSeries, synth_generate
from interface.benchmark import BenchmarkTable, config_hash, run_benchmark
from models import ARCHITECTURES
from training import TrainConfig

from .conftest import SMALL_MODEL

FAST = TrainConfig(epochs=1, batch_size=64)


@pytest.fixture(scope='module')
def table():
    return run_benchmark(synth_generate(2, seed=11), windows=(6, 12), train_cfg=FAST,
                         model_overrides=SMALL_MODEL, seed=1)


def test_complete_grid(table):
    assert table.complete
    assert len(table.rows) == len(ARCHITECTURES) * 2
    assert [(row.model, row.window) for row in table.rows] == [
        (model, window) for model in ARCHITECTURES for window in (6, 12)]
    for row in table.rows:
        assert not row.failed
        for report in (row.bps, row.normalized):
            assert report.rmse >= report.mae >= 0
            assert report.wape >= 0
        assert row.bps.n == row.normalized.n


def test_table_layout(table):
    text = table.render()
    assert '6 input' in text and '12 input' in text
    assert text.count('MAE') == 2
    for name in ('RNN', 'LSTM', 'GRU', 'ConvLSTMTransNet'):
        assert name in text


def test_csv_and_json(table):
    lines = table.to_csv().splitlines()
    assert lines[0].startswith('model,window,status')
    assert len(lines) == 9
    document = table.to_dict()
    assert set(document['metadata']) == {'seed', 'config', 'config_hash', 'dataset_sha256'}
    assert document['metadata']['config_hash'] == config_hash(document['metadata']['config'])


def test_deterministic(table):
    again = run_benchmark(synth_generate(2, seed=11), windows=(6, 12), train_cfg=FAST,
                          model_overrides=SMALL_MODEL, seed=1)
    assert again.to_json() == table.to_json()


def test_failed_cell_does_not_abort_grid():
    # 60 points: window 6 works, window 40 leaves too few test points
    values = 1e9 + 1e8 * np.sin(np.arange(60) / 3.0)
    series = TimeSeries(np.arange(60) * 300, values)
    result = run_benchmark(series, windows=(6, 40), models=('rnn', 'gru'), train_cfg=FAST,
                           model_overrides={'recurrent_units': 4})
    assert result.complete
    assert result.failed_cells() == [('rnn', 40), ('gru', 40)]
    assert len(result.errors) == 2
    assert result.errors[0]['label'] == 'rnn/w40'
    assert 'failed' in result.render()
    assert not result.cell('rnn', 6).failed


def test_empty_table_lookup():
    with pytest.raises(KeyError):
        BenchmarkTable(models=('rnn',), windows=(6,)).cell('rnn', 6)


@pytest.mark.slow
def test_default_size_benchmark_is_reproducible():
    series = synth_generate(29, seed=1)
    assert len(series) == 8352
    first = run_benchmark(series, windows=(6, 12), seed=1, jobs=4)
    assert first.complete and not first.failed_cells()
    assert first.render().splitlines()[1].split() == ['6', 'input', '12', 'input']
    second = run_benchmark(series, windows=(6, 12), seed=1, jobs=4)
    assert second.to_json() == first.to_json()
