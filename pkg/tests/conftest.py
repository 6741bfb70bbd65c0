import numpy as np
import pytest

from data_pipeline import TimeSeries, synth_generate, write_series_csv
from models import ModelConfig

# Small enough that a full forward/backward runs in milliseconds
SMALL_MODEL = dict(conv_filters=4, recurrent_units=4, heads=2, d_ff=8)


@pytest.fixture
def rng():
    return np.random.default_rng(30)


@pytest.fixture
def small_config():
    return ModelConfig(window_length=6, **SMALL_MODEL)


@pytest.fixture
def short_series():
    """Three synthetic days at 5-minute spacing"""
    return synth_generate(3, seed=7)


@pytest.fixture
def sine_series():
    values = 0.5 + 0.4 * np.sin(np.arange(400) * 2 * np.pi / 24)
    return TimeSeries(np.arange(400, dtype=np.int64) * 300, values * 1e9)


@pytest.fixture
def series_csv(tmp_path, short_series):
    path = tmp_path / 'series.csv'
    write_series_csv(short_series, path)
    return path
