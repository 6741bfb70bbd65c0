import json

import numpy as np
import pytest

from data_pipeline import ScalerParams
from models import ModelConfig, build_model, checkpoint_text, load_checkpoint, save_checkpoint
from utils.errors import CheckpointError

from .conftest import SMALL_MODEL

SCALER = ScalerParams(min=1.5e9, max=2.25e10)


@pytest.mark.parametrize('architecture', ['convlstmtransnet', 'gru'])
def test_round_trip_is_prediction_exact(tmp_path, architecture, rng):
    model = build_model(ModelConfig(architecture=architecture, seed=3, **SMALL_MODEL))
    path = tmp_path / 'model.json'
    save_checkpoint(model, SCALER, path)
    loaded, scaler = load_checkpoint(path)

    windows = rng.uniform(size=(100, 6, 1))
    assert np.max(np.abs(model.predict(windows) - loaded.predict(windows))) == 0.0
    assert scaler == SCALER
    assert loaded.config == model.config


def test_save_load_save_is_byte_identical(tmp_path, small_config):
    path = tmp_path / 'model.json'
    save_checkpoint(build_model(small_config), SCALER, path)
    model, scaler = load_checkpoint(path)
    assert checkpoint_text(model, scaler) == path.read_text(encoding='utf-8')


def test_truncated_file(tmp_path, small_config):
    path = tmp_path / 'model.json'
    text = checkpoint_text(build_model(small_config), SCALER)
    path.write_text(text[:len(text) // 2], encoding='utf-8')
    with pytest.raises(CheckpointError):
        load_checkpoint(path)


def test_renamed_parameter(tmp_path, small_config):
    document = json.loads(checkpoint_text(build_model(small_config), SCALER))
    document['params']['head.weights'] = document['params'].pop('head.W')
    path = tmp_path / 'model.json'
    path.write_text(json.dumps(document), encoding='utf-8')
    with pytest.raises(CheckpointError, match='head.W'):
        load_checkpoint(path)


def test_wrong_shape_and_version(tmp_path, small_config):
    document = json.loads(checkpoint_text(build_model(small_config), SCALER))
    document['params']['head.b'] = {'shape': [2], 'data': [0.0, 0.0]}
    path = tmp_path / 'model.json'
    path.write_text(json.dumps(document), encoding='utf-8')
    with pytest.raises(CheckpointError, match='shape'):
        load_checkpoint(path)

    document['format_version'] = 99
    path.write_text(json.dumps(document), encoding='utf-8')
    with pytest.raises(CheckpointError, match='format_version'):
        load_checkpoint(path)


def test_missing_file(tmp_path):
    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path / 'absent.json')


@pytest.mark.parametrize('key, value', [
    ('params', []),
    ('params', {'head.b': [0.0]}),
    ('config', 'convlstmtransnet'),
    ('scaler', [0.0, 1.0]),
])
def test_non_object_sections(tmp_path, small_config, key, value):
    document = json.loads(checkpoint_text(build_model(small_config), SCALER))
    if isinstance(value, dict):
        document[key].update(value)
    else:
        document[key] = value
    path = tmp_path / 'model.json'
    path.write_text(json.dumps(document), encoding='utf-8')
    with pytest.raises(CheckpointError):
        load_checkpoint(path)


def test_awkward_floats_survive_exactly(tmp_path, small_config):
    model = build_model(small_config)
    awkward = np.array([[1.0 / 3.0], [0.1], [5e-324], [-1.7976931348623157e308]])
    model.set_parameters({'head.W': awkward})
    path = tmp_path / 'model.json'
    save_checkpoint(model, SCALER, path)
    loaded, _ = load_checkpoint(path)
    assert loaded.parameters()['head.W'].tobytes() == awkward.tobytes()
