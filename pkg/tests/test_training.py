import numpy as np
import pytest

from data_pipeline import make_windows, fit_scaler, transform
from models import ARCHITECTURES, BASELINES, ModelConfig, build_model
from training import (AdamState, TrainConfig, adam_step, dataset_loss, evaluate_model,
                      mse_loss, train, write_history_csv)
from utils.errors import ConfigError, DataError, NumericError, ShapeError

from .conftest import SMALL_MODEL


@pytest.fixture
def sine_windows(sine_series):
    scaler = fit_scaler(sine_series.values)
    return make_windows(transform(sine_series.values, scaler), 6), scaler


def test_mse_loss_cases():
    assert mse_loss([[1.0]], [[1.0]])[0] == 0.0
    assert mse_loss([[0.0], [0.0]], [[1.0], [3.0]])[0] == 5.0
    np.testing.assert_array_equal(mse_loss([[2.0]], [[0.0]])[1], [[4.0]])
    with pytest.raises(ShapeError):
        mse_loss(np.zeros((2, 1)), np.zeros((3, 1)))


def test_adam_zero_gradient_leaves_parameters():
    params = {'w': np.array([0.3, -1.2])}
    new, _ = adam_step(params, {'w': np.zeros(2)}, AdamState.for_params(params), TrainConfig())
    np.testing.assert_array_equal(new['w'], params['w'])


def test_adam_first_step_hand_case():
    cfg = TrainConfig()
    params = {'theta': np.array([0.0])}
    new, state = adam_step(params, {'theta': np.array([1.0])}, AdamState.for_params(params), cfg)
    assert new['theta'][0] == pytest.approx(-1e-3 / (1.0 + 1e-8), rel=1e-12)
    assert state.t == 1
    m_hat = state.m['theta'] / (1.0 - cfg.beta1)
    np.testing.assert_allclose(m_hat, [1.0], rtol=1e-15)
    assert params['theta'][0] == 0.0


def test_adam_rejects_non_finite_gradient():
    params = {'w': np.zeros(2)}
    with pytest.raises(NumericError):
        adam_step(params, {'w': np.array([np.nan, 0.0])}, AdamState.for_params(params), TrainConfig())


def test_adam_is_bit_deterministic(rng):
    params = {'w': rng.normal(size=(3, 4)), 'b': rng.normal(size=4)}
    grads = {'w': rng.normal(size=(3, 4)), 'b': rng.normal(size=4)}
    state = AdamState.for_params(params)
    cfg = TrainConfig(learning_rate=0.01)
    first, first_state = adam_step(params, grads, state, cfg)
    second, second_state = adam_step(params, grads, state, cfg)
    for name in params:
        assert first[name].tobytes() == second[name].tobytes()
        assert first_state.m[name].tobytes() == second_state.m[name].tobytes()
        assert first_state.v[name].tobytes() == second_state.v[name].tobytes()


def test_adam_on_convex_scalar_problem():
    cfg = TrainConfig(learning_rate=0.1)
    params = {'theta': np.array([1.0])}
    state = AdamState.for_params(params)
    squares = [1.0]
    for _ in range(300):
        params, state = adam_step(params, {'theta': 2.0 * params['theta']}, state, cfg)
        squares.append(float(params['theta'][0] ** 2))
    # steps of about lr walk theta down monotonically until it first crosses zero
    assert all(later < earlier for earlier, later in zip(squares[:10], squares[1:11]))
    assert abs(params['theta'][0]) < 1e-4


@pytest.mark.parametrize('changes', [
    {'learning_rate': 0.0}, {'beta1': 1.0}, {'batch_size': 0}, {'epochs': -1}, {'patience': 0},
])
def test_train_config_validation(changes):
    with pytest.raises(ConfigError):
        TrainConfig(**changes)


def test_zero_epochs(small_config, sine_windows):
    model = build_model(small_config)
    before = model.parameters()
    model, history = train(model, sine_windows[0], TrainConfig(epochs=0))
    assert len(history) == 0
    for name, value in model.parameters().items():
        np.testing.assert_array_equal(value, before[name])


def test_training_is_deterministic(small_config, sine_windows):
    cfg = TrainConfig(epochs=3, batch_size=16, seed=4)
    _, first = train(build_model(small_config), sine_windows[0], cfg)
    _, second = train(build_model(small_config), sine_windows[0], cfg)
    assert first.train_loss == second.train_loss
    assert len(first) == 3


def test_training_reduces_loss(sine_windows):
    model = build_model(ModelConfig(architecture='gru', recurrent_units=8))
    dataset = sine_windows[0]
    before = dataset_loss(model, dataset)
    train(model, dataset, TrainConfig(epochs=20, learning_rate=1e-2, batch_size=16))
    assert dataset_loss(model, dataset) < before


def test_early_stopping_restores_best(sine_windows):
    dataset = sine_windows[0]
    model = build_model(ModelConfig(architecture='rnn', recurrent_units=4))
    cfg = TrainConfig(epochs=200, learning_rate=0.5, patience=2, batch_size=64)
    model, history = train(model, dataset, cfg, validation=dataset)
    assert len(history.val_loss) == len(history)
    if history.stopped_early:
        assert len(history) < 200
        assert dataset_loss(model, dataset) == pytest.approx(min(history.val_loss), rel=1e-9)


def test_history_csv(tmp_path, small_config, sine_windows):
    _, history = train(build_model(small_config), sine_windows[0], TrainConfig(epochs=2))
    path = tmp_path / 'loss.csv'
    write_history_csv(history, path)
    lines = path.read_text().splitlines()
    assert lines[0] == 'epoch,mean_train_loss'
    assert [line.split(',')[0] for line in lines[1:]] == ['1', '2']


def test_window_mismatch_rejected(sine_series):
    scaler = fit_scaler(sine_series.values)
    dataset = make_windows(transform(sine_series.values, scaler), 12)
    with pytest.raises(ShapeError):
        train(build_model(ModelConfig(**SMALL_MODEL)), dataset, TrainConfig(epochs=1))


def test_evaluate_memorized_set(sine_windows):
    dataset, scaler = sine_windows
    model = build_model(ModelConfig(architecture='rnn', recurrent_units=2))
    model.set_parameters({name: np.zeros_like(value) for name, value in model.parameters().items()})
    # a zero model predicts 0 everywhere; make that the target
    dataset.targets[:] = 0.0
    dataset.targets[0] = 1.0
    report = evaluate_model(model, dataset, scaler, space='normalized')
    assert report.n == len(dataset)
    assert np.isfinite(report.mae) and report.mae >= 0

    dataset.targets[0] = 0.0
    with pytest.raises(DataError):
        evaluate_model(model, dataset, scaler, space='normalized')
    report = evaluate_model(model, dataset, scaler, space='bps')
    assert report.mae == pytest.approx(0.0, abs=1e-9)
    assert report.rmse == pytest.approx(0.0, abs=1e-9)
    assert report.wape == pytest.approx(0.0, abs=1e-9)


def test_bps_and_normalized_spaces(small_config, sine_windows):
    dataset, scaler = sine_windows
    model = build_model(small_config)
    bps = evaluate_model(model, dataset, scaler, space='bps')
    normalized = evaluate_model(model, dataset, scaler, space='normalized')
    assert bps.space == 'bps' and normalized.space == 'normalized'
    assert bps.mae == pytest.approx(normalized.mae * scaler.range, rel=1e-9)
    assert bps.rmse == pytest.approx(normalized.rmse * scaler.range, rel=1e-9)


@pytest.mark.parametrize('batch_size', [1, 7, 64, 10_000])
def test_evaluation_ignores_batch_partition(small_config, sine_windows, batch_size):
    dataset, scaler = sine_windows
    model = build_model(small_config)
    reference = evaluate_model(model, dataset, scaler, batch_size=len(dataset))
    report = evaluate_model(model, dataset, scaler, batch_size=batch_size)
    assert report.n == reference.n
    assert report.mae == pytest.approx(reference.mae, rel=1e-12)
    assert report.rmse == pytest.approx(reference.rmse, rel=1e-12)
    assert report.wape == pytest.approx(reference.wape, rel=1e-12)


def _sine_dataset(count=64, window=6):
    values = 0.5 + 0.4 * np.sin(np.arange(count + window) * 2 * np.pi / 16)
    return make_windows(values, window)


@pytest.mark.slow
@pytest.mark.parametrize('architecture, threshold', [
    ('convlstmtransnet', 1e-3), *[(name, 1e-2) for name in BASELINES],
])
def test_overfit_sine(architecture, threshold):
    assert architecture in ARCHITECTURES
    dataset = _sine_dataset()
    model = build_model(ModelConfig(architecture=architecture, window_length=6))
    cfg = TrainConfig(epochs=500, batch_size=8, learning_rate=1e-3, seed=0)
    model, history = train(model, dataset, cfg)
    assert dataset_loss(model, dataset) < threshold
