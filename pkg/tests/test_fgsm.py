import numpy as np
import pytest

from data_pipeline import make_windows, fit_scaler, transform
from models import ModelConfig, build_model, fgsm_perturb, fgsm_robustness, input_gradient
from training import mse_loss
from utils.errors import NumericError


@pytest.fixture
def lstm_model():
    return build_model(ModelConfig(architecture='lstm', window_length=6, recurrent_units=8, seed=2))


def test_zero_epsilon_is_identity(lstm_model, rng):
    windows = rng.uniform(size=(4, 6, 1))
    targets = rng.uniform(size=(4, 1))
    np.testing.assert_array_equal(fgsm_perturb(lstm_model, windows, targets, 0.0), windows)


def test_perturbation_is_signed_epsilon(lstm_model, rng):
    windows = rng.uniform(size=(4, 6, 1))
    targets = rng.uniform(size=(4, 1))
    delta = fgsm_perturb(lstm_model, windows, targets, 0.05) - windows
    assert np.all(np.isclose(np.abs(delta), 0.05, atol=1e-15) | (delta == 0.0))


def test_negative_epsilon(lstm_model, rng):
    with pytest.raises(NumericError):
        fgsm_perturb(lstm_model, rng.uniform(size=(1, 6, 1)), np.zeros((1, 1)), -0.1)


@pytest.mark.parametrize('architecture', ['rnn', 'lstm', 'gru', 'convlstmtransnet'])
def test_first_order_taylor(architecture, rng):
    model = build_model(ModelConfig(architecture=architecture, window_length=6, recurrent_units=8, seed=2))
    windows = rng.uniform(size=(8, 6, 1))
    targets = rng.uniform(size=(8, 1))
    loss, grad = input_gradient(model, windows, targets)
    residuals = []
    for epsilon in (1e-3, 1e-4):
        perturbed = fgsm_perturb(model, windows, targets, epsilon)
        new_loss, _ = mse_loss(model.predict(perturbed), targets)
        residuals.append(abs(new_loss - loss - epsilon * np.abs(grad).sum()))
    # a tenfold smaller step shrinks the residual about a hundredfold
    assert 50.0 <= residuals[0] / residuals[1] <= 200.0


def test_robustness_sweep(lstm_model, sine_series):
    scaler = fit_scaler(sine_series.values)
    dataset = make_windows(transform(sine_series.values, scaler), 6)
    results = fgsm_robustness(lstm_model, dataset, scaler, [0.0, 0.1])
    assert [epsilon for epsilon, _ in results] == [0.0, 0.1]
    assert results[1][1].rmse >= results[0][1].rmse
