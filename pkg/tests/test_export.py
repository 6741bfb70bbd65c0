import numpy as np

from data_pipeline import chrono_split, fit_scaler, synth_generate
from interface.export import export_predictions, prediction_frame
from models import build_model


def test_export_rows_and_header(tmp_path, small_config):
    series = synth_generate(2, seed=5)
    train_series, test_series = chrono_split(series, 0.8)
    scaler = fit_scaler(train_series.values)
    model = build_model(small_config)

    path = tmp_path / 'predictions.csv'
    rows = export_predictions(model, test_series, scaler, path)
    lines = path.read_text().splitlines()
    assert lines[0] == 'timestamp,actual_bps,predicted_bps'
    assert rows == len(test_series) - small_config.window_length == len(lines) - 1

    frame = prediction_frame(model, test_series, scaler)
    np.testing.assert_array_equal(frame['actual_bps'].to_numpy(),
                                  test_series.values[small_config.window_length:])
    np.testing.assert_array_equal(frame['timestamp'].to_numpy(),
                                  test_series.timestamps[small_config.window_length:])
    assert np.all(np.isfinite(frame['predicted_bps'].to_numpy()))
