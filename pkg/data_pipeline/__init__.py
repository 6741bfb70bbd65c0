from .series import (TimeSeries, read_series_csv, write_series_csv, forward_fill,
                     regularize_series, chrono_split)
from .telemetry import (RawTelemetry, parse_telemetry_json, load_telemetry,
                        counters_to_bps, rates_to_series, telemetry_to_series)
from .scaling import ScalerParams, fit_scaler, transform, inverse
from .windowing import WindowedDataset, make_windows
from .synthetic import synth_generate
from .preparation import PreparedData, prepare_datasets

__all__ = ['TimeSeries', 'read_series_csv', 'write_series_csv', 'forward_fill',
           'regularize_series', 'chrono_split', 'RawTelemetry', 'parse_telemetry_json',
           'load_telemetry', 'counters_to_bps', 'rates_to_series', 'telemetry_to_series',
           'ScalerParams', 'fit_scaler', 'transform', 'inverse', 'WindowedDataset',
           'make_windows', 'synth_generate', 'PreparedData', 'prepare_datasets']
