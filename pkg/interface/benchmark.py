"""
Model x window benchmark grid.

Every cell builds a fresh seeded model, trains it on the chronological train
split and evaluates it on the test split in both bps and normalized space.
A failing cell is recorded and marked failed; the rest of the grid still runs.
"""
import hashlib
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from io import StringIO

from data_pipeline.preparation import prepare_datasets
from models.architectures import build_model
from models.config import ARCHITECTURES, ModelConfig
from training.config import TrainConfig
from training.trainer import evaluate_model, train
from utils.errors import DataError, ErrorHandler, ForecastError

logger = logging.getLogger(__name__)

DISPLAY_NAMES = {
    'rnn': 'RNN',
    'lstm': 'LSTM',
    'gru': 'GRU',
    'convlstmtransnet': 'ConvLSTMTransNet',
}

CSV_COLUMNS = ['model', 'window', 'status', 'n',
               'mae_bps', 'rmse_bps', 'wape_bps',
               'mae_normalized', 'rmse_normalized', 'wape_normalized']


@dataclass
class BenchmarkRow:
    model: str
    window: int
    bps: object = None
    normalized: object = None
    error: str = None

    @property
    def failed(self):
        return self.error is not None

    def to_dict(self):
        return {
            'model': self.model,
            'window': self.window,
            'status': 'failed' if self.failed else 'ok',
            'error': self.error,
            'bps': self.bps.to_dict() if self.bps else None,
            'normalized': self.normalized.to_dict() if self.normalized else None,
        }


@dataclass
class BenchmarkTable:
    """One row per (model, window) pair in grid order, plus run metadata"""
    models: tuple
    windows: tuple
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)

    def cell(self, model, window):
        for row in self.rows:
            if row.model == model and row.window == window:
                return row
        raise KeyError((model, window))

    @property
    def complete(self):
        return len(self.rows) == len(self.models) * len(self.windows)

    def failed_cells(self):
        return [(row.model, row.window) for row in self.rows if row.failed]

    def to_dict(self):
        return {
            'metadata': self.metadata,
            'models': list(self.models),
            'windows': list(self.windows),
            'rows': [row.to_dict() for row in self.rows],
            'errors': self.errors,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + '\n'

    def to_csv(self):
        out = StringIO()
        out.write(','.join(CSV_COLUMNS) + '\n')
        for row in self.rows:
            values = [row.model, str(row.window), 'failed' if row.failed else 'ok']
            if row.failed:
                values += [''] * (len(CSV_COLUMNS) - 3)
            else:
                values.append(str(row.bps.n))
                for report in (row.bps, row.normalized):
                    values += [repr(report.mae), repr(report.rmse), repr(report.wape)]
            out.write(','.join(values) + '\n')
        return out.getvalue()

    def render(self, space='bps'):
        """Models down, a MAE/RMSE/WAPE block per window across"""
        if space not in ('bps', 'normalized'):
            raise DataError(f"unknown metric space '{space}'")
        name_width, cell_width = 18, 11
        block_width = 3 * cell_width

        lines = [f"Forecast accuracy ({space} space)"]
        header = ' ' * name_width
        sub_header = 'Model'.ljust(name_width)
        for window in self.windows:
            header += f"{window} input".center(block_width)
            sub_header += ''.join(metric.rjust(cell_width) for metric in ('MAE', 'RMSE', 'WAPE'))
        lines += [header.rstrip(), sub_header, '-' * len(sub_header)]

        for model in self.models:
            line = DISPLAY_NAMES.get(model, model).ljust(name_width)
            for window in self.windows:
                row = self.cell(model, window)
                report = None if row.failed else getattr(row, space)
                if report is None:
                    line += 'failed'.rjust(block_width)
                else:
                    line += (f"{report.mae:.4g}".rjust(cell_width)
                             + f"{report.rmse:.4g}".rjust(cell_width)
                             + f"{report.wape:.2f}".rjust(cell_width))
            lines.append(line)
        return '\n'.join(lines) + '\n'


def config_hash(document):
    """SHA-256 over canonical JSON (sorted keys, no whitespace)"""
    text = json.dumps(document, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def _run_cell(task):
    """Train and evaluate one (model, window) cell; returns (row, error or None)"""
    series, architecture, window, model_overrides, train_cfg, train_fraction, seed = task
    row = BenchmarkRow(architecture, window)
    try:
        model_cfg = ModelConfig.from_dict(dict(model_overrides, architecture=architecture,
                                               window_length=window, seed=seed))
        prepared = prepare_datasets(series, window, train_fraction)
        model = build_model(model_cfg)
        model, _ = train(model, prepared.train, train_cfg)
        row.bps = evaluate_model(model, prepared.test, prepared.scaler, space='bps')
        row.normalized = evaluate_model(model, prepared.test, prepared.scaler, space='normalized')
    except (ForecastError, ArithmeticError) as e:
        row.bps = row.normalized = None
        row.error = str(e)
        return row, e
    return row, None


def run_benchmark(series, windows=(6, 12), models=ARCHITECTURES, train_cfg=None,
                  model_overrides=None, seed=0, train_fraction=0.8, jobs=1):
    """
    Run the full model x window grid.

    The seed drives both model initialization and training order, so the
    table is a pure function of (series, seed, configuration).
    """
    windows = tuple(int(w) for w in windows)
    models = tuple(models)
    if not windows or not models:
        raise DataError("benchmark needs at least one model and one window")
    unknown = [m for m in models if m not in ARCHITECTURES]
    if unknown:
        raise DataError(f"unknown models {unknown}", suggestion=f"choose from {list(ARCHITECTURES)}")

    train_cfg = (train_cfg or TrainConfig()).replace(seed=seed)
    model_overrides = {key: value for key, value in (model_overrides or {}).items()
                       if key not in ('architecture', 'window_length', 'seed')}
    run_config = {
        'train': train_cfg.to_dict(),
        'model': model_overrides,
        'windows': list(windows),
        'models': list(models),
        'train_fraction': train_fraction,
    }
    table = BenchmarkTable(models=models, windows=windows, metadata={
        'seed': seed,
        'config': run_config,
        'config_hash': config_hash(run_config),
        'dataset_sha256': series.digest(),
    })

    tasks = [(series, model, window, model_overrides, train_cfg, train_fraction, seed)
             for model in models for window in windows]
    logger.info("benchmark: %d models x %d windows on %d points (jobs=%d)",
                len(models), len(windows), len(series), jobs)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_cell, tasks))
    else:
        results = [_run_cell(task) for task in tasks]

    handler = ErrorHandler()
    for row, error in results:
        label = f"{row.model}/w{row.window}"
        if error is not None:
            handler.add_error(label, error)
            logger.warning("benchmark cell %s failed: %s", label, error)
        else:
            logger.info("benchmark cell %s: MAE %.6g RMSE %.6g WAPE %.4f", label,
                        row.bps.mae, row.bps.rmse, row.bps.wape)
        table.rows.append(row)
    table.errors = handler.get_errors_as_dict()
    return table
