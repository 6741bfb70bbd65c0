"""
Command-line surface.

    python app.py synth --days 29 --seed 1 --output series.csv
    python app.py train --data series.csv --model lstm --window 12 --output lstm.json
    python app.py benchmark --data series.csv --windows 6,12 --format csv

Logs go to stderr so stdout stays machine-readable. Exit codes: 0 success,
1 usage or configuration error, 2 data, numeric or checkpoint error.
"""
import argparse
import json
import logging
import sys

from config import get_config, load_config_file
from data_pipeline.scaling import transform
from data_pipeline.series import (chrono_split, forward_fill, read_series_csv,
                                  series_to_csv_text, write_series_csv)
from data_pipeline.synthetic import synth_generate
from data_pipeline.telemetry import load_telemetry, telemetry_to_series
from data_pipeline.preparation import prepare_datasets
from data_pipeline.windowing import make_windows
from interface.benchmark import run_benchmark
from interface.export import prediction_frame
from interface.gradient_suite import run_gradient_suite
from models import (ARCHITECTURES, ModelConfig, build_model, fgsm_robustness,
                    load_checkpoint, save_checkpoint)
from training import TrainConfig, evaluate_model, train, write_history_csv
from utils.errors import DataError, ForecastError, UsageError, exit_code_for
from utils.visualizer import (architecture_to_graphviz, format_architecture_ascii,
                              generate_parameter_statistics)

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'json', 'table')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')

# Common flags a subcommand has no use for; passing one is a usage error
UNUSED_COMMON_FLAGS = {
    'ingest': ('seed', 'window', 'model'),
    'synth': ('window', 'model'),
    'evaluate': ('seed', 'window', 'model'),
    'predict': ('seed', 'window', 'model'),
    'fgsm': ('seed', 'window', 'model'),
    'gradcheck': ('window', 'model'),
}
SERIES_COMMANDS = ('ingest', 'synth')


class ForecastArgumentParser(argparse.ArgumentParser):
    """argparse reports usage problems as UsageError instead of exiting with status 2"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _int_list(text):
    try:
        values = [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _float_list(text):
    try:
        values = [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def _name_list(text):
    names = [part.strip() for part in text.split(',') if part.strip()]
    unknown = [name for name in names if name not in ARCHITECTURES]
    if unknown or not names:
        raise argparse.ArgumentTypeError(f"unknown models {unknown}, choose from {list(ARCHITECTURES)}")
    return names


def build_parser():
    common = ForecastArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, help='Random seed (default 0)')
    common.add_argument('--window', type=int, help='Sliding window length L')
    common.add_argument('--model', choices=ARCHITECTURES, help='Architecture')
    common.add_argument('--config', help='JSON config file with model/train/pipeline sections')
    common.add_argument('--format', choices=FORMATS, help='Output format (default table)')
    common.add_argument('--log-level', choices=LOG_LEVELS, help='Logging level')

    parser = ForecastArgumentParser(prog='forecast',
                                    description='Provider-edge traffic forecasting from scratch')
    subparsers = parser.add_subparsers(dest='command', required=True, metavar='command')

    ingest = subparsers.add_parser('ingest', parents=[common], help='SNMP telemetry JSON to series CSV')
    ingest.add_argument('--input', required=True, help='Telemetry JSON file')
    ingest.add_argument('--output', help='Series CSV (stdout when omitted)')
    ingest.add_argument('--interval', type=int, help='Nominal polling interval in seconds')
    ingest.add_argument('--no-interval-divide', action='store_true',
                        help='Report bits per interval instead of bits per second')
    ingest.add_argument('--counter-bits', type=int, choices=(32, 64), help='Counter width')
    ingest.add_argument('--capacity', type=float, help='Interface capacity in bps')

    synth = subparsers.add_parser('synth', parents=[common], help='Generate a synthetic series')
    synth.add_argument('--days', type=int, required=True)
    synth.add_argument('--samples-per-day', type=int)
    synth.add_argument('--capacity', type=float, help='Interface capacity in bps')
    synth.add_argument('--missing-rate', type=float, default=0.0)
    synth.add_argument('--output', help='Series CSV (stdout when omitted)')

    train_cmd = subparsers.add_parser('train', parents=[common], help='Train one model')
    train_cmd.add_argument('--data', required=True, help='Series CSV')
    train_cmd.add_argument('--output', required=True, help='Checkpoint JSON')
    train_cmd.add_argument('--history', help='Per-epoch loss CSV')
    _add_training_flags(train_cmd)
    train_cmd.add_argument('--learning-rate', type=float)
    train_cmd.add_argument('--patience', type=int)
    train_cmd.add_argument('--train-fraction', type=float)

    evaluate = subparsers.add_parser('evaluate', parents=[common], help='Metrics on the test split')
    evaluate.add_argument('--data', required=True)
    evaluate.add_argument('--checkpoint', required=True)
    evaluate.add_argument('--train-fraction', type=float)
    evaluate.add_argument('--output')

    predict = subparsers.add_parser('predict', parents=[common], help='Actual vs. predicted CSV')
    predict.add_argument('--data', required=True)
    predict.add_argument('--checkpoint', required=True)
    predict.add_argument('--train-fraction', type=float)
    predict.add_argument('--output')

    benchmark = subparsers.add_parser('benchmark', parents=[common], help='Model x window grid')
    benchmark.add_argument('--data', required=True)
    benchmark.add_argument('--windows', type=_int_list, help='Comma-separated window lengths')
    benchmark.add_argument('--models', type=_name_list, help='Comma-separated architectures')
    _add_training_flags(benchmark)
    benchmark.add_argument('--jobs', type=int, default=1)
    benchmark.add_argument('--output')

    gradcheck = subparsers.add_parser('gradcheck', parents=[common], help='Finite-difference gradient suite')
    gradcheck.add_argument('--output')

    fgsm = subparsers.add_parser('fgsm', parents=[common], help='Metrics under FGSM perturbation')
    fgsm.add_argument('--data', required=True)
    fgsm.add_argument('--checkpoint', required=True)
    fgsm.add_argument('--epsilons', type=_float_list, default=[0.0, 0.01, 0.05, 0.1],
                      help='Comma-separated epsilons in normalized units')
    fgsm.add_argument('--train-fraction', type=float)
    fgsm.add_argument('--output')

    describe = subparsers.add_parser('describe', parents=[common], help='Architecture summary')
    describe.add_argument('--dot', action='store_true', help='Print Graphviz DOT source')
    describe.add_argument('--output')

    return parser


def _add_training_flags(subparser):
    subparser.add_argument('--epochs', type=int)
    subparser.add_argument('--batch-size', type=int)


def _check_common_flags(args):
    """Reject common flags the subcommand would ignore, then settle the output format"""
    unused = [flag for flag in UNUSED_COMMON_FLAGS.get(args.command, ())
              if getattr(args, flag) is not None]
    if unused:
        raise UsageError(f"{args.command} does not take "
                         f"{', '.join('--' + flag for flag in unused)}")
    if args.command in SERIES_COMMANDS:
        if args.format not in (None, 'csv'):
            raise UsageError(f"{args.command} always writes a series CSV, "
                             f"--format {args.format} is not supported")
        args.format = 'csv'
    elif args.format is None:
        args.format = 'table'


# Precedence: explicit flag > config file > dataclass default

def _sections(args):
    if args.config:
        return load_config_file(args.config)
    return {'model': {}, 'train': {}, 'pipeline': {}}


def _model_config(args, sections):
    values = dict(sections['model'])
    if args.model:
        values['architecture'] = args.model
    if args.window is not None:
        values['window_length'] = args.window
    if args.seed is not None:
        values['seed'] = args.seed
    return ModelConfig.from_dict(values)


def _train_config(args, sections):
    values = dict(sections['train'])
    flags = {'epochs': 'epochs', 'batch_size': 'batch_size',
             'learning_rate': 'learning_rate', 'patience': 'patience', 'seed': 'seed'}
    for attr, key in flags.items():
        value = getattr(args, attr, None)
        if value is not None:
            values[key] = value
    return TrainConfig.from_dict(values)


def _pipeline(args, sections, key, flag=None, default=None):
    value = getattr(args, flag or key, None)
    if value is not None:
        return value
    return sections['pipeline'].get(key, default)


def _emit(text, path=None):
    if path:
        try:
            with open(path, 'w', encoding='utf-8', newline='') as handle:
                handle.write(text)
        except OSError as e:
            raise DataError(f"cannot write {path}: {e}") from e
    else:
        sys.stdout.write(text)


def _metrics_output(reports, fmt, key_name):
    """reports: list of (key, MetricsReport) pairs"""
    if fmt == 'json':
        return json.dumps([dict(report.to_dict(), **{key_name: key}) for key, report in reports],
                          indent=2, sort_keys=True) + '\n'
    if fmt == 'csv':
        lines = [f"{key_name},space,mae,rmse,wape,n"]
        lines += [f"{key},{r.space},{r.mae!r},{r.rmse!r},{r.wape!r},{r.n}" for key, r in reports]
        return '\n'.join(lines) + '\n'
    lines = [f"{key_name:<12}{'space':<12}{'MAE':>14}{'RMSE':>14}{'WAPE':>10}{'n':>8}"]
    lines += [f"{str(key):<12}{r.space:<12}{r.mae:>14.6g}{r.rmse:>14.6g}{r.wape:>10.3f}{r.n:>8}"
              for key, r in reports]
    return '\n'.join(lines) + '\n'


def _checkpoint_test_split(args, sections):
    """Model, scaler, test series and test windows using the checkpoint's own scaler"""
    model, scaler = load_checkpoint(args.checkpoint)
    series = forward_fill(read_series_csv(args.data))
    settings = get_config()
    fraction = _pipeline(args, sections, 'train_fraction', default=settings.TRAIN_FRACTION)
    _, test_series = chrono_split(series, fraction, model.window_length)
    dataset = make_windows(transform(test_series.values, scaler), model.window_length,
                           test_series.timestamps)
    return model, scaler, test_series, dataset


def cmd_ingest(args, sections):
    settings = get_config()
    capacity = _pipeline(args, sections, 'capacity_bps', 'capacity', settings.CAPACITY_BPS)
    interval = _pipeline(args, sections, 'interval_seconds', 'interval', settings.INTERVAL_SECONDS)
    raw = load_telemetry(args.input, capacity_bps=capacity)
    series = telemetry_to_series(raw, interval_seconds=interval,
                                 divide_by_interval=not args.no_interval_divide,
                                 counter_bits=args.counter_bits or settings.COUNTER_BITS)
    logger.info("ingested %d records into %d points (%d missing)",
                len(raw), len(series), series.missing_count())
    if args.output:
        write_series_csv(series, args.output)
    else:
        _emit(series_to_csv_text(series))
    return 0


def cmd_synth(args, sections):
    settings = get_config()
    series = synth_generate(
        args.days,
        samples_per_day=args.samples_per_day or settings.SAMPLES_PER_DAY,
        seed=args.seed if args.seed is not None else 0,
        capacity_bps=_pipeline(args, sections, 'capacity_bps', 'capacity', settings.CAPACITY_BPS),
        missing_rate=args.missing_rate,
    )
    if args.output:
        write_series_csv(series, args.output)
    else:
        _emit(series_to_csv_text(series))
    return 0


def cmd_train(args, sections):
    settings = get_config()
    model_cfg = _model_config(args, sections)
    train_cfg = _train_config(args, sections)
    fraction = _pipeline(args, sections, 'train_fraction', default=settings.TRAIN_FRACTION)

    prepared = prepare_datasets(read_series_csv(args.data), model_cfg.window_length, fraction)
    model, history = train(build_model(model_cfg), prepared.train, train_cfg)
    save_checkpoint(model, prepared.scaler, args.output)
    if args.history:
        write_history_csv(history, args.history)

    summary = {
        'architecture': model.architecture,
        'window_length': model.window_length,
        'epochs_run': len(history),
        'final_train_loss': history.train_loss[-1] if len(history) else None,
        'stopped_early': history.stopped_early,
        'checkpoint': args.output,
    }
    if args.format == 'json':
        _emit(json.dumps(summary, indent=2, sort_keys=True) + '\n')
    elif args.format == 'csv':
        _emit(history.to_csv())
    else:
        _emit(''.join(f"{key:<18}{value}\n" for key, value in summary.items()))
    return 0


def cmd_evaluate(args, sections):
    model, scaler, _, dataset = _checkpoint_test_split(args, sections)
    reports = [(model.architecture, evaluate_model(model, dataset, scaler, space=space))
               for space in ('bps', 'normalized')]
    _emit(_metrics_output(reports, args.format, 'model'), args.output)
    return 0


def cmd_predict(args, sections):
    model, scaler, test_series, _ = _checkpoint_test_split(args, sections)
    frame = prediction_frame(model, test_series, scaler)
    if args.format == 'json':
        text = frame.to_json(orient='records', double_precision=15) + '\n'
    elif args.format == 'table':
        text = frame.to_string(index=False) + '\n'
    else:
        text = frame.to_csv(index=False, lineterminator='\n')
    _emit(text, args.output)
    return 0


def _grid_axis(args, plural, singular):
    """--models/--windows list, or the single common --model/--window, never both"""
    many, one = getattr(args, plural), getattr(args, singular)
    if many and one is not None:
        raise UsageError(f"pass either --{plural} or --{singular}, not both")
    if one is not None:
        return [one]
    return many


def cmd_benchmark(args, sections):
    settings = get_config()
    windows = (_grid_axis(args, 'windows', 'window') or sections['pipeline'].get('windows')
               or list(settings.BENCHMARK_WINDOWS))
    models = _grid_axis(args, 'models', 'model') or ARCHITECTURES
    table = run_benchmark(
        read_series_csv(args.data),
        windows=windows,
        models=models,
        train_cfg=_train_config(args, sections),
        model_overrides=sections['model'],
        seed=args.seed if args.seed is not None else 0,
        train_fraction=_pipeline(args, sections, 'train_fraction', default=settings.TRAIN_FRACTION),
        jobs=args.jobs,
    )
    if args.format == 'json':
        text = table.to_json()
    elif args.format == 'csv':
        text = table.to_csv()
    else:
        text = table.render('bps') + '\n' + table.render('normalized')
    _emit(text, args.output)
    return 0


def cmd_gradcheck(args, sections):
    reports = run_gradient_suite(seed=args.seed if args.seed is not None else 0)
    if args.format == 'json':
        text = json.dumps({name: report.to_dict() for name, report in reports.items()},
                          indent=2, sort_keys=True) + '\n'
    elif args.format == 'csv':
        lines = ['check,passed,max_rel_error,max_abs_error']
        lines += [f"{name},{report.passed},{report.max_rel_error!r},{report.max_abs_error!r}"
                  for name, report in reports.items()]
        text = '\n'.join(lines) + '\n'
    else:
        lines = [f"{name:<28}{'PASS' if report.passed else 'FAIL':<6}"
                 f"rel {report.max_rel_error:.3e}  abs {report.max_abs_error:.3e}"
                 for name, report in reports.items()]
        text = '\n'.join(lines) + '\n'
    _emit(text, args.output)
    return 0 if all(report.passed for report in reports.values()) else 2


def cmd_fgsm(args, sections):
    model, scaler, _, dataset = _checkpoint_test_split(args, sections)
    results = fgsm_robustness(model, dataset, scaler, args.epsilons)
    _emit(_metrics_output(results, args.format, 'epsilon'), args.output)
    return 0


def cmd_describe(args, sections):
    model = build_model(_model_config(args, sections))
    if args.dot:
        text = architecture_to_graphviz(model) + '\n'
    elif args.format == 'json':
        text = json.dumps(generate_parameter_statistics(model), indent=2) + '\n'
    elif args.format == 'csv':
        stats = generate_parameter_statistics(model)
        lines = ['layer,parameters'] + [f"{name},{count}" for name, count in stats['per_layer'].items()]
        text = '\n'.join(lines) + '\n'
    else:
        text = format_architecture_ascii(model) + '\n'
    _emit(text, args.output)
    return 0


COMMANDS = {
    'ingest': cmd_ingest,
    'synth': cmd_synth,
    'train': cmd_train,
    'evaluate': cmd_evaluate,
    'predict': cmd_predict,
    'benchmark': cmd_benchmark,
    'gradcheck': cmd_gradcheck,
    'fgsm': cmd_fgsm,
    'describe': cmd_describe,
}


def _configure_logging(level):
    settings = get_config()
    logging.basicConfig(level=level or settings.LOG_LEVEL, format=settings.LOG_FORMAT,
                        stream=sys.stderr, force=True)


def cli_dispatch(argv):
    """Parse argv, run the subcommand and return the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"{parser.prog}: error: {e.message}\n")
        return exit_code_for(e)
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else 0

    _configure_logging(args.log_level)
    try:
        _check_common_flags(args)
        return COMMANDS[args.command](args, _sections(args))
    except ForecastError as e:
        sys.stderr.write(f"{e!r}\n")
        if e.suggestion:
            sys.stderr.write(f"Suggestion: {e.suggestion}\n")
        return exit_code_for(e)
