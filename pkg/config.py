import json
import os

from utils.errors import ConfigError


class Config:
    """Base configuration"""
    LOG_LEVEL = os.environ.get('FORECAST_LOG_LEVEL') or 'WARNING'
    LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

    # Telemetry settings
    INTERVAL_SECONDS = 300
    SAMPLES_PER_DAY = 288
    CAPACITY_BPS = 40e9
    COUNTER_BITS = 64

    # Pipeline settings
    TRAIN_FRACTION = 0.8
    BENCHMARK_WINDOWS = (6, 12)

    # Gradient check settings
    GRADCHECK_TOLERANCE = 1e-4
    GRADCHECK_ABS_FLOOR = 1e-7
    FINITE_DIFF_STEP = 1e-5

    # Checkpoint settings
    CHECKPOINT_FORMAT_VERSION = 1


class DevelopmentConfig(Config):
    """Development configuration"""
    LOG_LEVEL = 'INFO'


class ProductionConfig(Config):
    """Production configuration"""
    LOG_LEVEL = 'WARNING'


class TestingConfig(Config):
    """Testing configuration"""
    LOG_LEVEL = 'DEBUG'
    BENCHMARK_WINDOWS = (6,)


# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': ProductionConfig
}


def get_config(config_name=None):
    """Get configuration based on environment"""
    if config_name is None:
        config_name = os.environ.get('FORECAST_ENV', 'default')
    return config.get(config_name, config['default'])


CONFIG_SECTIONS = ('model', 'train', 'pipeline')
PIPELINE_KEYS = ('train_fraction', 'interval_seconds', 'capacity_bps', 'windows')


def load_config_file(path):
    """
    Read a --config JSON document.
    Returns a dict with the 'model', 'train' and 'pipeline' sections (missing ones empty).
    """
    try:
        with open(path, encoding='utf-8') as handle:
            document = json.load(handle)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from e

    if not isinstance(document, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")

    unknown = set(document) - set(CONFIG_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}",
                          suggestion=f"use only {list(CONFIG_SECTIONS)}")

    sections = {name: dict(document.get(name) or {}) for name in CONFIG_SECTIONS}
    unknown_keys = set(sections['pipeline']) - set(PIPELINE_KEYS)
    if unknown_keys:
        raise ConfigError(f"unknown pipeline keys: {sorted(unknown_keys)}")
    return sections
