"""
Checkpoint files: one JSON document

    {"format_version": 1, "architecture": "...", "config": {...},
     "scaler": {"min": ..., "max": ...},
     "params": {"<name>": {"shape": [...], "data": [... row-major ...]}}}

Floats are written with Python's shortest round-trip repr rather than a
fixed 17 significant digits, so load(save(model)) reproduces every
parameter bit for bit and save/load/save is byte-identical.
"""
import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np

from data_pipeline.scaling import ScalerParams
from utils.errors import CheckpointError, ForecastError
from .architectures import build_model
from .config import ModelConfig

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass
class ModelCheckpoint:
    config: ModelConfig
    scaler: ScalerParams
    params: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    @classmethod
    def from_model(cls, model, scaler):
        params = {name: np.array(value, copy=True) for name, value in model.parameters().items()}
        return cls(config=model.config, scaler=scaler, params=params)

    def to_dict(self):
        return {
            'format_version': self.format_version,
            'architecture': self.config.architecture,
            'config': self.config.to_dict(),
            'scaler': self.scaler.to_dict(),
            'params': {
                name: {'shape': list(value.shape), 'data': value.ravel().tolist()}
                for name, value in self.params.items()
            },
        }

    @classmethod
    def from_dict(cls, document):
        if not isinstance(document, dict):
            raise CheckpointError("checkpoint must be a JSON object")
        missing = {'format_version', 'architecture', 'config', 'scaler', 'params'} - set(document)
        if missing:
            raise CheckpointError(f"checkpoint is missing keys {sorted(missing)}")
        version = document['format_version']
        if version != FORMAT_VERSION:
            raise CheckpointError(f"unsupported checkpoint format_version {version!r}",
                                  suggestion=f"this build reads version {FORMAT_VERSION}")
        for key in ('config', 'scaler', 'params'):
            if not isinstance(document[key], dict):
                raise CheckpointError(f"checkpoint '{key}' must be a JSON object, "
                                      f"got {type(document[key]).__name__}")
        try:
            config = ModelConfig.from_dict(document['config'])
            scaler = ScalerParams.from_dict(document['scaler'])
        except (ForecastError, TypeError) as e:
            raise CheckpointError(f"invalid checkpoint config or scaler: {e}") from e
        if config.architecture != document['architecture']:
            raise CheckpointError(f"architecture '{document['architecture']}' disagrees with "
                                  f"config architecture '{config.architecture}'")

        params = {}
        for name, entry in document['params'].items():
            if not isinstance(entry, dict):
                raise CheckpointError(f"parameter '{name}' must be an object with shape and data")
            try:
                shape = tuple(int(dim) for dim in entry['shape'])
                data = np.asarray(entry['data'], dtype=np.float64)
            except (KeyError, TypeError, ValueError) as e:
                raise CheckpointError(f"parameter '{name}' is malformed") from e
            if data.ndim != 1 or data.size != int(np.prod(shape)):
                raise CheckpointError(f"parameter '{name}' holds {data.size} values "
                                      f"for shape {list(shape)}")
            if not np.all(np.isfinite(data)):
                raise CheckpointError(f"parameter '{name}' contains non-finite values")
            params[name] = data.reshape(shape)
        return cls(config=config, scaler=scaler, params=params, format_version=version)

    def to_model(self):
        """Build the architecture and load the parameters after checking names and shapes"""
        model = build_model(self.config)
        expected = model.parameter_shapes()
        missing = [name for name in expected if name not in self.params]
        extra = [name for name in self.params if name not in expected]
        if missing or extra:
            raise CheckpointError(f"parameter names do not match {self.config.architecture}: "
                                  f"missing {missing}, unexpected {extra}")
        for name, shape in expected.items():
            if self.params[name].shape != shape:
                raise CheckpointError(f"parameter '{name}' has shape {list(self.params[name].shape)}, "
                                      f"expected {list(shape)}")
        model.set_parameters(self.params)
        return model


def checkpoint_text(model, scaler):
    document = ModelCheckpoint.from_model(model, scaler).to_dict()
    return json.dumps(document, separators=(',', ':')) + '\n'


def save_checkpoint(model, scaler, path):
    """Write the checkpoint atomically (temp file + rename)"""
    text = checkpoint_text(model, scaler)
    tmp_path = f"{path}.tmp"
    try:
        with open(tmp_path, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except OSError as e:
        raise CheckpointError(f"cannot write checkpoint {path}: {e}") from e
    logger.info("saved %s checkpoint to %s", model.architecture, path)


def load_checkpoint(path):
    """Returns (model, scaler); a checkpoint that fails any check yields no model"""
    try:
        with open(path, encoding='utf-8') as handle:
            document = json.load(handle)
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise CheckpointError(f"cannot parse checkpoint {path}: {e}") from e
    checkpoint = ModelCheckpoint.from_dict(document)
    return checkpoint.to_model(), checkpoint.scaler
