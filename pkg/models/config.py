from dataclasses import asdict, dataclass, fields

from utils.errors import ConfigError

ARCHITECTURES = ('rnn', 'lstm', 'gru', 'convlstmtransnet')
BASELINES = ('rnn', 'lstm', 'gru')


@dataclass
class ModelConfig:
    """Architecture and sizes of one forecasting model"""
    architecture: str = 'convlstmtransnet'
    window_length: int = 6
    conv_filters: int = 64
    conv_kernel: int = 3
    conv_padding: str = 'same'
    recurrent_units: int = 64
    heads: int = 4
    d_ff: int = 128
    dropout_rate: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise ConfigError(f"unknown architecture '{self.architecture}'",
                              suggestion=f"choose one of {list(ARCHITECTURES)}")
        for name in ('window_length', 'conv_filters', 'conv_kernel',
                     'recurrent_units', 'heads', 'd_ff'):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigError(f"dropout_rate must lie in [0, 1), got {self.dropout_rate}")
        if self.conv_padding not in ('same', 'valid'):
            raise ConfigError(f"conv_padding must be 'same' or 'valid', got '{self.conv_padding}'")
        if self.architecture == 'convlstmtransnet':
            if self.recurrent_units % self.heads:
                raise ConfigError(
                    f"recurrent_units {self.recurrent_units} is not divisible by {self.heads} heads",
                    suggestion="the LSTM width is the encoder width and must split evenly across heads")
            if self.conv_padding == 'valid' and self.window_length < self.conv_kernel:
                raise ConfigError(f"window_length {self.window_length} is shorter than "
                                  f"conv_kernel {self.conv_kernel} under valid padding")

    def replace(self, **changes):
        values = self.to_dict()
        values.update(changes)
        return ModelConfig(**values)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, values):
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"unknown model config keys: {sorted(unknown)}")
        return cls(**values)
