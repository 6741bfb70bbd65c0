from .base import Layer, LayerParams, LayerContext, init_uniform
from .core import Dense, Dropout, GlobalAvgPool1D, LayerNorm
from .conv import Conv1D
from .recurrent import SimpleRNN, LSTM, GRU, RecurrentLayer
from .attention import MultiHeadAttention
from .encoder import PositionWiseFFN, TransformerEncoderBlock

__all__ = ['Layer', 'LayerParams', 'LayerContext', 'init_uniform',
           'Dense', 'Dropout', 'GlobalAvgPool1D', 'LayerNorm', 'Conv1D',
           'SimpleRNN', 'LSTM', 'GRU', 'RecurrentLayer', 'MultiHeadAttention',
           'PositionWiseFFN', 'TransformerEncoderBlock']
