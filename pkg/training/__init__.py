from .config import TrainConfig
from .losses import mse_loss
from .optimizer import AdamState, adam_step
from .trainer import (TrainingHistory, train, evaluate_model, predict_dataset,
                      dataset_loss, write_history_csv)

__all__ = ['TrainConfig', 'mse_loss', 'AdamState', 'adam_step', 'TrainingHistory',
           'train', 'evaluate_model', 'predict_dataset', 'dataset_loss', 'write_history_csv']
