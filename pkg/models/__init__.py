from .config import ModelConfig, ARCHITECTURES, BASELINES
from .architectures import ForecastModel, build_model, forward_predict
from .checkpoint import (ModelCheckpoint, save_checkpoint, load_checkpoint,
                         checkpoint_text, FORMAT_VERSION)
from .adversarial import fgsm_perturb, fgsm_robustness, input_gradient

__all__ = ['ModelConfig', 'ARCHITECTURES', 'BASELINES', 'ForecastModel', 'build_model',
           'forward_predict', 'ModelCheckpoint', 'save_checkpoint', 'load_checkpoint',
           'checkpoint_text', 'FORMAT_VERSION', 'fgsm_perturb', 'fgsm_robustness',
           'input_gradient']
