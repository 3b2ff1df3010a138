from .adam import AdamState, adam_step
from .config import DEFAULT_DECAY, TrainConfig, load_run_config, lr_schedule, save_run_config
from .trainer import (CHECKPOINT_PATTERN, CONFIG_FILE, FINAL_WEIGHTS, LOG_FILE, Decomposer, Trainer,
                      decompose, save_checkpoint, train, train_step)
from .training_log import LOG_COLUMNS, LogRow, TrainingLog, read_log, truncate_log
from .training_exceptions import EmptyDatasetException, NumericalInstabilityException

__all__ = ['AdamState', 'adam_step', 'DEFAULT_DECAY', 'TrainConfig', 'load_run_config',
           'lr_schedule', 'save_run_config', 'CHECKPOINT_PATTERN', 'CONFIG_FILE', 'FINAL_WEIGHTS',
           'LOG_FILE', 'Decomposer', 'Trainer', 'decompose', 'save_checkpoint', 'train',
           'train_step', 'LOG_COLUMNS', 'LogRow', 'TrainingLog', 'read_log', 'truncate_log',
           'EmptyDatasetException', 'NumericalInstabilityException']
