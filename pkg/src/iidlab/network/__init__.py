from .config import Activation, LayerSpec, NetConfig
from .model import MIN_INPUT_SIZE, NetworkParams, build, expected_shapes, forward, from_arrays
from .weights import (WEIGHT_MAGIC, WeightFile, load_weights, read_weight_file, save_weights,
                      write_weight_file)
from .network_exceptions import (ChecksumMismatchException, ConfigMismatchException,
                                 InputSizeException, WeightFormatException)

__all__ = ['Activation', 'LayerSpec', 'NetConfig', 'MIN_INPUT_SIZE', 'NetworkParams', 'build',
           'expected_shapes', 'forward', 'from_arrays', 'WEIGHT_MAGIC', 'WeightFile',
           'load_weights', 'read_weight_file', 'save_weights', 'write_weight_file',
           'ChecksumMismatchException', 'ConfigMismatchException', 'InputSizeException',
           'WeightFormatException']
