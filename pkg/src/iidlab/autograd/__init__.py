from .tensor import Graph, Tensor, as_tensor, backward
from .ops import (SIGMOID_BOUND, abs, add, channel_max, concat, conv2d, exp, fixed_conv2d, hypot,
                  leaky_relu, log, mean, mul, reflection_pad, scalar_mul, select_channel, sigmoid, sub)
from .grad_check import GradCheckReport, grad_check
from .autograd_exceptions import (NonPositiveLogException, NonScalarLossException,
                                  ShapeMismatchException)

__all__ = ['Graph', 'Tensor', 'as_tensor', 'backward', 'SIGMOID_BOUND', 'abs', 'add', 'channel_max', 'concat',
           'conv2d', 'exp', 'fixed_conv2d', 'hypot', 'leaky_relu', 'log', 'mean', 'mul',
           'reflection_pad', 'scalar_mul', 'select_channel', 'sigmoid', 'sub', 'GradCheckReport',
           'grad_check', 'NonPositiveLogException', 'NonScalarLossException',
           'ShapeMismatchException']
