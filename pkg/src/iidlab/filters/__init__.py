from .kernels import Kernel2D, gaussian_kernel, gaussian_derivative_kernels, kernel_size
from .convolution import (GradientField, convolve2d, correlate_planes, gradient_arrays,
                          spatial_gradient)
from .filter_exceptions import KernelSizeException

__all__ = ['Kernel2D', 'gaussian_kernel', 'gaussian_derivative_kernels', 'kernel_size',
           'GradientField', 'convolve2d', 'correlate_planes', 'gradient_arrays',
           'spatial_gradient', 'KernelSizeException']
