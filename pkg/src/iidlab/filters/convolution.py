from dataclasses import dataclass
import numpy as np
from numpy.typing import NDArray
from scipy import ndimage
from ..imaging.image_tensor import ImageTensor
from .filter_exceptions import KernelSizeException
from .kernels import Kernel2D, gaussian_derivative_kernels

# scipy's "mirror" is reflect-101 (d c b | a b c d | c b a), matching numpy's "reflect" pad
_BORDER_MODE = "mirror"


def correlate_planes(planes: NDArray[np.float64], kernel: Kernel2D) -> NDArray[np.float64]:
    """Correlates every (H, W) plane of an (..., H, W, C) array with a kernel, using
    reflect-101 borders. Channels and leading axes are never mixed.

    :param planes: Array whose axes -3 and -2 are rows and columns
    :type planes: NDArray[np.float64]
    :param kernel: The kernel
    :type kernel: Kernel2D
    :return: Same-shape filtered array
    :rtype: NDArray[np.float64]
    """

    height, width = planes.shape[-3], planes.shape[-2]
    if kernel.size > height or kernel.size > width:
        raise KernelSizeException(kernel.size, (height, width))
    weights = kernel.taps.reshape((1,) * (planes.ndim - 3) + kernel.taps.shape + (1,))
    return ndimage.correlate(planes, weights, mode=_BORDER_MODE)


def convolve2d(map: ImageTensor, k: Kernel2D) -> ImageTensor:
    """Same-size 2D filtering of every channel: correlation convention (no kernel flip)
    with reflect-101 borders.

    :param map: Input image or feature map
    :type map: ImageTensor
    :param k: Kernel, no larger than the map in either dimension
    :type k: Kernel2D
    :return: Filtered map of the same shape
    :rtype: ImageTensor
    """

    return ImageTensor(correlate_planes(map.data, k))


@dataclass(frozen=True, slots=True)
class GradientField:
    """Directional derivatives and their per-channel magnitude.

    :param gx: Derivative along columns
    :type gx: ImageTensor
    :param gy: Derivative along rows
    :type gy: ImageTensor
    :param magnitude: sqrt(gx^2 + gy^2)
    :type magnitude: ImageTensor
    """

    gx: ImageTensor
    gy: ImageTensor
    magnitude: ImageTensor

    def __repr__(self):
        return f"GradientField(shape={self.gx.shape!r})"


def gradient_arrays(planes: NDArray[np.float64],
                    sigma: float) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Derivative-of-Gaussian x and y responses of an (..., H, W, C) array.
    """

    kx, ky = gaussian_derivative_kernels(sigma)
    return correlate_planes(planes, kx), correlate_planes(planes, ky)


def spatial_gradient(map: ImageTensor, sigma: float = 1.0) -> GradientField:
    """Derivative-of-Gaussian gradient of every channel.

    :param map: Input map
    :type map: ImageTensor
    :param sigma: Gaussian scale in pixels
    :type sigma: float
    :return: x/y components and magnitude
    :rtype: GradientField
    """

    gx, gy = gradient_arrays(map.data, sigma)
    return GradientField(gx=ImageTensor(gx), gy=ImageTensor(gy),
                         magnitude=ImageTensor(np.hypot(gx, gy)))
