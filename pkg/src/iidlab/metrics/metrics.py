import math
import numpy as np
from .metric_exceptions import WindowSizeException
from ..filters.convolution import correlate_planes
from ..filters.kernels import gaussian_kernel
from ..imaging.image_tensor import ImageTensor

# metrics are reported on the 8-bit scale
PIXEL_SCALE = 255.0

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
SSIM_DYNAMIC_RANGE = 1.0


def _squared_error(a: ImageTensor, b: ImageTensor, image_id: str | None) -> float:
    a.require_same_shape(b, image_id)
    return float(np.mean((PIXEL_SCALE * a.data - PIXEL_SCALE * b.data) ** 2))


def mse(a: ImageTensor, b: ImageTensor, image_id: str | None = None) -> float:
    return _squared_error(a, b, image_id)


def rmse(a: ImageTensor, b: ImageTensor, image_id: str | None = None) -> float:
    """Root mean squared error on the 0-255 scale.

    :param a: First image
    :type a: ImageTensor
    :param b: Second image, same shape
    :type b: ImageTensor
    :param image_id: Name used in the shape mismatch error
    :type image_id: optional str
    :return: RMSE
    :rtype: float
    """

    return math.sqrt(_squared_error(a, b, image_id))


def psnr(a: ImageTensor, b: ImageTensor, image_id: str | None = None) -> float:
    """Peak signal-to-noise ratio in dB on the 0-255 scale; identical images give
    `math.inf`.

    :param a: First image
    :type a: ImageTensor
    :param b: Second image, same shape
    :type b: ImageTensor
    :param image_id: Name used in the shape mismatch error
    :type image_id: optional str
    :return: PSNR
    :rtype: float
    """

    error = _squared_error(a, b, image_id)
    if error == 0:
        return math.inf
    return 10.0 * math.log10(PIXEL_SCALE ** 2 / error)


def ssim(a: ImageTensor, b: ImageTensor, image_id: str | None = None) -> float:
    """Mean structural similarity: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
    K2 = 0.03, dynamic range 1. Local statistics are only taken where the window fits
    inside the image; the result is averaged over positions and then channels.

    :param a: First image
    :type a: ImageTensor
    :param b: Second image, same shape
    :type b: ImageTensor
    :param image_id: Name used in the shape mismatch error
    :type image_id: optional str
    :return: SSIM in [-1, 1]
    :rtype: float
    """

    a.require_same_shape(b, image_id)
    if a.height < SSIM_WINDOW or a.width < SSIM_WINDOW:
        raise WindowSizeException(a.shape, SSIM_WINDOW)
    window = gaussian_kernel(SSIM_SIGMA, SSIM_WINDOW)
    c1 = (SSIM_K1 * SSIM_DYNAMIC_RANGE) ** 2
    c2 = (SSIM_K2 * SSIM_DYNAMIC_RANGE) ** 2
    half = SSIM_WINDOW // 2
    valid = (slice(half, a.height - half), slice(half, a.width - half))

    def local_mean(values):
        return correlate_planes(values, window)[valid]

    x, y = a.data, b.data
    mu_x, mu_y = local_mean(x), local_mean(y)
    var_x = local_mean(x * x) - mu_x ** 2
    var_y = local_mean(y * y) - mu_y ** 2
    cov = local_mean(x * y) - mu_x * mu_y
    index = (((2 * mu_x * mu_y + c1) * (2 * cov + c2))
             / ((mu_x ** 2 + mu_y ** 2 + c1) * (var_x + var_y + c2)))
    return float(index.mean(axis=(0, 1)).mean())
