from dataclasses import dataclass
import math
import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True, slots=True, eq=False)
class Kernel2D:
    """Square, odd-sized correlation kernel.

    :param taps: size x size real weights; taps[r, c] multiplies the pixel at offset
        (r - size // 2, c - size // 2)
    :type taps: NDArray[np.float64]
    """

    taps: NDArray[np.float64]

    def __post_init__(self):
        taps = np.array(self.taps, dtype=np.float64)
        if taps.ndim != 2 or taps.shape[0] != taps.shape[1]:
            raise ValueError("Parameter 'taps' must be a square 2D array.")
        if taps.shape[0] % 2 == 0:
            raise ValueError("Parameter 'taps' must have an odd size.")
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    def __repr__(self):
        return f"Kernel2D(size={self.size!r}, sum={float(self.taps.sum()):.3g})"

    @property
    def size(self) -> int:
        return self.taps.shape[0]

    @property
    def radius(self) -> int:
        return self.size // 2

    def transposed(self) -> "Kernel2D":
        return Kernel2D(self.taps.T)


def kernel_size(sigma: float) -> int:
    """Support of a Gaussian-family kernel: 2 * ceil(3 * sigma) + 1.
    """

    return 2 * math.ceil(3 * sigma) + 1


def _offsets(sigma: float) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    radius = kernel_size(sigma) // 2
    axis = np.arange(-radius, radius + 1, dtype=np.float64)
    dy, dx = np.meshgrid(axis, axis, indexing="ij")
    return dx, dy


def gaussian_kernel(sigma: float, size: int | None = None) -> Kernel2D:
    """Normalized 2D Gaussian (taps sum to 1).

    :param sigma: Standard deviation in pixels
    :type sigma: float
    :param size: Optional explicit odd size; defaults to 2 * ceil(3 * sigma) + 1
    :type size: optional int
    :return: The smoothing kernel
    :rtype: Kernel2D
    """

    if sigma <= 0:
        raise ValueError("Parameter 'sigma' must be positive.")
    if size is None:
        size = kernel_size(sigma)
    if size <= 0 or size % 2 == 0:
        raise ValueError("Parameter 'size' must be a positive odd integer.")
    axis = np.arange(size, dtype=np.float64) - size // 2
    profile = np.exp(-axis ** 2 / (2 * sigma ** 2))
    taps = np.outer(profile, profile)
    return Kernel2D(taps / taps.sum())


def gaussian_derivative_kernels(sigma: float) -> tuple[Kernel2D, Kernel2D]:
    """Derivative-of-Gaussian kernels along x (columns) and y (rows).

    The x taps are proportional to -(x / sigma^2) G(x, y) and scaled so that correlating
    with the unit ramp f(x, y) = x gives exactly 1; the y kernel is the transpose. Taps
    are antisymmetric, so they sum to zero and annihilate constants.

    :param sigma: Standard deviation in pixels
    :type sigma: float
    :return: (x kernel, y kernel)
    :rtype: tuple[Kernel2D, Kernel2D]
    """

    if sigma <= 0:
        raise ValueError("Parameter 'sigma' must be positive.")
    dx, dy = _offsets(sigma)
    gauss = np.exp(-(dx ** 2 + dy ** 2) / (2 * sigma ** 2))
    raw = -(dx / sigma ** 2) * gauss

    # correlation with f = x yields sum(taps * dx); normalize that to 1
    taps = raw / np.sum(raw * dx)

    # exact antisymmetry, so the taps cancel to zero in floating point
    radius = taps.shape[1] // 2
    taps[:, :radius] = -taps[:, :radius:-1]
    taps[:, radius] = 0.0

    gx = Kernel2D(taps)
    return gx, gx.transposed()
