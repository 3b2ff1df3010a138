from dataclasses import dataclass
from enum import Enum
import numpy as np
from numpy.typing import NDArray
from ..filters.convolution import gradient_arrays
from ..imaging.image_tensor import ImageTensor
from ..imaging.imaging_exceptions import ChannelCountException

DEFAULT_SIGMA = 1.0
DEFAULT_EPS = 1e-3
DEFAULT_SG_THRESHOLD = 0.1


class Channel(Enum):
    """Colour channels of an RGB image, valued by their array index.
    """

    R = 0
    G = 1
    B = 2

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"<Channel.{self.name}: {self.value}>"


# (numerator, denominator) of each RRG channel: J(R,G), J(R,B), J(B,G)
RRG_PAIRS = ((Channel.R, Channel.G), (Channel.R, Channel.B), (Channel.B, Channel.G))

# RRG channel indices averaged into each M_RRG channel, in the order they are written
# for R: J(R,G), J(R,B); G: J(G,B), J(G,R); B: J(B,G), J(B,R)
_MASK_SOURCES = ((0, 1), (2, 0), (2, 1))

# RAM pairs per output channel: R: (R,G),(R,B); G: (G,R),(G,B); B: (B,G),(B,R)
_RAM_PAIRS = (
    ((Channel.R, Channel.G), (Channel.R, Channel.B)),
    ((Channel.G, Channel.R), (Channel.G, Channel.B)),
    ((Channel.B, Channel.G), (Channel.B, Channel.R)),
)


@dataclass(frozen=True, slots=True)
class RrgMap:
    """Reflectance ratio gradient magnitudes, channels ordered |∇J(R,G)|, |∇J(R,B)|, |∇J(B,G)|.
    """

    data: ImageTensor

    def __repr__(self):
        return f"RrgMap(shape={self.data.shape!r})"


@dataclass(frozen=True, slots=True)
class RamMap:
    """Reflectance approximation map: per-channel likelihood in [0, 1] that the channel
    dominates the reflectance. Greyscale pixels map to zero.
    """

    data: ImageTensor

    def __repr__(self):
        return f"RamMap(shape={self.data.shape!r})"


@dataclass(frozen=True, slots=True)
class SgMap:
    """Shading gradient: per-channel x/y components of ∇ ln I, zeroed wherever the
    channel's validity mask M_RRG reaches the threshold. The mask is kept.
    """

    gx: ImageTensor
    gy: ImageTensor
    mask: ImageTensor
    threshold: float

    def __repr__(self):
        return f"SgMap(shape={self.gx.shape!r}, threshold={self.threshold!r})"


def _channel_index(channel: Channel | int) -> int:
    if isinstance(channel, Channel):
        return channel.value
    if isinstance(channel, (int, np.integer)) and 0 <= channel <= 2:
        return int(channel)
    raise ChannelCountException(3, (0, 1, 2), f"Invalid channel index {channel!r}; expected 0, 1 or 2")


def _require_rgb(images: NDArray[np.float64]) -> None:
    if images.shape[-1] != 3:
        raise ChannelCountException(images.shape[-1], (3,))


def _clamped_log(values: NDArray[np.float64], eps: float) -> NDArray[np.float64]:
    if eps <= 0:
        raise ValueError("Parameter 'eps' must be positive.")
    return np.log(np.clip(values, eps, 1.0))


def log_ratio_array(images: NDArray[np.float64], a: Channel | int, b: Channel | int,
                    eps: float = DEFAULT_EPS) -> NDArray[np.float64]:
    """ln(clamp(I_a) / clamp(I_b)) over an (..., H, W, 3) array, keeping a trailing
    channel axis of length 1.
    """

    _require_rgb(images)
    ia, ib = _channel_index(a), _channel_index(b)
    return (_clamped_log(images[..., ia:ia + 1], eps)
            - _clamped_log(images[..., ib:ib + 1], eps))


def rrg_array(images: NDArray[np.float64], sigma: float = DEFAULT_SIGMA,
              eps: float = DEFAULT_EPS) -> NDArray[np.float64]:
    """Gradient magnitudes of the three log-ratio maps of an (..., H, W, 3) array.
    """

    ratios = np.concatenate([log_ratio_array(images, a, b, eps) for a, b in RRG_PAIRS], axis=-1)
    gx, gy = gradient_arrays(ratios, sigma)
    return np.hypot(gx, gy)


def mask_from_rrg(rrg: NDArray[np.float64]) -> NDArray[np.float64]:
    """Averages the two RRG magnitudes that involve each colour channel.
    """

    return np.concatenate([(rrg[..., i:i + 1] + rrg[..., j:j + 1]) / 2 for i, j in _MASK_SOURCES],
                          axis=-1)


def ram_array(images: NDArray[np.float64], eps: float = DEFAULT_EPS) -> NDArray[np.float64]:
    """Reflectance approximation map of an (..., H, W, 3) array.
    """

    _require_rgb(images)
    channels = []
    for first, second in _RAM_PAIRS:
        j1 = np.clip(log_ratio_array(images, *first, eps), 0.0, 1.0)
        j2 = np.clip(log_ratio_array(images, *second, eps), 0.0, 1.0)
        channels.append((j1 + j2) / 2)
    return np.concatenate(channels, axis=-1)


def sg_arrays(images: NDArray[np.float64], sigma: float = DEFAULT_SIGMA, eps: float = DEFAULT_EPS,
              threshold: float = DEFAULT_SG_THRESHOLD
              ) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
    """Masked shading-gradient components and the mask, for an (..., H, W, 3) array.
    """

    _require_rgb(images)
    mask = mask_from_rrg(rrg_array(images, sigma, eps))
    gx, gy = gradient_arrays(_clamped_log(images, eps), sigma)
    valid = mask < threshold
    return np.where(valid, gx, 0.0), np.where(valid, gy, 0.0), mask


def sg_reduced_arrays(images: NDArray[np.float64], sigma: float = DEFAULT_SIGMA,
                      eps: float = DEFAULT_EPS, threshold: float = DEFAULT_SG_THRESHOLD
                      ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Channel-reduced (product over R, G, B) shading-gradient components.
    """

    gx, gy, _ = sg_arrays(images, sigma, eps, threshold)
    return np.prod(gx, axis=-1, keepdims=True), np.prod(gy, axis=-1, keepdims=True)


def log_ratio(img: ImageTensor, a: Channel | int, b: Channel | int,
              eps: float = DEFAULT_EPS) -> ImageTensor:
    """Natural log of the ratio between two channels, each clamped into [eps, 1].

    :param img: 3-channel image
    :type img: ImageTensor
    :param a: Numerator channel
    :type a: Channel | int
    :param b: Denominator channel
    :type b: Channel | int
    :param eps: Lower clamp applied before the ratio
    :type eps: float
    :return: Single-channel log-ratio map
    :rtype: ImageTensor
    """

    return ImageTensor(log_ratio_array(img.data, a, b, eps))


def f_rrg(img: ImageTensor, sigma: float = DEFAULT_SIGMA, eps: float = DEFAULT_EPS) -> RrgMap:
    """Reflectance ratio gradient. Shading cancels inside each ratio, so the map is
    invariant to any positive per-pixel scaling of all three channels.

    :param img: 3-channel image
    :type img: ImageTensor
    :param sigma: Derivative-of-Gaussian scale
    :type sigma: float
    :param eps: Lower clamp applied before every log
    :type eps: float
    :return: The three RRG magnitudes
    :rtype: RrgMap
    """

    return RrgMap(ImageTensor(rrg_array(img.data, sigma, eps)))


def f_ram(img: ImageTensor, eps: float = DEFAULT_EPS) -> RamMap:
    """Reflectance approximation map built from log ratios clipped into [0, 1].

    :param img: 3-channel image
    :type img: ImageTensor
    :param eps: Lower clamp applied before every log
    :type eps: float
    :return: The map
    :rtype: RamMap
    """

    return RamMap(ImageTensor(ram_array(img.data, eps)))


def m_rrg(img: ImageTensor, sigma: float = DEFAULT_SIGMA, eps: float = DEFAULT_EPS) -> ImageTensor:
    """Per-channel validity mask for the shading gradient; a channel is trusted where
    its value is below the SG threshold.

    :param img: 3-channel image
    :type img: ImageTensor
    :param sigma: Derivative-of-Gaussian scale
    :type sigma: float
    :param eps: Lower clamp applied before every log
    :type eps: float
    :return: 3-channel mask
    :rtype: ImageTensor
    """

    return ImageTensor(mask_from_rrg(rrg_array(img.data, sigma, eps)))


def f_sg(img: ImageTensor, sigma: float = DEFAULT_SIGMA, eps: float = DEFAULT_EPS,
         threshold: float = DEFAULT_SG_THRESHOLD) -> SgMap:
    """Shading gradient: ∇ ln I per channel where M_RRG < threshold, exactly 0 elsewhere.

    :param img: 3-channel image
    :type img: ImageTensor
    :param sigma: Derivative-of-Gaussian scale
    :type sigma: float
    :param eps: Lower clamp applied before every log
    :type eps: float
    :param threshold: Mask threshold
    :type threshold: float
    :return: Masked components and the mask
    :rtype: SgMap
    """

    gx, gy, mask = sg_arrays(img.data, sigma, eps, threshold)
    return SgMap(gx=ImageTensor(gx), gy=ImageTensor(gy), mask=ImageTensor(mask),
                 threshold=threshold)


def sg_reduce(sg: SgMap) -> tuple[ImageTensor, ImageTensor]:
    """Reduces the channel dimension of a shading gradient by multiplying the channels.

    :param sg: Shading gradient
    :type sg: SgMap
    :return: (x component, y component), each single-channel
    :rtype: tuple[ImageTensor, ImageTensor]
    """

    return (ImageTensor(np.prod(sg.gx.data, axis=2)),
            ImageTensor(np.prod(sg.gy.data, axis=2)))


@dataclass(frozen=True, slots=True)
class FeatureMaps:
    """All physics-derived maps of one image.
    """

    rrg: RrgMap
    ram: RamMap
    m_rrg: ImageTensor
    sg: SgMap

    def __repr__(self):
        return f"FeatureMaps(shape={self.rrg.data.shape!r})"


def featurize(img: ImageTensor, sigma: float = DEFAULT_SIGMA, eps: float = DEFAULT_EPS,
              threshold: float = DEFAULT_SG_THRESHOLD) -> FeatureMaps:
    img.require_channels(3)
    rrg = rrg_array(img.data, sigma, eps)
    gx, gy, mask = sg_arrays(img.data, sigma, eps, threshold)
    sg = SgMap(gx=ImageTensor(gx), gy=ImageTensor(gy), mask=ImageTensor(mask), threshold=threshold)
    return FeatureMaps(rrg=RrgMap(ImageTensor(rrg)), ram=RamMap(ImageTensor(ram_array(img.data, eps))),
                       m_rrg=ImageTensor(mask), sg=sg)
