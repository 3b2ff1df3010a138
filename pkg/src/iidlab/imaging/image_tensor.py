from collections.abc import Iterator, Sequence
from dataclasses import dataclass
import numpy as np
from numpy.typing import ArrayLike, NDArray
from .imaging_exceptions import ChannelCountException, ImageShapeMismatchException


class ImageTensor:
    """Immutable H x W x C container of real intensities. Used for images, reflectance,
    shading and every derived feature map. Channel order is R, G, B for 3-channel data.

    Values are only required to lie in [0, 1] after loading or normalizing; feature maps
    such as signed gradients are stored in the same container.

    :param data: Array of shape (H, W) or (H, W, C) with C in {1, 3}
    :type data: ArrayLike
    """

    __slots__ = "_data",

    _VALID_CHANNELS = (1, 3)

    def __init__(self, data: ArrayLike):
        array = np.array(data, dtype=np.float64)
        if array.ndim == 2:
            array = array[:, :, np.newaxis]
        if array.ndim != 3:
            raise ValueError(f"Parameter 'data' must be 2D or 3D, got {array.ndim} dimensions.")
        if array.shape[2] not in self._VALID_CHANNELS:
            raise ChannelCountException(array.shape[2], self._VALID_CHANNELS)
        if array.shape[0] == 0 or array.shape[1] == 0:
            raise ValueError("Parameter 'data' must have a non-empty spatial extent.")
        array.setflags(write=False)
        self._data = array

    def __repr__(self):
        return (f"{self.__class__.__name__}(height={self.height!r}, width={self.width!r}, "
                f"channels={self.channels!r})")

    def __str__(self):
        return (
            f"--- Image Tensor ---\n"
            f"  Size:     {self.height}x{self.width}x{self.channels}\n"
            f"  Range:    [{self._data.min():.4f}, {self._data.max():.4f}]"
        )

    @classmethod
    def from_array(cls, data: ArrayLike) -> "ImageTensor":
        return cls(data)

    @property
    def data(self) -> NDArray[np.float64]:
        return self._data

    @property
    def height(self) -> int:
        return self._data.shape[0]

    @property
    def width(self) -> int:
        return self._data.shape[1]

    @property
    def channels(self) -> int:
        return self._data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self._data.shape

    @property
    def is_normalized(self) -> bool:
        return bool(np.all(self._data >= 0.0) and np.all(self._data <= 1.0))

    def channel(self, index: int) -> "ImageTensor":
        """Returns one channel as a single-channel image.

        :param index: Channel index (0=R, 1=G, 2=B)
        :type index: int
        :return: The selected channel
        :rtype: ImageTensor
        """

        if not 0 <= index < self.channels:
            raise ChannelCountException(self.channels, (index + 1,),
                                        f"Channel index {index} out of range for a "
                                        f"{self.channels}-channel image")
        return ImageTensor(self._data[:, :, index])

    def clipped(self) -> "ImageTensor":
        """Returns a copy with every value clipped into [0, 1].
        """

        return ImageTensor(np.clip(self._data, 0.0, 1.0))

    def require_channels(self, channels: int) -> None:
        if self.channels != channels:
            raise ChannelCountException(self.channels, (channels,))

    def require_same_shape(self, other: "ImageTensor", image_id: str | None = None) -> None:
        if self.shape != other.shape:
            raise ImageShapeMismatchException(self.shape, other.shape, image_id)


@dataclass(frozen=True, slots=True)
class Patch:
    """A square crop of a source image.

    :param source_id: Identifier of the image the patch was cut from
    :type source_id: str
    :param origin: (row, col) of the top-left pixel in the source image
    :type origin: tuple[int, int]
    :param tensor: The patch contents
    :type tensor: ImageTensor
    """

    source_id: str
    origin: tuple[int, int]
    tensor: ImageTensor

    def __repr__(self):
        return (f"Patch(source_id={self.source_id!r}, origin={self.origin!r}, "
                f"size={self.tensor.height}x{self.tensor.width})")

    def __iter__(self) -> Iterator[str | tuple[int, int] | ImageTensor]:
        return iter((self.source_id, self.origin, self.tensor))


def channel_max(img: ImageTensor) -> ImageTensor:
    """Per-pixel maximum over the R, G and B channels.

    :param img: A 3-channel image
    :type img: ImageTensor
    :return: Single-channel map of the per-pixel channel maximum
    :rtype: ImageTensor
    """

    img.require_channels(3)
    return ImageTensor(img.data.max(axis=2))


def stack_batch(images: Sequence[ImageTensor]) -> NDArray[np.float64]:
    """Stacks equally sized images into an (N, H, W, C) array.
    """

    if not images:
        raise ValueError("Parameter 'images' must not be empty.")
    first = images[0]
    for image in images[1:]:
        first.require_same_shape(image)
    return np.stack([image.data for image in images], axis=0)
