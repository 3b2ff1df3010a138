import logging
from os import PathLike
from pathlib import Path
import numpy as np
from PIL import Image, UnidentifiedImageError
from .image_tensor import ImageTensor
from .imaging_exceptions import (CorruptImageException, MissingImageException,
                                 UnsupportedFormatException, UnwritablePathException)

logger = logging.getLogger(__name__)

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_PPM_SIGNATURES = (b"P2", b"P3", b"P5", b"P6")

_EIGHT_BIT_MAX = 255.0
_SIXTEEN_BIT_MAX = 65535.0

# Pillow modes that are converted before normalization
_GREY_MODES = {"1": "L", "L": "L", "LA": "L"}
_COLOUR_MODES = {"RGB": "RGB", "RGBA": "RGB", "P": "RGB", "PA": "RGB", "CMYK": "RGB"}
_SIXTEEN_BIT_MODES = ("I;16", "I;16B", "I;16L", "I")


def _sniff_format(path: Path) -> str:
    with open(path, "rb") as stream:
        head = stream.read(len(_PNG_SIGNATURE))
    if head.startswith(_PNG_SIGNATURE):
        return "PNG"
    if head[:2] in _PPM_SIGNATURES:
        return "PPM"
    raise UnsupportedFormatException(path, f"unrecognized signature {head[:4]!r}")


def load_image(path: PathLike | str) -> ImageTensor:
    """Loads a PNG or PPM file as a 1- or 3-channel image normalized to [0, 1].
    8-bit data is divided by 255, 16-bit data by 65535. Stored values are treated as
    linear intensities; no gamma decoding is applied.

    :param path: Path of the raster file
    :type path: PathLike | str
    :return: The normalized image
    :rtype: ImageTensor
    """

    path = Path(path)
    if not path.is_file():
        raise MissingImageException(path)

    expected_format = _sniff_format(path)

    try:
        with Image.open(path) as image:
            image.load()
            mode = image.mode
            if mode in _SIXTEEN_BIT_MODES:
                data = np.asarray(image, dtype=np.float64) / _SIXTEEN_BIT_MAX
            elif mode in _GREY_MODES:
                data = np.asarray(image.convert(_GREY_MODES[mode]), dtype=np.float64) / _EIGHT_BIT_MAX
            elif mode in _COLOUR_MODES:
                data = np.asarray(image.convert(_COLOUR_MODES[mode]), dtype=np.float64) / _EIGHT_BIT_MAX
            else:
                raise UnsupportedFormatException(path, f"pixel mode {mode}")
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as error:
        raise CorruptImageException(path, str(error)) from error

    logger.debug("loaded %s (%s, mode %s, shape %s)", path, expected_format, mode, data.shape)
    return ImageTensor(np.clip(data, 0.0, 1.0))


def quantize(img: ImageTensor) -> np.ndarray:
    """Converts an image to 8-bit values using round-half-up on v * 255 after clipping.
    """

    return np.floor(np.clip(img.data, 0.0, 1.0) * _EIGHT_BIT_MAX + 0.5).astype(np.uint8)


def save_image(img: ImageTensor, path: PathLike | str) -> None:
    """Writes an image as an 8-bit PNG. Single-channel images become greyscale PNGs.
    Values outside [0, 1] are clipped before quantization.

    :param img: The image to write
    :type img: ImageTensor
    :param path: Destination path; its parent directory must exist
    :type path: PathLike | str
    """

    path = Path(path)
    pixels = quantize(img)
    if img.channels == 1:
        image = Image.fromarray(pixels[:, :, 0])
    else:
        image = Image.fromarray(pixels)

    try:
        image.save(path, format="PNG")
    except OSError as error:
        raise UnwritablePathException(path, f"Cannot write to {path}: {error}") from error
    logger.debug("saved %s (%dx%dx%d)", path, img.height, img.width, img.channels)
