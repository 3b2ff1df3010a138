import logging
from os import PathLike
from pathlib import Path
import struct
import numpy as np
from numpy.typing import ArrayLike
from ..imaging.image_tensor import ImageTensor
from ..imaging.imaging_exceptions import (MapFormatException, MissingImageException,
                                          UnwritablePathException)

logger = logging.getLogger(__name__)

MAP_MAGIC = b"IIDMAP1"
# magic, then height, width, channels as little-endian uint32
_HEADER = struct.Struct("<7sIII")
_DTYPE = np.dtype("<f4")


def save_map(values: ImageTensor | ArrayLike, path: PathLike | str) -> None:
    """Writes a lossless float32 sidecar of a feature map.

    :param values: Map to write, (H, W) or (H, W, C)
    :type values: ImageTensor | ArrayLike
    :param path: Destination file
    :type path: PathLike | str
    """

    data = values.data if isinstance(values, ImageTensor) else np.asarray(values, dtype=np.float64)
    if data.ndim == 2:
        data = data[:, :, np.newaxis]
    height, width, channels = data.shape
    payload = _HEADER.pack(MAP_MAGIC, height, width, channels) + data.astype(_DTYPE).tobytes()
    try:
        Path(path).write_bytes(payload)
    except OSError as error:
        raise UnwritablePathException(path, f"Cannot write to {path}: {error}") from error
    logger.debug("wrote map %s (%dx%dx%d)", path, height, width, channels)


def load_map(path: PathLike | str) -> np.ndarray:
    """Reads a float32 sidecar back as an (H, W, C) float32 array.

    :param path: Sidecar file
    :type path: PathLike | str
    :return: The stored values
    :rtype: np.ndarray
    """

    path = Path(path)
    if not path.is_file():
        raise MissingImageException(path, f"Feature map not found: {path}")
    payload = path.read_bytes()
    if len(payload) < _HEADER.size:
        raise MapFormatException(path, "file shorter than header")
    magic, height, width, channels = _HEADER.unpack_from(payload)
    if magic != MAP_MAGIC:
        raise MapFormatException(path, f"bad magic {magic!r}")
    expected = height * width * channels * _DTYPE.itemsize
    body = payload[_HEADER.size:]
    if len(body) != expected:
        raise MapFormatException(path, f"expected {expected} data bytes, found {len(body)}")
    return np.frombuffer(body, dtype=_DTYPE).reshape(height, width, channels).copy()
