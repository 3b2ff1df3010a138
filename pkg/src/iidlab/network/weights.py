from collections.abc import Mapping
from dataclasses import dataclass, field
import hashlib
import json
import logging
from os import PathLike
from pathlib import Path
import struct
from typing import Any, Optional
import numpy as np
from numpy.typing import NDArray
from .config import NetConfig
from .model import NetworkParams, expected_shapes, from_arrays
from .network_exceptions import (ChecksumMismatchException, ConfigMismatchException,
                                 WeightFormatException)
from ..imaging.imaging_exceptions import MissingImageException, UnwritablePathException

logger = logging.getLogger(__name__)

WEIGHT_MAGIC = b"IIDNET1"
FORMAT_VERSION = 1

_HEADER_LENGTH = struct.Struct("<I")
_DTYPE = np.dtype("<f8")
_DIGEST_SIZE = hashlib.sha256().digest_size


@dataclass(frozen=True, slots=True, eq=False)
class WeightFile:
    """Decoded contents of an IIDNET1 file. Network parameters live in `arrays` under
    their layer names; checkpoints add optimizer arrays and `extra` metadata.
    """

    config: NetConfig
    arrays: dict[str, NDArray[np.float64]]
    extra: dict[str, Any] = field(default_factory=dict)

    def network_arrays(self) -> dict[str, NDArray[np.float64]]:
        names = expected_shapes(self.config)
        return {name: self.arrays[name] for name in names if name in self.arrays}


def write_weight_file(path: PathLike | str, config: NetConfig,
                      arrays: Mapping[str, NDArray[np.float64]],
                      extra: Optional[Mapping[str, Any]] = None) -> None:
    """Writes named float64 arrays in the IIDNET1 layout: magic, uint32 header length,
    UTF-8 JSON header (config, array names and shapes, extra metadata), little-endian
    float64 array data in header order, then the SHA-256 of everything before it.

    :param path: Destination
    :type path: PathLike | str
    :param config: Network configuration stored in the header
    :type config: NetConfig
    :param arrays: Arrays to store, in order
    :type arrays: Mapping[str, NDArray[np.float64]]
    :param extra: JSON-serializable metadata
    :type extra: optional Mapping[str, Any]
    """

    header = {
        "format": FORMAT_VERSION,
        "config": config.to_dict(),
        "arrays": [{"name": name, "shape": list(np.shape(values))} for name, values in arrays.items()],
        "extra": dict(extra or {}),
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    body = b"".join(np.ascontiguousarray(values, dtype=_DTYPE).tobytes() for values in arrays.values())
    payload = WEIGHT_MAGIC + _HEADER_LENGTH.pack(len(header_bytes)) + header_bytes + body
    try:
        Path(path).write_bytes(payload + hashlib.sha256(payload).digest())
    except OSError as error:
        raise UnwritablePathException(path, f"Cannot write weights to {path}: {error}") from error
    logger.debug("wrote %d arrays to %s", len(arrays), path)


def read_weight_file(path: PathLike | str) -> WeightFile:
    """Reads and verifies an IIDNET1 file. A truncated file raises
    ChecksumMismatchException whatever its length; bytes that are not the magic raise
    WeightFormatException.

    :param path: Source file
    :type path: PathLike | str
    :return: Decoded contents
    :rtype: WeightFile
    """

    path = Path(path)
    if not path.is_file():
        raise MissingImageException(path, f"Weight file not found: {path}")
    data = path.read_bytes()
    if len(data) < len(WEIGHT_MAGIC) and WEIGHT_MAGIC.startswith(data):
        raise ChecksumMismatchException(path)
    if not data.startswith(WEIGHT_MAGIC):
        raise WeightFormatException(path, "missing IIDNET1 magic")
    if len(data) < len(WEIGHT_MAGIC) + _HEADER_LENGTH.size + _DIGEST_SIZE:
        raise ChecksumMismatchException(path)
    payload, digest = data[:-_DIGEST_SIZE], data[-_DIGEST_SIZE:]
    if hashlib.sha256(payload).digest() != digest:
        raise ChecksumMismatchException(path)

    offset = len(WEIGHT_MAGIC)
    (header_length,) = _HEADER_LENGTH.unpack_from(payload, offset)
    offset += _HEADER_LENGTH.size
    try:
        header = json.loads(payload[offset:offset + header_length].decode("utf-8"))
        config = NetConfig.from_dict(header["config"])
        entries = header["arrays"]
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValueError) as error:
        raise WeightFormatException(path, f"unreadable header: {error}") from error
    if header.get("format") != FORMAT_VERSION:
        raise WeightFormatException(path, f"unsupported format version {header.get('format')!r}")
    offset += header_length

    arrays = {}
    for entry in entries:
        shape = tuple(entry["shape"])
        size = int(np.prod(shape, dtype=np.int64)) * _DTYPE.itemsize
        if offset + size > len(payload):
            raise WeightFormatException(path, f"array '{entry['name']}' runs past the end of the file")
        arrays[entry["name"]] = np.frombuffer(payload, dtype=_DTYPE, count=size // _DTYPE.itemsize,
                                              offset=offset).reshape(shape).astype(np.float64)
        offset += size
    if offset != len(payload):
        raise WeightFormatException(path, f"{len(payload) - offset} trailing bytes")
    return WeightFile(config=config, arrays=arrays, extra=header.get("extra", {}))


def save_weights(params: NetworkParams, path: PathLike | str) -> None:
    """Saves network parameters losslessly.

    :param params: Parameters to save
    :type params: NetworkParams
    :param path: Destination, conventionally *.iidnet
    :type path: PathLike | str
    """

    write_weight_file(path, params.config, params.arrays())


def load_weights(path: PathLike | str, config: Optional[NetConfig] = None) -> NetworkParams:
    """Loads parameters saved by `save_weights` (or a training checkpoint).

    :param path: Weight file
    :type path: PathLike | str
    :param config: When given, the stored architecture must match it
    :type config: optional NetConfig
    :return: The parameters
    :rtype: NetworkParams
    """

    contents = read_weight_file(path)
    if config is not None and config.architecture() != contents.config.architecture():
        raise ConfigMismatchException(config, contents.config)
    return from_arrays(contents.config, contents.network_arrays(), str(path))
