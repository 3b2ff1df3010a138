from os import PathLike
from typing import Optional


class MissingImageException(Exception):
    """Exception thrown when an image file does not exist.

    :param path: The path that was looked up
    :type path: PathLike
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "path", "message"

    def __init__(self, path: PathLike | str, message: Optional[str] = None):
        super().__init__(path, message)
        self.path = path
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Image file not found: {self.path}"

    def __repr__(self):
        return f"{self.__class__.__name__}(path={str(self.path)!r}, message={self.message!r})"


class UnsupportedFormatException(Exception):
    """Exception thrown when a file is not a supported raster format (PNG or PPM).

    :param path: The offending file
    :type path: PathLike
    :param detail: What was found instead
    :type detail: optional str
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "path", "detail", "message"

    def __init__(self, path: PathLike | str, detail: Optional[str] = None,
                 message: Optional[str] = None):
        super().__init__(path, detail, message)
        self.path = path
        self.detail = detail
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        suffix = f" ({self.detail})" if self.detail else ""
        return f"Unsupported image format: {self.path}{suffix}. PNG and PPM are supported."

    def __repr__(self):
        return (f"{self.__class__.__name__}(path={str(self.path)!r}, detail={self.detail!r}, "
                f"message={self.message!r})")


class CorruptImageException(Exception):
    """Exception thrown when a file has a supported signature but cannot be decoded.

    :param path: The offending file
    :type path: PathLike
    :param detail: The decoder's complaint
    :type detail: optional str
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "path", "detail", "message"

    def __init__(self, path: PathLike | str, detail: Optional[str] = None,
                 message: Optional[str] = None):
        super().__init__(path, detail, message)
        self.path = path
        self.detail = detail
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        suffix = f": {self.detail}" if self.detail else ""
        return f"Corrupt image stream in {self.path}{suffix}"

    def __repr__(self):
        return (f"{self.__class__.__name__}(path={str(self.path)!r}, detail={self.detail!r}, "
                f"message={self.message!r})")


class UnwritablePathException(Exception):
    """Exception thrown when an output file cannot be written.

    :param path: The path that could not be written
    :type path: PathLike
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "path", "message"

    def __init__(self, path: PathLike | str, message: Optional[str] = None):
        super().__init__(path, message)
        self.path = path
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Cannot write to {self.path}"

    def __repr__(self):
        return f"{self.__class__.__name__}(path={str(self.path)!r}, message={self.message!r})"


class ChannelCountException(Exception):
    """Exception thrown when an image has a channel count an operation does not accept.

    :param channels: The channel count received
    :type channels: int
    :param expected: The accepted channel counts
    :type expected: tuple[int, ...]
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "channels", "expected", "message"

    def __init__(self, channels: int, expected: tuple[int, ...], message: Optional[str] = None):
        super().__init__(channels, expected, message)
        self.channels = channels
        self.expected = expected
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        accepted = " or ".join(str(c) for c in self.expected)
        return f"Invalid channel count: received {self.channels}, expected {accepted}."

    def __repr__(self):
        return (f"{self.__class__.__name__}(channels={self.channels!r}, "
                f"expected={self.expected!r}, message={self.message!r})")


class ImageShapeMismatchException(Exception):
    """Exception thrown when two images that must align have different shapes.

    :param first: Shape of the first image
    :type first: tuple[int, ...]
    :param second: Shape of the second image
    :type second: tuple[int, ...]
    :param image_id: Optional identifier (usually a file name) of the pair
    :type image_id: optional str
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "first", "second", "image_id", "message"

    def __init__(self, first: tuple[int, ...], second: tuple[int, ...],
                 image_id: Optional[str] = None, message: Optional[str] = None):
        super().__init__(first, second, image_id, message)
        self.first = first
        self.second = second
        self.image_id = image_id
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        where = f" for '{self.image_id}'" if self.image_id else ""
        return f"Shape mismatch{where}: {self.first} vs {self.second}"

    def __repr__(self):
        return (f"{self.__class__.__name__}(first={self.first!r}, second={self.second!r}, "
                f"image_id={self.image_id!r}, message={self.message!r})")


class PatchSizeException(Exception):
    """Exception thrown when an image is too small to cut a patch of the requested size.

    :param image_shape: Shape of the source image
    :type image_shape: tuple[int, ...]
    :param size: Requested patch edge length
    :type size: int
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "image_shape", "size", "message"

    def __init__(self, image_shape: tuple[int, ...], size: int, message: Optional[str] = None):
        super().__init__(image_shape, size, message)
        self.image_shape = image_shape
        self.size = size
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return (f"Image of size {self.image_shape[0]}x{self.image_shape[1]} is smaller "
                f"than the {self.size}x{self.size} patch")

    def __repr__(self):
        return (f"{self.__class__.__name__}(image_shape={self.image_shape!r}, size={self.size!r}, "
                f"message={self.message!r})")


class NonSquarePatchException(Exception):
    """Exception thrown when a rotation is requested on a non-square patch.

    :param shape: Shape of the patch
    :type shape: tuple[int, ...]
    :param operation: Name of the rotation
    :type operation: str
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "shape", "operation", "message"

    def __init__(self, shape: tuple[int, ...], operation: str, message: Optional[str] = None):
        super().__init__(shape, operation, message)
        self.shape = shape
        self.operation = operation
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Cannot apply {self.operation} to a non-square {self.shape[0]}x{self.shape[1]} patch"

    def __repr__(self):
        return (f"{self.__class__.__name__}(shape={self.shape!r}, operation={self.operation!r}, "
                f"message={self.message!r})")


class MapFormatException(Exception):
    """Exception thrown when a float map sidecar is malformed.

    :param path: The offending file
    :type path: PathLike
    :param detail: What is wrong with it
    :type detail: optional str
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "path", "detail", "message"

    def __init__(self, path: PathLike | str, detail: Optional[str] = None,
                 message: Optional[str] = None):
        super().__init__(path, detail, message)
        self.path = path
        self.detail = detail
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        suffix = f": {self.detail}" if self.detail else ""
        return f"Malformed feature map file {self.path}{suffix}"

    def __repr__(self):
        return (f"{self.__class__.__name__}(path={str(self.path)!r}, detail={self.detail!r}, "
                f"message={self.message!r})")
