from os import PathLike
from typing import Optional


class WeightFormatException(Exception):
    """Exception thrown when a weight file is not a valid IIDNET1 file.

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
        return f"Invalid weight file {self.path}{suffix}"

    def __repr__(self):
        return (f"{self.__class__.__name__}(path={str(self.path)!r}, detail={self.detail!r}, "
                f"message={self.message!r})")


class ChecksumMismatchException(Exception):
    """Exception thrown when the stored checksum of a weight file does not match its
    contents, typically because the file was truncated.

    :param path: The offending file
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
        return f"Checksum mismatch in weight file {self.path}; the file is corrupt or truncated"

    def __repr__(self):
        return f"{self.__class__.__name__}(path={str(self.path)!r}, message={self.message!r})"


class ConfigMismatchException(Exception):
    """Exception thrown when stored weights were built for a different architecture than
    the one requested.

    :param expected: The requested configuration
    :type expected: object
    :param found: The configuration stored in the file
    :type found: object
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "expected", "found", "message"

    def __init__(self, expected: object, found: object, message: Optional[str] = None):
        super().__init__(expected, found, message)
        self.expected = expected
        self.found = found
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Network configuration mismatch: expected {self.expected}, file holds {self.found}"

    def __repr__(self):
        return (f"{self.__class__.__name__}(expected={self.expected!r}, found={self.found!r}, "
                f"message={self.message!r})")


class InputSizeException(Exception):
    """Exception thrown when an input is too small for the network.

    :param shape: Shape of the input
    :type shape: tuple[int, ...]
    :param minimum: Smallest supported height and width
    :type minimum: int
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "shape", "minimum", "message"

    def __init__(self, shape: tuple[int, ...], minimum: int, message: Optional[str] = None):
        super().__init__(shape, minimum, message)
        self.shape = shape
        self.minimum = minimum
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Input of shape {self.shape} is too small; height and width must be at least {self.minimum}"

    def __repr__(self):
        return (f"{self.__class__.__name__}(shape={self.shape!r}, minimum={self.minimum!r}, "
                f"message={self.message!r})")
