from os import PathLike
from typing import Optional


class WindowSizeException(Exception):
    """Exception thrown when an image is smaller than the SSIM window.

    :param shape: Shape of the image
    :type shape: tuple[int, ...]
    :param window: Side of the window
    :type window: int
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "shape", "window", "message"

    def __init__(self, shape: tuple[int, ...], window: int, message: Optional[str] = None):
        super().__init__(shape, window, message)
        self.shape = shape
        self.window = window
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Image of shape {self.shape} is smaller than the {self.window}x{self.window} SSIM window"

    def __repr__(self):
        return (f"{self.__class__.__name__}(shape={self.shape!r}, window={self.window!r}, "
                f"message={self.message!r})")


class EmptyEvaluationException(Exception):
    """Exception thrown when an evaluation is given no image pairs.

    :param label: Label of the evaluation
    :type label: str
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "label", "message"

    def __init__(self, label: str, message: Optional[str] = None):
        super().__init__(label, message)
        self.label = label
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Nothing to evaluate for '{self.label}': no image pairs"

    def __repr__(self):
        return f"{self.__class__.__name__}(label={self.label!r}, message={self.message!r})"


class UnmatchedPairsException(Exception):
    """Exception thrown when no file name occurs in both evaluation directories.

    :param produced: Directory of produced images
    :type produced: PathLike
    :param reference: Directory of reference images
    :type reference: PathLike
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "produced", "reference", "message"

    def __init__(self, produced: PathLike | str, reference: PathLike | str,
                 message: Optional[str] = None):
        super().__init__(produced, reference, message)
        self.produced = produced
        self.reference = reference
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"No file names in {self.produced} match any in {self.reference}"

    def __repr__(self):
        return (f"{self.__class__.__name__}(produced={str(self.produced)!r}, "
                f"reference={str(self.reference)!r}, message={self.message!r})")
