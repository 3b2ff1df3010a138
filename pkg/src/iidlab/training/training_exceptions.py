from typing import Optional


class EmptyDatasetException(Exception):
    """Exception thrown when there is nothing to train on, either because no images were
    found or because every image is smaller than the patch size.

    :param source: Where the images were looked for
    :type source: str
    :param skipped: Number of images rejected as undersized
    :type skipped: int
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "source", "skipped", "message"

    def __init__(self, source: str, skipped: int = 0, message: Optional[str] = None):
        super().__init__(source, skipped, message)
        self.source = source
        self.skipped = skipped
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        if self.skipped:
            return f"No usable training images in {self.source}: all {self.skipped} are smaller than the patch size"
        return f"No training images found in {self.source}"

    def __repr__(self):
        return (f"{self.__class__.__name__}(source={self.source!r}, skipped={self.skipped!r}, "
                f"message={self.message!r})")


class NumericalInstabilityException(Exception):
    """Exception thrown when a loss or parameter becomes NaN or infinite during training.

    :param epoch: Epoch in which it happened
    :type epoch: int
    :param step: Step within the epoch
    :type step: int
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "epoch", "step", "message"

    def __init__(self, epoch: int, step: int, message: Optional[str] = None):
        super().__init__(epoch, step, message)
        self.epoch = epoch
        self.step = step
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Training diverged (NaN or Inf) at epoch {self.epoch}, step {self.step}"

    def __repr__(self):
        return (f"{self.__class__.__name__}(epoch={self.epoch!r}, step={self.step!r}, "
                f"message={self.message!r})")
