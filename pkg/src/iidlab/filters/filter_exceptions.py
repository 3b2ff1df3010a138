from typing import Optional


class KernelSizeException(Exception):
    """Exception thrown when a kernel is larger than the map it filters.

    :param kernel_size: Edge length of the kernel
    :type kernel_size: int
    :param map_size: (height, width) of the map
    :type map_size: tuple[int, int]
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "kernel_size", "map_size", "message"

    def __init__(self, kernel_size: int, map_size: tuple[int, int], message: Optional[str] = None):
        super().__init__(kernel_size, map_size, message)
        self.kernel_size = kernel_size
        self.map_size = map_size
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return (f"A {self.kernel_size}x{self.kernel_size} kernel does not fit a "
                f"{self.map_size[0]}x{self.map_size[1]} map")

    def __repr__(self):
        return (f"{self.__class__.__name__}(kernel_size={self.kernel_size!r}, "
                f"map_size={self.map_size!r}, message={self.message!r})")
