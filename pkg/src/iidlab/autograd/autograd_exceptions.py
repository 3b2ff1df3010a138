from typing import Optional


class ShapeMismatchException(Exception):
    """Exception thrown when the operands of a tensor operation have incompatible shapes.
    Broadcasting is only defined between a 1-channel and a 3-channel operand.

    :param first: Shape of the first operand
    :type first: tuple[int, ...]
    :param second: Shape of the second operand
    :type second: tuple[int, ...]
    :param operation: Name of the operation
    :type operation: str
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "first", "second", "operation", "message"

    def __init__(self, first: tuple[int, ...], second: tuple[int, ...], operation: str,
                 message: Optional[str] = None):
        super().__init__(first, second, operation, message)
        self.first = first
        self.second = second
        self.operation = operation
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Operation '{self.operation}' cannot combine shapes {self.first} and {self.second}"

    def __repr__(self):
        return (f"{self.__class__.__name__}(first={self.first!r}, second={self.second!r}, "
                f"operation={self.operation!r}, message={self.message!r})")


class NonScalarLossException(Exception):
    """Exception thrown when backpropagation is started from a tensor that is not a scalar.

    :param shape: Shape of the offending tensor
    :type shape: tuple[int, ...]
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "shape", "message"

    def __init__(self, shape: tuple[int, ...], message: Optional[str] = None):
        super().__init__(shape, message)
        self.shape = shape
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Backward requires a scalar loss, got shape {self.shape}"

    def __repr__(self):
        return f"{self.__class__.__name__}(shape={self.shape!r}, message={self.message!r})"


class NonPositiveLogException(Exception):
    """Exception thrown when log is applied to non-positive values without a clamp.

    :param minimum: Smallest value found in the operand
    :type minimum: float
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "minimum", "message"

    def __init__(self, minimum: float, message: Optional[str] = None):
        super().__init__(minimum, message)
        self.minimum = minimum
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"log of non-positive value {self.minimum!r}; pass a clamp eps"

    def __repr__(self):
        return f"{self.__class__.__name__}(minimum={self.minimum!r}, message={self.message!r})"
