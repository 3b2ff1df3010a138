from typing import Optional


class DegenerateGeometryException(Exception):
    """Exception thrown when a scene object cannot be rendered because its geometry
    collapses, e.g. a sphere of radius zero.

    :param geometry: The offending geometry
    :type geometry: object
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "geometry", "message"

    def __init__(self, geometry: object, message: Optional[str] = None):
        super().__init__(geometry, message)
        self.geometry = geometry
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Degenerate geometry cannot be rendered: {self.geometry!r}"

    def __repr__(self):
        return f"{self.__class__.__name__}(geometry={self.geometry!r}, message={self.message!r})"


class SceneConstraintException(Exception):
    """Exception thrown when a scene violates the preconditions of a renderer.

    :param constraint: The violated constraint, in words
    :type constraint: str
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "constraint", "message"

    def __init__(self, constraint: str, message: Optional[str] = None):
        super().__init__(constraint, message)
        self.constraint = constraint
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Scene cannot be rendered as a Lambertian triple: {self.constraint}"

    def __repr__(self):
        return f"{self.__class__.__name__}(constraint={self.constraint!r}, message={self.message!r})"


class UnknownSceneException(Exception):
    """Exception thrown when a scene name is not part of the test suite.

    :param name: The requested scene name
    :type name: str
    :param known: Names that are available
    :type known: tuple[str, ...]
    :param message: A message printed when the exception is thrown. If no message
        is given, a default message is printed
    :type message: optional str
    """

    __slots__ = "name", "known", "message"

    def __init__(self, name: str, known: tuple[str, ...] = (), message: Optional[str] = None):
        super().__init__(name, known, message)
        self.name = name
        self.known = known
        self.message = message

    def __str__(self):
        if self.message:
            return self.message
        return f"Unknown scene '{self.name}'. Available: {', '.join(self.known) or '-'}"

    def __repr__(self):
        return (f"{self.__class__.__name__}(name={self.name!r}, known={self.known!r}, "
                f"message={self.message!r})")
