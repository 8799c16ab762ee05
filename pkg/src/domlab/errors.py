class DomainError(ValueError):
    """An input outside the domain of an operation (bad probability, size, regime...)."""


class EdgeListError(DomainError):
    """Base class for edge-list parse failures."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedHeaderError(EdgeListError):
    pass


class MalformedEdgeError(EdgeListError):
    pass


class EdgeCountError(EdgeListError):
    pass


class SelfLoopError(EdgeListError):
    pass


class DuplicateEdgeError(EdgeListError):
    pass


class VertexRangeError(EdgeListError):
    pass
