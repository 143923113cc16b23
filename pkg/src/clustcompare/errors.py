"""Exception hierarchy.

Every error raised for bad input derives from :class:`ClusteringError` (a
``ValueError``) so callers can catch one type.  Validation errors carry the
offending cluster position in ``index`` so file parsers can map it back to a
line number.
"""

from __future__ import annotations


class ClusteringError(ValueError):
    def __init__(self, message: str = "", index: int | None = None):
        super().__init__(message)
        self.index = index


class EmptyCluster(ClusteringError):
    pass


class DuplicateCluster(ClusteringError):
    pass


class OutOfRangeId(ClusteringError):
    pass


class DuplicateIdInCluster(ClusteringError):
    pass


class UniverseMismatch(ClusteringError):
    pass


class EmptyUniverse(ClusteringError):
    pass


class EmptyInput(ClusteringError):
    pass


class EmptyClustering(ClusteringError):
    pass


class BadIndex(ClusteringError):
    pass


class BadK(ClusteringError):
    pass


class BadEta(ClusteringError):
    pass


class BadSizes(ClusteringError):
    pass


class ParseError(ClusteringError):
    """Malformed text input (clusterings or edge lists)."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        super().__init__(message)
        self.path = path
        self.line = line

    def __str__(self) -> str:
        where = []
        if self.path is not None:
            where.append(str(self.path))
        if self.line is not None:
            where.append(f"line {self.line}")
        prefix = ":".join(where)
        msg = super().__str__()
        return f"{prefix}: {msg}" if prefix else msg
