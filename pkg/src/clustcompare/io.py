"""Text formats.

``.clusters`` files hold one cluster per line as space-separated object ids.
An optional ``#n=<N>`` line declares the universe size, other ``#`` lines are
comments, and an object that appears on no line is an outlier.  The universe
is never inferred from the ids that happen to appear.

Edge lists hold one ``u v`` pair per line with the same comment and ``#n=``
conventions.
"""

from __future__ import annotations

import os
import re
from pathlib import Path
from typing import TextIO

import numpy as np

from .errors import ClusteringError, ParseError
from .model import Clustering, validate

__all__ = [
    "parse_clusters",
    "read_clusters",
    "serialize_clusters",
    "write_clusters",
    "parse_edges",
    "read_edges",
]

_HEADER = re.compile(r"#\s*n\s*=\s*(\S+)\s*$")
_INT = re.compile(r"[0-9]+")


def _header_n(line: str, path, lineno: int) -> int | None:
    m = _HEADER.match(line)
    if not m:
        return None
    if not _INT.fullmatch(m.group(1)):
        raise ParseError(f"bad universe header {line!r}", path, lineno)
    return int(m.group(1))


def _ints(line: str, path, lineno: int) -> list[int]:
    toks = line.split()
    for t in toks:
        if not _INT.fullmatch(t):
            raise ParseError(f"not a non-negative integer: {t!r}", path, lineno)
    return [int(t) for t in toks]


def _scan(text: str, path):
    """Yield (lineno, ids) for data lines and collect the declared n."""
    declared = None
    rows: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            n = _header_n(line, path, lineno)
            if n is not None:
                if declared is not None and n != declared:
                    raise ParseError(f"conflicting universe headers ({declared} and {n})", path, lineno)
                declared = n
            continue
        rows.append((lineno, _ints(line, path, lineno)))
    return declared, rows


def parse_clusters(text: str, n: int | None = None, path: str | None = None) -> Clustering:
    """Parse ``.clusters`` text.  An explicit ``n`` overrides the header."""
    declared, rows = _scan(text, path)
    if n is None:
        n = declared
    if n is None:
        raise ParseError("universe size not declared (add '#n=<N>' or pass n)", path)
    try:
        return validate([ids for _, ids in rows], n)
    except ClusteringError as exc:
        line = rows[exc.index][0] if exc.index is not None else None
        raise ParseError(f"{type(exc).__name__} at line {line}: {exc}", path, line) from exc


def read_clusters(path: str | os.PathLike, n: int | None = None) -> Clustering:
    path = str(path)
    return parse_clusters(Path(path).read_text(encoding="utf-8"), n=n, path=path)


def serialize_clusters(c: Clustering) -> str:
    lines = [f"#n={c.n}"]
    lines.extend(" ".join(map(str, cl.tolist())) for cl in c)
    return "\n".join(lines) + "\n"


def write_clusters(c: Clustering, dest: str | os.PathLike | TextIO) -> None:
    text = serialize_clusters(c)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def parse_edges(text: str, n: int | None = None, path: str | None = None):
    """Parse an undirected simple edge list into ``(n, edges)``.

    ``edges`` is an ``(m, 2)`` array in file order.  Self-loops, repeated
    edges (in either orientation) and ids outside the universe are errors.
    """
    declared, rows = _scan(text, path)
    if n is None:
        n = declared
    if n is None:
        raise ParseError("vertex count not declared (add '#n=<N>' or pass n)", path)
    seen: dict[tuple[int, int], int] = {}
    edges = np.zeros((len(rows), 2), dtype=np.int64)
    for k, (lineno, ids) in enumerate(rows):
        if len(ids) != 2:
            raise ParseError(f"expected 'u v', got {len(ids)} fields", path, lineno)
        u, v = ids
        if u == v:
            raise ParseError(f"self-loop on vertex {u}", path, lineno)
        if u >= n or v >= n:
            raise ParseError(f"vertex id outside [0, {n})", path, lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"duplicate edge {key} (first at line {seen[key]})", path, lineno)
        seen[key] = lineno
        edges[k] = (u, v)
    return n, edges


def read_edges(path: str | os.PathLike, n: int | None = None):
    path = str(path)
    return parse_edges(Path(path).read_text(encoding="utf-8"), n=n, path=path)
