"""planar_code reader/writer and plain-text formats for results.

planar_code (single-byte variant): the 15-byte header ``>>planar_code<<``,
then per graph one byte ``n`` followed by ``n`` neighbour lists.  List ``i``
holds the 1-based neighbours of vertex ``i`` in rotation order and ends
with a 0 byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    AsymmetricAdjacency,
    BadHeader,
    NeighborOutOfRange,
    TooLarge,
    TruncatedRecord,
    UnsupportedExtension,
)
from .planar_map import PlanarMap, from_rotation

HEADER = b">>planar_code<<"
MAX_VERTICES = 255


def _check_header(data: bytes) -> None:
    if data.startswith(b">>planar_code ") or data.startswith(b">>planar_code_"):
        # e.g. ">>planar_code le<<" / ">>planar_code be<<" (two-byte entries)
        end = data.find(b"<<")
        raise UnsupportedExtension(
            f"header variant {data[: end + 2 if end >= 0 else 20]!r} is not supported"
        )
    if not data.startswith(HEADER):
        raise BadHeader(f"expected {HEADER!r}, got {data[:15]!r}")


def read_planar_code(data: bytes) -> list[PlanarMap]:
    """Parse every record of a planar_code byte string into a map."""
    _check_header(data)
    maps = []
    pos = len(HEADER)
    size = len(data)
    while pos < size:
        start = pos
        n = data[pos]
        pos += 1
        if n == 0:
            raise TruncatedRecord(f"record at byte {start} declares 0 vertices")
        rotation: list[list[int]] = []
        for v in range(n):
            nbrs = []
            while True:
                if pos >= size:
                    raise TruncatedRecord(
                        f"record at byte {start} ends inside the list of vertex {v + 1}"
                    )
                b = data[pos]
                pos += 1
                if b == 0:
                    break
                if b > n:
                    raise NeighborOutOfRange(
                        f"record at byte {start}: neighbour {b} > n = {n}"
                    )
                nbrs.append(b - 1)
            rotation.append(nbrs)
        _check_symmetric(rotation, start)
        simple = all(len(set(r)) == len(r) for r in rotation)
        maps.append(from_rotation(rotation, simple=simple))
    return maps


def _check_symmetric(rotation: Sequence[Sequence[int]], start: int) -> None:
    for u, nbrs in enumerate(rotation):
        for v in set(nbrs):
            if nbrs.count(v) != list(rotation[v]).count(u):
                raise AsymmetricAdjacency(
                    f"record at byte {start}: {u + 1} lists {v + 1} "
                    f"but not the other way round"
                )


def write_planar_code(maps: Iterable[PlanarMap]) -> bytes:
    out = bytearray(HEADER)
    for m in maps:
        if m.vertex_count > MAX_VERTICES:
            raise TooLarge(f"{m.vertex_count} vertices do not fit single-byte planar_code")
        out.append(m.vertex_count)
        for nbrs in m.rotation_lists():
            out.extend(w + 1 for w in nbrs)
            out.append(0)
    return bytes(out)


# -- embedding text -------------------------------------------------------

REPORT_FIELDS = (
    "objective",
    "max_edge_error",
    "avg_edge_error",
    "min_pair_distance",
    "diameter",
    "injective",
    "generations_used",
    "restarts_used",
)


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def write_embedding(points, report=None, header: Sequence[str] = ()) -> str:
    """Text with one ``id x y z`` line per vertex and the report as comments.

    ``report`` may be any object with the QualityReport attributes (or a
    mapping); ``J = <objective>`` is always written first when present.
    """
    pts = np.asarray(points, dtype=float)
    lines = [f"# {h}" for h in header]
    for i, p in enumerate(pts):
        lines.append(f"{i} {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}")
    if report is not None:
        get = report.get if isinstance(report, Mapping) else lambda k: getattr(report, k, None)
        lines.append(f"# J = {_fmt(get('objective'))}")
        for key in REPORT_FIELDS:
            val = get(key)
            if val is None:
                continue
            if isinstance(val, (bool, np.bool_)):
                txt = "true" if val else "false"
            elif isinstance(val, (int, np.integer)):
                txt = str(int(val))
            else:
                txt = _fmt(val)
            lines.append(f"# {key} = {txt}")
    return "\n".join(lines) + "\n"


@dataclass
class EmbeddingFile:
    points: np.ndarray
    report: dict
    comments: list[str]


_KV = re.compile(r"^#\s*([A-Za-z_]\w*)\s*=\s*(\S+)\s*$")


def read_embedding(text: str) -> EmbeddingFile:
    rows: list[tuple[int, float, float, float]] = []
    report: dict = {}
    comments: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _KV.match(line)
            if m and m.group(1) != "J":
                key, val = m.group(1), m.group(2)
                if val in ("true", "false"):
                    report[key] = val == "true"
                elif re.fullmatch(r"-?\d+", val):
                    report[key] = int(val)
                else:
                    report[key] = float(val)
            elif not m:
                comments.append(line[1:].strip())
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"bad embedding line: {raw!r}")
        rows.append((int(parts[0]), float(parts[1]), float(parts[2]), float(parts[3])))
    rows.sort()
    if [r[0] for r in rows] != list(range(len(rows))):
        raise ValueError("vertex ids must be 0..n-1")
    pts = np.array([r[1:] for r in rows], dtype=float).reshape(len(rows), 3)
    return EmbeddingFile(pts, report, comments)


# -- coloring text --------------------------------------------------------

def write_coloring(coloring: Sequence[int], header: Sequence[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    for v, c in enumerate(coloring):
        if c not in (0, 1, 2, 3):
            raise ValueError(f"color {c} of vertex {v} outside 0..3")
        lines.append(f"{v} {c}")
    return "\n".join(lines) + "\n"


def read_coloring(text: str) -> list[int]:
    pairs = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        v, c = line.split()
        pairs.append((int(v), int(c)))
    pairs.sort()
    if [p[0] for p in pairs] != list(range(len(pairs))):
        raise ValueError("vertex ids must be 0..n-1")
    return [c for _, c in pairs]
