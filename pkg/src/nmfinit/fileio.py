"""Matrix ingestion and persistence: PGM images, CSV matrices, trace CSV.

PGM support covers binary ``P5`` and ASCII ``P2`` with maxval <= 255 and
``#`` comments in the header. Writing always emits ``P5`` with maxval
255; arbitrary real matrices are clamped to [0, 255] and rounded half-up
first, so the bytes are deterministic for a given matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dense import DenseMatrix
from .errors import PgmError

__all__ = [
    "ImageMatrix",
    "read_pgm",
    "write_pgm",
    "read_csv_matrix",
    "write_trace_csv",
    "load_matrix",
]

_WHITESPACE = b" \t\r\n\x0b\x0c"


@dataclass(frozen=True)
class ImageMatrix:
    """8-bit grayscale image: integer intensities in [0, 255] stored as reals."""

    matrix: DenseMatrix
    source_path: str

    def __post_init__(self):
        arr = self.matrix.array
        if (arr < 0.0).any() or (arr > 255.0).any():
            raise ValueError("image intensities must lie in [0, 255]")
        if not np.array_equal(arr, np.floor(arr)):
            raise ValueError("image intensities must be integers")


def _skip_space_and_comments(data: bytes, pos: int) -> int:
    while pos < len(data):
        byte = data[pos : pos + 1]
        if byte in (b"#",):
            newline = data.find(b"\n", pos)
            pos = len(data) if newline < 0 else newline + 1
        elif byte and byte in _WHITESPACE:
            pos += 1
        else:
            break
    return pos


def _read_token(data: bytes, pos: int, what: str) -> tuple[int, int]:
    pos = _skip_space_and_comments(data, pos)
    start = pos
    while pos < len(data) and data[pos : pos + 1] not in _WHITESPACE:
        if data[pos : pos + 1] == b"#":
            break
        pos += 1
    if start == pos:
        raise PgmError(f"missing {what}", start)
    try:
        value = int(data[start:pos])
    except ValueError:
        raise PgmError(f"non-numeric {what} {data[start:pos]!r}", start) from None
    return value, pos


def read_pgm(path) -> ImageMatrix:
    """Parse a P5 (binary) or P2 (ASCII) PGM file with maxval <= 255."""
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PgmError(f"bad magic {magic!r}, expected P2 or P5", 0)
    if len(data) < 3 or (data[2:3] not in _WHITESPACE and data[2:3] != b"#"):
        raise PgmError("magic number not followed by whitespace", 2)

    pos = 2
    width, pos = _read_token(data, pos, "width")
    height, pos = _read_token(data, pos, "height")
    maxval, pos = _read_token(data, pos, "maxval")
    if width <= 0 or height <= 0:
        raise PgmError(f"non-positive image size {width}x{height}", pos)
    if not 0 < maxval <= 255:
        raise PgmError(f"maxval {maxval} outside supported range (0, 255]", pos)

    count = width * height
    if magic == b"P5":
        if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
            raise PgmError("expected single whitespace byte before raster", pos)
        payload = data[pos + 1 :]
        if len(payload) < count:
            raise PgmError(
                f"truncated raster: expected {count} bytes, found {len(payload)}",
                len(data),
            )
        values = np.frombuffer(payload, dtype=np.uint8, count=count)
    else:
        values = np.empty(count, dtype=np.uint8)
        for i in range(count):
            sample, pos = _read_pixel(data, pos, maxval, i)
            values[i] = sample

    grid = values.reshape(height, width).astype(np.float64)
    return ImageMatrix(matrix=DenseMatrix(grid), source_path=str(path))


def _read_pixel(data: bytes, pos: int, maxval: int, index: int) -> tuple[int, int]:
    try:
        value, pos = _read_token(data, pos, f"pixel {index}")
    except PgmError as exc:
        raise PgmError(f"truncated raster at pixel {index}", exc.offset) from None
    if not 0 <= value <= maxval:
        raise PgmError(f"pixel {index} value {value} exceeds maxval {maxval}", pos)
    return value, pos


def write_pgm(img, path) -> None:
    """Write a matrix as binary P5 with maxval 255.

    Accepts an :class:`ImageMatrix` or any :class:`DenseMatrix`; real
    entries are rounded half-up and clamped to [0, 255].
    """
    matrix = img.matrix if isinstance(img, ImageMatrix) else img
    arr = matrix.array
    clamped = np.clip(np.floor(arr + 0.5), 0.0, 255.0).astype(np.uint8)
    header = f"P5\n{matrix.cols} {matrix.rows}\n255\n".encode("ascii")
    Path(path).write_bytes(header + clamped.tobytes(order="C"))


def read_csv_matrix(path, require_nonneg: bool = False) -> DenseMatrix:
    """Read a rectangular comma-separated numeric matrix.

    With ``require_nonneg`` any negative entry is rejected, naming the
    offending cell; use this for matrices destined for factorization.
    """
    text = Path(path).read_text(encoding="ascii")
    rows: list[list[float]] = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.strip() == "":
            continue
        cells = line.split(",")
        parsed = []
        for colno, cell in enumerate(cells, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise ValueError(
                    f"{path}: non-numeric cell {cell.strip()!r} at line {lineno}, column {colno}"
                ) from None
            if require_nonneg and value < 0.0:
                raise ValueError(
                    f"{path}: negative entry {value} at line {lineno}, column {colno} "
                    "(nonnegative input required)"
                )
            parsed.append(value)
        if width is None:
            width = len(parsed)
        elif len(parsed) != width:
            raise ValueError(
                f"{path}: ragged row at line {lineno}: expected {width} cells, got {len(parsed)}"
            )
        rows.append(parsed)
    if not rows:
        raise ValueError(f"{path}: no numeric rows found")
    return DenseMatrix(rows)


def write_trace_csv(trace, path, include_timing: bool = True) -> None:
    """Write ``iter,error,elapsed_ms`` rows for a convergence trace.

    Errors are fixed to six decimal places; with ``include_timing=False``
    the timing column is zeroed so repeated runs are byte-identical.
    """
    records = getattr(trace, "records", trace)
    lines = ["iter,error,elapsed_ms"]
    for rec in records:
        elapsed = int(round(rec.elapsed_ms)) if include_timing else 0
        lines.append(f"{rec.iteration},{rec.error:.6f},{elapsed}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_matrix(path, require_nonneg: bool = True) -> DenseMatrix:
    """Load a matrix from PGM or CSV, sniffing the format from content."""
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic in (b"P2", b"P5"):
        return read_pgm(path).matrix
    return read_csv_matrix(path, require_nonneg=require_nonneg)
