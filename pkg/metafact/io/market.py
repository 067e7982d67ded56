"""
Matrix Market reader and writer for dense real matrices.

Reads ``array`` and ``coordinate`` files with a ``real`` or ``integer`` field and
``general`` symmetry; coordinate files are densified. Writes ``array real general``
in column-major order with 17 significant digits.
"""

import math
from pathlib import Path
from typing import Iterator, List, Tuple, Union

import numpy as np

from ..config.settings import settings
from ..shared.utils.exceptions import MatrixTooLarge, ParseError, UnsupportedFormat
from ..shared.utils.logger import get_logger
from ..shared.utils.validators import as_matrix

logger = get_logger(__name__)

BANNER = "%%matrixmarket"
SUPPORTED_FIELDS = ("real", "integer", "double")
UNSUPPORTED_FIELDS = ("complex", "pattern")
UNSUPPORTED_SYMMETRY = ("symmetric", "skew-symmetric", "hermitian")

PathLike = Union[str, Path]


def _data_lines(lines: List[str], start: int) -> Iterator[Tuple[int, str]]:
    """(line number, stripped text) of non-blank, non-comment lines from index ``start``."""
    for index in range(start, len(lines)):
        text = lines[index].strip()
        if text and not text.startswith("%"):
            yield index + 1, text


def read_text(path: str) -> str:
    """
    Decode a UTF-8 file.

    Raises:
        ParseError: an undecodable byte, with its line and byte offset.
    """
    raw = Path(path).read_bytes()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(
            f"invalid UTF-8 byte 0x{raw[exc.start]:02x} at byte offset {exc.start}",
            line=raw.count(b"\n", 0, exc.start) + 1,
            path=path,
            offset=exc.start,
        ) from None


def _parse_header(line: str, path: str) -> Tuple[str, str]:
    tokens = line.strip().lower().split()
    if not tokens or tokens[0] != BANNER:
        raise ParseError("missing %%MatrixMarket banner", line=1, path=path)
    if len(tokens) != 5:
        raise ParseError(f"banner needs 5 fields, got {len(tokens)}", line=1, path=path)
    _, obj, fmt, field, symmetry = tokens
    if obj != "matrix":
        raise UnsupportedFormat(f"{path}: object {obj!r} is not supported, only 'matrix'")
    if fmt not in ("array", "coordinate"):
        raise ParseError(f"unknown format {fmt!r}", line=1, path=path)
    if field in UNSUPPORTED_FIELDS:
        raise UnsupportedFormat(f"{path}: {field} matrices are not supported, only real")
    if field not in SUPPORTED_FIELDS:
        raise ParseError(f"unknown field {field!r}", line=1, path=path)
    if symmetry in UNSUPPORTED_SYMMETRY:
        raise UnsupportedFormat(f"{path}: {symmetry} storage is not supported, only general")
    if symmetry != "general":
        raise ParseError(f"unknown symmetry {symmetry!r}", line=1, path=path)
    return fmt, field


def _ints(tokens: List[str], count: int, what: str, line: int, path: str) -> List[int]:
    if len(tokens) != count:
        raise ParseError(f"{what} needs {count} integers, got {len(tokens)} fields", line=line, path=path)
    try:
        return [int(token) for token in tokens]
    except ValueError:
        raise ParseError(f"{what} must be integers, got {' '.join(tokens)!r}", line=line, path=path) from None


def _value(token: str, line: int, path: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"not a number: {token!r}", line=line, path=path) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {token!r}", line=line, path=path)
    return value


def _check_size(m: int, n: int, line: int, path: str) -> None:
    if m < 1 or n < 1:
        raise ParseError(f"dimensions must be positive, got {m}x{n}", line=line, path=path)
    if m * n > settings.MAX_DENSE_ENTRIES:
        raise MatrixTooLarge(
            f"{path}: {m}x{n} exceeds the dense limit of {settings.MAX_DENSE_ENTRIES} entries",
            details={"m": m, "n": n, "limit": settings.MAX_DENSE_ENTRIES},
        )


def read_matrix_market(path: PathLike) -> np.ndarray:
    """
    Read a Matrix Market file into a dense matrix.

    Raises:
        ParseError: malformed content, with the 1-based line number.
        UnsupportedFormat: complex, pattern or symmetric files.
        MatrixTooLarge: more than MAX_DENSE_ENTRIES entries.
    """
    path = str(path)
    lines = read_text(path).splitlines()
    if not lines:
        raise ParseError("empty file", line=1, path=path)
    fmt, _ = _parse_header(lines[0], path)

    entries = _data_lines(lines, 1)
    try:
        size_line, size_text = next(entries)
    except StopIteration:
        raise ParseError("missing size line", line=len(lines) + 1, path=path) from None

    if fmt == "array":
        m, n = _ints(size_text.split(), 2, "size line", size_line, path)
        _check_size(m, n, size_line, path)
        values = np.empty(m * n)
        count = 0
        last = size_line
        for line, text in entries:
            tokens = text.split()
            if len(tokens) != 1:
                raise ParseError(f"expected one value per line, got {len(tokens)}", line=line, path=path)
            if count == m * n:
                raise ParseError(f"more than {m * n} values", line=line, path=path)
            values[count] = _value(tokens[0], line, path)
            count += 1
            last = line
        if count != m * n:
            raise ParseError(f"expected {m * n} values, found {count}", line=last, path=path)
        matrix = values.reshape((n, m)).T
    else:
        m, n, nnz = _ints(size_text.split(), 3, "size line", size_line, path)
        _check_size(m, n, size_line, path)
        if nnz < 0 or nnz > m * n:
            raise ParseError(f"entry count {nnz} is impossible for {m}x{n}", line=size_line, path=path)
        matrix = np.zeros((m, n))
        count = 0
        last = size_line
        for line, text in entries:
            tokens = text.split()
            if len(tokens) != 3:
                raise ParseError(f"expected 'row col value', got {len(tokens)} fields", line=line, path=path)
            if count == nnz:
                raise ParseError(f"more than {nnz} entries", line=line, path=path)
            row, col = _ints(tokens[:2], 2, "entry indices", line, path)
            if not (1 <= row <= m and 1 <= col <= n):
                raise ParseError(f"entry ({row}, {col}) outside {m}x{n}", line=line, path=path)
            # repeated coordinates accumulate
            matrix[row - 1, col - 1] += _value(tokens[2], line, path)
            count += 1
            last = line
        if count != nnz:
            raise ParseError(f"expected {nnz} entries, found {count}", line=last, path=path)

    logger.debug("read %s: %s %dx%d", path, fmt, m, n)
    return as_matrix(matrix, path)


def write_matrix_market(matrix, path: PathLike) -> None:
    """Write ``array real general``, column-major, one value per line."""
    matrix = as_matrix(matrix, "matrix")
    m, n = matrix.shape
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("%%MatrixMarket matrix array real general\n")
        handle.write(f"{m} {n}\n")
        np.savetxt(handle, matrix.reshape(-1, order="F"), fmt="%.17g")
