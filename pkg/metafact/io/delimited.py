"""Comma-separated dense matrices: no header, one row per line."""

import csv
import io
import math
from pathlib import Path
from typing import List, Union

import numpy as np

from ..config.settings import settings
from ..shared.utils.exceptions import MatrixTooLarge, ParseError
from ..shared.utils.validators import as_matrix
from .market import read_text


def read_csv(path: Union[str, Path]) -> np.ndarray:
    """
    Read a CSV matrix; blank lines are skipped.

    Raises:
        ParseError: invalid UTF-8, no data rows, a ragged row or a cell that is not a finite number.
    """
    path = str(path)
    rows: List[List[float]] = []
    width = None
    with io.StringIO(read_text(path), newline="") as handle:
        reader = csv.reader(handle)
        for cells in reader:
            line = reader.line_num
            if not cells or all(not cell.strip() for cell in cells):
                continue
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise ParseError(f"row has {len(cells)} values, expected {width}", line=line, path=path)
            row = []
            for cell in cells:
                try:
                    value = float(cell)
                except ValueError:
                    raise ParseError(f"not a number: {cell.strip()!r}", line=line, path=path) from None
                if not math.isfinite(value):
                    raise ParseError(f"non-finite value {cell.strip()!r}", line=line, path=path)
                row.append(value)
            rows.append(row)
            if len(rows) * width > settings.MAX_DENSE_ENTRIES:
                raise MatrixTooLarge(f"{path}: exceeds the dense limit of {settings.MAX_DENSE_ENTRIES} entries")
    if not rows:
        raise ParseError("empty file", line=1, path=path)
    return as_matrix(rows, path)


def write_csv(matrix, path: Union[str, Path]) -> None:
    matrix = as_matrix(matrix, "matrix")
    np.savetxt(str(path), matrix, fmt="%.17g", delimiter=",")
