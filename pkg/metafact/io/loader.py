from pathlib import Path
from typing import Dict, Union

import numpy as np

from ..shared.utils.exceptions import UnsupportedFormat
from ..shared.utils.logger import get_logger
from .delimited import read_csv, write_csv
from .market import read_matrix_market, write_matrix_market

logger = get_logger(__name__)

READERS = {".mtx": read_matrix_market, ".csv": read_csv}
WRITERS = {".mtx": write_matrix_market, ".csv": write_csv}


def _suffix(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix not in READERS:
        raise UnsupportedFormat(f"{path}: unknown extension {suffix or '(none)'!r}; expected .mtx or .csv")
    return suffix


def load_matrix(path: Union[str, Path]) -> np.ndarray:
    """Read a .mtx or .csv file."""
    path = Path(path)
    return READERS[_suffix(path)](path)


def save_matrix(matrix, path: Union[str, Path]) -> None:
    path = Path(path)
    WRITERS[_suffix(path)](matrix, path)


def write_factors(directory: Union[str, Path], **factors: np.ndarray) -> Dict[str, Path]:
    """Dump each named factor to ``<directory>/<name>.mtx``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = {}
    for name, matrix in factors.items():
        target = directory / f"{name}.mtx"
        write_matrix_market(matrix, target)
        written[name] = target
    logger.info("wrote %d factors to %s", len(written), directory)
    return written


def read_factors(directory: Union[str, Path]) -> Dict[str, np.ndarray]:
    """Inverse of ``write_factors``: every ``*.mtx`` in the directory keyed by stem."""
    directory = Path(directory)
    if not directory.is_dir():
        raise UnsupportedFormat(f"{directory} is not a directory of factor files")
    return {path.stem: read_matrix_market(path) for path in sorted(directory.glob("*.mtx"))}
