from .delimited import read_csv, write_csv
from .loader import load_matrix, read_factors, save_matrix, write_factors
from .market import read_matrix_market, write_matrix_market
from .models import SyntheticKind, SyntheticSpec
from .synthetic import generate, singular_values

__all__ = [
    "SyntheticKind",
    "SyntheticSpec",
    "generate",
    "load_matrix",
    "read_csv",
    "read_factors",
    "read_matrix_market",
    "save_matrix",
    "singular_values",
    "write_csv",
    "write_factors",
    "write_matrix_market",
]
