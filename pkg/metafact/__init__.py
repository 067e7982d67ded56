"""
metafact: dense low-rank factorizations as instances of one meta-factorization A = F G H^T.
"""

from .config.settings import settings

__version__ = settings.VERSION

__all__ = ["__version__"]
