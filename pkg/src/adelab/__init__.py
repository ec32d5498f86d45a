"""Multiprecision Gamma and zeta jets, the Gamma-ratio ladder R_n, multi-index
decomposition of algebraic differential polynomials and numerical
nonvanishing witnesses along the critical strip."""

from .numkernel import DEFAULT_PRECISION, AdeError, PrecisionConfig

__version__ = "0.1.0"

__all__ = ["AdeError", "DEFAULT_PRECISION", "PrecisionConfig", "__version__"]
