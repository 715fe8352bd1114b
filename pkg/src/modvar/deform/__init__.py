"""Truncated power series and order-by-order triangularization of deformations."""

from .io import TruncFormatError, format_truncated, load_truncated, parse_truncated
from .lemma import (
    DEFAULT_ORDER,
    Obstruction,
    ObstructionAt,
    SplitData,
    TruncatedPoint,
    check_truncated,
    derivation_defect,
    is_upper_triangular,
    solve_theta,
    split_data,
    triangularize,
)
from .series import TruncMat, TruncSeries, block_matrix

__all__ = [name for name in dir() if not name.startswith("_")]
