"""Exact field arithmetic and dense linear algebra."""

from .fields import (
    DEFAULT_FIELD,
    DEFAULT_PRIME,
    Field,
    PrimeField,
    Rationals,
    field_from_name,
    inverse,
    is_invertible,
    kernel_basis,
    left_nullspace,
    nullspace,
    parse_scalar,
    random_invertible,
    random_matrix,
    rank,
    row_space,
    solve_linear,
)
from .kernel import KERNEL

__all__ = [
    "DEFAULT_FIELD",
    "DEFAULT_PRIME",
    "Field",
    "KERNEL",
    "PrimeField",
    "Rationals",
    "field_from_name",
    "inverse",
    "is_invertible",
    "kernel_basis",
    "left_nullspace",
    "nullspace",
    "parse_scalar",
    "random_invertible",
    "random_matrix",
    "rank",
    "row_space",
    "solve_linear",
]
