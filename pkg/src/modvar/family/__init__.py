"""Families of modules: sampling, generic values, dimensions and component graphs."""

from .core import (
    DEFAULT_TRIALS,
    CanonicalClass,
    ComponentGraph,
    GenericStats,
    SumReport,
    UnstableDecompositionError,
    canonical_decomposition,
    component_graph,
    family_dim,
    generic_ext,
    generic_hom,
    orbit_tangents,
    sample,
    slice_valid,
    sum_dim,
    sum_is_component,
    validate,
)
from .expr import ExtFam, FamilyError, FamilyExpr, Orbit, RepSpace, Slice, Sum, describe, load_family, parse_family

__all__ = [name for name in dir() if not name.startswith("_")]
